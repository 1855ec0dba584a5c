#include "qrc/tasks/result.hpp"

#include <algorithm>

namespace qrc {

void Table::add(std::vector<double> row) {
    if (row.size() != columns.size()) throw DimensionMismatch("Table::add: row width");
    rows.push_back(std::move(row));
}

RVec Table::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw InvalidArgument("Table: no column '" + name + "'");
    const auto c = static_cast<std::size_t>(it - columns.begin());
    RVec out(static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Index>(r)) = rows[r][c];
    return out;
}

double TaskResult::metric(const std::string& name) const {
    const auto it = metrics.find(name);
    if (it == metrics.end()) throw InvalidArgument("TaskResult: no metric '" + name + "'");
    return it->second;
}

}  // namespace qrc
