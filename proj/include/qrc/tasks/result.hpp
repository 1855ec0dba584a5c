#pragma once

#include "qrc/common.hpp"
#include "qrc/train/readout.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qrc {

// A named numeric table; one per figure analog.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
    // Values of one column, by name.
    RVec column(const std::string& name) const;
};

struct SampleRecord {
    std::vector<double> inputs;
    RVec features;
    RVec outputs;
    RVec targets;
    bool test = false;  // held-out row
};

struct TaskResult {
    std::string task;
    std::uint64_t seed = 0;
    std::vector<SampleRecord> samples;
    ReadoutMap readout;
    std::map<std::string, double> metrics;
    std::map<std::string, Table> tables;

    double metric(const std::string& name) const;
};

}  // namespace qrc
