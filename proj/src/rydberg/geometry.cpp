#include "qrc/rydberg/geometry.hpp"

#include "qrc/rng.hpp"

#include <cmath>

namespace qrc {

std::string to_string(Species s) { return s == Species::r70 ? "r70" : "r73"; }

Species parse_species(const std::string& s) {
    if (s == "r70") return Species::r70;
    if (s == "r73") return Species::r73;
    throw InvalidArgument("unknown species '" + s + "'");
}

void InteractionTable::validate() const {
    if (!(c6_same > 0.0)) throw InvalidArgument("InteractionTable: c6_same must be positive");
    if (std::abs(c6_cross + c6_same) > 0.05 * c6_same) {
        throw InvalidArgument("InteractionTable: c6_cross is not within 5% of -c6_same");
    }
}

RydbergGeometry::RydbergGeometry(std::vector<Point> positions, std::vector<Species> species, double jitter_sigma,
                                 std::uint64_t seed)
    : positions_(std::move(positions)), species_(std::move(species)), jitter_sigma_(jitter_sigma), seed_(seed) {
    if (positions_.empty()) throw InvalidArgument("RydbergGeometry: no atoms");
    if (species_.empty()) species_.assign(positions_.size(), Species::r70);
    if (species_.size() != positions_.size()) throw DimensionMismatch("RydbergGeometry: species count mismatch");
    if (jitter_sigma_ < 0.0) throw InvalidArgument("RydbergGeometry: negative jitter");
    if (jitter_sigma_ > 0.0) {
        Rng rng = make_rng(seed_, {id(Stream::geometry)});
        std::normal_distribution<double> noise(0.0, jitter_sigma_);
        for (auto& p : positions_) {
            p.x() += noise(rng);
            p.y() += noise(rng);
        }
    }
    for (int a = 0; a < size(); ++a) {
        for (int b = a + 1; b < size(); ++b) {
            if (!(distance(a, b) > 0.0)) throw InvalidArgument("RydbergGeometry: coincident atoms");
        }
    }
}

RydbergGeometry RydbergGeometry::chain(int n, double spacing, std::vector<Species> species) {
    if (n < 1 || !(spacing > 0.0)) throw InvalidArgument("RydbergGeometry::chain: bad size or spacing");
    std::vector<Point> pos;
    for (int i = 0; i < n; ++i) pos.emplace_back(i * spacing, 0.0);
    return RydbergGeometry(std::move(pos), std::move(species));
}

RydbergGeometry RydbergGeometry::lattice(int rows, int cols, double spacing, std::vector<Species> species) {
    if (rows < 1 || cols < 1 || !(spacing > 0.0)) throw InvalidArgument("RydbergGeometry::lattice: bad shape");
    std::vector<Point> pos;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) pos.emplace_back(c * spacing, r * spacing);
    return RydbergGeometry(std::move(pos), std::move(species));
}

RydbergGeometry RydbergGeometry::jittered(double sigma, std::uint64_t seed) const {
    return RydbergGeometry(positions_, species_, sigma, seed);
}

double RydbergGeometry::distance(int a, int b) const {
    return (positions_.at(static_cast<std::size_t>(a)) - positions_.at(static_cast<std::size_t>(b))).norm();
}

double blockade_spacing(double v, const InteractionTable& table) {
    if (!(v > 0.0)) throw InvalidArgument("blockade_spacing: v must be positive");
    return std::pow(table.c6_same / v, 1.0 / 6.0);
}

RMat interaction_matrix(const RydbergGeometry& g, const InteractionTable& table) {
    const int n = g.size();
    RMat j = RMat::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double r = g.distance(a, b);
            const double v = table.c6(g.species()[static_cast<std::size_t>(a)], g.species()[static_cast<std::size_t>(b)]) /
                             std::pow(r, 6);
            j(a, b) = v;
            j(b, a) = v;
        }
    }
    return j;
}

}  // namespace qrc
