#pragma once

#include "qrc/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qrc {

// Principal-quantum-number class of an atom's Rydberg level.
enum class Species { r70, r73 };

std::string to_string(Species s);
Species parse_species(const std::string& s);

// van der Waals coefficients in rad/us * um^6.
struct InteractionTable {
    double c6_same = kTwoPi * 862.9e3;
    double c6_cross = kTwoPi * -836.6e3;

    double c6(Species a, Species b) const { return a == b ? c6_same : c6_cross; }
    // Throws unless c6_cross is within 5% of -c6_same.
    void validate() const;
};

// Atom positions in um with species tags. Jitter, if any, is applied once at
// construction from the recorded seed.
class RydbergGeometry {
  public:
    using Point = Eigen::Vector2d;

    RydbergGeometry(std::vector<Point> positions, std::vector<Species> species, double jitter_sigma = 0.0,
                    std::uint64_t seed = 0);

    // Sites at x = i * spacing.
    static RydbergGeometry chain(int n, double spacing, std::vector<Species> species = {});
    // Row-major rows x cols square lattice; site index = row * cols + col.
    static RydbergGeometry lattice(int rows, int cols, double spacing, std::vector<Species> species = {});

    RydbergGeometry jittered(double sigma, std::uint64_t seed) const;

    int size() const { return static_cast<int>(positions_.size()); }
    const std::vector<Point>& positions() const { return positions_; }
    const std::vector<Species>& species() const { return species_; }
    double jitter_sigma() const { return jitter_sigma_; }
    std::uint64_t seed() const { return seed_; }
    double distance(int a, int b) const;

  private:
    std::vector<Point> positions_;
    std::vector<Species> species_;
    double jitter_sigma_;
    std::uint64_t seed_;
};

// Spacing a0 at which two same-species atoms interact with strength v
// (rad/us): c6_same / a0^6 = v.
double blockade_spacing(double v, const InteractionTable& table = {});

// J_nm = C6(species_n, species_m) / R_nm^6 for n != m, zero diagonal.
RMat interaction_matrix(const RydbergGeometry& g, const InteractionTable& table = {});

}  // namespace qrc
