#pragma once

#include "qrc/common.hpp"
#include "qrc/core/evolution.hpp"
#include "qrc/core/spin_operator.hpp"
#include "qrc/rydberg/geometry.hpp"

#include <vector>

namespace qrc {

// Piecewise-constant drive. Segment k holds on [start, end); segments must be
// contiguous from t = 0.
struct DriveSegment {
    double start = 0.0;
    double end = 0.0;
    double omega = 0.0;               // Rabi frequency, rad/us
    std::vector<double> detunings;    // per site, rad/us
};

class DriveProfile {
  public:
    DriveProfile() = default;
    explicit DriveProfile(std::vector<DriveSegment> segments);

    // One segment on [0, duration].
    static DriveProfile constant(double duration, double omega, std::vector<double> detunings);

    // Appends a segment of the given length after the current end.
    DriveProfile& then(double length, double omega, std::vector<double> detunings);

    const std::vector<DriveSegment>& segments() const { return segments_; }
    double duration() const { return segments_.empty() ? 0.0 : segments_.back().end; }
    void validate(int n_sites) const;

  private:
    std::vector<DriveSegment> segments_;
};

struct DissipationSpec {
    double gamma = kTwoPi / 20.0;  // rad/us
    double alpha = 0.05;
    double beta = 0.16;

    void validate() const;
};

// How the composite decay operator is realized.
enum class JumpMode {
    // Two channels per site: sqrt(g) a |g><r| and sqrt(g) b |g><g|.
    incoherent,
    // One channel per site: sqrt(g) |g>(a <r| + b <g|).
    coherent,
};

// H = -sum_n D_n sz_n + sum_{n<m} J_nm sz_n sz_m + (W/2) sum_n sx_n
SpinOperator qrnn_hamiltonian(const RMat& j, double omega, const std::vector<double>& detunings, BasisPtr basis);
OperatorSchedule build_qrnn_hamiltonian(const RMat& j, const DriveProfile& drive, BasisPtr basis);

// H = sum_n D_n n_n + (W/2) sum_n sx_n + sum_{n<m} V_nm n_n n_m
SpinOperator rydberg_hamiltonian(const RMat& v, double omega, const std::vector<double>& detunings, BasisPtr basis);
OperatorSchedule build_rydberg_hamiltonian(const RydbergGeometry& g, const InteractionTable& table,
                                           const DriveProfile& drive, BasisPtr basis);

std::vector<JumpOperator> effective_jumps(BasisPtr basis, const DissipationSpec& d,
                                          JumpMode mode = JumpMode::incoherent);

// W sum_n P_{n-1} sx_n P_{n+1} on a blockaded ring, indices mod N.
SpinOperator pxp_hamiltonian(BasisPtr basis, double omega);

// Cached pieces of the Rydberg Hamiltonian for one basis and interaction
// matrix, so per-sample Hamiltonians with new drives are cheap to assemble.
class RydbergModel {
  public:
    RydbergModel(BasisPtr basis, const RMat& v);

    const BasisPtr& basis() const { return basis_; }
    int n_sites() const { return basis_->n_sites(); }
    Index dim() const { return basis_->dim(); }
    const RVec& interaction_diagonal() const { return interaction_; }

    CMat hamiltonian(double omega, const std::vector<double>& detunings) const;
    SpinOperator hamiltonian_op(double omega, const std::vector<double>& detunings) const;

  private:
    BasisPtr basis_;
    CMat sx_sum_;
    RMat occupation_;  // dim x n_sites, entries 0 or 1
    RVec interaction_;
};

}  // namespace qrc
