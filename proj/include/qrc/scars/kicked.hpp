#pragma once

#include "qrc/common.hpp"
#include "qrc/core/spin_operator.hpp"
#include "qrc/core/state.hpp"
#include "qrc/core/superoperator.hpp"
#include "qrc/rng.hpp"

#include <vector>

namespace qrc {

// PXP amplitude with the Rabi frequency normalized to 1: H = (1/2) sum PXP,
// the blockade limit of (W/2) sum sx.
inline constexpr double kPxpAmplitude = 0.5;
inline constexpr double kScarTau = 1.51 * kPi;

struct KickSchedule {
    double tau = kScarTau;
    double eps_mean = 0.0;
    double eps_std = 0.0;
    int n_cycles = 0;

    void validate() const;
};

// chi = exp(-i pi N) exp(-i tau H_pxp) on a blockaded ring.
SpinOperator chi_tau(BasisPtr basis, double tau = kScarTau);

// Cycle operator pieces shared by many trajectories.
class KickedPxp {
  public:
    KickedPxp(BasisPtr basis, double tau = kScarTau);

    const BasisPtr& basis() const { return basis_; }
    double tau() const { return tau_; }
    const CMat& chi() const { return chi_; }
    // Diagonal of the total excitation number.
    const RVec& number_diagonal() const { return number_; }

    // exp(-i e N) chi psi
    CVec kick(const CVec& psi, double eps) const;
    // exp(-i e2 N) chi exp(-i e1 N) chi psi
    CVec cycle(const CVec& psi, double eps1, double eps2) const;
    CMat cycle_unitary(double eps1, double eps2) const;

  private:
    BasisPtr basis_;
    double tau_;
    CMat chi_;
    RVec number_;
};

QuantumState noisy_cycle(const QuantumState& state, double tau, double eps1, double eps2);

struct KickRecord {
    int cycle = 0;
    double fidelity = 1.0;  // |<psi0|psi(n)>|^2
    double p_g = 0.0;       // populations of site 0
    double p_r = 0.0;
    double entropy = 0.0;   // entanglement entropy of site 0
};

struct KickedRun {
    std::vector<KickRecord> records;  // cycles 0..n
    CVec final_state;
};

// n_cycles noisy cycles with eps_k ~ N(eps_mean, eps_std^2) drawn fresh per
// kick. Records are taken after every full cycle and at cycle 0.
KickedRun run_kicked(const QuantumState& state0, const KickSchedule& schedule, Rng& rng);
KickedRun run_kicked(const KickedPxp& model, const CVec& psi0, const KickSchedule& schedule, Rng& rng);

struct EffectiveGenerator {
    SuperOperator superop;
    SpinOperator h_plus;
    SpinOperator h_minus;
};

// L(rho) = -i (eps / 2 tau) [H+, rho] + (sigma^2 / 4 tau) (D+(rho) + D-(rho)),
// H+- = N +- chi N chi, D(rho) = H rho H - 1/2 {H H, rho}.
EffectiveGenerator effective_lindbladian(BasisPtr basis, double tau, double eps, double sigma);

inline constexpr double kKernelTol = 1e-9;

struct KernelResult {
    int count = 0;
    double threshold = 0.0;           // absolute |lambda| cutoff
    std::vector<cplx> eigenvalues;    // full spectrum, real part descending
    std::vector<CMat> kernel;         // reshaped kernel eigenvectors
};

// Eigenvalues with |lambda| <= tol * max|L_ij| count as zero (a zero
// generator therefore has a full kernel).
KernelResult kernel_count(const EffectiveGenerator& g, double tol = kKernelTol);

struct SteadyStateSet {
    std::vector<std::string> labels;    // initial bitstrings, basis order
    std::vector<CMat> states;           // steady density matrices
    std::vector<bool> projected;        // true if the kernel projection was needed
    RMat fidelity;                      // pairwise fidelities
    std::vector<int> cluster;           // representative index per state
    int n_distinct = 0;
    double max_residual = 0.0;          // max ‖L(rho_ss)‖_max
};

inline constexpr double kSteadyResidual = 1e-6;
inline constexpr double kDistinctFidelity = 0.99;

// Evolves every basis configuration under exp(t L), t = t_cycles * 2 tau.
// If the result is not stationary to 1e-6, the spectral projection onto the
// kernel (the long-time average) is used instead. States are clustered
// greedily: two states are distinct if F < 0.99.
SteadyStateSet empirical_steady_states(const EffectiveGenerator& g, double tau, double t_cycles,
                                       double tol = kKernelTol);

}  // namespace qrc
