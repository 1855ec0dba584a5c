#pragma once

#include "qrc/common.hpp"
#include "qrc/core/spin_operator.hpp"
#include "qrc/core/state.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace qrc {

// Time-dependent Hamiltonian provider. Piecewise-constant schedules expose
// their breakpoints so integrators can align steps with them.
class OperatorSchedule {
  public:
    using Function = std::function<SpinOperator(double)>;

    static OperatorSchedule constant(SpinOperator h);
    // ops[k] is active on [breakpoints[k], breakpoints[k+1]); the last op
    // stays active after the final breakpoint.
    static OperatorSchedule piecewise(std::vector<double> breakpoints, std::vector<SpinOperator> ops);
    static OperatorSchedule function(BasisPtr basis, Function f);

    SpinOperator at(double t) const;
    const HilbertBasis& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    bool is_constant() const { return ops_.size() == 1 && !fn_; }
    bool is_piecewise() const { return !fn_; }

    // Constant segments covering [0, duration]: (start, end, op index).
    struct Segment {
        double start;
        double end;
        std::size_t op;
    };
    std::vector<Segment> segments(double duration) const;
    const SpinOperator& op(std::size_t k) const { return ops_.at(k); }

  private:
    BasisPtr basis_;
    std::vector<double> breakpoints_;
    std::vector<SpinOperator> ops_;
    Function fn_;
};

// A Lindblad jump operator with the rate folded in: L = sqrt(gamma) * A.
class JumpOperator {
  public:
    explicit JumpOperator(SpinOperator op) : op_(std::move(op)) {}
    const SpinOperator& op() const { return op_; }
    static constexpr bool rate_sqrt_embedded = true;

  private:
    SpinOperator op_;
};

struct EvolutionDiagnostics {
    double max_norm_defect = 0.0;   // unitary: max |‖psi‖-1| before renormalization
    double trace_drift = 0.0;       // lindblad: |Tr rho(T) - Tr rho(0)|
    double min_eigenvalue = 1.0;    // lindblad: smallest eigenvalue of the final state
    double convergence_delta = 0.0;  // max-norm change when re-run at dt/2
    long steps = 0;
    bool exact_path = false;
};

struct EvolutionOptions {
    // Use the eigendecomposition path for constant segments when possible.
    bool allow_exact = true;
    // Re-run at dt/2 and report the max-norm difference in the diagnostics.
    bool convergence_check = false;
};

QuantumState evolve_unitary(const QuantumState& state, const OperatorSchedule& h, double duration, double dt,
                            EvolutionDiagnostics* diag = nullptr, const EvolutionOptions& options = {});

QuantumState evolve_lindblad(const QuantumState& state, const OperatorSchedule& h, std::span<const JumpOperator> jumps,
                             double duration, double dt, EvolutionDiagnostics* diag = nullptr);

// exp(-i H t) for a Hermitian operator via eigendecomposition.
CMat unitary_propagator(const SpinOperator& h, double t);

// D(rho) = sum_k L rho L^dag - 1/2 {L^dag L, rho}.
class Dissipator {
  public:
    Dissipator() = default;
    Dissipator(Index dim, std::span<const JumpOperator> jumps);

    bool empty() const { return jumps_.empty(); }
    CMat apply(const CMat& rho) const;
    // Heisenberg-picture dual: sum_k L^dag O L - 1/2 {L^dag L, O}.
    CMat apply_adjoint(const CMat& obs) const;
    // exp(t D) applied by RK4 substeps with ‖K‖·h ≤ 0.02.
    CMat exp_apply(const CMat& rho, double t) const;
    CMat exp_apply_adjoint(const CMat& obs, double t) const;
    // Upper bound on the decay rate, ‖sum L^dag L‖ (inf-norm).
    double rate_bound() const { return rate_bound_; }

  private:
    template <typename F>
    CMat rk4_exp(const CMat& x, double t, F&& generator) const;

    std::vector<SpMat> jumps_;
    std::vector<SpMat> jumps_adj_;
    SpMat k_;  // sum L^dag L
    double rate_bound_ = 0.0;
};

// Lindblad propagator for a time-independent generator, built on a
// symmetric (Strang) split: exp(tD/2) exp(-i t [H,.]) exp(tD/2) per step,
// with the unitary part exact. The local error is O(dt^3 ‖[H,D]‖) and
// vanishes without dissipation. Supports Heisenberg-picture propagation.
class LindbladPropagator {
  public:
    LindbladPropagator(const SpinOperator& h, std::span<const JumpOperator> jumps, double max_step);
    LindbladPropagator(const CMat& h_dense, const Dissipator& dissipator, double max_step);

    Index dim() const { return eigvecs_.rows(); }
    double max_step() const { return max_step_; }
    const Dissipator& dissipator() const { return dissipator_; }

    CMat evolve(const CMat& rho, double t) const;
    CVec evolve_pure(const CVec& psi, double t) const;  // valid only without jumps
    CMat evolve_observable(const CMat& obs, double t) const;
    CMat unitary(double t) const;

  private:
    CMat step_unitary(double h) const;

    CMat eigvecs_;
    RVec energies_;
    Dissipator dissipator_;
    double max_step_;
};

}  // namespace qrc
