#include "qrc/core/evolution.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrc {

namespace {

constexpr Index kExactDimLimit = 1024;
constexpr double kUnitaryAbortDefect = 1e-5;
constexpr double kTraceAbortDrift = 1e-5;
constexpr double kPositivityAbort = -1e-5;

long step_count(double length, double dt) {
    // tolerate round-off so that length = k*dt gives exactly k steps
    return std::max(1L, static_cast<long>(std::ceil(length / dt - 1e-9)));
}

void check_hermitian(const SpinOperator& h) {
    if (h.hermitian_hint()) return;
    const double defect = h.hermiticity_defect();
    if (!(defect < SpinOperator::kHermitianTol)) {
        throw InvalidArgument("Hamiltonian is not Hermitian (defect " + std::to_string(defect) + ")");
    }
}

void validate_times(double duration, double dt, const char* where) {
    if (!(dt > 0.0)) throw InvalidArgument(std::string(where) + ": dt must be positive");
    if (!(duration >= 0.0)) throw InvalidArgument(std::string(where) + ": duration must be non-negative");
    if (duration > 0.0 && dt >= duration) {
        throw InvalidArgument(std::string(where) + ": dt must be smaller than the duration");
    }
}

}  // namespace

// ------------------------------- schedule ----------------------------------

OperatorSchedule OperatorSchedule::constant(SpinOperator h) {
    OperatorSchedule s;
    s.basis_ = h.basis_ptr();
    s.breakpoints_ = {0.0};
    s.ops_.push_back(std::move(h));
    return s;
}

OperatorSchedule OperatorSchedule::piecewise(std::vector<double> breakpoints, std::vector<SpinOperator> ops) {
    if (ops.empty() || breakpoints.size() != ops.size()) {
        throw InvalidArgument("OperatorSchedule::piecewise: need one start time per operator");
    }
    if (breakpoints.front() != 0.0) throw InvalidArgument("OperatorSchedule::piecewise: first segment must start at 0");
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        if (!(breakpoints[k] > breakpoints[k - 1])) {
            throw InvalidArgument("OperatorSchedule::piecewise: breakpoints must increase");
        }
        require_same_basis(ops[k].basis(), ops[0].basis(), "OperatorSchedule::piecewise");
    }
    OperatorSchedule s;
    s.basis_ = ops.front().basis_ptr();
    s.breakpoints_ = std::move(breakpoints);
    s.ops_ = std::move(ops);
    return s;
}

OperatorSchedule OperatorSchedule::function(BasisPtr basis, Function f) {
    OperatorSchedule s;
    s.basis_ = std::move(basis);
    s.fn_ = std::move(f);
    return s;
}

SpinOperator OperatorSchedule::at(double t) const {
    if (fn_) {
        SpinOperator h = fn_(t);
        require_same_basis(h.basis(), *basis_, "OperatorSchedule::at");
        return h;
    }
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    const std::size_t k = it == breakpoints_.begin() ? 0 : static_cast<std::size_t>(it - breakpoints_.begin() - 1);
    return ops_[k];
}

std::vector<OperatorSchedule::Segment> OperatorSchedule::segments(double duration) const {
    std::vector<Segment> out;
    if (fn_) {
        out.push_back({0.0, duration, 0});
        return out;
    }
    for (std::size_t k = 0; k < ops_.size(); ++k) {
        const double a = breakpoints_[k];
        const double b = k + 1 < ops_.size() ? std::min(breakpoints_[k + 1], duration) : duration;
        if (a >= duration) break;
        if (b > a) out.push_back({a, b, k});
    }
    return out;
}

// ------------------------------- unitary -----------------------------------

CMat unitary_propagator(const SpinOperator& h, double t) {
    check_hermitian(h);
    Eigen::SelfAdjointEigenSolver<CMat> es(h.dense());
    const CVec phases = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

QuantumState evolve_unitary_impl(const QuantumState& state, const OperatorSchedule& h, double duration, double dt,
                                 EvolutionDiagnostics& diag, const EvolutionOptions& options) {
    CVec psi = state.amplitudes();
    for (const auto& seg : h.segments(duration)) {
        const double len = seg.end - seg.start;
        if (h.is_piecewise() && options.allow_exact && h.basis().dim() <= kExactDimLimit) {
            const SpinOperator& op = h.op(seg.op);
            psi = unitary_propagator(op, len) * psi;
            diag.exact_path = true;
            continue;
        }
        const long n = step_count(len, dt);
        const double step = len / static_cast<double>(n);
        if (h.is_piecewise()) check_hermitian(h.op(seg.op));
        for (long k = 0; k < n; ++k) {
            const double t = seg.start + static_cast<double>(k) * step;
            const SpinOperator h0 = h.is_piecewise() ? h.op(seg.op) : h.at(t);
            const SpinOperator hm = h.is_piecewise() ? h0 : h.at(t + 0.5 * step);
            const SpinOperator h1 = h.is_piecewise() ? h0 : h.at(t + step);
            if (!h.is_piecewise()) {
                check_hermitian(h0);
                check_hermitian(hm);
                check_hermitian(h1);
            }
            const CVec k1 = -kI * h0.apply(psi);
            const CVec k2 = -kI * hm.apply(psi + 0.5 * step * k1);
            const CVec k3 = -kI * hm.apply(psi + 0.5 * step * k2);
            const CVec k4 = -kI * h1.apply(psi + step * k3);
            psi += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const double norm = psi.norm();
            const double defect = std::abs(norm - 1.0);
            diag.max_norm_defect = std::max(diag.max_norm_defect, defect);
            if (!(defect < kUnitaryAbortDefect)) {
                throw NumericalError("evolve_unitary: norm defect " + std::to_string(defect) +
                                     " per step; reduce dt");
            }
            psi /= norm;
            ++diag.steps;
        }
    }
    return QuantumState::pure_normalized(state.basis_ptr(), std::move(psi));
}

}  // namespace

QuantumState evolve_unitary(const QuantumState& state, const OperatorSchedule& h, double duration, double dt,
                            EvolutionDiagnostics* diag, const EvolutionOptions& options) {
    validate_times(duration, dt, "evolve_unitary");
    if (!state.is_pure()) throw InvalidArgument("evolve_unitary: state must be pure (use evolve_lindblad)");
    require_same_basis(state.basis(), h.basis(), "evolve_unitary");
    EvolutionDiagnostics local;
    EvolutionDiagnostics& d = diag ? *diag : local;
    if (duration == 0.0) return state;
    QuantumState out = evolve_unitary_impl(state, h, duration, dt, d, options);
    if (options.convergence_check && !d.exact_path) {
        EvolutionDiagnostics half;
        const QuantumState ref = evolve_unitary_impl(state, h, duration, 0.5 * dt, half, options);
        d.convergence_delta = (ref.amplitudes() - out.amplitudes()).cwiseAbs().maxCoeff();
    }
    return out;
}

// ------------------------------- lindblad ----------------------------------

QuantumState evolve_lindblad(const QuantumState& state, const OperatorSchedule& h, std::span<const JumpOperator> jumps,
                             double duration, double dt, EvolutionDiagnostics* diag) {
    validate_times(duration, dt, "evolve_lindblad");
    require_same_basis(state.basis(), h.basis(), "evolve_lindblad");
    for (const auto& j : jumps) require_same_basis(j.op().basis(), state.basis(), "evolve_lindblad jump");
    EvolutionDiagnostics local;
    EvolutionDiagnostics& d = diag ? *diag : local;

    CMat rho = state.density();
    const Dissipator dis(state.dim(), jumps);
    const cplx tr0 = rho.trace();

    auto generator = [&](const SpinOperator& hh, const CMat& r) -> CMat {
        CMat out = -kI * (hh.left_multiply(r) - hh.right_multiply(r));
        if (!dis.empty()) out += dis.apply(r);
        return out;
    };

    for (const auto& seg : h.segments(duration)) {
        const double len = seg.end - seg.start;
        const long n = step_count(len, dt);
        const double step = len / static_cast<double>(n);
        if (h.is_piecewise()) check_hermitian(h.op(seg.op));
        for (long k = 0; k < n; ++k) {
            const double t = seg.start + static_cast<double>(k) * step;
            const SpinOperator h0 = h.is_piecewise() ? h.op(seg.op) : h.at(t);
            const SpinOperator hm = h.is_piecewise() ? h0 : h.at(t + 0.5 * step);
            const SpinOperator h1 = h.is_piecewise() ? h0 : h.at(t + step);
            if (!h.is_piecewise()) {
                check_hermitian(h0);
                check_hermitian(hm);
                check_hermitian(h1);
            }
            const CMat k1 = generator(h0, rho);
            const CMat k2 = generator(hm, rho + 0.5 * step * k1);
            const CMat k3 = generator(hm, rho + 0.5 * step * k2);
            const CMat k4 = generator(h1, rho + step * k3);
            rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            rho = hermitian_part(rho);
            ++d.steps;
        }
    }

    const cplx tr = rho.trace();
    d.trace_drift = std::abs(tr - tr0);
    if (!(d.trace_drift <= kTraceAbortDrift)) {
        throw NumericalError("evolve_lindblad: trace drift " + std::to_string(d.trace_drift) + "; reduce dt");
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    if (d.min_eigenvalue < kPositivityAbort) {
        throw NumericalError("evolve_lindblad: eigenvalue " + std::to_string(d.min_eigenvalue) + " below -1e-5");
    }
    rho /= tr.real();
    return QuantumState::mixed_trusted(state.basis_ptr(), std::move(rho));
}

// ------------------------------- dissipator --------------------------------

Dissipator::Dissipator(Index dim, std::span<const JumpOperator> jumps) {
    k_ = SpMat(dim, dim);
    for (const auto& j : jumps) {
        if (j.op().dim() != dim) throw DimensionMismatch("Dissipator: jump dimension mismatch");
        SpMat l = j.op().sparse();
        SpMat la = l.adjoint();
        k_ += la * l;
        jumps_.push_back(std::move(l));
        jumps_adj_.push_back(std::move(la));
    }
    k_.makeCompressed();
    for (Index r = 0; r < dim; ++r) {
        // inf-norm via column sums of the Hermitian K
        double s = 0.0;
        for (SpMat::InnerIterator it(k_, r); it; ++it) s += std::abs(it.value());
        rate_bound_ = std::max(rate_bound_, s);
    }
}

CMat Dissipator::apply(const CMat& rho) const {
    CMat out = -0.5 * (k_ * rho + rho * k_);
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        CMat lr = jumps_[k] * rho;
        out.noalias() += lr * jumps_adj_[k];
    }
    return out;
}

CMat Dissipator::apply_adjoint(const CMat& obs) const {
    CMat out = -0.5 * (k_ * obs + obs * k_);
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        CMat lo = jumps_adj_[k] * obs;
        out.noalias() += lo * jumps_[k];
    }
    return out;
}

template <typename F>
CMat Dissipator::rk4_exp(const CMat& x, double t, F&& gen) const {
    if (empty() || t == 0.0) return x;
    const long n = std::max(1L, static_cast<long>(std::ceil(rate_bound_ * t / 0.02)));
    const double h = t / static_cast<double>(n);
    CMat y = x;
    for (long k = 0; k < n; ++k) {
        const CMat k1 = gen(y);
        const CMat k2 = gen(y + 0.5 * h * k1);
        const CMat k3 = gen(y + 0.5 * h * k2);
        const CMat k4 = gen(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

CMat Dissipator::exp_apply(const CMat& rho, double t) const {
    return rk4_exp(rho, t, [this](const CMat& r) { return apply(r); });
}

CMat Dissipator::exp_apply_adjoint(const CMat& obs, double t) const {
    return rk4_exp(obs, t, [this](const CMat& o) { return apply_adjoint(o); });
}

// ------------------------------- propagator --------------------------------

LindbladPropagator::LindbladPropagator(const SpinOperator& h, std::span<const JumpOperator> jumps, double max_step)
    : LindbladPropagator(h.dense(), Dissipator(h.dim(), jumps), max_step) {
    check_hermitian(h);
}

LindbladPropagator::LindbladPropagator(const CMat& h_dense, const Dissipator& dissipator, double max_step)
    : dissipator_(dissipator), max_step_(max_step) {
    if (!(max_step > 0.0)) throw InvalidArgument("LindbladPropagator: max_step must be positive");
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(h_dense));
    if (es.info() != Eigen::Success) throw NumericalError("LindbladPropagator: eigendecomposition failed");
    eigvecs_ = es.eigenvectors();
    energies_ = es.eigenvalues();
}

CMat LindbladPropagator::step_unitary(double t) const {
    const CVec phases = (-kI * t * energies_.cast<cplx>()).array().exp().matrix();
    return eigvecs_ * phases.asDiagonal() * eigvecs_.adjoint();
}

CMat LindbladPropagator::unitary(double t) const { return step_unitary(t); }

CVec LindbladPropagator::evolve_pure(const CVec& psi, double t) const {
    if (!dissipator_.empty()) throw InvalidArgument("LindbladPropagator::evolve_pure: generator has jumps");
    const CVec phases = (-kI * t * energies_.cast<cplx>()).array().exp().matrix();
    return eigvecs_ * (phases.asDiagonal() * (eigvecs_.adjoint() * psi));
}

CMat LindbladPropagator::evolve(const CMat& rho, double t) const {
    if (t < 0.0) throw InvalidArgument("LindbladPropagator::evolve: negative time");
    if (t == 0.0) return rho;
    if (dissipator_.empty()) {
        const CMat u = step_unitary(t);
        return u * rho * u.adjoint();
    }
    const long n = step_count(t, max_step_);
    const double h = t / static_cast<double>(n);
    const CMat u = step_unitary(h);
    const CMat ua = u.adjoint();
    CMat r = dissipator_.exp_apply(rho, 0.5 * h);
    for (long k = 0; k < n; ++k) {
        r = u * r * ua;
        r = dissipator_.exp_apply(r, k + 1 < n ? h : 0.5 * h);
    }
    return hermitian_part(r);
}

CMat LindbladPropagator::evolve_observable(const CMat& obs, double t) const {
    if (t < 0.0) throw InvalidArgument("LindbladPropagator::evolve_observable: negative time");
    if (t == 0.0) return obs;
    if (dissipator_.empty()) {
        const CMat u = step_unitary(t);
        return u.adjoint() * obs * u;
    }
    const long n = step_count(t, max_step_);
    const double h = t / static_cast<double>(n);
    const CMat u = step_unitary(h);
    const CMat ua = u.adjoint();
    CMat o = dissipator_.exp_apply_adjoint(obs, 0.5 * h);
    for (long k = 0; k < n; ++k) {
        o = ua * o * u;
        o = dissipator_.exp_apply_adjoint(o, k + 1 < n ? h : 0.5 * h);
    }
    return o;
}

}  // namespace qrc
