#include "qrc/scars/kicked.hpp"

#include "qrc/core/measures.hpp"
#include "qrc/rydberg/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <bit>
#include <cmath>

namespace qrc {

void KickSchedule::validate() const {
    if (!(tau > 0.0)) throw InvalidArgument("KickSchedule: tau must be positive");
    if (!(eps_std >= 0.0)) throw InvalidArgument("KickSchedule: eps_std must be >= 0");
    if (n_cycles < 0) throw InvalidArgument("KickSchedule: n_cycles must be >= 0");
}

namespace {

RVec number_diag(const HilbertBasis& b) {
    RVec n(b.dim());
    for (Index i = 0; i < b.dim(); ++i) n(i) = static_cast<double>(std::popcount(b.state(i)));
    return n;
}

CMat chi_matrix(const BasisPtr& basis, double tau) {
    const RMat h = pxp_hamiltonian(basis, kPxpAmplitude).dense().real();
    Eigen::SelfAdjointEigenSolver<RMat> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("chi_tau: PXP diagonalization failed");
    const CVec phase = (-kI * tau * es.eigenvalues().cast<cplx>()).array().exp();
    const CMat v = es.eigenvectors().cast<cplx>();
    CMat u = v * phase.asDiagonal() * v.adjoint();
    // exp(-i pi N) is the parity (-1)^N
    const RVec n = number_diag(*basis);
    for (Index i = 0; i < u.rows(); ++i) {
        if (static_cast<long>(n(i)) % 2 == 1) u.row(i) *= -1.0;
    }
    return u;
}

CVec phase_kick(const RVec& n, double eps) { return (-kI * eps * n.cast<cplx>()).array().exp(); }

}  // namespace

SpinOperator chi_tau(BasisPtr basis, double tau) {
    CMat u = chi_matrix(basis, tau);
    return SpinOperator(std::move(basis), u);
}

KickedPxp::KickedPxp(BasisPtr basis, double tau)
    : basis_(std::move(basis)), tau_(tau), chi_(chi_matrix(basis_, tau)), number_(number_diag(*basis_)) {}

CVec KickedPxp::kick(const CVec& psi, double eps) const {
    if (psi.size() != basis_->dim()) throw DimensionMismatch("KickedPxp::kick");
    return phase_kick(number_, eps).cwiseProduct(chi_ * psi);
}

CVec KickedPxp::cycle(const CVec& psi, double eps1, double eps2) const { return kick(kick(psi, eps1), eps2); }

CMat KickedPxp::cycle_unitary(double eps1, double eps2) const {
    return phase_kick(number_, eps2).asDiagonal() * chi_ * phase_kick(number_, eps1).asDiagonal() * chi_;
}

QuantumState noisy_cycle(const QuantumState& state, double tau, double eps1, double eps2) {
    const KickedPxp model(state.basis_ptr(), tau);
    if (state.is_pure()) return QuantumState::pure_normalized(state.basis_ptr(), model.cycle(state.amplitudes(), eps1, eps2));
    const CMat u = model.cycle_unitary(eps1, eps2);
    return QuantumState::mixed_trusted(state.basis_ptr(), hermitian_part(u * state.density() * u.adjoint()));
}

namespace {

KickRecord record(const HilbertBasis& b, const CVec& psi0, const CVec& psi, int cycle) {
    KickRecord r;
    r.cycle = cycle;
    r.fidelity = std::norm(psi0.dot(psi));
    const Eigen::Matrix2cd rho1 = single_site_density(b, psi, 0);
    r.p_g = rho1(0, 0).real();
    r.p_r = rho1(1, 1).real();
    r.entropy = von_neumann_entropy(rho1);
    return r;
}

}  // namespace

KickedRun run_kicked(const KickedPxp& model, const CVec& psi0, const KickSchedule& schedule, Rng& rng) {
    schedule.validate();
    if (psi0.size() != model.basis()->dim()) throw DimensionMismatch("run_kicked: state dimension");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw InvalidArgument("run_kicked: state not normalized");
    std::normal_distribution<double> noise(0.0, 1.0);
    auto draw = [&] { return schedule.eps_mean + schedule.eps_std * noise(rng); };

    KickedRun run;
    run.records.reserve(static_cast<std::size_t>(schedule.n_cycles) + 1);
    CVec psi = psi0;
    run.records.push_back(record(*model.basis(), psi0, psi, 0));
    for (int c = 1; c <= schedule.n_cycles; ++c) {
        const double e1 = draw();
        const double e2 = draw();
        psi = model.cycle(psi, e1, e2);
        run.records.push_back(record(*model.basis(), psi0, psi, c));
    }
    run.final_state = std::move(psi);
    return run;
}

KickedRun run_kicked(const QuantumState& state0, const KickSchedule& schedule, Rng& rng) {
    if (!state0.is_pure()) throw InvalidArgument("run_kicked: needs a pure state");
    const KickedPxp model(state0.basis_ptr(), schedule.tau);
    return run_kicked(model, state0.amplitudes(), schedule, rng);
}

EffectiveGenerator effective_lindbladian(BasisPtr basis, double tau, double eps, double sigma) {
    if (!(tau > 0.0) || sigma < 0.0) throw InvalidArgument("effective_lindbladian: need tau > 0, sigma >= 0");
    const CMat chi = chi_matrix(basis, tau);
    const RVec n = number_diag(*basis);
    const CMat nd = n.cast<cplx>().asDiagonal();
    const CMat m = chi * nd * chi;
    const SpinOperator hp(basis, hermitian_part(nd + m), true);
    const SpinOperator hm(basis, hermitian_part(nd - m), true);

    const double rate = sigma * sigma / (4.0 * tau);
    std::vector<JumpOperator> jumps;
    if (rate > 0.0) {
        jumps.emplace_back(std::sqrt(rate) * hp);
        jumps.emplace_back(std::sqrt(rate) * hm);
    }
    SuperOperator l = SuperOperator::lindbladian(hp * (eps / (2.0 * tau)), jumps);
    return EffectiveGenerator{std::move(l), hp, hm};
}

KernelResult kernel_count(const EffectiveGenerator& g, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("kernel_count: tol must be positive");
    const auto pairs = superop_eigendecomposition(g.superop);
    KernelResult out;
    out.threshold = tol * g.superop.max_norm();
    for (const auto& p : pairs) {
        out.eigenvalues.push_back(p.value);
        if (std::abs(p.value) <= out.threshold) {
            ++out.count;
            out.kernel.push_back(p.vector);
        }
    }
    return out;
}

SteadyStateSet empirical_steady_states(const EffectiveGenerator& g, double tau, double t_cycles, double tol) {
    if (!(t_cycles > 0.0)) throw InvalidArgument("empirical_steady_states: t_cycles must be positive");
    const SuperOperator& l = g.superop;
    const HilbertBasis& b = l.basis();
    const Index d = b.dim();
    const double t = t_cycles * 2.0 * tau;

    CVec values;
    CMat vecs;
    general_eigen(l.matrix(), values, vecs, true);
    Eigen::PartialPivLU<CMat> lu(vecs);
    const double cutoff = tol * l.max_norm();
    CVec decay(values.size()), kernel_mask(values.size());
    for (Index k = 0; k < values.size(); ++k) {
        // Re(lambda) <= 0 for a Lindbladian; clamp round-off
        const cplx lam(std::min(values(k).real(), 0.0), values(k).imag());
        decay(k) = std::exp(lam * t);
        kernel_mask(k) = std::abs(values(k)) <= cutoff ? 1.0 : 0.0;
    }

    SteadyStateSet out;
    auto finish = [&](CVec v) {
        CMat rho = hermitian_part(unvectorize(v, d));
        return CMat(rho / rho.trace());
    };
    for (Index i = 0; i < d; ++i) {
        CVec e = CVec::Zero(d * d);
        e(i * d + i) = 1.0;
        const CVec c = lu.solve(e);
        CMat rho = finish(vecs * decay.cwiseProduct(c));
        double res = max_abs(l.apply(rho));
        bool projected = false;
        if (res >= kSteadyResidual) {
            rho = finish(vecs * kernel_mask.cwiseProduct(c));
            res = max_abs(l.apply(rho));
            projected = true;
        }
        out.labels.push_back(b.label(i));
        out.states.push_back(std::move(rho));
        out.projected.push_back(projected);
        out.max_residual = std::max(out.max_residual, res);
    }

    const auto bp = l.basis_ptr();
    std::vector<QuantumState> qs;
    for (const auto& rho : out.states) qs.push_back(QuantumState::mixed_trusted(bp, rho));
    out.fidelity = RMat::Identity(d, d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            const double f = state_fidelity(qs[static_cast<std::size_t>(i)], qs[static_cast<std::size_t>(j)]);
            out.fidelity(i, j) = out.fidelity(j, i) = f;
        }
    }
    std::vector<Index> reps;
    for (Index i = 0; i < d; ++i) {
        int assigned = -1;
        for (std::size_t r = 0; r < reps.size(); ++r) {
            if (out.fidelity(i, reps[r]) >= kDistinctFidelity) {
                assigned = static_cast<int>(reps[r]);
                break;
            }
        }
        if (assigned < 0) {
            reps.push_back(i);
            assigned = static_cast<int>(i);
        }
        out.cluster.push_back(assigned);
    }
    out.n_distinct = static_cast<int>(reps.size());
    return out;
}

}  // namespace qrc
