#include "qrc/classical/rnn.hpp"
#include "qrc/core/basis.hpp"
#include "qrc/core/evolution.hpp"
#include "qrc/parallel.hpp"
#include "qrc/tasks/tasks.hpp"

#include <algorithm>
#include <cmath>

namespace qrc {

void ScarFidelityConfig::validate() const {
    if (threads < 1) throw ConfigError("scars-fidelity: threads must be >= 1");
    if (n_sites < 4 || n_sites > 16 || n_sites % 2) throw ConfigError("scars-fidelity: n_sites must be even, in [4, 16]");
    if (!(tau > 0.0) || sigma < 0.0) throw ConfigError("scars-fidelity: need tau > 0 and sigma >= 0");
    if (n_cycles < 1 || n_seeds < 1) throw ConfigError("scars-fidelity: n_cycles and n_seeds must be >= 1");
    if (references.empty()) throw ConfigError("scars-fidelity: no reference states");
    for (const auto& r : references) reference_label(r, n_sites);
}

TaskResult run_scar_fidelity(const ScarFidelityConfig& cfg) {
    cfg.validate();
    const auto basis = HilbertBasis::blockaded_ring(cfg.n_sites);
    const KickedPxp model(basis, cfg.tau);
    const KickSchedule noisy{cfg.tau, cfg.eps, cfg.sigma, cfg.n_cycles};
    const KickSchedule clean{cfg.tau, 0.0, 0.0, cfg.n_cycles};

    TaskResult res;
    res.task = "scars-fidelity";
    res.seed = cfg.seed;
    Table curve{{"cycle"}, {}};
    for (int n = 0; n <= cfg.n_cycles; ++n) curve.rows.push_back({double(n)});

    for (const auto& name : cfg.references) {
        const auto idx = basis->index_of(basis->parse_label(reference_label(name, cfg.n_sites)));
        if (!idx) throw ConfigError("reference '" + name + "' violates the blockade");
        CVec psi0 = CVec::Zero(basis->dim());
        psi0(*idx) = 1.0;

        std::vector<KickedRun> runs(static_cast<std::size_t>(cfg.n_seeds));
        parallel_for(runs.size(), cfg.threads, [&](std::size_t s) {
            // Same stream for every reference, so the noise is shared.
            Rng rng = make_rng(cfg.seed, {id(Stream::noise), std::uint64_t(s)});
            runs[s] = run_kicked(model, psi0, noisy, rng);
        });
        RVec mean = RVec::Zero(cfg.n_cycles + 1);
        for (const auto& run : runs) {
            for (int n = 0; n <= cfg.n_cycles; ++n) mean(n) += run.records[static_cast<std::size_t>(n)].fidelity;
        }
        mean /= cfg.n_seeds;
        for (int n = 0; n <= cfg.n_cycles; ++n) curve.rows[static_cast<std::size_t>(n)].push_back(mean(n));
        curve.columns.push_back("F_" + name);

        Rng unused = make_rng(cfg.seed, {id(Stream::noise)});
        double worst = 1.0;
        for (const auto& r : run_kicked(model, psi0, clean, unused).records) worst = std::min(worst, r.fidelity);
        res.metrics["mean_fidelity_" + name] = mean.tail(cfg.n_cycles).mean();
        res.metrics["noiseless_min_fidelity_" + name] = worst;
    }
    res.tables["fidelity_vs_cycle"] = std::move(curve);
    return res;
}

void EmbeddabilityConfig::validate() const {
    if (n_max < 1 || n_max > 10) throw ConfigError("embeddability: n_max must be in [1, 10]");
    if (n_max_decohered < 1 || n_max_decohered > 6) throw ConfigError("embeddability: n_max_decohered must be in [1, 6]");
    if (gamma < 0.0 || t < 0.0) throw ConfigError("embeddability: gamma and t must be >= 0");
}

namespace {

QuantumState apply_unitary(const CMat& u, const QuantumState& s) {
    return QuantumState::mixed_trusted(s.basis_ptr(), u * s.density() * u.adjoint());
}

CMat global_pi_pulse(const BasisPtr& b) {
    const int n = b->n_sites();
    // exp(-i pi/2 sum sx): the drive (1/2) sum sx for time pi
    return unitary_propagator(qrnn_hamiltonian(RMat::Zero(n, n), 1.0, std::vector<double>(static_cast<std::size_t>(n), 0.0), b),
                              kPi);
}

}  // namespace

TaskResult run_embeddability(const EmbeddabilityConfig& cfg) {
    cfg.validate();
    TaskResult res;
    res.task = "embeddability";
    Table flip{{"n", "necessary_holds", "det", "diag_product", "pi_pulse_error"}, {}};
    double worst_pulse = 0.0, any_holds = 0.0;
    for (int n = 1; n <= cfg.n_max; ++n) {
        const auto f = spin_flip_matrix(n);
        const auto b = HilbertBasis::full(n);
        const CMat u = global_pi_pulse(b);
        const auto m = channel_to_stochastic([&](const QuantumState& s) { return apply_unitary(u, s); }, b);
        const double err = (m.entries() - f.entries()).cwiseAbs().maxCoeff();
        const bool holds = embeddable_necessary(f);
        flip.add({double(n), holds ? 1.0 : 0.0, f.entries().determinant(), f.entries().diagonal().prod(), err});
        worst_pulse = std::max(worst_pulse, err);
        any_holds = std::max(any_holds, holds ? 1.0 : 0.0);
    }

    Table decohered{{"n", "det", "det_single_spin_product", "necessary_holds"}, {}};
    double worst_det = 0.0;
    const double p = 1.0 - std::exp(-cfg.gamma * cfg.t);
    const double det1 = p * 0.0 - 1.0 * (1.0 - p);  // det [[p, 1], [1 - p, 0]]
    for (int n = 1; n <= cfg.n_max_decohered; ++n) {
        const auto b = HilbertBasis::full(n);
        const CMat u = global_pi_pulse(b);
        const auto jumps = effective_jumps(b, DissipationSpec{cfg.gamma, 1.0, 0.0});
        const auto h0 = OperatorSchedule::constant(SpinOperator::zero(b));
        const auto fg = channel_to_stochastic(
            [&](const QuantumState& s) { return evolve_lindblad(apply_unitary(u, s), h0, jumps, cfg.t, 1e-3); }, b);
        const double det = fg.entries().determinant();
        const double product = std::pow(det1, n * (1 << (n - 1)));
        decohered.add({double(n), det, product, embeddable_necessary(fg) ? 1.0 : 0.0});
        worst_det = std::max(worst_det, std::abs(det - product));
    }
    res.metrics = {{"flip_necessary_holds_any", any_holds},
                   {"pi_pulse_max_error", worst_pulse},
                   {"decohered_det_max_error", worst_det}};
    res.tables["spin_flip"] = std::move(flip);
    res.tables["decohered_flip"] = std::move(decohered);
    return res;
}

void KernelCountConfig::validate() const {
    if (sizes.empty()) throw ConfigError("kernel-count: no ring sizes");
    for (int n : sizes) {
        if (n < 3 || n > 10) throw ConfigError("kernel-count: ring sizes must be in [3, 10]");
    }
    for (int n : steady_sizes) {
        if (n < 3 || n > 10) throw ConfigError("kernel-count: steady-state sizes must be in [3, 10]");
    }
    if (!(tau > 0.0) || sigma < 0.0 || !(tol > 0.0) || !(steady_cycles > 0.0)) {
        throw ConfigError("kernel-count: need tau, tol, steady_cycles > 0 and sigma >= 0");
    }
}

TaskResult run_kernel_count(const KernelCountConfig& cfg) {
    cfg.validate();
    TaskResult res;
    res.task = "kernel-count";
    Table counts{{"n", "dim", "kernel_count", "threshold", "n_distinct_steady"}, {}};
    auto sizes = cfg.sizes;
    for (int n : cfg.steady_sizes) {
        if (std::find(sizes.begin(), sizes.end(), n) == sizes.end()) sizes.push_back(n);
    }
    std::sort(sizes.begin(), sizes.end());
    for (int n : sizes) {
        const auto b = HilbertBasis::blockaded_ring(n);
        const auto g = effective_lindbladian(b, cfg.tau, cfg.eps, cfg.sigma);
        const bool count = std::find(cfg.sizes.begin(), cfg.sizes.end(), n) != cfg.sizes.end();
        const bool steady = std::find(cfg.steady_sizes.begin(), cfg.steady_sizes.end(), n) != cfg.steady_sizes.end();
        double k = NAN, threshold = NAN, distinct = NAN;
        if (count) {
            const auto kr = kernel_count(g, cfg.tol);
            k = kr.count;
            threshold = kr.threshold;
            res.metrics["kernel_count_" + std::to_string(n)] = k;
        }
        if (steady) {
            const auto ss = empirical_steady_states(g, cfg.tau, cfg.steady_cycles, cfg.tol);
            distinct = ss.n_distinct;
            res.metrics["n_distinct_steady_" + std::to_string(n)] = distinct;
            res.metrics["steady_residual_" + std::to_string(n)] = ss.max_residual;
            Table fid{ss.labels, {}};
            for (Index i = 0; i < ss.fidelity.rows(); ++i) {
                const RVec row = ss.fidelity.row(i).transpose();
                fid.add(std::vector<double>(row.data(), row.data() + row.size()));
            }
            res.tables["steady_fidelity_" + std::to_string(n)] = std::move(fid);
        }
        counts.rows.push_back({double(n), double(b->dim()), k, threshold, distinct});
    }
    res.tables["kernel_vs_n"] = std::move(counts);
    return res;
}

}  // namespace qrc
