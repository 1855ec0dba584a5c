#include "qrc/core/basis.hpp"
#include "qrc/core/state.hpp"
#include "qrc/parallel.hpp"
#include "qrc/tasks/tasks.hpp"
#include "qrc/train/stats.hpp"

#include <algorithm>
#include <numeric>

namespace qrc {

void LongtermConfig::validate() const {
    if (threads < 1) throw ConfigError("longterm: threads must be >= 1");
    if (n_sites < 4 || n_sites > 16 || n_sites % 2) throw ConfigError("longterm: n_sites must be even, in [4, 16]");
    if (!(tau > 0.0)) throw ConfigError("longterm: tau must be positive");
    if (sigma < 0.0) throw ConfigError("longterm: sigma must be >= 0");
    if (n_cycles < 1) throw ConfigError("longterm: n_cycles must be >= 1");
    if (n_train < 3 || n_test < 3) throw ConfigError("longterm: need at least 3 train and 3 test samples");
    if (references.empty()) throw ConfigError("longterm: no reference states");
    for (const auto& r : references) reference_label(r, n_sites);
}

std::string reference_label(const std::string& name, int n_sites) {
    if (n_sites < 4) throw InvalidArgument("reference_label: n_sites must be >= 4");
    const auto n = static_cast<std::size_t>(n_sites);
    if (name == "AF") {
        std::string s;
        for (std::size_t i = 0; i < n; ++i) s += i % 2 ? 'r' : 'g';
        return s;
    }
    if (name == "gg") return std::string(n, 'g');
    if (name == "d2") {
        std::string s(n, 'g');
        s[1] = 'r';
        s[n - 2] = 'r';
        return s;
    }
    if (name.size() == n && std::all_of(name.begin(), name.end(), [](char c) { return c == 'g' || c == 'r'; })) {
        return name;
    }
    throw ConfigError("unknown reference state '" + name + "'");
}

TaskResult run_longterm_memory(const LongtermConfig& cfg) {
    cfg.validate();
    const auto basis = HilbertBasis::blockaded_ring(cfg.n_sites);
    const KickedPxp model(basis, cfg.tau);
    const KickSchedule schedule{cfg.tau, cfg.eps, cfg.sigma, cfg.n_cycles};
    const Index ns = cfg.n_train + cfg.n_test;
    std::vector<Index> train(static_cast<std::size_t>(cfg.n_train)), test(static_cast<std::size_t>(cfg.n_test));
    std::iota(train.begin(), train.end(), Index{0});
    std::iota(test.begin(), test.end(), Index{cfg.n_train});

    TaskResult res;
    res.task = "longterm-memory";
    res.seed = cfg.seed;
    Table curve{{"cycle"}, {}};
    for (int n = 0; n <= cfg.n_cycles; ++n) curve.rows.push_back({double(n)});

    for (std::size_t ref = 0; ref < cfg.references.size(); ++ref) {
        const std::string& name = cfg.references[ref];
        const std::string label = reference_label(name, cfg.n_sites);
        const auto idx = basis->index_of(basis->parse_label(label));
        if (!idx) throw ConfigError("reference '" + name + "' violates the blockade");
        CVec psi0 = CVec::Zero(basis->dim());
        psi0(*idx) = 1.0;
        const CVec chi_psi0 = model.chi() * psi0;

        std::vector<KickedRun> runs(static_cast<std::size_t>(ns));
        RVec bits(ns);
        parallel_for(static_cast<std::size_t>(ns), cfg.threads, [&](std::size_t i) {
            Rng rng = make_rng(cfg.seed, {id(Stream::memory), std::uint64_t(ref), std::uint64_t(i)});
            const bool m = std::bernoulli_distribution(0.5)(rng);
            bits(static_cast<Index>(i)) = m;
            runs[i] = run_kicked(model, m ? chi_psi0 : psi0, schedule, rng);
        });

        RVec r2(cfg.n_cycles + 1), entropy(cfg.n_cycles + 1);
        for (int n = 0; n <= cfg.n_cycles; ++n) {
            RMat f(ns, 3);
            double s = 0.0;
            for (Index i = 0; i < ns; ++i) {
                const auto& rec = runs[static_cast<std::size_t>(i)].records[static_cast<std::size_t>(n)];
                f.row(i) << rec.p_g, rec.p_r, 1.0;
                s += rec.entropy;
            }
            const Dataset all{f, RMat(bits)};
            const Dataset te = all.subset(test);
            const RMat out = fit_readout(all.subset(train)).predict(te.features);
            r2(n) = pearson_r_squared(out.col(0), te.targets.col(0));
            entropy(n) = s / static_cast<double>(ns);
            curve.rows[static_cast<std::size_t>(n)].push_back(r2(n));
            curve.rows[static_cast<std::size_t>(n)].push_back(entropy(n));
        }
        curve.columns.push_back("R_" + name);
        curve.columns.push_back("entropy_" + name);

        const Index m = cfg.n_cycles;
        res.metrics["R0_" + name] = r2(0);
        res.metrics["mean_R_" + name] = r2.tail(m).mean();
        res.metrics["mean_entropy_" + name] = entropy.tail(m).mean();
        // Degenerate (constant) series give NaN; recorded as such.
        res.metrics["spearman_entropy_R_" + name] = spearman(entropy.tail(m), r2.tail(m));
    }
    res.tables["R_n"] = std::move(curve);
    return res;
}

}  // namespace qrc
