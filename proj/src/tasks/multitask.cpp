#include "qrc/core/basis.hpp"
#include "qrc/core/measures.hpp"
#include "qrc/parallel.hpp"
#include "qrc/rydberg/geometry.hpp"
#include "qrc/tasks/tasks.hpp"
#include "qrc/train/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrc {

void MultitaskConfig::validate() const {
    TaskCommon::validate();
    if (n_atoms < 3 || n_atoms > 12) throw ConfigError("multitask: n_atoms must be in [3, 12]");
    if (n_inhibitory < 0 || 2 * n_inhibitory > n_atoms) throw ConfigError("multitask: need 0 <= n_inhibitory <= n_atoms / 2");
    if (n_samples < 10) throw ConfigError("multitask: need at least 10 samples");
    if (mean_dt_grid.empty()) throw ConfigError("multitask: empty <dt> grid");
    for (double t : mean_dt_grid) {
        if (t < 0.0) throw ConfigError("multitask: <dt> must be >= 0");
    }
}

std::vector<int> inhibitory_sites(int n_atoms, int n_inhibitory) {
    if (n_inhibitory < 0 || 2 * n_inhibitory > n_atoms) {
        throw InvalidArgument("inhibitory_sites: need 0 <= k <= N/2");
    }
    std::vector<int> out;
    if (n_inhibitory == 1) out.push_back(0);
    for (int i = 0; n_inhibitory > 1 && i < n_inhibitory; ++i) {
        out.push_back(static_cast<int>(std::lround(static_cast<double>(i) * (n_atoms - 1) / (n_inhibitory - 1))));
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i] == out[i - 1]) throw InvalidArgument("inhibitory_sites: placements collide");
    }
    return out;
}

double multitask_interaction(int n_atoms, int n_inhibitory) {
    const auto sites = inhibitory_sites(n_atoms, n_inhibitory);
    double d_max = n_atoms - 1;
    for (std::size_t i = 1; i < sites.size(); ++i) d_max = std::min<double>(d_max, sites[i] - sites[i - 1]);
    return kTwoPi * 0.01 * std::pow(d_max, 6);
}

TaskResult run_multitask(const MultitaskConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_atoms;
    std::vector<Species> species(static_cast<std::size_t>(n), Species::r70);
    for (int s : inhibitory_sites(n, cfg.n_inhibitory)) species[static_cast<std::size_t>(s)] = Species::r73;
    const double v = multitask_interaction(n, cfg.n_inhibitory);
    const RydbergGeometry base = RydbergGeometry::chain(n, blockade_spacing(v), species);

    const auto basis = HilbertBasis::blockaded_chain(n);
    const auto jumps = effective_jumps(basis, cfg.dissipation);
    const Dissipator dissipator(basis->dim(), jumps);
    std::vector<RydbergModel> models;
    for (int r = 0; r < cfg.realizations; ++r) {
        const auto g = base.jittered(cfg.jitter_sigma, derive_seed(cfg.seed, {id(Stream::geometry), std::uint64_t(r)}));
        models.emplace_back(basis, interaction_matrix(g));
    }
    const Index vacuum = *basis->index_of(0);

    const std::size_t n_grid = cfg.mean_dt_grid.size();
    const Index ns = cfg.n_samples;
    std::vector<RMat> features(n_grid, RMat(ns, 4));
    RMat targets(ns, 3);
    std::vector<std::vector<double>> inputs(static_cast<std::size_t>(ns));

    parallel_for(static_cast<std::size_t>(ns), cfg.threads, [&](std::size_t i) {
        Rng rng = make_rng(cfg.seed, {id(Stream::sample), std::uint64_t(i)});
        std::bernoulli_distribution coin(0.5);
        std::normal_distribution<double> noise(0.0, cfg.sigma_in);
        const int x = coin(rng), y = coin(rng);
        const double dx = x + noise(rng), dy = y + noise(rng);
        std::vector<double> times;
        for (double m : cfg.mean_dt_grid) times.push_back(draw_duration(m, cfg.sigma_in, rng));

        std::vector<double> det(static_cast<std::size_t>(n), 0.0);
        det[0] = kTwoPi * dx;
        det[1] = kTwoPi * dy;
        const RydbergModel& model = models[i % models.size()];
        const LindbladPropagator prop(model.hamiltonian(cfg.omega, det), dissipator, cfg.dt);

        std::vector<std::size_t> order(n_grid);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
        CMat rho = CMat::Zero(basis->dim(), basis->dim());
        rho(vacuum, vacuum) = 1.0;
        double t = 0.0;
        for (auto g : order) {
            rho = prop.evolve(rho, times[g] - t);
            t = times[g];
            const auto b = bloch_vector(*basis, rho, n - 1);
            features[g].row(static_cast<Index>(i)) << b[0], b[1], b[2], 1.0;
        }
        const auto row = static_cast<Index>(i);
        targets(row, 0) = x ^ y;
        targets(row, 1) = x | y;
        targets(row, 2) = x & y;
        inputs[i] = {double(x), double(y), dx, dy};
    });

    Rng split_rng = make_rng(cfg.seed, {id(Stream::split)});
    const Split split = train_test_split(ns, cfg.train_fraction, split_rng);

    TaskResult res;
    res.task = "multitask";
    res.seed = cfg.seed;
    Table curve{{"mean_dt", "loss", "error_xor", "error_or", "error_and"}, {}};
    std::size_t best = 0;
    double best_loss = INFINITY;
    std::vector<ReadoutMap> maps;
    for (std::size_t g = 0; g < n_grid; ++g) {
        const Dataset all{features[g], targets};
        const ReadoutMap w = fit_readout(all.subset(split.train));
        const Dataset test = all.subset(split.test);
        const RMat out = w.predict(test.features);
        const double loss = square_loss(out, test.targets);
        std::vector<double> row{cfg.mean_dt_grid[g], loss};
        for (Index c = 0; c < 3; ++c) {
            long wrong = 0;
            for (Index r = 0; r < out.rows(); ++r) wrong += (out(r, c) > 0.5) != (test.targets(r, c) > 0.5);
            row.push_back(static_cast<double>(wrong) / static_cast<double>(out.rows()));
        }
        curve.add(row);
        maps.push_back(w);
        if (loss < best_loss) {
            best_loss = loss;
            best = g;
        }
    }

    res.readout = maps[best];
    std::vector<bool> is_test(static_cast<std::size_t>(ns), false);
    for (Index r : split.test) is_test[static_cast<std::size_t>(r)] = true;
    const RMat out = res.readout.predict(features[best]);
    for (Index i = 0; i < ns; ++i) {
        res.samples.push_back({inputs[static_cast<std::size_t>(i)], features[best].row(i).transpose(),
                               out.row(i).transpose(), targets.row(i).transpose(), is_test[static_cast<std::size_t>(i)]});
    }
    const auto& row = curve.rows[best];
    res.metrics = {{"loss_min", best_loss},      {"best_mean_dt", row[0]}, {"error_xor", row[2]},
                   {"error_or", row[3]},         {"error_and", row[4]},    {"interaction_v", v},
                   {"n_inhibitory", double(cfg.n_inhibitory)}, {"n_atoms", double(n)}};
    res.tables["loss_vs_dt"] = std::move(curve);
    return res;
}

}  // namespace qrc
