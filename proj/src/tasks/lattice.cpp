// Decision-making and working-memory drivers on the 3 x 2 lattice.
#include "qrc/core/basis.hpp"
#include "qrc/core/measures.hpp"
#include "qrc/core/state.hpp"
#include "qrc/parallel.hpp"
#include "qrc/rydberg/geometry.hpp"
#include "qrc/tasks/tasks.hpp"
#include "qrc/train/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace qrc {

void LatticeTaskConfig::validate() const {
    TaskCommon::validate();
    if (!(v > 0.0)) throw ConfigError("lattice task: v must be positive");
    if (input_values.size() < 2) throw ConfigError("lattice task: need at least two input values");
}

namespace {

constexpr int kRows = 3, kCols = 2;
constexpr int kIn1 = 0, kIn2 = 1, kOut1 = 4, kOut2 = 5;

struct Lattice {
    BasisPtr basis;
    Dissipator dissipator;
    std::vector<RydbergModel> models;
    std::vector<LindbladPropagator> idle;  // no-input propagator per realization
    std::vector<CMat> sy;                  // sigma^y on the two output atoms
    Index vacuum = 0;

    Lattice(const TaskCommon& cfg, double v) : basis(HilbertBasis::full(kRows * kCols)) {
        dissipator = Dissipator(basis->dim(), effective_jumps(basis, cfg.dissipation));
        const auto base = RydbergGeometry::lattice(kRows, kCols, blockade_spacing(v));
        const std::vector<double> zero(kRows * kCols, 0.0);
        for (int r = 0; r < cfg.realizations; ++r) {
            const auto g = base.jittered(cfg.jitter_sigma, derive_seed(cfg.seed, {id(Stream::geometry), std::uint64_t(r)}));
            models.emplace_back(basis, interaction_matrix(g));
            idle.emplace_back(models.back().hamiltonian(cfg.omega, zero), dissipator, cfg.dt);
        }
        sy = {build_pauli(basis, kOut1, Axis::y).dense(), build_pauli(basis, kOut2, Axis::y).dense()};
        vacuum = *basis->index_of(0);
    }

    std::size_t realization(std::size_t sample) const { return sample % models.size(); }

    LindbladPropagator stimulus(std::size_t r, double det1, double det2, const TaskCommon& cfg) const {
        std::vector<double> det(kRows * kCols, 0.0);
        det[kIn1] = det1;
        det[kIn2] = det2;
        return LindbladPropagator(models[r].hamiltonian(cfg.omega, det), dissipator, cfg.dt);
    }

    CMat vacuum_state() const {
        CMat rho = CMat::Zero(basis->dim(), basis->dim());
        rho(vacuum, vacuum) = 1.0;
        return rho;
    }

    RVec features(const CMat& rho) const {
        RVec f(3);
        f << (sy[0] * rho).trace().real(), (sy[1] * rho).trace().real(), 1.0;
        return f;
    }
};

struct Stimulus {
    double u1, u2;      // nominal inputs, MHz
    double d1, d2;      // noisy detunings, rad/us
    double target;      // sign(d1 - d2)
};

Stimulus draw_stimulus(const LatticeTaskConfig& cfg, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, cfg.input_values.size() - 1);
    std::normal_distribution<double> noise(0.0, cfg.sigma_in);
    Stimulus s;
    s.u1 = cfg.input_values[pick(rng)];
    s.u2 = cfg.input_values[pick(rng)];
    s.d1 = kTwoPi * (s.u1 + noise(rng));
    s.d2 = kTwoPi * (s.u2 + noise(rng));
    s.target = s.d1 >= s.d2 ? 1.0 : -1.0;
    return s;
}

double sign_accuracy(const RVec& out, const RVec& target, long* correct = nullptr) {
    long k = 0;
    for (Index i = 0; i < out.size(); ++i) k += (out(i) >= 0.0 ? 1.0 : -1.0) == target(i);
    if (correct) *correct = k;
    return static_cast<double>(k) / static_cast<double>(out.size());
}

struct Scored {
    double accuracy = 0.0;
    double loss = 0.0;
    long correct = 0;
    long n_test = 0;
};

Scored train_and_score(const RMat& features, const RVec& targets, const Split& split) {
    const Dataset all{features, RMat(targets)};
    const ReadoutMap w = fit_readout(all.subset(split.train));
    const Dataset test = all.subset(split.test);
    const RMat out = w.predict(test.features);
    Scored s;
    s.loss = square_loss(out, test.targets);
    s.n_test = out.rows();
    s.accuracy = sign_accuracy(out.col(0), test.targets.col(0), &s.correct);
    return s;
}

// Re(Tr(O rho)) for every stored vec(rho) column.
RVec trace_products(const CMat& obs, const CMat& rhos) {
    const CMat ot = obs.transpose();
    const Eigen::Map<const CVec> v(ot.data(), ot.size());
    return (v.transpose() * rhos).real().transpose();
}

}  // namespace

TaskResult run_decision(const DecisionConfig& cfg) {
    cfg.validate();
    if (cfg.n_samples < 20) throw ConfigError("decision: need at least 20 samples");
    if (!(cfg.t_out_max > 0.0) || !(cfg.t_out_scan_step > 0.0)) throw ConfigError("decision: bad t_out scan");
    const Lattice lat(cfg, cfg.v);
    const Index d = lat.basis->dim();
    const Index ns = cfg.n_samples;

    CMat rhos(d * d, ns);
    std::vector<Stimulus> stim(static_cast<std::size_t>(ns));
    std::vector<double> durations(static_cast<std::size_t>(ns));
    parallel_for(static_cast<std::size_t>(ns), cfg.threads, [&](std::size_t i) {
        Rng rng = make_rng(cfg.seed, {id(Stream::sample), std::uint64_t(i)});
        stim[i] = draw_stimulus(cfg, rng);
        durations[i] = draw_duration(cfg.mean_dt, cfg.sigma_in, rng);
        const auto prop = lat.stimulus(lat.realization(i), stim[i].d1, stim[i].d2, cfg);
        const CMat rho = prop.evolve(lat.vacuum_state(), durations[i]);
        rhos.col(static_cast<Index>(i)) = Eigen::Map<const CVec>(rho.data(), rho.size());
    });

    // Group samples by realization so each group shares one idle propagator.
    const std::size_t n_real = lat.models.size();
    std::vector<std::vector<Index>> groups(n_real);
    for (Index i = 0; i < ns; ++i) groups[lat.realization(static_cast<std::size_t>(i))].push_back(i);
    std::vector<CMat> group_rhos(n_real);
    for (std::size_t r = 0; r < n_real; ++r) {
        group_rhos[r].resize(d * d, static_cast<Index>(groups[r].size()));
        for (std::size_t k = 0; k < groups[r].size(); ++k) group_rhos[r].col(static_cast<Index>(k)) = rhos.col(groups[r][k]);
    }
    rhos.resize(0, 0);

    RVec targets(ns);
    for (Index i = 0; i < ns; ++i) targets(i) = stim[static_cast<std::size_t>(i)].target;

    // Heisenberg-picture observables on the scan grid.
    const auto grid = linspace_step(0.0, cfg.t_out_max, cfg.t_out_scan_step);
    std::vector<std::vector<std::array<CMat, 2>>> snaps(n_real);
    for (std::size_t r = 0; r < n_real; ++r) {
        std::array<CMat, 2> o{lat.sy[0], lat.sy[1]};
        double t = 0.0;
        for (double tg : grid) {
            for (auto& m : o) m = lat.idle[r].evolve_observable(m, tg - t);
            t = tg;
            snaps[r].push_back(o);
        }
    }
    auto features_from = [&](const std::vector<std::array<CMat, 2>>& obs) {
        RMat f(ns, 3);
        for (std::size_t r = 0; r < n_real; ++r) {
            const RVec f1 = trace_products(obs[r][0], group_rhos[r]);
            const RVec f2 = trace_products(obs[r][1], group_rhos[r]);
            for (std::size_t k = 0; k < groups[r].size(); ++k) f.row(groups[r][k]) << f1(static_cast<Index>(k)), f2(static_cast<Index>(k)), 1.0;
        }
        return f;
    };
    auto features_at = [&](double t) {
        // Latest snapshot at or before t.
        const auto j = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), t) - grid.begin()) - 1;
        std::vector<std::array<CMat, 2>> obs(n_real);
        for (std::size_t r = 0; r < n_real; ++r) {
            for (int k = 0; k < 2; ++k) obs[r][static_cast<std::size_t>(k)] = lat.idle[r].evolve_observable(snaps[r][j][static_cast<std::size_t>(k)], t - grid[j]);
        }
        return features_from(obs);
    };

    Rng split_rng = make_rng(cfg.seed, {id(Stream::split)});
    const Split split = train_test_split(ns, cfg.train_fraction, split_rng);
    auto train_loss = [&](const RMat& f) {
        const Dataset all{f, RMat(targets)};
        const Dataset tr = all.subset(split.train);
        return square_loss(fit_readout(tr).predict(tr.features), tr.targets);
    };

    Table scan{{"t_out", "train_loss"}, {}};
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        std::vector<std::array<CMat, 2>> obs(n_real);
        for (std::size_t r = 0; r < n_real; ++r) obs[r] = snaps[r][j];
        const double l = train_loss(features_from(obs));
        scan.add({grid[j], l});
        if (l < scan.rows[best_j][1]) best_j = j;
    }

    NelderMeadOptions opt;
    opt.initial_step = cfg.t_out_scan_step;
    opt.diameter_tol = 1e-4;
    opt.max_iterations = 60;
    const auto nm = nelder_mead(
        [&](const RVec& x) {
            if (x(0) < 0.0 || x(0) > cfg.t_out_max) return std::numeric_limits<double>::infinity();
            return train_loss(features_at(x(0)));
        },
        RVec::Constant(1, grid[best_j]), opt);
    const double t_out = nm.f <= scan.rows[best_j][1] ? nm.x(0) : grid[best_j];

    const RMat feats = features_at(t_out);
    const Dataset all{feats, RMat(targets)};
    TaskResult res;
    res.task = "decision";
    res.seed = cfg.seed;
    res.readout = fit_readout(all.subset(split.train));
    const RVec out = res.readout.predict(feats).col(0);

    std::vector<bool> is_test(static_cast<std::size_t>(ns), false);
    for (Index r : split.test) is_test[static_cast<std::size_t>(r)] = true;
    for (Index i = 0; i < ns; ++i) {
        const auto& s = stim[static_cast<std::size_t>(i)];
        res.samples.push_back({{s.u1, s.u2, s.d1, s.d2, durations[static_cast<std::size_t>(i)]}, feats.row(i).transpose(),
                               RVec::Constant(1, out(i)), RVec::Constant(1, targets(i)), is_test[static_cast<std::size_t>(i)]});
    }

    // Psychometric curve on the held-out rows, grouped by nominal contrast.
    std::map<long, std::pair<long, long>> by_c1;  // key -> (n, chose 1)
    long correct = 0;
    for (Index r : split.test) {
        const auto& s = stim[static_cast<std::size_t>(r)];
        const long key = std::lround((s.u1 - s.u2) * 1e6);
        auto& [cnt, ones] = by_c1[key];
        ++cnt;
        ones += out(r) >= 0.0;
        correct += (out(r) >= 0.0 ? 1.0 : -1.0) == targets(r);
    }
    Table psy{{"c1", "accuracy", "stderr", "n_samples", "p_choose_1"}, {}};
    RVec cs(static_cast<Index>(by_c1.size())), ps(cs.size()), ws(cs.size());
    double min_acc = 1.0, p_zero = NAN, n_zero = 0;
    Index k = 0;
    for (const auto& [key, cn] : by_c1) {
        const double c1 = static_cast<double>(key) * 1e-6;
        const double p1 = static_cast<double>(cn.second) / static_cast<double>(cn.first);
        const double acc = c1 < 0 ? 1.0 - p1 : p1;
        psy.add({c1, acc, binomial_stderr(acc, cn.first), static_cast<double>(cn.first), p1});
        if (std::abs(c1) >= cfg.sigma_in) min_acc = std::min(min_acc, acc);
        if (key == 0) {
            p_zero = p1;
            n_zero = static_cast<double>(cn.first);
        }
        cs(k) = c1;
        ps(k) = p1;
        ws(k) = static_cast<double>(cn.first);
        ++k;
    }
    const LogisticFit fit = fit_logistic(cs, ps, ws);

    res.metrics = {{"t_out", t_out},
                   {"train_loss", nm.f},
                   {"test_loss", square_loss(res.readout.predict(all.subset(split.test).features), all.subset(split.test).targets)},
                   {"accuracy", static_cast<double>(correct) / static_cast<double>(split.test.size())},
                   {"min_accuracy_abs_c1_ge_sigma", min_acc},
                   {"p_choose_1_at_zero", p_zero},
                   {"n_at_zero", n_zero},
                   {"ci95_halfwidth_at_zero", n_zero > 0 ? 1.96 * std::sqrt(0.25 / n_zero) : NAN},
                   {"logistic_scale", fit.scale},
                   {"logistic_midpoint", fit.midpoint},
                   {"logistic_slope", fit.slope()}};
    res.tables["psychometric"] = std::move(psy);
    res.tables["t_out_scan"] = std::move(scan);
    return res;
}

namespace {

struct WmSample {
    Stimulus s;
    double dt = 0.0, delay = 0.0;
    double entropy = 0.0;               // input-pair entropy after stimulus 2
    std::vector<RVec> features;         // one per t_out
};

// Stimulus 1 on atom 0, delay, stimulus 2 on atom 1, then relax; all times
// jittered by sigma_in. Features are recorded at each jittered t_out.
WmSample run_wm_sample(const Lattice& lat, const WorkingMemoryConfig& cfg, std::size_t i, double mean_dt,
                       double mean_delay, const std::vector<double>& t_outs, Rng& rng) {
    WmSample w;
    w.s = draw_stimulus(cfg, rng);
    w.dt = draw_duration(mean_dt, cfg.sigma_in, rng);
    w.delay = draw_duration(mean_delay, cfg.sigma_in, rng);
    std::vector<double> touts;
    for (double t : t_outs) touts.push_back(draw_duration(t, cfg.sigma_in, rng));

    const std::size_t r = lat.realization(i);
    CMat rho = lat.stimulus(r, w.s.d1, 0.0, cfg).evolve(lat.vacuum_state(), w.dt);
    rho = lat.idle[r].evolve(rho, w.delay);
    rho = lat.stimulus(r, 0.0, w.s.d2, cfg).evolve(rho, w.dt);
    w.entropy = von_neumann_entropy(partial_trace_matrix(rho, lat.basis->n_sites(), {kIn1, kIn2}));

    std::vector<std::size_t> order(touts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return touts[a] < touts[b]; });
    w.features.resize(touts.size());
    double t = 0.0;
    for (auto k : order) {
        rho = lat.idle[r].evolve(rho, touts[k] - t);
        t = touts[k];
        w.features[k] = lat.features(rho);
    }
    return w;
}

std::vector<WmSample> run_wm_point(const Lattice& lat, const WorkingMemoryConfig& cfg, std::uint64_t panel,
                                   std::uint64_t point, double mean_dt, double mean_delay,
                                   const std::vector<double>& t_outs) {
    std::vector<WmSample> out(static_cast<std::size_t>(cfg.samples_per_point));
    parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
        Rng rng = make_rng(cfg.seed, {id(Stream::sample), panel, point, std::uint64_t(i)});
        out[i] = run_wm_sample(lat, cfg, i, mean_dt, mean_delay, t_outs, rng);
    });
    return out;
}

Scored score_point(const std::vector<WmSample>& samples, std::size_t k, const Split& split) {
    RMat f(static_cast<Index>(samples.size()), 3);
    RVec y(f.rows());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        f.row(static_cast<Index>(i)) = samples[i].features[k].transpose();
        y(static_cast<Index>(i)) = samples[i].s.target;
    }
    return train_and_score(f, y, split);
}

}  // namespace

TaskResult run_working_memory(const WorkingMemoryConfig& cfg) {
    cfg.validate();
    if (cfg.samples_per_point < 20) throw ConfigError("working-memory: need at least 20 samples per point");
    if (!(cfg.v_disordered > 0.0)) throw ConfigError("working-memory: v_disordered must be positive");
    TaskResult res;
    res.task = "working-memory";
    res.seed = cfg.seed;
    Rng split_rng = make_rng(cfg.seed, {id(Stream::split)});
    const Split split = train_test_split(cfg.samples_per_point, cfg.train_fraction, split_rng);

    if (cfg.sweep_dt) {
        const Lattice lat(cfg, cfg.v);
        const auto loss_col = std::find(cfg.t_out_grid.begin(), cfg.t_out_grid.end(), cfg.loss_t_out);
        if (loss_col == cfg.t_out_grid.end()) throw ConfigError("working-memory: loss_t_out must be in t_out_grid");
        Table acc{{"dt", "t_out", "accuracy", "stderr", "loss", "n_test"}, {}};
        Table loss{{"input_time", "dt", "loss", "entropy"}, {}};
        for (std::size_t p = 0; p < cfg.dt_grid.size(); ++p) {
            const auto samples = run_wm_point(lat, cfg, 1, p, cfg.dt_grid[p], cfg.sweep_dt_delay, cfg.t_out_grid);
            double entropy = 0.0;
            for (const auto& s : samples) entropy += s.entropy / static_cast<double>(samples.size());
            for (std::size_t k = 0; k < cfg.t_out_grid.size(); ++k) {
                const Scored sc = score_point(samples, k, split);
                acc.add({cfg.dt_grid[p], cfg.t_out_grid[k], sc.accuracy, binomial_stderr(sc.accuracy, sc.n_test), sc.loss,
                         static_cast<double>(sc.n_test)});
                if (cfg.t_out_grid.begin() + static_cast<long>(k) == loss_col) {
                    loss.add({2 * cfg.dt_grid[p] + cfg.sweep_dt_delay, cfg.dt_grid[p], sc.loss, entropy});
                }
            }
        }
        res.metrics["spearman_loss_entropy"] = spearman(loss.column("loss"), loss.column("entropy"));
        res.tables["accuracy_vs_dt"] = std::move(acc);
        res.tables["loss_vs_input_time"] = std::move(loss);
    }

    if (cfg.sweep_delay) {
        const Lattice blockaded(cfg, cfg.v), disordered(cfg, cfg.v_disordered);
        Table acc{{"t_delay", "accuracy_blockaded", "stderr_blockaded", "accuracy_disordered", "stderr_disordered"}, {}};
        double mean_b = 0.0, mean_d = 0.0;
        long correct_d = 0, n_d = 0;
        for (std::size_t p = 0; p < cfg.delay_grid.size(); ++p) {
            std::vector<double> row{cfg.delay_grid[p]};
            int which = 0;
            for (const Lattice* lat : {&blockaded, &disordered}) {
                const auto samples = run_wm_point(*lat, cfg, 2 + static_cast<std::uint64_t>(which), p, cfg.delay_dt,
                                                  cfg.delay_grid[p], {cfg.delay_t_out});
                const Scored sc = score_point(samples, 0, split);
                row.push_back(sc.accuracy);
                row.push_back(binomial_stderr(sc.accuracy, sc.n_test));
                (which == 0 ? mean_b : mean_d) += sc.accuracy / static_cast<double>(cfg.delay_grid.size());
                if (which == 1) {
                    correct_d += sc.correct;
                    n_d += sc.n_test;
                }
                for (std::size_t i = 0; i < samples.size(); ++i) {
                    const auto& s = samples[i];
                    res.samples.push_back({{double(which), cfg.delay_grid[p], s.s.u1, s.s.u2, s.dt, s.delay},
                                           s.features[0], RVec(), RVec::Constant(1, s.s.target), false});
                }
                ++which;
            }
            acc.add(row);
        }
        const double p_value = binomial_upper_tail(correct_d, n_d, 0.5);
        res.metrics["mean_accuracy_blockaded"] = mean_b;
        res.metrics["mean_accuracy_disordered"] = mean_d;
        res.metrics["pooled_correct_disordered"] = static_cast<double>(correct_d);
        res.metrics["pooled_n_disordered"] = static_cast<double>(n_d);
        res.metrics["p_value_disordered"] = p_value;
        res.metrics["disordered_significant"] = p_value < cfg.significance ? 1.0 : 0.0;
        res.tables["accuracy_vs_delay"] = std::move(acc);
    }
    return res;
}

}  // namespace qrc
