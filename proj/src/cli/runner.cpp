#include "qrc/cli/runner.hpp"

#include "qrc/classical/rnn.hpp"
#include "qrc/core/basis.hpp"
#include "qrc/core/evolution.hpp"
#include "qrc/core/measures.hpp"
#include "qrc/core/superoperator.hpp"
#include "qrc/tasks/demos.hpp"
#include "qrc/train/readout.hpp"
#include "qrc/train/stats.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#ifndef QRC_VERSION
#define QRC_VERSION "unknown"
#endif

namespace qrc::cli {

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"xor",           "zerror",         "multitask",     "decision",
                                                "working-memory", "longterm-memory", "scars-fidelity", "embeddability",
                                                "kernel-count",  "verify"};
    return names;
}

Json RunManifest::to_json() const {
    Json m;
    m["command"] = command;
    m["status"] = status;
    m["exit_code"] = exit_code;
    m["config_hash"] = config_hash;
    m["seed"] = seed;
    m["threads"] = threads;
    m["version"] = version;
    m["wall_clock_s"] = wall_clock_s;
    Json mj = Json::object();
    for (const auto& [k, v] : metrics) mj[k] = std::isfinite(v) ? Json(v) : Json(nullptr);
    m["metrics"] = mj;
    m["files"] = files;
    m["warnings"] = warnings;
    if (!error_type.empty()) m["error"] = {{"type", error_type}, {"message", error_message}};
    return m;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

void write_csv(const Table& table, std::ostream& out) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
}

Table samples_table(const TaskResult& result) {
    Table t;
    if (result.samples.empty()) return t;
    const auto& first = result.samples.front();
    auto add_cols = [&](const char* prefix, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) t.columns.push_back(prefix + std::to_string(i));
    };
    add_cols("input_", first.inputs.size());
    add_cols("feature_", static_cast<std::size_t>(first.features.size()));
    add_cols("output_", static_cast<std::size_t>(first.outputs.size()));
    add_cols("target_", static_cast<std::size_t>(first.targets.size()));
    t.columns.push_back("test");
    for (const auto& s : result.samples) {
        std::vector<double> row(s.inputs);
        for (const RVec* v : {&s.features, &s.outputs, &s.targets}) row.insert(row.end(), v->data(), v->data() + v->size());
        row.push_back(s.test ? 1.0 : 0.0);
        t.add(std::move(row));
    }
    return t;
}

// --- verify ------------------------------------------------------------------

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> names{"core", "classical", "rydberg", "train", "scars", "tasks"};
    return names;
}

namespace {

VerifyCheck below(std::string suite, std::string name, double value, double tol) {
    return {std::move(suite), std::move(name), value, tol, std::abs(value) <= tol};
}

void verify_core(std::vector<VerifyCheck>& out) {
    const auto b = HilbertBasis::full(4);
    Rng rng = make_rng(1, {id(Stream::test)});
    std::normal_distribution<double> g;
    RMat j = RMat::Zero(4, 4);
    for (int p = 0; p < 4; ++p)
        for (int q = p + 1; q < 4; ++q) j(p, q) = j(q, p) = g(rng);
    const SpinOperator h = qrnn_hamiltonian(j, 1.3, {0.2, -0.4, 0.1, 0.7}, b);
    const CMat u = unitary_propagator(h, 0.9);
    out.push_back(below("core", "propagator_unitarity", max_abs(u.adjoint() * u - CMat::Identity(16, 16)), 1e-12));

    const auto jumps = effective_jumps(b, DissipationSpec{0.5, 0.6, 0.3});
    const LindbladPropagator prop(h, jumps, 0.01);
    CMat rho = CMat::Zero(16, 16);
    rho(5, 5) = 1.0;
    const CMat out_rho = prop.evolve(rho, 2.0);
    out.push_back(below("core", "lindblad_trace", std::abs(out_rho.trace() - 1.0), 1e-10));
    out.push_back(below("core", "lindblad_hermiticity", max_abs(out_rho - out_rho.adjoint()), 1e-12));
    const double min_eig = Eigen::SelfAdjointEigenSolver<CMat>(hermitian_part(out_rho)).eigenvalues().minCoeff();
    out.push_back({"core", "lindblad_positivity", min_eig, -1e-10, min_eig >= -1e-10});

    CVec bell = CVec::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const auto bell_state = QuantumState::pure(HilbertBasis::full(2), bell);
    out.push_back(below("core", "bell_entropy_ln2", entanglement_entropy(bell_state, {0}) - std::log(2.0), 1e-12));
}

void verify_classical(std::vector<VerifyCheck>& out) {
    double holds = 0.0;
    for (int n = 1; n <= 4; ++n) holds += embeddable_necessary(spin_flip_matrix(n));
    out.push_back(below("classical", "spin_flip_passes_necessary_count", holds, 0.0));
    RnnParams p;
    p.j = RMat::Zero(3, 3);
    p.j(0, 1) = p.j(1, 0) = 0.8;
    p.j(1, 2) = p.j(2, 1) = -0.5;
    p.biases = {RVec::Constant(3, 0.1)};
    p.sigma_in = 0.7;
    const auto m = transition_matrix(p);
    out.push_back(below("classical", "transition_column_sums", (m.entries().colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12));
}

void verify_rydberg(std::vector<VerifyCheck>& out) {
    const auto b = HilbertBasis::full(1);
    const DissipationSpec d{};
    const auto jumps = effective_jumps(b, d);
    const auto h = OperatorSchedule::constant(SpinOperator::zero(b));
    const auto r = QuantumState::configuration(b, "r").to_mixed();
    double worst = 0.0;
    for (double t : {1.0, 5.0, 20.0}) {
        const auto s = evolve_lindblad(r, h, jumps, t, 1e-2);
        worst = std::max(worst, std::abs(s.density()(1, 1).real() - std::exp(-d.gamma * d.alpha * d.alpha * t)));
    }
    out.push_back(below("rydberg", "single_atom_decay", worst, 1e-6));
    const double v = kTwoPi * 10.0;
    const auto g = RydbergGeometry::chain(2, blockade_spacing(v));
    out.push_back(below("rydberg", "blockade_spacing_round_trip", interaction_matrix(g)(0, 1) / v - 1.0, 1e-12));
    const CMat pxp = pxp_hamiltonian(HilbertBasis::blockaded_ring(8), 1.0).dense();
    out.push_back(below("rydberg", "pxp_hermitian", max_abs(pxp - pxp.adjoint()), 0.0));
}

void verify_train(std::vector<VerifyCheck>& out) {
    Rng rng = make_rng(2, {id(Stream::test)});
    std::normal_distribution<double> g;
    RMat x(50, 3), w(3, 2);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
    for (Index i = 0; i < w.size(); ++i) w.data()[i] = g(rng);
    x.col(2).setOnes();
    const Dataset data{x, x * w};
    const RMat pred = fit_readout(data).predict(x);
    out.push_back(below("train", "least_squares_recovery", max_abs((pred - data.targets).cast<cplx>()), 1e-6));
    RVec a = RVec::LinSpaced(20, 0.0, 1.0);
    out.push_back(below("train", "spearman_monotone", spearman(a, a.array().exp().matrix()) - 1.0, 1e-12));
}

void verify_scars(std::vector<VerifyCheck>& out) {
    const auto b = HilbertBasis::blockaded_ring(6);
    const KickedPxp model(b);
    const CMat& chi = model.chi();
    out.push_back(below("scars", "chi_involution", max_abs(chi * chi - CMat::Identity(b->dim(), b->dim())), 1e-8));
    const auto gen = effective_lindbladian(HilbertBasis::blockaded_ring(4), kScarTau, 0.1, 0.1);
    Rng rng = make_rng(3, {id(Stream::test)});
    std::normal_distribution<double> g;
    const Index d = HilbertBasis::blockaded_ring(4)->dim();
    CMat a(d, d);
    for (Index i = 0; i < a.size(); ++i) a.data()[i] = cplx(g(rng), g(rng));
    CMat rho = a * a.adjoint();
    rho /= rho.trace();
    out.push_back(below("scars", "lindbladian_trace_annihilation", std::abs(gen.superop.apply(rho).trace()), 1e-12));
}

void verify_tasks(std::vector<VerifyCheck>& out) {
    double worst = 1.0;
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
            const auto o = xor_demo(100.0, s1, s2);
            worst = std::min(worst, s1 == s2 ? 1.0 - o.p_plus : o.p_plus);
        }
    out.push_back({"tasks", "xor_min_probability", worst, 0.99, worst >= 0.99});
    double worst_z = 1.0;
    bool all = true;
    for (std::optional<int> site : {std::optional<int>{}, std::optional<int>{0}, std::optional<int>{1}, std::optional<int>{2}}) {
        const auto o = z_error_demo(site);
        worst_z = std::min(worst_z, o.probability);
        all = all && o.diagnosis == (site ? static_cast<ZErrorSite>(*site + 1) : ZErrorSite::none);
    }
    out.push_back({"tasks", "zerror_min_probability", worst_z, 0.99, all && worst_z >= 0.99});
}

}  // namespace

std::vector<VerifyCheck> run_verify(const std::string& suite) {
    const auto& names = verify_suites();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
        throw ConfigError("unknown verify suite '" + suite + "'");
    }
    std::vector<VerifyCheck> out;
    auto want = [&](const char* s) { return suite == "all" || suite == s; };
    if (want("core")) verify_core(out);
    if (want("classical")) verify_classical(out);
    if (want("rydberg")) verify_rydberg(out);
    if (want("train")) verify_train(out);
    if (want("scars")) verify_scars(out);
    if (want("tasks")) verify_tasks(out);
    return out;
}

// --- dispatch ------------------------------------------------------------------

namespace {

TaskResult run_xor(const XorSettings& s) {
    TaskResult r;
    r.task = "xor";
    Table t{{"s1", "s2", "p_plus", "decision"}, {}};
    double worst = 1.0;
    for (int s1 : {1, -1})
        for (int s2 : {1, -1}) {
            const auto o = xor_demo(s.j_ratio, s1, s2, s.omega, s.t);
            t.add({double(s1), double(s2), o.p_plus, double(o.decision)});
            worst = std::min(worst, s1 == s2 ? 1.0 - o.p_plus : o.p_plus);
        }
    r.metrics["min_correct_probability"] = worst;
    r.tables["xor"] = std::move(t);
    return r;
}

TaskResult run_zerror(const ZErrorSettings& s) {
    TaskResult r;
    r.task = "zerror";
    // error_site: -1 none, else the logical spin; diagnosis coded the same way
    Table t{{"error_site", "a1", "a2", "probability", "p_pp", "p_pm", "p_mp", "p_mm", "diagnosis"}, {}};
    double worst = 1.0, correct = 0.0;
    for (int site = -1; site <= 2; ++site) {
        const auto o = z_error_demo(site < 0 ? std::nullopt : std::optional<int>(site), s.a, s.b, s.j_ratio, s.omega);
        const double diag = static_cast<double>(static_cast<int>(o.diagnosis)) - 1.0;
        t.add({double(site), double(o.a1), double(o.a2), o.probability, o.joint[0], o.joint[1], o.joint[2], o.joint[3], diag});
        worst = std::min(worst, o.probability);
        correct += diag == site;
    }
    r.metrics["min_probability"] = worst;
    r.metrics["correct_diagnoses"] = correct;
    r.tables["zerror"] = std::move(t);
    return r;
}

TaskResult verify_result(const std::vector<VerifyCheck>& checks) {
    TaskResult r;
    r.task = "verify";
    double passed = 0.0;
    for (const auto& c : checks) {
        passed += c.pass;
        r.metrics[c.suite + "." + c.name] = c.pass ? 1.0 : 0.0;
    }
    r.metrics["checks_passed"] = passed;
    r.metrics["checks_failed"] = static_cast<double>(checks.size()) - passed;
    return r;
}

void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& body, RunManifest& m) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir / name).string());
    f << body;
    m.files.push_back(name);
}

std::string verify_csv(const std::vector<VerifyCheck>& checks) {
    std::string out = "suite,check,value,tolerance,pass\n";
    for (const auto& c : checks) {
        out += c.suite + "," + c.name + "," + format_number(c.value) + "," + format_number(c.tolerance) + "," +
               (c.pass ? "1" : "0") + "\n";
    }
    return out;
}

}  // namespace

int run(const RunRequest& req, RunManifest* manifest_out) {
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest m;
    m.command = req.command;
    m.version = QRC_VERSION;
    std::filesystem::path out_dir = req.out_dir;

    auto fail = [&](int code, const char* type, const std::string& msg) {
        m.status = "error";
        m.exit_code = code;
        m.error_type = type;
        m.error_message = msg;
    };

    try {
        const auto& names = subcommands();
        if (std::find(names.begin(), names.end(), req.command) == names.end()) {
            throw ConfigError("unknown subcommand '" + req.command + "'");
        }
        const Json doc = req.config_path.empty() ? Json::object() : read_json_file(req.config_path);
        const RunConfig rc = parse_config(doc, req.strict, req.overrides);
        m.seed = rc.seed;
        m.threads = rc.threads;
        m.warnings = rc.warnings;
        Json effective = doc;
        effective["seed"] = rc.seed;
        effective["threads"] = rc.threads;
        if (req.overrides.dt) effective["common"]["dt"] = *req.overrides.dt;
        m.config_hash = hex64(fnv1a64(req.command + "\n" + effective.dump()));
        std::filesystem::create_directories(out_dir);

        TaskResult result;
        std::vector<VerifyCheck> checks;
        const std::string& c = req.command;
        if (c == "xor") result = run_xor(rc.xor_demo);
        else if (c == "zerror") result = run_zerror(rc.zerror);
        else if (c == "multitask") result = run_multitask(rc.multitask);
        else if (c == "decision") result = run_decision(rc.decision);
        else if (c == "working-memory") result = run_working_memory(rc.working_memory);
        else if (c == "longterm-memory") result = run_longterm_memory(rc.longterm);
        else if (c == "scars-fidelity") result = run_scar_fidelity(rc.scars);
        else if (c == "embeddability") result = run_embeddability(rc.embeddability);
        else if (c == "kernel-count") result = run_kernel_count(rc.kernel);
        else {
            checks = run_verify(req.suite);
            result = verify_result(checks);
        }

        m.metrics = result.metrics;
        if (c == "verify") {
            write_file(out_dir, "verify.csv", verify_csv(checks), m);
        } else {
            for (const auto& [name, table] : result.tables) {
                std::ostringstream s;
                write_csv(table, s);
                write_file(out_dir, name + ".csv", s.str(), m);
            }
            if (!result.samples.empty()) {
                std::ostringstream s;
                write_csv(samples_table(result), s);
                write_file(out_dir, "samples.csv", s.str(), m);
            }
        }
        if (result.metrics.count("checks_failed") && result.metric("checks_failed") > 0) fail(kExitNumerical, "VerifyFailure", "one or more verification checks failed");
    } catch (const ConfigError& e) {
        fail(kExitConfig, "ConfigError", e.what());
    } catch (const NumericalError& e) {
        fail(kExitNumerical, "NumericalError", e.what());
    } catch (const std::exception& e) {
        fail(kExitFailure, "Error", e.what());
    }

    m.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        std::filesystem::create_directories(out_dir);
        m.files.push_back("manifest.json");
        std::ofstream f(out_dir / "manifest.json");
        f << m.to_json().dump(2) << '\n';
        if (!f) throw Error("write failed");
    } catch (const std::exception&) {
        if (m.exit_code == kExitOk) m.exit_code = kExitFailure;
    }
    if (manifest_out) *manifest_out = m;
    return m.exit_code;
}

}  // namespace qrc::cli
