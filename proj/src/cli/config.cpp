#include "qrc/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>

namespace qrc::cli {

namespace {

std::pair<double, std::string> split_quantity(const Json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>(), ""};
    if (!v.is_string()) throw ConfigError(key + ": expected a number or a string with a unit");
    const std::string s = v.get<std::string>();
    const char* begin = s.c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin || !std::isfinite(x)) throw ConfigError(key + ": malformed number '" + s + "'");
    std::string unit(end);
    unit.erase(0, unit.find_first_not_of(' '));
    unit.erase(unit.find_last_not_of(' ') + 1);
    return {x, unit};
}

}  // namespace

double parse_rate(const Json& v, const std::string& key) {
    static const std::map<std::string, double> scale{
        {"", 1.0}, {"rad/us", 1.0}, {"rad/μs", 1.0}, {"kHz", kTwoPi * 1e-3}, {"MHz", kTwoPi}, {"GHz", kTwoPi * 1e3}};
    const auto [x, unit] = split_quantity(v, key);
    const auto it = scale.find(unit);
    if (it == scale.end()) throw ConfigError(key + ": unknown rate unit '" + unit + "'");
    return x * it->second;
}

double parse_time(const Json& v, const std::string& key) {
    static const std::map<std::string, double> scale{{"", 1.0}, {"us", 1.0}, {"μs", 1.0}, {"ns", 1e-3}, {"ms", 1e3}};
    const auto [x, unit] = split_quantity(v, key);
    const auto it = scale.find(unit);
    if (it == scale.end()) throw ConfigError(key + ": unknown time unit '" + unit + "'");
    return x * it->second;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

// --- Section -----------------------------------------------------------------

Section::Section(const Json* node, std::string path, std::vector<std::string>* unknown)
    : node_(node), path_(std::move(path)), unknown_(unknown) {
    if (node_ && !node_->is_object()) throw ConfigError(path_ + ": expected an object");
}

bool Section::has(const std::string& key) const { return node_ && node_->contains(key); }

std::string Section::where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

const Json* Section::get(const std::string& key) {
    seen_.insert(key);
    if (!node_) return nullptr;
    const auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
}

double Section::number(const std::string& key, double fallback) {
    const Json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(where(key) + ": expected a number");
    return v->get<double>();
}

double Section::rate(const std::string& key, double fallback) {
    const Json* v = get(key);
    return v ? parse_rate(*v, where(key)) : fallback;
}

double Section::time(const std::string& key, double fallback) {
    const Json* v = get(key);
    return v ? parse_time(*v, where(key)) : fallback;
}

int Section::integer(const std::string& key, int fallback) {
    const Json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
    return v->get<int>();
}

std::uint64_t Section::unsigned64(const std::string& key, std::uint64_t fallback) {
    const Json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned()) throw ConfigError(where(key) + ": expected a non-negative integer");
    return v->get<std::uint64_t>();
}

bool Section::boolean(const std::string& key, bool fallback) {
    const Json* v = get(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(where(key) + ": expected true or false");
    return v->get<bool>();
}

std::vector<double> Section::numbers(const std::string& key, std::vector<double> fallback) {
    const Json* v = get(key);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(where(key) + ": expected a list");
    std::vector<double> out;
    for (const auto& x : *v) {
        if (!x.is_number()) throw ConfigError(where(key) + ": expected numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<double> Section::rates(const std::string& key, std::vector<double> fallback) {
    const Json* v = get(key);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(where(key) + ": expected a list");
    std::vector<double> out;
    for (const auto& x : *v) out.push_back(parse_rate(x, where(key)));
    return out;
}

std::vector<double> Section::times(const std::string& key, std::vector<double> fallback) {
    const Json* v = get(key);
    if (!v) return fallback;
    if (v->is_object()) {
        std::vector<std::string> extra;
        Section range(v, where(key), &extra);
        if (!range.has("start") || !range.has("stop") || !range.has("step")) {
            throw ConfigError(where(key) + ": a range needs start, stop and step");
        }
        const double start = range.time("start", 0), stop = range.time("stop", 0), step = range.time("step", 0);
        range.finish();
        if (!extra.empty()) throw ConfigError(extra.front() + ": unknown key");
        try {
            return linspace_step(start, stop, step);
        } catch (const InvalidArgument& e) {
            throw ConfigError(where(key) + ": " + e.what());
        }
    }
    if (!v->is_array()) throw ConfigError(where(key) + ": expected a list or a range");
    std::vector<double> out;
    for (const auto& x : *v) out.push_back(parse_time(x, where(key)));
    return out;
}

std::vector<int> Section::integers(const std::string& key, std::vector<int> fallback) {
    const Json* v = get(key);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(where(key) + ": expected a list");
    std::vector<int> out;
    for (const auto& x : *v) {
        if (!x.is_number_integer()) throw ConfigError(where(key) + ": expected integers");
        out.push_back(x.get<int>());
    }
    return out;
}

std::vector<std::string> Section::strings(const std::string& key, std::vector<std::string> fallback) {
    const Json* v = get(key);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(where(key) + ": expected a list");
    std::vector<std::string> out;
    for (const auto& x : *v) {
        if (!x.is_string()) throw ConfigError(where(key) + ": expected strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

std::optional<cplx> Section::complex(const std::string& key) {
    const Json* v = get(key);
    if (!v) return std::nullopt;
    if (v->is_number()) return cplx(v->get<double>(), 0.0);
    if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number()) {
        return cplx((*v)[0].get<double>(), (*v)[1].get<double>());
    }
    throw ConfigError(where(key) + ": expected a number or [re, im]");
}

Section Section::section(const std::string& key) {
    const Json* v = get(key);
    return Section(v, where(key), unknown_);
}

void Section::finish() {
    if (!node_) return;
    for (const auto& [k, v] : node_->items()) {
        if (!seen_.count(k)) unknown_->push_back(where(k));
    }
}

// --- RunConfig ---------------------------------------------------------------

namespace {

void read_common(Section& s, TaskCommon& c) {
    c.omega = s.rate("omega", c.omega);
    c.dt = s.time("dt", c.dt);
    c.train_fraction = s.number("train_fraction", c.train_fraction);
    c.sigma_in = s.number("sigma_in", c.sigma_in);
    c.jitter_sigma = s.number("jitter_sigma", c.jitter_sigma);
    c.realizations = s.integer("realizations", c.realizations);
}

void read_dissipation(Section& s, DissipationSpec& d) {
    d.gamma = s.rate("gamma", d.gamma);
    d.alpha = s.number("alpha", d.alpha);
    d.beta = s.number("beta", d.beta);
}

// Input values are stored in MHz (the pre-2 pi units the noise refers to).
std::vector<double> input_values_mhz(Section& s, const std::vector<double>& fallback) {
    std::vector<double> rad = s.rates("input_values", {});
    if (!s.has("input_values")) return fallback;
    for (double& x : rad) x /= kTwoPi;
    return rad;
}

template <typename T>
void apply(T& cfg, const TaskCommon& common) {
    static_cast<TaskCommon&>(cfg) = common;
}

void validated(const std::function<void()>& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

RunConfig parse_config(const Json& doc, bool strict, const Overrides& overrides) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    RunConfig rc;
    std::vector<std::string> unknown;
    Section top(&doc, "", &unknown);
    rc.seed = top.unsigned64("seed", 0);
    rc.threads = top.integer("threads", 1);

    TaskCommon common;
    {
        Section s = top.section("common");
        read_common(s, common);
        s.finish();
        Section d = top.section("dissipation");
        read_dissipation(d, common.dissipation);
        d.finish();
    }
    if (overrides.seed) rc.seed = *overrides.seed;
    if (overrides.threads) rc.threads = *overrides.threads;
    if (overrides.dt) common.dt = *overrides.dt;
    if (rc.threads < 1) throw ConfigError("threads must be >= 1");
    common.seed = rc.seed;
    common.threads = rc.threads;

    {
        Section s = top.section("xor");
        rc.xor_demo.j_ratio = s.number("j_ratio", rc.xor_demo.j_ratio);
        rc.xor_demo.omega = s.rate("omega", rc.xor_demo.omega);
        rc.xor_demo.t = s.time("t", rc.xor_demo.t);
        s.finish();
    }
    {
        Section s = top.section("zerror");
        rc.zerror.j_ratio = s.number("j_ratio", rc.zerror.j_ratio);
        rc.zerror.omega = s.rate("omega", rc.zerror.omega);
        if (auto a = s.complex("a")) rc.zerror.a = *a;
        if (auto b = s.complex("b")) rc.zerror.b = *b;
        s.finish();
    }
    {
        auto& m = rc.multitask;
        apply(m, common);
        Section s = top.section("multitask");
        m.n_atoms = s.integer("n_atoms", m.n_atoms);
        m.n_inhibitory = s.integer("n_inhibitory", m.n_inhibitory);
        m.n_samples = s.integer("n_samples", m.n_samples);
        m.mean_dt_grid = s.times("mean_dt_grid", m.mean_dt_grid);
        s.finish();
    }
    {
        auto& d = rc.decision;
        apply(d, common);
        Section s = top.section("decision");
        d.v = s.rate("v", d.v);
        d.input_values = input_values_mhz(s, d.input_values);
        d.n_samples = s.integer("n_samples", d.n_samples);
        d.mean_dt = s.time("mean_dt", d.mean_dt);
        d.t_out_max = s.time("t_out_max", d.t_out_max);
        d.t_out_scan_step = s.time("t_out_scan_step", d.t_out_scan_step);
        s.finish();
    }
    {
        auto& w = rc.working_memory;
        apply(w, common);
        Section s = top.section("working_memory");
        w.v = s.rate("v", w.v);
        w.v_disordered = s.rate("v_disordered", w.v_disordered);
        w.input_values = input_values_mhz(s, w.input_values);
        w.samples_per_point = s.integer("samples_per_point", w.samples_per_point);
        w.sweep_dt = s.boolean("sweep_dt", w.sweep_dt);
        w.sweep_delay = s.boolean("sweep_delay", w.sweep_delay);
        w.dt_grid = s.times("dt_grid", w.dt_grid);
        w.t_out_grid = s.times("t_out_grid", w.t_out_grid);
        w.sweep_dt_delay = s.time("sweep_dt_delay", w.sweep_dt_delay);
        w.loss_t_out = s.time("loss_t_out", w.loss_t_out);
        w.delay_grid = s.times("delay_grid", w.delay_grid);
        w.delay_dt = s.time("delay_dt", w.delay_dt);
        w.delay_t_out = s.time("delay_t_out", w.delay_t_out);
        w.significance = s.number("significance", w.significance);
        s.finish();
    }
    {
        auto& l = rc.longterm;
        l.seed = rc.seed;
        l.threads = rc.threads;
        Section s = top.section("longterm");
        l.n_sites = s.integer("n_sites", l.n_sites);
        l.tau = s.number("tau", l.tau);
        l.eps = s.number("eps", l.eps);
        l.sigma = s.number("sigma", l.sigma);
        l.n_cycles = s.integer("n_cycles", l.n_cycles);
        l.n_train = s.integer("n_train", l.n_train);
        l.n_test = s.integer("n_test", l.n_test);
        l.references = s.strings("references", l.references);
        s.finish();
    }
    {
        auto& f = rc.scars;
        f.seed = rc.seed;
        f.threads = rc.threads;
        Section s = top.section("scars");
        f.n_sites = s.integer("n_sites", f.n_sites);
        f.tau = s.number("tau", f.tau);
        f.eps = s.number("eps", f.eps);
        f.sigma = s.number("sigma", f.sigma);
        f.n_cycles = s.integer("n_cycles", f.n_cycles);
        f.n_seeds = s.integer("n_seeds", f.n_seeds);
        f.references = s.strings("references", f.references);
        s.finish();
    }
    {
        auto& e = rc.embeddability;
        Section s = top.section("embeddability");
        e.n_max = s.integer("n_max", e.n_max);
        e.n_max_decohered = s.integer("n_max_decohered", e.n_max_decohered);
        e.gamma = s.rate("gamma", e.gamma);
        e.t = s.time("t", e.t);
        s.finish();
    }
    {
        auto& k = rc.kernel;
        Section s = top.section("kernel");
        k.sizes = s.integers("sizes", k.sizes);
        k.steady_sizes = s.integers("steady_sizes", k.steady_sizes);
        k.tau = s.number("tau", k.tau);
        k.eps = s.number("eps", k.eps);
        k.sigma = s.number("sigma", k.sigma);
        k.tol = s.number("tol", k.tol);
        k.steady_cycles = s.number("steady_cycles", k.steady_cycles);
        s.finish();
    }
    top.finish();

    if (strict && !unknown.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw ConfigError(msg);
    }
    for (const auto& k : unknown) rc.warnings.push_back("ignored unknown key " + k);

    validated([&] {
        rc.multitask.validate();
        rc.decision.validate();
        rc.working_memory.validate();
        rc.longterm.validate();
        rc.scars.validate();
        rc.embeddability.validate();
        rc.kernel.validate();
    });
    return rc;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
}

}  // namespace qrc::cli
