#include "zk/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "zk/common.hpp"

namespace zk {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

struct RawValue {
    std::string text;
    bool quoted = false;
    int line = 0;
};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "mode",
        "grid.d", "grid.nx", "grid.ny", "grid.nz", "grid.transverse_bc",
        "model.c", "model.epsilon", "model.nonlinearity",
        "forcing.kind", "forcing.amplitude",
        "initial.preset", "initial.amplitude",
        "ms.sigma",
        "step.theta", "step.cfl", "step.dt_max", "step.dt_min", "step.solve_tol",
        "step.extrapolation",
        "run.t_end", "run.record_interval", "run.snapshot_every", "run.keep_states",
        "run.compatibility", "run.compat_tol",
        "guard.factor", "guard.norm",
        "diag.c_prime", "diag.xtilde",
        "out.dir",
        "sweep.eps_list",
        "bvp.n", "bvp.g", "bvp.eps_list", "bvp.nonlinear",
        "mms.nx_list", "mms.eps_list", "mms.t_end", "mms.dt_over_h",
        "seed",
    };
    return keys;
}

std::map<std::string, RawValue> tokenize(const std::string& text) {
    std::map<std::string, RawValue> out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments (naive: '#' outside quotes)
        std::string stripped;
        bool in_quote = false;
        for (char ch : line) {
            if (ch == '"') in_quote = !in_quote;
            if (ch == '#' && !in_quote) break;
            stripped.push_back(ch);
        }
        stripped = trim(stripped);
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw config_error("malformed section header", lineno);
            section = trim(stripped.substr(1, stripped.size() - 2));
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error("expected key = value", lineno);
        std::string key = trim(stripped.substr(0, eq));
        std::string val = trim(stripped.substr(eq + 1));
        if (key.empty()) throw config_error("missing key before '='", lineno);
        if (!section.empty()) key = section + "." + key;
        if (!known_keys().count(key)) throw config_error("unknown key: " + key, lineno);
        if (out.count(key)) throw config_error("duplicate key: " + key, lineno);
        RawValue rv;
        rv.line = lineno;
        if (!val.empty() && val.front() == '"') {
            if (val.size() < 2 || val.back() != '"')
                throw config_error("unterminated string for key " + key, lineno);
            rv.text = val.substr(1, val.size() - 2);
            rv.quoted = true;
        } else {
            rv.text = val;
        }
        if (rv.text.empty() && !rv.quoted)
            throw config_error("missing value for key " + key, lineno);
        out.emplace(std::move(key), std::move(rv));
    }
    return out;
}

class Extractor {
public:
    explicit Extractor(std::map<std::string, RawValue> vals) : vals_(std::move(vals)) {}

    bool has(const std::string& key) const { return vals_.count(key) != 0; }
    int line(const std::string& key) const {
        auto it = vals_.find(key);
        return it == vals_.end() ? 0 : it->second.line;
    }

    double real(const std::string& key, double dflt) {
        auto it = vals_.find(key);
        if (it == vals_.end()) return dflt;
        return parse_real(it->second.text, key, it->second.line);
    }
    int integer(const std::string& key, int dflt) {
        auto it = vals_.find(key);
        if (it == vals_.end()) return dflt;
        const double v = parse_real(it->second.text, key, it->second.line);
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw config_error("expected an integer for key " + key, it->second.line);
        return i;
    }
    std::uint64_t u64(const std::string& key, std::uint64_t dflt) {
        auto it = vals_.find(key);
        if (it == vals_.end()) return dflt;
        char* end = nullptr;
        const auto v = std::strtoull(it->second.text.c_str(), &end, 10);
        if (end == it->second.text.c_str() || *end != '\0')
            throw config_error("expected an unsigned integer for key " + key, it->second.line);
        return v;
    }
    bool boolean(const std::string& key, bool dflt) {
        auto it = vals_.find(key);
        if (it == vals_.end()) return dflt;
        if (it->second.text == "true") return true;
        if (it->second.text == "false") return false;
        throw config_error("expected true or false for key " + key, it->second.line);
    }
    std::string str(const std::string& key, const std::string& dflt) {
        auto it = vals_.find(key);
        if (it == vals_.end()) return dflt;
        return it->second.text;
    }
    std::string str_oneof(const std::string& key, const std::string& dflt,
                          std::initializer_list<const char*> allowed) {
        const std::string v = str(key, dflt);
        for (const char* a : allowed)
            if (v == a) return v;
        throw config_error("invalid value \"" + v + "\" for key " + key, line(key));
    }
    std::vector<double> real_list(const std::string& key, std::vector<double> dflt) {
        auto it = vals_.find(key);
        if (it == vals_.end()) return dflt;
        std::vector<double> out;
        std::stringstream ss(it->second.text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            out.push_back(parse_real(item, key, it->second.line));
        }
        if (out.empty()) throw config_error("empty list for key " + key, it->second.line);
        return out;
    }
    std::vector<int> int_list(const std::string& key, std::vector<int> dflt) {
        auto reals = real_list(key, {});
        if (reals.empty()) return dflt;
        std::vector<int> out;
        for (double v : reals) {
            const int i = static_cast<int>(v);
            if (static_cast<double>(i) != v)
                throw config_error("expected integers for key " + key, line(key));
            out.push_back(i);
        }
        return out;
    }

private:
    static double parse_real(const std::string& s, const std::string& key, int line) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0')
            throw config_error("expected a number for key " + key + ", got \"" + s + "\"", line);
        return v;
    }
    std::map<std::string, RawValue> vals_;
};

}  // namespace

RunConfig parse_config(const std::string& text) {
    Extractor ex(tokenize(text));
    RunConfig cfg;
    cfg.echo = text;

    cfg.mode = ex.str_oneof("mode", "simulate", {"simulate", "estimate"});

    cfg.grid.d = ex.integer("grid.d", 1);
    cfg.grid.nx = ex.integer("grid.nx", 64);
    cfg.grid.ny = ex.integer("grid.ny", 16);
    cfg.grid.nz = ex.integer("grid.nz", cfg.grid.d == 2 ? 16 : 0);
    const std::string bc =
        ex.str_oneof("grid.transverse_bc", "dirichlet", {"dirichlet", "periodic"});
    cfg.grid.transverse_bc =
        bc == "dirichlet" ? TransverseBc::dirichlet : TransverseBc::periodic;

    cfg.c = ex.real("model.c", 1.0);
    cfg.epsilon = ex.real("model.epsilon", 0.0);
    cfg.nonlinearity = ex.boolean("model.nonlinearity", true);

    cfg.forcing_kind =
        ex.str_oneof("forcing.kind", "zero", {"zero", "decay-bump", "manufactured"});
    cfg.forcing_amplitude = ex.real("forcing.amplitude", 1.0);

    cfg.initial = ex.str_oneof("initial.preset", "zero",
                               {"zero", "poly-bump", "two-bump", "manufactured"});
    cfg.amplitude = ex.real("initial.amplitude", 1.0);
    cfg.ms_sigma = ex.real("ms.sigma", -1.0);

    cfg.step.theta = ex.real("step.theta", 0.5);
    cfg.step.cfl = ex.real("step.cfl", 0.5);
    cfg.step.dt_max = ex.real("step.dt_max", 1e-2);
    cfg.step.dt_min = ex.real("step.dt_min", 1e-8);
    cfg.step.solve_tol = ex.real("step.solve_tol", 1e-8);
    cfg.step.extrapolation =
        ex.str_oneof("step.extrapolation", "ab2", {"ab2", "euler"}) == std::string("ab2")
            ? NonlinearExtrapolation::ab2
            : NonlinearExtrapolation::explicit_euler;

    cfg.t_end = ex.real("run.t_end", 1.0);
    cfg.record_interval = ex.real("run.record_interval", 0.0);
    cfg.snapshot_every = ex.integer("run.snapshot_every", 0);
    cfg.keep_states = ex.boolean("run.keep_states", false);
    cfg.compatibility =
        ex.str_oneof("run.compatibility", "warn", {"off", "warn", "enforce"});
    cfg.compat_tol = ex.real("run.compat_tol", 1e-6);

    cfg.guard_factor = ex.real("guard.factor", 0.0);
    cfg.guard_norm = ex.str_oneof("guard.norm", "grad_l2", {"grad_l2", "l2", "max"});

    cfg.c_prime = ex.real("diag.c_prime", 1.0);
    cfg.xtilde = ex.real("diag.xtilde", 0.5);

    cfg.out_dir = ex.str("out.dir", "");

    cfg.eps_list = ex.real_list("sweep.eps_list", {});

    cfg.bvp_n = ex.integer("bvp.n", 2048);
    cfg.bvp_g = ex.str_oneof("bvp.g", "const6", {"const6", "linear24x", "cosine"});
    cfg.bvp_eps_list = ex.real_list("bvp.eps_list", {1e-1, 1e-2, 1e-3, 1e-4, 1e-5});
    cfg.bvp_nonlinear = ex.boolean("bvp.nonlinear", false);

    cfg.mms_nx = ex.int_list("mms.nx_list", {32, 64, 128});
    cfg.mms_eps = ex.real_list("mms.eps_list", {0.0, 0.01});
    cfg.mms_t_end = ex.real("mms.t_end", 0.1);
    cfg.mms_dt_over_h = ex.real("mms.dt_over_h", 0.4);

    cfg.seed = ex.u64("seed", 0);

    // semantic rules, named explicitly
    if (!(cfg.c > 0.0))
        throw config_error("model.c = " + std::to_string(cfg.c) +
                               " violates rule: c must be positive",
                           ex.line("model.c"));
    if (cfg.epsilon < 0.0)
        throw config_error("model.epsilon must be non-negative", ex.line("model.epsilon"));
    if (cfg.mode == "estimate" && cfg.epsilon > 0.25)
        throw config_error("model.epsilon = " + std::to_string(cfg.epsilon) +
                               " violates rule: estimate mode requires epsilon <= 0.25",
                           ex.line("model.epsilon"));
    if (!(cfg.t_end > 0.0)) throw config_error("run.t_end must be positive", ex.line("run.t_end"));
    if (cfg.record_interval < 0.0 || cfg.record_interval > cfg.t_end)
        throw config_error("run.record_interval must lie in [0, t_end]",
                           ex.line("run.record_interval"));
    if (cfg.step.theta < 0.5 || cfg.step.theta > 1.0)
        throw config_error("step.theta must lie in [0.5, 1]", ex.line("step.theta"));
    if (!(cfg.step.cfl > 0.0)) throw config_error("step.cfl must be positive", ex.line("step.cfl"));
    if (cfg.step.dt_min > cfg.step.dt_max)
        throw config_error("step.dt_min must not exceed step.dt_max", ex.line("step.dt_min"));
    if (!(cfg.xtilde > 0.0) || cfg.xtilde > 1.0)
        throw config_error("diag.xtilde must lie in (0, 1]", ex.line("diag.xtilde"));
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

RunSetup to_setup(const RunConfig& cfg) {
    RunSetup s;
    s.grid = cfg.grid;
    s.params.c = cfg.c;
    s.params.epsilon = cfg.epsilon;
    s.params.nonlinearity = cfg.nonlinearity;

    s.initial = initial_preset_from_name(cfg.initial);
    s.initial_amplitude = cfg.amplitude;
    if (s.initial == InitialPreset::manufactured || cfg.forcing_kind == "manufactured") {
        auto ms = ms_poly_cos(cfg.amplitude, cfg.ms_sigma, cfg.grid);
        s.ms = ms;
    }

    if (cfg.forcing_kind == "zero") {
        s.params.forcing.kind = ForcingKind::zero;
    } else if (cfg.forcing_kind == "decay-bump") {
        s.params.forcing.kind = ForcingKind::analytic;
        s.params.forcing.name = "decay-bump";
        s.params.forcing.amplitude = cfg.forcing_amplitude;
    } else {
        s.params.forcing = manufactured_forcing(s.ms, s.params);
    }

    s.step = cfg.step;
    s.t_end = cfg.t_end;
    s.record_interval = cfg.record_interval;
    s.snapshot_every = cfg.snapshot_every;
    s.keep_states = cfg.keep_states;
    s.guard_factor = cfg.guard_factor;
    s.guard_norm = cfg.guard_norm == "l2"
                       ? GuardNorm::l2
                       : (cfg.guard_norm == "max" ? GuardNorm::max_abs : GuardNorm::grad_l2);
    s.compat = cfg.compatibility == "off"
                   ? CompatibilityMode::off
                   : (cfg.compatibility == "enforce" ? CompatibilityMode::enforce
                                                     : CompatibilityMode::warn);
    s.compat_tol = cfg.compat_tol;
    s.c_prime = cfg.c_prime;
    return s;
}

}  // namespace zk
