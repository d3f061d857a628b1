#include "bhlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "bhlab/error.hpp"
#include "bhlab/hilbert.hpp"

namespace bhlab {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    fail(ErrorCode::ConfigError, "key '" + key + "': " + why);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

double to_real(const std::string& key, const std::string& v) {
    const std::string t = lower(trim(v));
    if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    if (t == "-inf" || t == "-infinity") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double x = std::stod(t, &used);
        if (used != t.size()) bad(key, "not a number: '" + v + "'");
        return x;
    } catch (const std::logic_error&) {
        bad(key, "not a number: '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    try {
        std::size_t used = 0;
        const long long x = std::stoll(t, &used);
        if (used == t.size()) return x;
        // accept integral reals such as 1e4 or 16384.0
        const double d = to_real(key, t);
        if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
    } catch (const std::logic_error&) {
    }
    bad(key, "not an integer: '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string t = lower(trim(v));
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    bad(key, "not a boolean: '" + v + "'");
}

std::string unquote(const std::string& v) {
    std::string t = trim(v);
    if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front()) t = t.substr(1, t.size() - 2);
    return t;
}

EquationModel parse_model(const std::string& key, const std::string& v) {
    if (v == "burgers_hilbert") return EquationModel::BurgersHilbert;
    if (v == "linear_advection") return EquationModel::LinearAdvection;
    bad(key, "expected burgers_hilbert|linear_advection, got '" + v + "'");
}

std::string model_name(EquationModel m) {
    return m == EquationModel::BurgersHilbert ? "burgers_hilbert" : "linear_advection";
}

NearRadiusRule parse_near_rule(const std::string& key, const std::string& v) {
    if (v == "unit") return NearRadiusRule::Unit;
    if (v == "weighted") return NearRadiusRule::WeightedDecay;
    bad(key, "expected unit|weighted, got '" + v + "'");
}

std::string hilbert_kind_name(HilbertKind k) {
    switch (k) {
        case HilbertKind::SpectralPeriodic: return "spectral";
        case HilbertKind::PaddedLine: return "padded";
        case HilbertKind::PrincipalValue: return "pv";
    }
    return "spectral";
}

std::string uhat_name(UhatFamily f) { return f == UhatFamily::Zero ? "zero" : "bump"; }

std::string chi_name(ChiTransition c) {
    switch (c) {
        case ChiTransition::QuinticSmoothstep: return "smoothstep";
        case ChiTransition::MollifiedLinear: return "mollified";
        case ChiTransition::Exponential: return "exponential";
    }
    return "exponential";
}

std::string jacobian_name(JacobianMode m) {
    switch (m) {
        case JacobianMode::Variational: return "variational";
        case JacobianMode::FiniteDifference: return "fd";
        case JacobianMode::Both: return "both";
    }
    return "variational";
}

// Library parsers throw ConfigError without the key; re-throw with it.
template <class F>
auto with_key(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError && std::string(e.what()).find("key '") == std::string::npos)
            bad(key, e.what());
        throw;
    }
}

struct KeyDef {
    std::string name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<nlohmann::json(const RunConfig&)> get;
};

template <class Ref>
KeyDef real_key(std::string name, Ref ref) {
    return {name, [name, ref](RunConfig& c, const std::string& v) { ref(c) = to_real(name, v); },
            [ref](const RunConfig& c) {
                // JSON has no infinity; write it as text so the dump reloads
                const double x = ref(const_cast<RunConfig&>(c));
                return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(x > 0 ? "inf" : "-inf");
            }};
}

template <class Ref>
KeyDef int_key(std::string name, Ref ref) {
    return {name,
            [name, ref](RunConfig& c, const std::string& v) {
                using T = std::remove_reference_t<decltype(ref(c))>;
                const long long x = to_int(name, v);
                if (std::is_unsigned_v<T> && x < 0) bad(name, "must be non-negative");
                ref(c) = static_cast<T>(x);
            },
            [ref](const RunConfig& c) { return nlohmann::json(ref(const_cast<RunConfig&>(c))); }};
}

template <class Ref>
KeyDef bool_key(std::string name, Ref ref) {
    return {name, [name, ref](RunConfig& c, const std::string& v) { ref(c) = to_bool(name, v); },
            [ref](const RunConfig& c) { return nlohmann::json(ref(const_cast<RunConfig&>(c))); }};
}

std::vector<KeyDef> build_schema() {
    std::vector<KeyDef> k;
    k.push_back(int_key("seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; }));

    k.push_back(real_key("grid.half_width", [](RunConfig& c) -> double& { return c.grid.half_width; }));
    k.push_back(int_key("grid.n_points", [](RunConfig& c) -> std::size_t& { return c.grid.n_points; }));
    k.push_back(real_key("grid.t0", [](RunConfig& c) -> double& { return c.grid.t0; }));

    k.push_back(real_key("init.epsilon", [](RunConfig& c) -> double& { return c.init.epsilon; }));
    k.push_back(real_key("init.alpha", [](RunConfig& c) -> double& { return c.init.alpha; }));
    k.push_back(real_key("init.beta", [](RunConfig& c) -> double& { return c.init.beta; }));
    k.push_back(real_key("init.kappa0", [](RunConfig& c) -> double& { return c.init.kappa0; }));
    k.push_back({"init.uhat",
                 [](RunConfig& c, const std::string& v) {
                     c.init.uhat = with_key("init.uhat", [&] { return parse_uhat_family(unquote(v)); });
                 },
                 [](const RunConfig& c) { return nlohmann::json(uhat_name(c.init.uhat)); }});
    k.push_back(real_key("init.uhat_amplitude", [](RunConfig& c) -> double& { return c.init.uhat_amplitude; }));
    k.push_back({"init.chi",
                 [](RunConfig& c, const std::string& v) {
                     c.init.chi = with_key("init.chi", [&] { return parse_chi_transition(unquote(v)); });
                 },
                 [](const RunConfig& c) { return nlohmann::json(chi_name(c.init.chi)); }});
    k.push_back(int_key("init.family", [](RunConfig& c) -> int& { return c.init.family; }));
    k.push_back(real_key("init.c_alpha", [](RunConfig& c) -> double& { return c.init.c_alpha; }));
    k.push_back(real_key("init.c_beta", [](RunConfig& c) -> double& { return c.init.c_beta; }));

    k.push_back(real_key("evolve.cfl", [](RunConfig& c) -> double& { return c.evolve.cfl; }));
    k.push_back(bool_key("evolve.dealias", [](RunConfig& c) -> bool& { return c.evolve.dealias; }));
    k.push_back(real_key("evolve.stop_slope", [](RunConfig& c) -> double& { return c.evolve.stop_slope; }));
    k.push_back(real_key("evolve.t_max", [](RunConfig& c) -> double& { return c.evolve.t_max; }));
    k.push_back(int_key("evolve.output_every", [](RunConfig& c) -> int& { return c.evolve.output_every; }));
    k.push_back(bool_key("evolve.hilbert_enabled", [](RunConfig& c) -> bool& { return c.evolve.hilbert_enabled; }));
    k.push_back({"evolve.model",
                 [](RunConfig& c, const std::string& v) { c.evolve.model = parse_model("evolve.model", unquote(v)); },
                 [](const RunConfig& c) { return nlohmann::json(model_name(c.evolve.model)); }});
    k.push_back(real_key("evolve.advection_speed", [](RunConfig& c) -> double& { return c.evolve.advection_speed; }));
    k.push_back(int_key("evolve.max_points", [](RunConfig& c) -> std::size_t& { return c.evolve.max_points; }));
    k.push_back(real_key("evolve.points_per_scale", [](RunConfig& c) -> double& { return c.evolve.points_per_scale; }));
    k.push_back(real_key("evolve.speed_bound", [](RunConfig& c) -> double& { return c.evolve.speed_bound; }));
    k.push_back(real_key("evolve.s_max", [](RunConfig& c) -> double& { return c.evolve.s_max; }));
    k.push_back(int_key("evolve.family", [](RunConfig& c) -> int& { return c.evolve.family; }));
    k.push_back(bool_key("evolve.extract", [](RunConfig& c) -> bool& { return c.evolve.extract; }));
    k.push_back(real_key("evolve.xi_window", [](RunConfig& c) -> double& { return c.evolve.xi_window; }));
    k.push_back(real_key("evolve.frame_ds", [](RunConfig& c) -> double& { return c.evolve.frame_ds; }));
    k.push_back(real_key("evolve.frame_half_width", [](RunConfig& c) -> double& { return c.evolve.frame_half_width; }));
    k.push_back(int_key("evolve.frame_points", [](RunConfig& c) -> std::size_t& { return c.evolve.frame_points; }));
    k.push_back(real_key("evolve.snapshot_ds", [](RunConfig& c) -> double& { return c.evolve.snapshot_ds; }));

    k.push_back({"hilbert.kind",
                 [](RunConfig& c, const std::string& v) {
                     c.evolve.hilbert.kind = with_key("hilbert.kind", [&] { return parse_hilbert_kind(unquote(v)); });
                 },
                 [](const RunConfig& c) { return nlohmann::json(hilbert_kind_name(c.evolve.hilbert.kind)); }});
    k.push_back(int_key("hilbert.pad_factor", [](RunConfig& c) -> int& { return c.evolve.hilbert.pad_factor; }));
    k.push_back({"hilbert.near_rule",
                 [](RunConfig& c, const std::string& v) {
                     c.evolve.hilbert.near_rule = parse_near_rule("hilbert.near_rule", unquote(v));
                 },
                 [](const RunConfig& c) {
                     return nlohmann::json(c.evolve.hilbert.near_rule == NearRadiusRule::Unit ? "unit" : "weighted");
                 }});

    k.push_back(int_key("shoot.n_checkpoints", [](RunConfig& c) -> int& { return c.shoot.n_checkpoints; }));
    k.push_back(real_key("shoot.checkpoint_spacing", [](RunConfig& c) -> double& { return c.shoot.checkpoint_spacing; }));
    k.push_back(real_key("shoot.newton_tol", [](RunConfig& c) -> double& { return c.shoot.newton_tol; }));
    k.push_back(int_key("shoot.max_newton_iters", [](RunConfig& c) -> int& { return c.shoot.max_newton_iters; }));
    k.push_back({"shoot.jacobian_mode",
                 [](RunConfig& c, const std::string& v) {
                     c.shoot.jacobian_mode =
                         with_key("shoot.jacobian_mode", [&] { return parse_jacobian_mode(unquote(v)); });
                 },
                 [](const RunConfig& c) { return nlohmann::json(jacobian_name(c.shoot.jacobian_mode)); }});
    k.push_back(real_key("shoot.fd_step", [](RunConfig& c) -> double& { return c.shoot.fd_step; }));
    k.push_back(int_key("shoot.fd_check_checkpoints", [](RunConfig& c) -> int& { return c.shoot.fd_check_checkpoints; }));
    k.push_back(real_key("shoot.fd_tolerance", [](RunConfig& c) -> double& { return c.shoot.fd_tolerance; }));
    k.push_back(real_key("shoot.trust_radius_alpha", [](RunConfig& c) -> double& { return c.shoot.trust_radius_alpha; }));
    k.push_back(real_key("shoot.trust_radius_beta", [](RunConfig& c) -> double& { return c.shoot.trust_radius_beta; }));
    k.push_back(real_key("shoot.trust_c_alpha", [](RunConfig& c) -> double& { return c.shoot.trust_c_alpha; }));
    k.push_back(real_key("shoot.trust_c_beta", [](RunConfig& c) -> double& { return c.shoot.trust_c_beta; }));
    k.push_back(int_key("shoot.jobs", [](RunConfig& c) -> int& { return c.shoot.jobs; }));
    k.push_back(real_key("shoot.approach_window", [](RunConfig& c) -> double& { return c.shoot.approach_window; }));

    auto& d = k;
    d.push_back(real_key("diagnostics.holder_r_min", [](RunConfig& c) -> double& { return c.diagnostics.holder_r_min; }));
    d.push_back(real_key("diagnostics.holder_r_max", [](RunConfig& c) -> double& { return c.diagnostics.holder_r_max; }));
    d.push_back(real_key("diagnostics.decay_bin", [](RunConfig& c) -> double& { return c.diagnostics.decay_bin; }));
    d.push_back(real_key("diagnostics.profile_range", [](RunConfig& c) -> double& { return c.diagnostics.profile_range; }));
    for (const char* which : {"window_lo", "window_hi"}) {
        const std::string name = std::string("diagnostics.") + which;
        const bool lo = std::string(which) == "window_lo";
        d.push_back({name,
                     [name, lo](RunConfig& c, const std::string& v) {
                         auto& w = c.diagnostics.window;
                         if (!w) w = ReportWindow{std::nan(""), std::nan("")};
                         (lo ? w->s_lo : w->s_hi) = to_real(name, v);
                     },
                     [lo](const RunConfig& c) {
                         const auto& w = c.diagnostics.window;
                         return w ? nlohmann::json(lo ? w->s_lo : w->s_hi) : nlohmann::json(nullptr);
                     }});
    }
    auto bs = [](RunConfig& c) -> BootstrapThresholds& { return c.diagnostics.bootstrap; };
    d.push_back(real_key("diagnostics.l", [bs](RunConfig& c) -> double& { return bs(c).l; }));
    d.push_back(real_key("diagnostics.c_near", [bs](RunConfig& c) -> double& { return bs(c).c_near; }));
    d.push_back(real_key("diagnostics.c_near0", [bs](RunConfig& c) -> double& { return bs(c).c_near0; }));
    d.push_back(real_key("diagnostics.c_middle_u", [bs](RunConfig& c) -> double& { return bs(c).c_middle_u; }));
    d.push_back(real_key("diagnostics.c_middle_1", [bs](RunConfig& c) -> double& { return bs(c).c_middle_1; }));
    d.push_back(real_key("diagnostics.middle_1_max", [bs](RunConfig& c) -> double& { return bs(c).middle_1_max; }));
    d.push_back(real_key("diagnostics.c_middle_n", [bs](RunConfig& c) -> double& { return bs(c).c_middle_n; }));
    d.push_back(real_key("diagnostics.c_far_1", [bs](RunConfig& c) -> double& { return bs(c).c_far_1; }));
    d.push_back(real_key("diagnostics.c_far_n", [bs](RunConfig& c) -> double& { return bs(c).c_far_n; }));
    d.push_back(real_key("diagnostics.l2_bound", [bs](RunConfig& c) -> double& { return bs(c).l2_bound; }));
    d.push_back(real_key("diagnostics.c_u_inf", [bs](RunConfig& c) -> double& { return bs(c).c_u_inf; }));
    d.push_back(real_key("diagnostics.c_x0_2", [bs](RunConfig& c) -> double& { return bs(c).c_x0_2; }));
    d.push_back(real_key("diagnostics.c_x0_3", [bs](RunConfig& c) -> double& { return bs(c).c_x0_3; }));
    d.push_back(real_key("diagnostics.c_x0_5", [bs](RunConfig& c) -> double& { return bs(c).c_x0_5; }));
    d.push_back(real_key("diagnostics.constraint_tol", [bs](RunConfig& c) -> double& { return bs(c).constraint_tol; }));
    d.push_back(int_key("diagnostics.max_samples", [bs](RunConfig& c) -> std::size_t& { return bs(c).max_samples; }));
    d.push_back({"diagnostics.families",
                 [](RunConfig& c, const std::string& v) {
                     std::vector<std::string> out;
                     std::stringstream ss(unquote(v));
                     std::string item;
                     const auto& known = bootstrap_family_ids();
                     while (std::getline(ss, item, ',')) {
                         item = trim(item);
                         if (item.empty()) continue;
                         if (std::find(known.begin(), known.end(), item) == known.end())
                             bad("diagnostics.families", "unknown family '" + item + "'");
                         out.push_back(item);
                     }
                     c.diagnostics.bootstrap.families = out;
                 },
                 [](const RunConfig& c) {
                     const auto& f = c.diagnostics.bootstrap.families;
                     return nlohmann::json(f.empty() ? bootstrap_family_ids() : f);
                 }});
    return k;
}

const std::vector<KeyDef>& schema() {
    static const std::vector<KeyDef> s = build_schema();
    return s;
}

const KeyDef* find_key(const std::string& dotted) {
    for (const auto& k : schema())
        if (k.name == dotted) return &k;
    return nullptr;
}

void require(bool ok, const std::string& key, const std::string& why) {
    if (!ok) bad(key, why);
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& k : schema()) n.push_back(k.name);
        return n;
    }();
    return names;
}

void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
    const KeyDef* k = find_key(dotted_key);
    if (!k) fail(ErrorCode::ConfigError, "unknown key '" + dotted_key + "'");
    k->set(cfg, value);
    cfg.explicit_keys.insert(dotted_key);
}

void parse_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') fail(ErrorCode::ConfigError, where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(ErrorCode::ConfigError, where + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
        try {
            set_config_value(cfg, key, value);
        } catch (const Error& e) {
            fail(ErrorCode::ConfigError, where + ": " + std::string(e.what()).substr(std::string("ConfigError: ").size()));
        }
    }
}

void parse_config_json(RunConfig& cfg, const nlohmann::json& j, const std::string& origin) {
    if (!j.is_object()) fail(ErrorCode::ConfigError, origin + ": top level must be an object");
    auto as_text = [](const nlohmann::json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_array()) {
            std::string out;
            for (const auto& e : v) out += (out.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
            return out;
        }
        return v.dump();
    };
    for (const auto& [name, v] : j.items()) {
        if (v.is_object()) {
            for (const auto& [key, val] : v.items()) {
                if (val.is_null()) continue;  // resolved dumps write unset optionals as null
                set_config_value(cfg, name + "." + key, as_text(val));
            }
        } else if (!v.is_null()) {
            set_config_value(cfg, name, as_text(v));
        }
    }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (trim(text).rfind('{', 0) == 0) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::ConfigError, path + ": " + e.what());
        }
        parse_config_json(cfg, j, path);
    } else {
        parse_config_text(cfg, text, path);
    }
}

void apply_env_overrides(RunConfig& cfg, char** envp) {
    if (!envp) return;
    std::map<std::string, std::string> by_env;
    for (const auto& k : schema()) {
        std::string e = "BHLAB_";
        for (char c : k.name) e += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        by_env[e] = k.name;
    }
    for (char** p = envp; *p; ++p) {
        const std::string entry(*p);
        if (entry.rfind("BHLAB_", 0) != 0) continue;
        const auto eq = entry.find('=');
        const std::string name = entry.substr(0, eq);
        const auto it = by_env.find(name);
        if (it == by_env.end()) fail(ErrorCode::ConfigError, "unknown key '" + name + "' (environment)");
        set_config_value(cfg, it->second, eq == std::string::npos ? "" : entry.substr(eq + 1));
    }
}

void RunConfig::resolve() {
    require(init.epsilon > 0.0 && init.epsilon <= 0.5, "init.epsilon", "must lie in (0, 0.5]");
    require(init.family == 1 || init.family == 2, "init.family", "must be 1 or 2");
    require(evolve.family == 1 || evolve.family == 2, "evolve.family", "must be 1 or 2");
    require(grid.half_width > 0.0, "grid.half_width", "must be positive");
    require(grid.n_points >= 64 && is_power_of_two(grid.n_points), "grid.n_points", "must be a power of two >= 64");
    require(evolve.cfl > 0.0 && evolve.cfl <= 2.8, "evolve.cfl", "must lie in (0, 2.8]");
    require(evolve.stop_slope > 0.0, "evolve.stop_slope", "must be positive");
    require(evolve.output_every >= 1, "evolve.output_every", "must be >= 1");
    require(evolve.max_points >= grid.n_points && is_power_of_two(evolve.max_points), "evolve.max_points",
            "must be a power of two >= grid.n_points");
    require(evolve.points_per_scale > 0.0, "evolve.points_per_scale", "must be positive");
    require(evolve.frame_ds > 0.0, "evolve.frame_ds", "must be positive");
    require(evolve.frame_points >= 16, "evolve.frame_points", "must be >= 16");
    require(evolve.hilbert.pad_factor >= 2, "hilbert.pad_factor", "must be >= 2");
    require(diagnostics.holder_r_max > 0.0 && diagnostics.holder_r_max <= 0.5, "diagnostics.holder_r_max",
            "must lie in (0, 0.5]");
    require(diagnostics.decay_bin > 0.0, "diagnostics.decay_bin", "must be positive");
    if (diagnostics.window) {
        require(!std::isnan(diagnostics.window->s_lo), "diagnostics.window_lo", "window_hi given without window_lo");
        require(!std::isnan(diagnostics.window->s_hi), "diagnostics.window_hi", "window_lo given without window_hi");
        require(diagnostics.window->s_hi > diagnostics.window->s_lo, "diagnostics.window_hi", "must exceed window_lo");
    }

    if (!is_set("grid.t0")) grid.t0 = -init.epsilon;
    if (!is_set("evolve.stop_slope")) evolve.stop_slope = 50.0 / init.epsilon;
    if (!is_set("evolve.family")) evolve.family = init.family;
    shoot = shoot_config();
    try {
        shoot.validate();
    } catch (const Error& e) {
        fail(ErrorCode::ConfigError, std::string("shoot section: ") + e.what());
    }
}

ShootConfig RunConfig::shoot_config() const {
    ShootConfig s = shoot;
    s.epsilon = init.epsilon;
    s.init = init;
    s.evolve = evolve;
    s.domain_half_width = grid.half_width;
    s.n_points = grid.n_points;
    return s;
}

nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& k : schema()) {
        const auto dot = k.name.find('.');
        if (dot == std::string::npos)
            j[k.name] = k.get(cfg);
        else
            j[k.name.substr(0, dot)][k.name.substr(dot + 1)] = k.get(cfg);
    }
    return j;
}

}  // namespace bhlab
