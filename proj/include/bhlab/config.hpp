#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "bhlab/diagnostics.hpp"
#include "bhlab/evolve.hpp"
#include "bhlab/initdata.hpp"
#include "bhlab/shooting.hpp"

namespace bhlab {

struct GridSection {
    double half_width = 4.0;
    std::size_t n_points = std::size_t{1} << 14;
    double t0 = 0.0;  // unset: -epsilon (blowup at t = 0 for the model datum)
};

// Everything a CLI run needs. Sections: grid, init, evolve, hilbert, shoot,
// diagnostics, plus the top-level seed. evolve.hilbert is the hilbert section.
struct RunConfig {
    GridSection grid;
    InitConfig init;
    EvolveConfig evolve;
    ShootConfig shoot;
    DiagnosticsConfig diagnostics;
    std::uint64_t seed = 12345;

    // keys given explicitly ("section.key"); derived defaults only fill the rest
    std::set<std::string> explicit_keys;

    bool is_set(const std::string& dotted) const { return explicit_keys.count(dotted) > 0; }

    // Fills defaults that depend on other keys: t0 = -eps, stop_slope = 50/eps,
    // and copies epsilon/init/evolve/grid into the shoot section.
    void resolve();
    ShootConfig shoot_config() const;
};

// Every accepted key as "section.key" (seed has no section).
const std::vector<std::string>& config_keys();

// Sets one key from its textual value. ConfigError names the key on failure.
void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

// Sectioned key = value text:
//   # comment
//   [evolve]
//   stop_slope = 500
// Keys before the first header belong to the top level (seed) or may be written
// in dotted form (evolve.stop_slope = 500).
void parse_config_text(RunConfig& cfg, const std::string& text, const std::string& origin = "<text>");
// {"evolve": {"stop_slope": 500}, "seed": 1}
void parse_config_json(RunConfig& cfg, const nlohmann::json& j, const std::string& origin = "<json>");
// Picks the parser by content (a leading '{' means JSON).
void load_config_file(RunConfig& cfg, const std::string& path);
// BHLAB_<SECTION>_<KEY>=value, e.g. BHLAB_EVOLVE_STOP_SLOPE=800, BHLAB_SEED=3.
void apply_env_overrides(RunConfig& cfg, char** envp);

// The full resolved configuration, every key present.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace bhlab
