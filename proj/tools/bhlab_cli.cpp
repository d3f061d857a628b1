// bhlab: command-line front end for profiles, the Hilbert suite, Burgers-Hilbert
// runs, shooting and run diagnostics.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bhlab/config.hpp"
#include "bhlab/diagnostics.hpp"
#include "bhlab/error.hpp"
#include "bhlab/evolve.hpp"
#include "bhlab/hilbert.hpp"
#include "bhlab/initdata.hpp"
#include "bhlab/output.hpp"
#include "bhlab/profile.hpp"
#include "bhlab/shooting.hpp"

extern char** environ;

namespace fs = std::filesystem;
using namespace bhlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNonFinite = 4;

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::ConfigError: return kExitUsage;
        case ErrorCode::DegenerateModulation: return kExitDegenerate;
        case ErrorCode::NonFiniteState: return kExitNonFinite;
        default: return kExitRuntime;
    }
}

struct ConfigArgs {
    std::string file;
    std::vector<std::string> sets;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", file, "config file (sectioned key = value, or JSON)");
        cmd->add_option("--set", sets, "override one key, e.g. --set evolve.stop_slope=800")->take_all();
    }

    // defaults < file < BHLAB_* environment < --set
    RunConfig load(const std::string& base_json = {}) const {
        RunConfig cfg;
        if (!base_json.empty()) load_config_file(cfg, base_json);
        if (!file.empty()) load_config_file(cfg, file);
        apply_env_overrides(cfg, environ);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) fail(ErrorCode::ConfigError, "--set expects key=value, got '" + kv + "'");
            set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.resolve();
        return cfg;
    }
};

Grid1D physical_grid(const RunConfig& cfg) {
    return Grid1D::make(-cfg.grid.half_width, cfg.grid.half_width, cfg.grid.n_points);
}

// The report window defaults to the shooting window [s_0, s_0 + N spacing] when
// the run reaches it; otherwise the whole record range is used.
DiagnosticsConfig diagnostics_for(const RunConfig& cfg, const Trajectory& tr) {
    DiagnosticsConfig d = cfg.diagnostics;
    if (!d.window && cfg.evolve.family == 2 && !tr.records.empty()) {
        const double s0 = -std::log(cfg.init.epsilon);
        const double s1 = s0 + cfg.shoot.n_checkpoints * cfg.shoot.checkpoint_spacing;
        if (tr.records.back().s >= s1) d.window = ReportWindow{s0, s1};
    }
    return d;
}

nlohmann::json make_report(const RunConfig& cfg, const Trajectory& tr, const std::string& dir) {
    const DiagnosticsConfig d = diagnostics_for(cfg, tr);
    const RunReport r = build_report(tr, d, cfg.evolve.family);
    nlohmann::json j = to_json(r);
    j["config"] = to_json(cfg);
    j["stop"] = to_string(tr.stop);
    j["n_records"] = tr.records.size();
    if (!tr.records.empty()) {
        j["final_s"] = tr.records.back().s;
        j["final_t"] = tr.records.back().t;
    }
    write_json((fs::path(dir) / "report.json").string(), j);
    write_plot_csvs(r, tr, (fs::path(dir) / "plots").string());
    return j;
}

void print_summary(const nlohmann::json& rep) {
    std::cout << "T* = " << rep["T_star"] << "\n";
    std::cout << "x* = " << rep["x_star"] << "\n";
    std::cout << "holder exponent = " << rep["holder_exponent"]["value"] << "\n";
    std::cout << "gradient rate band = " << rep["gradient_rate_band"] << "\n";
    std::cout << "nu estimate = " << rep["nu_estimate"] << "\n";
}

// ---- profile ---------------------------------------------------------------

struct ProfileArgs {
    int family = 0;
    std::optional<double> at;
    std::optional<double> from, to;
    int n = 11;
    int order = 5;
};

int cmd_profile(const ProfileArgs& a) {
    if (a.order < 0 || a.order > kMaxDerivativeOrder) fail(ErrorCode::ConfigError, "--order must lie in [0, 9]");
    std::vector<double> xs;
    if (a.at) {
        xs.push_back(*a.at);
    } else {
        if (!a.from || !a.to || a.n < 1) fail(ErrorCode::ConfigError, "give --at, or --from/--to with --n >= 1");
        for (int k = 0; k < a.n; ++k) xs.push_back(a.n == 1 ? *a.from : *a.from + (*a.to - *a.from) * k / (a.n - 1));
    }
    std::printf("X,U");
    for (int k = 1; k <= a.order; ++k) std::printf(",d%dU", k);
    std::printf("\n");
    for (double X : xs) {
        // + 0.0 folds the signed zeros of odd/even terms at X = 0
        std::printf("%.17g,%.17g", X + 0.0, ui_eval(X, a.family) + 0.0);
        if (a.order > 0) {
            const auto d = ui_derivatives(X, a.family, a.order);
            for (double v : d) std::printf(",%.17g", v + 0.0);
        }
        std::printf("\n");
    }
    return kExitOk;
}

// ---- hilbert-test ------------------------------------------------------------

int cmd_hilbert_test(std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const HilbertSuiteReport r = run_hilbert_suite(seed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("H[sin] + cos            %.3e\n", r.sin_error);
    std::printf("H H f + f (relative)    %.3e\n", r.involution_error);
    std::printf("<f, Hf> / |f|^2         %.3e\n", r.skew_error);
    std::printf("| |Hf| - |f| | / |f|    %.3e\n", r.isometry_error);
    std::printf("padded 1/(1+x^2)        %.3e\n", r.padded_error);
    std::printf("PV vs spectral (%d pts) %.3e\n", r.pv_points, r.pv_vs_spectral);
    std::printf("%s in %.2f s\n", r.passed ? "PASS" : "FAIL", secs);
    return r.passed ? kExitOk : kExitRuntime;
}

// ---- simulate ------------------------------------------------------------------

int cmd_simulate(const ConfigArgs& ca, const std::string& out, bool report) {
    const RunConfig cfg = ca.load();
    fs::create_directories(out);
    write_json((fs::path(out) / "config.json").string(), to_json(cfg));

    const Field u0 = build_initial_physical(cfg.init, physical_grid(cfg));
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory tr = run(u0, cfg.grid.t0, cfg.evolve);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_trajectory(out, tr);
    std::printf("stop: %s after %zu records, final s = %.6f, n = %zu (%.1f s)\n", to_string(tr.stop).c_str(),
                tr.records.size(), tr.records.empty() ? 0.0 : tr.records.back().s, tr.final_field.grid().n_points,
                secs);
    if (report) print_summary(make_report(cfg, tr, out));
    return kExitOk;
}

// ---- shoot ---------------------------------------------------------------------

int cmd_shoot(const ConfigArgs& ca, const std::string& out, std::optional<int> jobs) {
    RunConfig cfg = ca.load();
    if (jobs) {
        if (*jobs < 1) fail(ErrorCode::ConfigError, "--jobs must be >= 1");
        cfg.shoot.jobs = *jobs;
    }
    fs::create_directories(out);
    write_json((fs::path(out) / "config.json").string(), to_json(cfg));
    std::ofstream trace_file(fs::path(out) / "trace.jsonl");
    if (!trace_file) fail(ErrorCode::IoError, "cannot write trace.jsonl");

    const auto t0 = std::chrono::steady_clock::now();
    const ShootTrace tr = shoot_sequence(cfg.shoot_config(), [&](const ShootCheckpoint& c) {
        trace_file << to_json(c).dump() << '\n';
        trace_file.flush();
        std::fprintf(stderr, "checkpoint %d  s=%.4f  alpha=%.10e  beta=%.10e  |r|=%.2e  det=%.4g\n", c.n, c.s, c.alpha,
                     c.beta, std::hypot(c.r2, c.r3), c.det);
    });
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::json res = to_json(tr);
    res["seconds"] = secs;
    res["config"] = to_json(cfg);
    write_json((fs::path(out) / "result.json").string(), res);
    std::printf("alpha* = %.12e\nbeta*  = %.12e\n", tr.alpha_star, tr.beta_star);
    return kExitOk;
}

// ---- diagnose / report ------------------------------------------------------------

int cmd_diagnose(const ConfigArgs& ca, const std::string& run_dir) {
    const fs::path stored = fs::path(run_dir) / "config.json";
    const RunConfig cfg = ca.load(fs::exists(stored) ? stored.string() : std::string{});
    const Trajectory tr = read_trajectory(run_dir);
    print_summary(make_report(cfg, tr, run_dir));
    return kExitOk;
}

int cmd_report(const std::vector<std::string>& runs, const std::string& out) {
    std::ostringstream csv;
    csv.precision(10);
    csv << "run,stop,final_s,T_star,x_star,holder,holder_stderr,rate_lo,rate_hi,d2_rate,d3_rate,nu,"
           "profile_tail_decreasing,l2_drift,l2_hard_pass\n";
    auto num = [](const nlohmann::json& j) -> std::string {
        if (j.is_null()) return "";
        std::ostringstream s;
        s.precision(10);
        s << j.get<double>();
        return s.str();
    };
    for (const auto& dir : runs) {
        const auto rep = read_json((fs::path(dir) / "report.json").string());
        const auto& fits = rep["decay_fits"];
        const auto& bv = rep["bootstrap_verdicts"];
        csv << dir << ',' << rep.value("stop", "") << ',' << num(rep.value("final_s", nlohmann::json())) << ','
            << num(rep["T_star"]) << ',' << num(rep["x_star"]) << ',' << num(rep["holder_exponent"]["value"]) << ','
            << num(rep["holder_exponent"].value("stderr", nlohmann::json())) << ','
            << num(rep["gradient_rate_band"][0]) << ',' << num(rep["gradient_rate_band"][1]) << ','
            << (fits.contains("d2U_origin") ? num(fits["d2U_origin"]["rate"]) : "") << ','
            << (fits.contains("d3U_origin") ? num(fits["d3U_origin"]["rate"]) : "") << ','
            << num(rep["nu_estimate"]) << ',' << (rep.value("profile_tail_decreasing", false) ? "true" : "false")
            << ',' << num(rep.value("l2_relative_drift_per_time", nlohmann::json())) << ','
            << (bv.contains("L2_dU") && bv["L2_dU"]["pass_rate"].get<double>() == 1.0 ? "true" : "false") << '\n';
    }
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(out);
        if (!f) fail(ErrorCode::IoError, "cannot write " + out);
        f << csv.str();
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Burgers-Hilbert blowup laboratory"};
    app.require_subcommand(1);

    ProfileArgs pa;
    auto* profile = app.add_subcommand("profile", "tabulate the self-similar Burgers profile U_i");
    profile->add_option("--i", pa.family, "profile index (1 or 2)")->required()->check(CLI::Range(1, 2));
    profile->add_option("--at", pa.at, "single X");
    profile->add_option("--from", pa.from, "first X of a uniform table");
    profile->add_option("--to", pa.to, "last X of a uniform table");
    profile->add_option("--n", pa.n, "table size");
    profile->add_option("--order", pa.order, "highest derivative order (0..9)");

    std::uint64_t seed = 12345;
    auto* htest = app.add_subcommand("hilbert-test", "cross-validate the Hilbert transform realizations");
    htest->add_option("--seed", seed, "seed for the random PV points");

    ConfigArgs sim_cfg;
    std::string sim_out = "run";
    bool no_report = false;
    auto* simulate = app.add_subcommand("simulate", "evolve a datum and write trajectory + report");
    sim_cfg.attach(simulate);
    simulate->add_option("--out", sim_out, "output directory");
    simulate->add_flag("--no-report", no_report, "skip diagnostics");

    ConfigArgs shoot_cfg;
    std::string shoot_out = "shoot";
    std::optional<int> jobs;
    auto* shoot = app.add_subcommand("shoot", "Newton shooting for (alpha, beta) over the checkpoint ladder");
    shoot_cfg.attach(shoot);
    shoot->add_option("--out", shoot_out, "output directory");
    shoot->add_option("--jobs", jobs, "parallel probe runs");

    ConfigArgs diag_cfg;
    std::string diag_run;
    auto* diagnose = app.add_subcommand("diagnose", "rebuild report.json from a stored trajectory");
    diag_cfg.attach(diagnose);
    diagnose->add_option("--run", diag_run, "trajectory directory written by simulate")->required();

    std::vector<std::string> report_runs;
    std::string report_out;
    auto* report = app.add_subcommand("report", "summarize report.json of several runs as CSV");
    report->add_option("runs", report_runs, "run directories")->required();
    report->add_option("--out", report_out, "CSV path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*profile) return cmd_profile(pa);
        if (*htest) return cmd_hilbert_test(seed);
        if (*simulate) return cmd_simulate(sim_cfg, sim_out, !no_report);
        if (*shoot) return cmd_shoot(shoot_cfg, shoot_out, jobs);
        if (*diagnose) return cmd_diagnose(diag_cfg, diag_run);
        if (*report) return cmd_report(report_runs, report_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
