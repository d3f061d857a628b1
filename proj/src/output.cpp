#include "bhlab/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bhlab/error.hpp"

namespace fs = std::filesystem;

namespace bhlab {

namespace {

std::ofstream open_out(const fs::path& p, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(p, mode);
    if (!f) fail(ErrorCode::IoError, "cannot write " + p.string());
    f.precision(17);
    return f;
}

std::ifstream open_in(const fs::path& p, std::ios::openmode mode = std::ios::in) {
    std::ifstream f(p, mode);
    if (!f) fail(ErrorCode::IoError, "cannot read " + p.string());
    return f;
}

void write_doubles(const fs::path& p, const std::vector<double>& v) {
    auto f = open_out(p, std::ios::binary);
    f.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> read_doubles(const fs::path& p, std::size_t n) {
    auto f = open_in(p, std::ios::binary);
    std::vector<double> v(n);
    f.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (static_cast<std::size_t>(f.gcount()) != n * sizeof(double)) fail(ErrorCode::IoError, "short read in " + p.string());
    return v;
}

std::vector<double> split_reals(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

nlohmann::json grid_json(const Grid1D& g) { return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_points", g.n_points}}; }

Grid1D grid_from(const nlohmann::json& j) {
    return Grid1D::make(j.at("x_min").get<double>(), j.at("x_max").get<double>(), j.at("n_points").get<std::size_t>());
}

ModulationState mod_from(const nlohmann::json& j) {
    ModulationState m;
    m.t = j.at("t");
    m.tau = j.at("tau");
    m.xi = j.at("xi");
    m.kappa = j.at("kappa");
    m.tau_dot = j.at("tau_dot");
    m.xi_dot = j.at("xi_dot");
    m.kappa_dot = j.at("kappa_dot");
    return m;
}

Jet jet_from(const nlohmann::json& j) {
    Jet out{};
    for (std::size_t k = 0; k < out.size() && k < j.size(); ++k) out[k] = j[k].get<double>();
    return out;
}

StopReason stop_from(const std::string& s) {
    for (StopReason r : {StopReason::StopSlope, StopReason::TMax, StopReason::SMax, StopReason::Callback})
        if (to_string(r) == s) return r;
    fail(ErrorCode::IoError, "unknown stop reason '" + s + "'");
}

const char* kRecordHeader =
    "step,t,n_points,dt,tau,xi,kappa,tau_dot,xi_dot,kappa_dot,s,"
    "J0,J1,J2,J3,J4,J5,J6,J7,J8,J9,H0,H1,H2,H3,H4,H5,H6,H7,H8,H9,l2,max_slope,max_abs,spectral_tail";

}  // namespace

nlohmann::json to_json(const ModulationState& m) {
    return {{"t", m.t},           {"tau", m.tau},       {"xi", m.xi},
            {"kappa", m.kappa},   {"tau_dot", m.tau_dot}, {"xi_dot", m.xi_dot},
            {"kappa_dot", m.kappa_dot}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
    auto f = open_in(path);
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::IoError, path + ": " + e.what());
    }
}

void write_trajectory(const std::string& dir, const Trajectory& tr) {
    const fs::path root(dir);
    fs::create_directories(root / "frames");
    fs::create_directories(root / "fields");

    {
        auto f = open_out(root / "records.csv");
        f << kRecordHeader << '\n';
        for (const auto& r : tr.records) {
            f << r.step << ',' << r.t << ',' << r.n_points << ',' << r.dt << ',' << r.mod.tau << ',' << r.mod.xi << ','
              << r.mod.kappa << ',' << r.mod.tau_dot << ',' << r.mod.xi_dot << ',' << r.mod.kappa_dot << ',' << r.s;
            for (double v : r.jet) f << ',' << v;
            for (double v : r.hilbert) f << ',' << v;
            f << ',' << r.l2 << ',' << r.max_slope << ',' << r.max_abs << ',' << r.spectral_tail << '\n';
        }
    }

    nlohmann::json ledger = nlohmann::json::array();
    for (const auto& r : tr.records) ledger.push_back({r.t, r.mod.tau, r.mod.xi, r.mod.kappa, r.s});
    write_json((root / "modulation.json").string(),
               {{"t0", tr.t0},
                {"stop", to_string(tr.stop)},
                {"refine_times", tr.refine_times},
                {"speed_bound", tr.speed_bound},
                {"l2_initial", tr.l2_initial},
                {"columns", {"t", "tau", "xi", "kappa", "s"}},
                {"ledger", ledger}});

    nlohmann::json frames = nlohmann::json::array();
    for (std::size_t i = 0; i < tr.frames.size(); ++i) {
        const auto& fr = tr.frames[i];
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.csv", i);
        auto f = open_out(root / "frames" / name);
        f << "X,U,dU,HU\n";
        const auto& g = fr.U.grid();
        for (std::size_t k = 0; k < g.n_points; ++k)
            f << g.x(k) << ',' << fr.U[k] << ',' << (k < fr.dU.size() ? fr.dU[k] : 0.0) << ','
              << (k < fr.HU.size() ? fr.HU[k] : 0.0) << '\n';
        frames.push_back({{"file", std::string("frames/") + name},
                          {"s", fr.s},
                          {"mod", to_json(fr.mod)},
                          {"grid", grid_json(g)},
                          {"origin_jet", fr.origin_jet},
                          {"origin_hilbert", fr.origin_hilbert},
                          {"nu_estimate", fr.nu_estimate}});
    }
    write_json((root / "frames.json").string(), frames);

    nlohmann::json fields = nlohmann::json::object();
    nlohmann::json snaps = nlohmann::json::array();
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%03zu.bin", i);
        write_doubles(root / "fields" / name, tr.snapshots[i].values());
        snaps.push_back({{"file", std::string("fields/") + name},
                         {"record", i < tr.snapshot_records.size() ? tr.snapshot_records[i] : 0},
                         {"time", tr.snapshots[i].meta().time},
                         {"grid", grid_json(tr.snapshots[i].grid())}});
    }
    fields["snapshots"] = snaps;
    if (tr.final_field.size()) {
        write_doubles(root / "fields" / "final.bin", tr.final_field.values());
        fields["final"] = {{"file", "fields/final.bin"},
                           {"time", tr.final_field.meta().time},
                           {"grid", grid_json(tr.final_field.grid())}};
    }
    write_json((root / "fields.json").string(), fields);
}

Trajectory read_trajectory(const std::string& dir) {
    const fs::path root(dir);
    Trajectory tr;
    const auto meta = read_json((root / "modulation.json").string());
    tr.t0 = meta.at("t0");
    tr.stop = stop_from(meta.at("stop"));
    tr.refine_times = meta.at("refine_times").get<std::vector<double>>();
    tr.speed_bound = meta.at("speed_bound");
    tr.l2_initial = meta.at("l2_initial");

    {
        auto f = open_in(root / "records.csv");
        std::string line;
        std::getline(f, line);
        if (line != kRecordHeader) fail(ErrorCode::IoError, "records.csv: unexpected header");
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            const auto v = split_reals(line);
            if (v.size() != 35) fail(ErrorCode::IoError, "records.csv: bad row");
            TrajectoryRecord r;
            r.step = static_cast<std::size_t>(v[0]);
            r.t = v[1];
            r.n_points = static_cast<std::size_t>(v[2]);
            r.dt = v[3];
            r.mod.t = r.t;
            r.mod.tau = v[4];
            r.mod.xi = v[5];
            r.mod.kappa = v[6];
            r.mod.tau_dot = v[7];
            r.mod.xi_dot = v[8];
            r.mod.kappa_dot = v[9];
            r.s = v[10];
            for (int k = 0; k < 10; ++k) r.jet[k] = v[11 + k];
            for (int k = 0; k < 10; ++k) r.hilbert[k] = v[21 + k];
            r.l2 = v[31];
            r.max_slope = v[32];
            r.max_abs = v[33];
            r.spectral_tail = v[34];
            tr.records.push_back(r);
        }
    }

    for (const auto& fj : read_json((root / "frames.json").string())) {
        SelfSimilarFrame fr;
        fr.s = fj.at("s");
        fr.mod = mod_from(fj.at("mod"));
        fr.origin_jet = jet_from(fj.at("origin_jet"));
        fr.origin_hilbert = jet_from(fj.at("origin_hilbert"));
        fr.nu_estimate = fj.at("nu_estimate");
        const Grid1D g = grid_from(fj.at("grid"));
        auto f = open_in(root / fj.at("file").get<std::string>());
        std::string line;
        std::getline(f, line);
        std::vector<double> U, dU, HU;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            const auto v = split_reals(line);
            if (v.size() != 4) fail(ErrorCode::IoError, "frame csv: bad row");
            U.push_back(v[1]);
            dU.push_back(v[2]);
            HU.push_back(v[3]);
        }
        fr.U = Field(g, std::move(U));
        fr.dU = std::move(dU);
        fr.HU = std::move(HU);
        tr.frames.push_back(std::move(fr));
    }

    const auto fields = read_json((root / "fields.json").string());
    for (const auto& sj : fields.at("snapshots")) {
        const Grid1D g = grid_from(sj.at("grid"));
        tr.snapshots.emplace_back(g, read_doubles(root / sj.at("file").get<std::string>(), g.n_points),
                                  FieldMeta{"snapshot", sj.at("time").get<double>()});
        tr.snapshot_records.push_back(sj.at("record").get<std::size_t>());
    }
    if (fields.contains("final")) {
        const auto& fj = fields.at("final");
        const Grid1D g = grid_from(fj.at("grid"));
        tr.final_field = Field(g, read_doubles(root / fj.at("file").get<std::string>(), g.n_points),
                               FieldMeta{"final", fj.at("time").get<double>()});
    }
    return tr;
}

nlohmann::json to_json(const ShootCheckpoint& c) {
    nlohmann::json j = {{"n", c.n},
                        {"s", c.s},
                        {"alpha", c.alpha},
                        {"beta", c.beta},
                        {"r2", c.r2},
                        {"r3", c.r3},
                        {"jacobian", {{c.jacobian[0][0], c.jacobian[0][1]}, {c.jacobian[1][0], c.jacobian[1][1]}}},
                        {"det", c.det},
                        {"newton_iters", c.newton_iters},
                        {"step_alpha", c.step_alpha},
                        {"step_beta", c.step_beta},
                        {"step_norm", c.step_norm},
                        {"trust_alpha", c.trust_alpha},
                        {"trust_beta", c.trust_beta},
                        {"residual_norms", c.residual_norms},
                        {"error_ratios", c.error_ratios}};
    j["fd_disagreement"] = c.fd_disagreement >= 0.0 ? nlohmann::json(c.fd_disagreement) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const ShootTrace& tr) {
    nlohmann::json cps = nlohmann::json::array();
    for (const auto& c : tr.checkpoints) cps.push_back(to_json(c));
    return {{"alpha_star", tr.alpha_star}, {"beta_star", tr.beta_star}, {"refine_times", tr.refine_times},
            {"speed_bound", tr.speed_bound}, {"runs", tr.runs},           {"checkpoints", cps}};
}

}  // namespace bhlab
