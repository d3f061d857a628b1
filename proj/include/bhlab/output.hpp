#pragma once

#include <string>

#include "json.hpp"

#include "bhlab/evolve.hpp"
#include "bhlab/shooting.hpp"

namespace bhlab {

// On-disk trajectory layout (all under one directory):
//   records.csv        one row per extraction (time, modulation, origin jet, norms)
//   modulation.json    run metadata: t0, stop reason, refine times, (t, tau, xi, kappa) ledger
//   frames.json        per-frame metadata; frames/frame_NNNN.csv holds X, U, dU, HU
//   fields.json        snapshot metadata; fields/*.bin are raw little-endian doubles
// Everything is written at round-trip precision so diagnose reproduces the report.
void write_trajectory(const std::string& dir, const Trajectory& tr);
Trajectory read_trajectory(const std::string& dir);

nlohmann::json to_json(const ModulationState& m);
nlohmann::json to_json(const ShootCheckpoint& c);
nlohmann::json to_json(const ShootTrace& tr);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace bhlab
