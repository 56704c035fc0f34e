#pragma once

// CSV and JSON serialization. Every floating-point value is written with 17
// significant digits so that files round-trip exactly.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qs2l/contour.hpp"
#include "qs2l/dynamics.hpp"
#include "qs2l/spectrum.hpp"

namespace qs2l::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

std::string format_double(double v);

/// JSON text with doubles printed as %.17g, two-space indentation.
std::string dump(const json& j);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

json params_json(const LayerParams& p);
LayerParams params_from_json(const json& j);

std::string spectrum_csv(const std::vector<spectrum::SpectrumRow>& rows);
json spectrum_json(const std::vector<spectrum::SpectrumRow>& rows);

std::string collisions_csv(const std::vector<spectrum::CollisionRecord>& records);
json collisions_json(const std::vector<spectrum::CollisionRecord>& records);

json vstate_json(const contour::VStateSolution& sol);
/// Inverse of vstate_json; the deformation is rebuilt on `nodes` samples.
contour::VStateSolution vstate_from_json(const json& j);

/// Rows theta, R1, R2, x1, y1, x2, y2 on the solution's node grid.
std::string boundary_csv(const contour::VStateSolution& sol);

/// Rows layer, node_index, x, y.
std::string snapshot_csv(const dynamics::EvolutionState& state);
/// Inverse of snapshot_csv; throws ConfigError on malformed input.
dynamics::EvolutionState snapshot_from_csv(const std::string& text);

std::string sign_name(spectrum::Branch b);

}  // namespace qs2l::io
