#pragma once

// File formats.
//
// State JSON, basis |00>,|01>,|10>,|11> (Alice first), row-major:
//   {"matrix": [[[re,im], [re,im], [re,im], [re,im]], ... 4 rows]}
//   {"family": "test_state" | "color_noise", "V": v, "theta": t}
//
// Direction set JSON: [[x,y,z], ...] of unit vectors, no two equal up to sign.

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "avn/linalg.hpp"
#include "avn/state.hpp"

namespace avn::io {

using nlohmann::json;

// 12 significant digits, '.' separator, independent of the global locale.
// Negative zero prints as 0. Throws NotFinite for NaN and infinities.
std::string format_number(double value);

// Malformed documents raise ParseError; well-formed but physically invalid
// input raises the state-model error (NotHermitian, NotPositive, ...).
json read_json_file(const std::filesystem::path& path);
json parse_json_text(const std::string& text);

TwoQubitState state_from_json(const json& doc);
TwoQubitState read_state_file(const std::filesystem::path& path);
// Full double precision, so state_from_json(state_to_json(s)) reproduces s.
json state_to_json(const TwoQubitState& state);

std::vector<std::array<double, 3>> directions_from_json(const json& doc);
std::vector<BlochVector> read_direction_file(const std::filesystem::path& path);
json directions_to_json(const std::vector<BlochVector>& dirs);

json bloch_to_json(const BlochVector& v);

// Writes via a sibling temporary file renamed into place; the temporary is
// removed if `emit` throws, so a failed run leaves no partial output.
void write_file_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& emit);

}  // namespace avn::io
