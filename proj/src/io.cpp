#include "avn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "avn/error.hpp"
#include "avn/inequality.hpp"

namespace avn::io {

std::string format_number(double value) {
  if (!std::isfinite(value)) throw Error(ErrorKind::NotFinite, "cannot serialize a non-finite number", value);
  if (value == 0.0) value = 0.0;
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

namespace {

double number_field(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number())
    throw Error(ErrorKind::ParseError, std::string("state document needs numeric field \"") + key + "\"");
  return doc.at(key).get<double>();
}

}  // namespace

TwoQubitState state_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "state document must be a JSON object");

  if (doc.contains("family")) {
    if (!doc.at("family").is_string()) throw Error(ErrorKind::ParseError, "\"family\" must be a string");
    const std::string family = doc.at("family").get<std::string>();
    const double v = number_field(doc, "V");
    const double theta = number_field(doc, "theta");
    if (family == "test_state") return family_test_state(v, theta);
    if (family == "color_noise") return family_color_noise(v, theta);
    throw Error(ErrorKind::ParseError, "unknown family \"" + family + "\" (expected test_state or color_noise)");
  }

  if (!doc.contains("matrix")) throw Error(ErrorKind::ParseError, "state document needs \"matrix\" or \"family\"");
  const json& rows = doc.at("matrix");
  if (!rows.is_array() || rows.size() != 4) throw Error(ErrorKind::ParseError, "\"matrix\" must have 4 rows");
  ComplexMatrix4 m;
  for (std::size_t i = 0; i < 4; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != 4)
      throw Error(ErrorKind::ParseError, "row " + std::to_string(i) + " must have 4 entries");
    for (std::size_t j = 0; j < 4; ++j) {
      const json& z = row[j];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw Error(ErrorKind::ParseError,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") must be [re, im]");
      m(i, j) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return make_state(m);
}

TwoQubitState read_state_file(const std::filesystem::path& path) { return state_from_json(read_json_file(path)); }

json state_to_json(const TwoQubitState& state) {
  json rows = json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < 4; ++j) row.push_back({state.matrix()(i, j).real(), state.matrix()(i, j).imag()});
    rows.push_back(row);
  }
  return json{{"matrix", rows}};
}

std::vector<std::array<double, 3>> directions_from_json(const json& doc) {
  if (!doc.is_array()) throw Error(ErrorKind::ParseError, "direction set must be a JSON array of [x,y,z]");
  std::vector<std::array<double, 3>> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& t = doc[i];
    if (!t.is_array() || t.size() != 3 || !t[0].is_number() || !t[1].is_number() || !t[2].is_number())
      throw Error(ErrorKind::ParseError, "direction " + std::to_string(i) + " must be [x, y, z]");
    out.push_back({t[0].get<double>(), t[1].get<double>(), t[2].get<double>()});
  }
  return out;
}

std::vector<BlochVector> read_direction_file(const std::filesystem::path& path) {
  const auto raw = directions_from_json(read_json_file(path));
  return validate_direction_set(raw);
}

json bloch_to_json(const BlochVector& v) { return json::array({v.x(), v.y(), v.z()}); }

json directions_to_json(const std::vector<BlochVector>& dirs) {
  json out = json::array();
  for (const auto& d : dirs) out.push_back(bloch_to_json(d));
  return out;
}

void write_file_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& emit) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
      out.imbue(std::locale::classic());
      emit(out);
      out.flush();
      if (!out) throw Error(ErrorKind::InvalidArgument, "write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

}  // namespace avn::io
