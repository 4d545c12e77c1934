#pragma once

// JSON file helpers shared by the loaders. Errors name the offending field or line.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "misosec/error.hpp"

namespace misosec::detail {

using json = nlohmann::json;

inline const json& field(const json& obj, const std::string& name, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, "expected a JSON object");
  const auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(where + "." + name, "missing field");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where, "non-finite number");
  return v;
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    const std::string text = buf.str();
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ParseError(path.string() + ":" + std::to_string(line), e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
}

}  // namespace misosec::detail
