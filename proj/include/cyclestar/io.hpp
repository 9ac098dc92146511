#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cyclestar/instance.hpp"
#include "json.hpp"

namespace cyclestar {

// 17 significant digits: parsing the text recovers the exact double.
inline std::string format_decimal(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline void append_vector(std::string& out, const std::vector<double>& v) {
  out += '[';
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += format_decimal(v[k]);
  }
  out += ']';
}

inline void append_matrix(std::string& out, const Matrix& m, const char* indent) {
  out += "[\n";
  for (std::size_t r = 0; r < m.size(); ++r) {
    out += indent;
    append_vector(out, m[r]);
    if (r + 1 < m.size()) out += ',';
    out += '\n';
  }
  out += "  ]";
}

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw std::runtime_error(std::string("missing field '") + name + "'");
  return *it;
}

inline double number_field(const nlohmann::json& j, const char* where) {
  if (!j.is_number()) throw std::runtime_error(std::string("expected a number in ") + where);
  return j.get<double>();
}

inline std::vector<double> vector_field(const nlohmann::json& j, const char* where) {
  if (!j.is_array()) throw std::runtime_error(std::string("expected an array in ") + where);
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(number_field(x, where));
  return v;
}

inline Matrix matrix_field(const nlohmann::json& j, const char* where) {
  if (!j.is_array()) throw std::runtime_error(std::string("expected an array in ") + where);
  Matrix m;
  m.reserve(j.size());
  for (const auto& row : j) m.push_back(vector_field(row, where));
  return m;
}

}  // namespace detail

inline std::string instance_to_json(const Instance& inst) {
  std::string out;
  out += "{\n";
  out += "  \"h\": " + std::to_string(inst.cycle.h) + ",\n";
  out += "  \"edge_lengths\": ";
  detail::append_vector(out, inst.cycle.edge_lengths);
  out += ",\n";
  out += "  \"n\": " + std::to_string(inst.n) + ",\n";
  out += "  \"spoke_costs\": ";
  detail::append_matrix(out, inst.spoke_costs, "    ");
  out += ",\n";
  out += "  \"flows\": ";
  detail::append_matrix(out, inst.flows, "    ");
  out += "\n}\n";
  return out;
}

inline Instance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("instance parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("instance parse error: top level is not an object");
  Instance inst;
  const auto& jh = detail::require_field(j, "h");
  if (!jh.is_number_integer()) throw std::runtime_error("field 'h' must be an integer");
  inst.cycle.h = jh.get<int>();
  inst.cycle.edge_lengths = detail::vector_field(detail::require_field(j, "edge_lengths"), "edge_lengths");
  const auto& jn = detail::require_field(j, "n");
  if (!jn.is_number_integer()) throw std::runtime_error("field 'n' must be an integer");
  inst.n = jn.get<int>();
  inst.spoke_costs = detail::matrix_field(detail::require_field(j, "spoke_costs"), "spoke_costs");
  inst.flows = detail::matrix_field(detail::require_field(j, "flows"), "flows");
  const auto report = validate_instance(inst);
  if (!report.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& line : report) msg += "\n  " + line;
    throw std::runtime_error(msg);
  }
  return inst;
}

inline Instance read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

inline void write_instance(const Instance& inst, const std::string& path) {
  const auto report = validate_instance(inst);
  if (!report.empty()) {
    std::string msg = "refusing to write invalid instance:";
    for (const auto& line : report) msg += "\n  " + line;
    throw std::runtime_error(msg);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << instance_to_json(inst);
  out.flush();
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace cyclestar
