#include "qse/statefile.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

namespace qse {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FileFormatError("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* what) {
  if (!j.is_object()) throw FileFormatError(std::string(what) + ": top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw FileFormatError(std::string(what) + ": unknown field '" + it.key() + "'");
}

SystemLayout parse_layout(const json& j, const char* field) {
  if (!j.is_array() || j.empty())
    throw FileFormatError(std::string(field) + " must be a non-empty array");
  std::vector<Factor> fs;
  for (const auto& f : j) {
    if (!f.is_object() || f.size() != 2 || !f.contains("label") || !f.contains("dim"))
      throw FileFormatError(std::string(field) + " entries must be {label, dim}");
    if (!f["label"].is_string() || !f["dim"].is_number_integer())
      throw FileFormatError(std::string(field) + ": label must be a string, dim an integer");
    fs.push_back(Factor{f["label"].get<std::string>(), f["dim"].get<int>()});
  }
  try {
    return SystemLayout(fs);
  } catch (const ContractError& e) {
    throw FileFormatError(std::string(field) + ": " + e.what());
  }
}

CMat parse_matrix(const json& j, long dim) {
  if (!j.is_array() || static_cast<long>(j.size()) != dim)
    throw FileFormatError("matrix must have total_dim rows");
  CMat m(dim, dim);
  for (long r = 0; r < dim; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<long>(row.size()) != dim)
      throw FileFormatError("matrix row " + std::to_string(r) + " must have total_dim entries");
    for (long c = 0; c < dim; ++c) {
      const auto& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw FileFormatError("matrix entries must be [re, im] pairs");
      m(r, c) = cxd(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

json layout_to_json(const SystemLayout& layout) {
  json out = json::array();
  for (const auto& f : layout.factors())
    out.push_back(json{{"label", f.label}, {"dim", f.dim}});
  return out;
}

State state_from_parsed(const json& j) {
  reject_unknown(j, {"format_version", "layout", "matrix", "comment"}, "state file");
  if (!j.contains("format_version") || !j["format_version"].is_number_integer())
    throw FileFormatError("state file: missing integer format_version");
  if (j["format_version"].get<int>() != 1)
    throw FileFormatError("state file: unsupported format_version " +
                          j["format_version"].dump());
  if (j.contains("comment") && !j["comment"].is_string())
    throw FileFormatError("state file: comment must be a string");
  if (!j.contains("layout") || !j.contains("matrix"))
    throw FileFormatError("state file: layout and matrix are required");
  SystemLayout layout = parse_layout(j["layout"], "layout");
  CMat m = parse_matrix(j["matrix"], layout.total_dim());
  try {
    return State(std::move(layout), std::move(m));
  } catch (const ContractError& e) {
    throw FileFormatError(std::string("state file rejected: ") + e.what());
  }
}

}  // namespace

State state_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FileFormatError(std::string("invalid JSON: ") + e.what());
  }
  return state_from_parsed(j);
}

State load_state_file(const std::string& path) { return state_from_parsed(read_json(path)); }

std::string state_to_json(const State& s, const std::string& comment) {
  json j;
  j["format_version"] = 1;
  if (!comment.empty()) j["comment"] = comment;
  j["layout"] = layout_to_json(s.layout());
  j["matrix"] = matrix_to_json(s.matrix());
  return j.dump(1);
}

void save_state_file(const std::string& path, const State& s, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw FileFormatError("cannot write '" + path + "'");
  out << state_to_json(s, comment) << "\n";
}

void save_channel_file(const std::string& path, const Channel& c, const std::string& comment) {
  json j;
  j["format_version"] = 1;
  if (!comment.empty()) j["comment"] = comment;
  j["input_layout"] = layout_to_json(c.input_layout());
  j["output_layout"] = layout_to_json(c.output_layout());
  j["trace_preserving"] = c.trace_preserving();
  json ks = json::array();
  for (const auto& k : c.kraus()) ks.push_back(matrix_to_json(k));
  j["kraus"] = std::move(ks);
  std::ofstream out(path);
  if (!out) throw FileFormatError("cannot write '" + path + "'");
  out << j.dump(1) << "\n";
}

Channel load_channel_file(const std::string& path) {
  json j = read_json(path);
  reject_unknown(j, {"format_version", "input_layout", "output_layout", "trace_preserving",
                     "kraus", "comment"},
                 "channel file");
  if (!j.contains("format_version") || j["format_version"] != 1)
    throw FileFormatError("channel file: unsupported or missing format_version");
  SystemLayout in = parse_layout(j.at("input_layout"), "input_layout");
  SystemLayout out = parse_layout(j.at("output_layout"), "output_layout");
  if (!j.contains("trace_preserving") || !j["trace_preserving"].is_boolean())
    throw FileFormatError("channel file: trace_preserving must be a boolean");
  if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
    throw FileFormatError("channel file: kraus must be a non-empty array");
  std::vector<CMat> kraus;
  for (const auto& km : j["kraus"]) {
    if (!km.is_array() || static_cast<int>(km.size()) != out.total_dim())
      throw FileFormatError("channel file: each Kraus matrix must be output_dim x input_dim");
    CMat k(out.total_dim(), in.total_dim());
    for (long r = 0; r < k.rows(); ++r) {
      const auto& row = km[r];
      if (!row.is_array() || static_cast<long>(row.size()) != k.cols())
        throw FileFormatError("channel file: each Kraus matrix must be output_dim x input_dim");
      for (long c = 0; c < k.cols(); ++c) {
        const auto& e = row[c];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw FileFormatError("channel file: entries must be [re, im] pairs");
        k(r, c) = cxd(e[0].get<double>(), e[1].get<double>());
      }
    }
    kraus.push_back(std::move(k));
  }
  try {
    return Channel(std::move(in), std::move(out), std::move(kraus),
                   j["trace_preserving"].get<bool>());
  } catch (const ContractError& e) {
    throw FileFormatError(std::string("channel file rejected: ") + e.what());
  }
}

}  // namespace qse
