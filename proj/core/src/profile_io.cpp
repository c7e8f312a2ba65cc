#include "wavedisp/profile_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wavedisp::io {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok)
    throw std::invalid_argument("profile spec: field \"" + field + "\" " + why);
}

}  // namespace

ProfileSpec parse_profile_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("profile spec: not valid JSON: ") +
                                e.what());
  }
  require(j.is_object(), "<root>", "must be a JSON object");
  require(j.contains("type") && j["type"].is_string(), "type",
          "is required and must be a string");
  require(j.contains("F2"), "F2", "is required");
  require(j["F2"].is_number() && j["F2"].get<double>() > 0.0, "F2",
          "must be a positive number");

  ProfileSpec spec;
  spec.type = j["type"].get<std::string>();
  spec.froude_sq = j["F2"].get<double>();
  spec.name = j.value("name", spec.type);

  if (spec.type == "polynomial") {
    require(j.contains("cx") || j.contains("cy"), "cx",
            "or \"cy\" is required for polynomial profiles");
    if (j.contains("cx")) {
      require(j["cx"].is_array(), "cx", "must be an array of numbers");
      spec.cx = j["cx"].get<std::vector<double>>();
    }
    if (j.contains("cy")) {
      require(j["cy"].is_array(), "cy", "must be an array of numbers");
      spec.cy = j["cy"].get<std::vector<double>>();
    }
  } else if (spec.type == "linear") {
    require(j.contains("a") && j["a"].is_number(), "a",
            "is required for linear profiles");
    spec.linear_a = j["a"].get<double>();
    spec.linear_b = j.value("b", 0.0);
  } else if (spec.type != "UT" && spec.type != "quiescent") {
    throw std::invalid_argument("profile spec: field \"type\" has unknown value \"" +
                                spec.type + "\"");
  }
  return spec;
}

std::string profile_spec_to_json(const ProfileSpec& spec) {
  nlohmann::json j;
  j["type"] = spec.type;
  j["F2"] = spec.froude_sq;
  j["name"] = spec.name.empty() ? spec.type : spec.name;
  if (spec.type == "polynomial") {
    j["cx"] = spec.cx;
    j["cy"] = spec.cy;
  } else if (spec.type == "linear") {
    j["a"] = spec.linear_a;
    j["b"] = spec.linear_b;
  }
  return j.dump(2);
}

ProfileSpec read_profile_spec(const std::string& path) {
  return parse_profile_spec(read_text_file(path));
}

void write_profile_spec(const std::string& path, const ProfileSpec& spec) {
  write_text_file(path, profile_spec_to_json(spec) + "\n");
}

shear::ShearProfile make_profile(const ProfileSpec& spec) {
  shear::ShearProfile p;
  if (spec.type == "polynomial") {
    p = shear::make_polynomial_profile(spec.cx, spec.cy, spec.froude_sq,
                                       spec.name.empty() ? "polynomial"
                                                         : spec.name);
  } else if (spec.type == "linear") {
    p = shear::linear_profile(spec.linear_a, spec.linear_b, spec.froude_sq);
  } else {
    p = shear::builtin_profile(spec.type, spec.froude_sq);
  }
  if (!spec.name.empty()) p.name = spec.name;
  return p;
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string table_to_csv(const CsvTable& table) {
  std::ostringstream out;
  for (size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("table_to_csv: row width mismatch");
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_number(row[i]);
    out << '\n';
  }
  return out.str();
}

CsvTable csv_to_table(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("csv_to_table: empty input");
  std::istringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row_in(line);
    std::vector<double> row;
    while (std::getline(row_in, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != table.columns.size())
      throw std::invalid_argument("csv_to_table: row width mismatch");
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
  write_text_file(path, table_to_csv(table));
}

CsvTable read_csv(const std::string& path) {
  return csv_to_table(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace wavedisp::io
