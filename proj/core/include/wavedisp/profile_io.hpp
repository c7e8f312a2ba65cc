#pragma once

#include <string>
#include <vector>

#include "wavedisp/shear.hpp"

namespace wavedisp::io {

/// Declarative profile description, JSON round-trippable. `type` is one of
/// the builtin names or "polynomial"/"linear" with explicit parameters.
struct ProfileSpec {
  std::string type = "quiescent";
  double froude_sq = 0.05;  // JSON field "F2", required
  std::vector<double> cx, cy;  // polynomial coefficients, lowest degree first
  double linear_a = 0.0, linear_b = 0.0;
  std::string name;  // defaults to type
};

/// Schema violations throw std::invalid_argument naming the offending field.
ProfileSpec parse_profile_spec(const std::string& json_text);
std::string profile_spec_to_json(const ProfileSpec& spec);

ProfileSpec read_profile_spec(const std::string& path);
void write_profile_spec(const std::string& path, const ProfileSpec& spec);

shear::ShearProfile make_profile(const ProfileSpec& spec);

/// Column-labelled numeric table; the CSV form writes 17 significant digits
/// so a re-parse reproduces every value bit-exactly.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string csv_number(double x);
std::string table_to_csv(const CsvTable& table);
CsvTable csv_to_table(const std::string& text);

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace wavedisp::io
