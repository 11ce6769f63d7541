#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace chebeatty::report {

inline constexpr int kFormatVersion = 1;

enum class Format { Csv, Json };

std::string to_string(Format f);
Format parse_format(const std::string& text);

// Resolved settings shared by every subcommand. Reports embed it verbatim.
struct RunConfig {
  int schema_version = 1;
  std::string command;
  std::string ctx = "s3_x3m2";
  std::string alpha = "pi";
  std::string beta = "0";
  std::string tau = "1";
  long max_precision = 4096;
  std::uint64_t max_x = 1'000'000'000;
  std::uint64_t max_n = 50'000'000;
  std::uint64_t bv_max_x = 10'000'000;
  std::uint64_t max_counters = 100'000'000;
  Format format = Format::Csv;
  double A = 2.0;
  std::vector<std::uint64_t> checkpoints;
  unsigned workers = 1;
  std::string out_dir;
  nlohmann::ordered_json args = nlohmann::ordered_json::object();  // subcommand arguments

  nlohmann::ordered_json to_json() const;
  // Rejects unknown keys and a wrong schema version.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  // Budgets and A positive, max_precision at least 64.
  void validate() const;
};

// Fixed numeric formats.
std::string density(double v);                    // 5 decimals
std::string number(double v, int significant = 12);
std::string complex(std::complex<double> z);      // [re,im], 12 significant digits
nlohmann::ordered_json complex_json(std::complex<double> z);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
};

// '#' lines with the format version, the config and the notes, then the rows.
std::string to_csv(const Table& t, const RunConfig& cfg);

// {"format_version", "config", "result"}.
std::string to_json(const nlohmann::ordered_json& result, const RunConfig& cfg);

// Writes to out_dir/name when an output directory is configured, otherwise
// to standard output.
void emit(const RunConfig& cfg, const std::string& name, const std::string& content);

}  // namespace chebeatty::report
