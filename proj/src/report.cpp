#include "chebeatty/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chebeatty/error.hpp"

namespace chebeatty::report {
namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  raise(ErrorCode::InvalidArgument, "unknown format '" + text + "' (expected csv or json)");
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["ctx"] = ctx;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["tau"] = tau;
  j["max_precision"] = max_precision;
  j["max_x"] = max_x;
  j["max_n"] = max_n;
  j["bv_max_x"] = bv_max_x;
  j["max_counters"] = max_counters;
  j["format"] = report::to_string(format);
  j["A"] = A;
  j["checkpoints"] = checkpoints;
  j["workers"] = workers;
  j["out_dir"] = out_dir;
  j["args"] = args;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) raise(ErrorCode::ParseError, "config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "schema_version") {
        c.schema_version = v.get<int>();
      } else if (key == "command") {
        c.command = v.get<std::string>();
      } else if (key == "ctx") {
        c.ctx = v.get<std::string>();
      } else if (key == "alpha") {
        c.alpha = v.get<std::string>();
      } else if (key == "beta") {
        c.beta = v.get<std::string>();
      } else if (key == "tau") {
        c.tau = v.is_string() ? v.get<std::string>() : v.dump();
      } else if (key == "max_precision") {
        c.max_precision = v.get<long>();
      } else if (key == "max_x") {
        c.max_x = v.get<std::uint64_t>();
      } else if (key == "max_n") {
        c.max_n = v.get<std::uint64_t>();
      } else if (key == "bv_max_x") {
        c.bv_max_x = v.get<std::uint64_t>();
      } else if (key == "max_counters") {
        c.max_counters = v.get<std::uint64_t>();
      } else if (key == "format") {
        c.format = parse_format(v.get<std::string>());
      } else if (key == "A") {
        c.A = v.get<double>();
      } else if (key == "checkpoints") {
        c.checkpoints = v.get<std::vector<std::uint64_t>>();
      } else if (key == "workers") {
        c.workers = v.get<unsigned>();
      } else if (key == "out_dir") {
        c.out_dir = v.get<std::string>();
      } else if (key == "args") {
        c.args = nlohmann::ordered_json(v);
      } else {
        raise(ErrorCode::ParseError, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, std::string("bad config value: ") + e.what());
  }
  if (c.schema_version != 1) {
    raise(ErrorCode::ParseError, "unsupported config schema_version " + std::to_string(c.schema_version));
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ParseError, "cannot read config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, path + ": " + e.what());
  }
  return from_json(j);
}

void RunConfig::validate() const {
  if (max_precision < 64) raise(ErrorCode::InvalidArgument, "max_precision must be at least 64");
  if (max_x == 0 || max_n == 0 || bv_max_x == 0 || max_counters == 0) {
    raise(ErrorCode::InvalidArgument, "budgets must be positive");
  }
  if (!(A > 0.0)) raise(ErrorCode::InvalidArgument, "A must be positive");
}

std::string density(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

std::string number(double v, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

std::string complex(std::complex<double> z) {
  return "[" + number(z.real()) + "," + number(z.imag()) + "]";
}

nlohmann::ordered_json complex_json(std::complex<double> z) {
  return nlohmann::ordered_json::array(
      {std::stod(number(z.real())), std::stod(number(z.imag()))});
}

std::string to_csv(const Table& t, const RunConfig& cfg) {
  std::ostringstream out;
  out << "# format_version: " << kFormatVersion << "\n";
  out << "# config: " << cfg.to_json().dump() << "\n";
  for (const auto& n : t.notes) out << "# " << n << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << csv_cell(t.header[i]);
  out << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
    out << "\n";
  }
  return out.str();
}

std::string to_json(const nlohmann::ordered_json& result, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["format_version"] = kFormatVersion;
  j["config"] = cfg.to_json();
  j["result"] = result;
  return j.dump(2) + "\n";
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& content) {
  if (cfg.out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = std::filesystem::path(cfg.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << content;
}

}  // namespace chebeatty::report
