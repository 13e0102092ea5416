#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fiberpol/nlse.hpp"
#include "fiberpol/sweep.hpp"

namespace fiberpol::cli {

enum class Format { Csv, Json };

struct NlseRun {
  NlseParams params;
  std::string initial = "ground";  // "ground" or "uniform"
  double ground_tol = 1e-12;
  double dt = 1e-3;
  long steps = 1000;
  long sample_every = 10;
};

struct EdRun {
  std::vector<int> sizes{4, 6};
  std::vector<double> ratios{1, 2, 3, 4, 5, 6, 7, 8};
  int n_max = 4;
  bool periodic = true;
};

struct OutputSpec {
  std::filesystem::path directory = "fiberpol-out";
  std::vector<Format> formats{Format::Csv};
  bool emit_plot_script = false;
};

struct RunConfig {
  OpticalConfig optics = OpticalConfig::baseline();
  GridSpec sweep;  // sweep.base mirrors optics
  std::pair<double, double> crossing_bracket{0.9, 1.2};
  NlseRun nlse;
  EdRun ed;
  OutputSpec output;
  // One line per field that was filled in rather than read from the file.
  std::vector<std::string> provenance;
};

/// Throws ParseError (syntax, types, bounds) or UnknownKey.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view text, std::string_view origin = "<config>");

/// Every resolved setting except the output directory, with sorted keys.
nlohmann::json resolved_json(const RunConfig& cfg);

/// SHA-256 of resolved_json(cfg).dump(), lowercase hex.
std::string config_hash(const RunConfig& cfg);

std::string sha256_hex(std::string_view bytes);

std::string_view to_string(Format format) noexcept;

}  // namespace fiberpol::cli
