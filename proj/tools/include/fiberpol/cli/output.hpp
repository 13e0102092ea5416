#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fiberpol/cli/config.hpp"

namespace fiberpol::cli {

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

/// Comma-separated, header line first, '\n' line endings; strings are quoted
/// only when they contain a comma, quote or newline.
std::string to_csv(const Table& table);

/// Array of objects keyed by column name, in column order. Non-finite
/// numbers become null.
nlohmann::ordered_json to_json_rows(const Table& table);

/// All writes of one invocation. File names are plain names inside the
/// output directory; anything else is rejected. Every file gets a
/// "<name>.meta.json" sidecar carrying the resolved config and its hash.
class OutputDir {
 public:
  OutputDir(const RunConfig& cfg, std::string subcommand);

  const std::filesystem::path& path() const noexcept { return root_; }
  const std::vector<std::string>& written() const noexcept { return written_; }

  void write(const std::string& name, std::string_view bytes);
  void write_json(const std::string& name, const nlohmann::ordered_json& doc);
  /// One file per configured format: <stem>.csv and/or <stem>.json.
  void write_table(const std::string& stem, const Table& table);

  bool has_format(Format f) const;

 private:
  std::filesystem::path root_;
  std::string subcommand_;
  std::string hash_;
  nlohmann::json config_;
  std::vector<Format> formats_;
  std::vector<std::string> written_;

  void put(const std::string& name, std::string_view bytes);
};

}  // namespace fiberpol::cli
