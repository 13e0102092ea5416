#include "fiberpol/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "fiberpol/errors.hpp"

namespace fiberpol::cli {

namespace {

constexpr std::string_view kGenerator = "fiberpol 1.0.0";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string render(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const long* i = std::get_if<long>(&cell)) return std::to_string(*i);
  return csv_field(std::get<std::string>(cell));
}

bool plain_name(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  return name.find_first_of("/\\") == std::string::npos && name.find('\0') == std::string::npos;
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width mismatch");
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_field(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += render(row[c]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json_rows(const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const Cell& cell = row[c];
      if (const double* d = std::get_if<double>(&cell)) {
        obj[table.columns[c]] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(nullptr);
      } else if (const long* i = std::get_if<long>(&cell)) {
        obj[table.columns[c]] = *i;
      } else {
        obj[table.columns[c]] = std::get<std::string>(cell);
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

OutputDir::OutputDir(const RunConfig& cfg, std::string subcommand)
    : root_(cfg.output.directory),
      subcommand_(std::move(subcommand)),
      hash_(config_hash(cfg)),
      config_(resolved_json(cfg)),
      formats_(cfg.output.formats) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec || !std::filesystem::is_directory(root_))
    throw ConfigError(fmt::format("cannot create output directory {}", root_.string()));
}

bool OutputDir::has_format(Format f) const {
  return std::find(formats_.begin(), formats_.end(), f) != formats_.end();
}

void OutputDir::put(const std::string& name, std::string_view bytes) {
  if (!plain_name(name)) throw ConfigError(fmt::format("refusing to write '{}' outside the output directory", name));
  const std::filesystem::path target = root_ / name;
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw ConfigError(fmt::format("cannot write {}", target.string()));
  written_.push_back(name);
}

void OutputDir::write(const std::string& name, std::string_view bytes) {
  put(name, bytes);
  nlohmann::ordered_json meta;
  meta["file"] = name;
  meta["generator"] = kGenerator;
  meta["subcommand"] = subcommand_;
  meta["config_hash"] = hash_;
  meta["content_sha256"] = sha256_hex(bytes);
  meta["config"] = config_;
  put(name + ".meta.json", meta.dump(2) + "\n");
}

void OutputDir::write_json(const std::string& name, const nlohmann::ordered_json& doc) {
  write(name, doc.dump(2) + "\n");
}

void OutputDir::write_table(const std::string& stem, const Table& table) {
  if (has_format(Format::Csv)) write(stem + ".csv", to_csv(table));
  if (has_format(Format::Json)) write_json(stem + ".json", to_json_rows(table));
}

}  // namespace fiberpol::cli
