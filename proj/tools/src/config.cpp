#include "fiberpol/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "fiberpol/errors.hpp"

namespace fiberpol::cli {

using nlohmann::json;

namespace {

std::string show(double x) { return fmt::format("{}", x); }

// Reads one JSON object, remembering which keys were consumed so the rest
// can be reported as unknown.
class Section {
 public:
  Section(const json* node, std::string path, std::vector<std::string>& provenance)
      : node_(node), path_(std::move(path)), provenance_(provenance) {
    if (node_ && !node_->is_object()) throw ParseError(path_ + ": expected an object");
  }

  const json* find(const std::string& key) {
    known_.push_back(key);
    if (!node_) return nullptr;
    auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }

  void defaulted(const std::string& key, const std::string& value) {
    provenance_.push_back(fmt::format("{} = {} (default)", field(key), value));
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    if (!v) {
      defaulted(key, show(fallback));
      return fallback;
    }
    return as_number(*v, field(key));
  }

  long integer(const std::string& key, long fallback) {
    const json* v = find(key);
    if (!v) {
      defaulted(key, std::to_string(fallback));
      return fallback;
    }
    return as_integer(*v, field(key));
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) {
      defaulted(key, fallback ? "true" : "false");
      return fallback;
    }
    if (!v->is_boolean()) throw ParseError(field(key) + ": expected true or false");
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) {
      defaulted(key, fallback);
      return fallback;
    }
    if (!v->is_string()) throw ParseError(field(key) + ": expected a string");
    return v->get<std::string>();
  }

  void reject_unknown() const {
    if (!node_) return;
    for (const auto& [key, value] : node_->items())
      if (std::find(known_.begin(), known_.end(), key) == known_.end()) throw UnknownKey(path_ + "." + key);
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(where + ": not finite");
    return x;
  }

  static long as_integer(const json& v, const std::string& where) {
    if (v.is_number_integer()) return v.get<long>();
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long>(x);
    }
    throw ParseError(where + ": expected an integer");
  }

 private:
  const json* node_;
  std::string path_;
  std::vector<std::string>& provenance_;
  std::vector<std::string> known_;
};

AxisRange read_range(Section& s, const std::string& key, const AxisRange& fallback) {
  const json* v = s.find(key);
  if (!v) {
    s.defaulted(key, fmt::format("[{}, {}, {}]", show(fallback.min), show(fallback.max), fallback.count));
    return fallback;
  }
  const std::string where = s.field(key);
  if (!v->is_array() || v->size() != 3) throw ParseError(where + ": expected [min, max, count]");
  AxisRange r;
  r.min = Section::as_number((*v)[0], where + "[0]");
  r.max = Section::as_number((*v)[1], where + "[1]");
  const long count = Section::as_integer((*v)[2], where + "[2]");
  if (count < 2 || count > 100000) throw ParseError(where + ": count must lie in [2, 100000]");
  r.count = static_cast<int>(count);
  if (!(r.min < r.max)) throw ParseError(where + ": min must be below max");
  return r;
}

std::pair<double, double> read_pair(Section& s, const std::string& key, std::pair<double, double> fallback) {
  const json* v = s.find(key);
  if (!v) {
    s.defaulted(key, fmt::format("[{}, {}]", show(fallback.first), show(fallback.second)));
    return fallback;
  }
  const std::string where = s.field(key);
  if (!v->is_array() || v->size() != 2) throw ParseError(where + ": expected [lo, hi]");
  return {Section::as_number((*v)[0], where + "[0]"), Section::as_number((*v)[1], where + "[1]")};
}

template <class T, class Convert>
std::vector<T> read_list(Section& s, const std::string& key, const std::vector<T>& fallback, Convert convert,
                         std::string shown) {
  const json* v = s.find(key);
  if (!v) {
    s.defaulted(key, shown);
    return fallback;
  }
  const std::string where = s.field(key);
  if (!v->is_array() || v->empty()) throw ParseError(where + ": expected a non-empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v->size(); ++i) out.push_back(convert((*v)[i], fmt::format("{}[{}]", where, i)));
  return out;
}

void require(bool ok, const std::string& where, std::string_view what) {
  if (!ok) throw ParseError(fmt::format("{}: {}", where, what));
}

void read_optics(const json* node, RunConfig& cfg) {
  Section s(node, "optics", cfg.provenance);
  OpticalConfig& o = cfg.optics;
  const OpticalConfig d = OpticalConfig::baseline();
  o.gamma_total = s.number("gamma_total", d.gamma_total);
  o.gamma_1d_ratio = s.number("gamma_1d_ratio", d.gamma_1d_ratio);
  o.delta0 = s.number("delta0", d.delta0);
  o.delta_small = s.number("delta_small", d.delta_small);
  o.delta_p = s.number("delta_p", d.delta_p);
  o.omega = s.number("omega", d.omega);
  o.n0 = s.number("n0", d.n0);
  o.n1_fraction = s.number("n1_fraction", d.n1_fraction);
  o.n_ph = s.number("n_ph", d.n_ph);
  o.delta_omega = s.number("delta_omega", d.delta_omega);
  o.v = s.number("v", d.v);
  o.fiber_length = s.number("fiber_length", d.fiber_length);
  s.reject_unknown();

  require(o.gamma_total > 0, "optics.gamma_total", "must be positive");
  require(o.gamma_1d_ratio > 0 && o.gamma_1d_ratio <= 1, "optics.gamma_1d_ratio", "must lie in (0, 1]");
  require(o.n0 > 0, "optics.n0", "must be positive");
  require(o.n1_fraction >= 0 && o.n1_fraction < 1, "optics.n1_fraction", "must lie in [0, 1)");
  require(o.n_ph > 0, "optics.n_ph", "must be positive");
  require(o.v > 0, "optics.v", "must be positive");
  require(o.fiber_length > 0, "optics.fiber_length", "must be positive");
  require(o.omega > 0, "optics.omega", "must be positive");
  require(o.delta0 != 0, "optics.delta0", "must be non-zero");
}

void read_sweep(const json* node, RunConfig& cfg) {
  Section s(node, "sweep", cfg.provenance);
  const GridSpec d;
  cfg.sweep.delta_p = read_range(s, "delta_p_range", d.delta_p);
  cfg.sweep.omega = read_range(s, "omega_range", d.omega);
  cfg.crossing_bracket = read_pair(s, "crossing_bracket", cfg.crossing_bracket);
  s.reject_unknown();
  require(cfg.crossing_bracket.first > 0 && cfg.crossing_bracket.first < cfg.crossing_bracket.second,
          "sweep.crossing_bracket", "expected 0 < lo < hi");
  cfg.sweep.base = cfg.optics;
}

ControlPoint read_control_point(const json& v, const std::string& where) {
  if (!v.is_object()) throw ParseError(where + ": expected {time, s, g, kappa}");
  ControlPoint p;
  for (const auto& [key, value] : v.items()) {
    const std::string at = where + "." + key;
    if (key == "time") p.time = Section::as_number(value, at);
    else if (key == "s") p.s = Section::as_number(value, at);
    else if (key == "g") p.g = Section::as_number(value, at);
    else if (key == "kappa") p.kappa = Section::as_number(value, at);
    else throw UnknownKey(at);
  }
  for (const char* key : {"time", "s", "g", "kappa"})
    if (!v.contains(key)) throw ParseError(where + ": missing " + key);
  return p;
}

void read_nlse(const json* node, RunConfig& cfg) {
  Section s(node, "nlse", cfg.provenance);
  NlseRun& run = cfg.nlse;
  NlseParams& p = run.params;

  // Depth, interaction and loss default to the values implied by the optics
  // section in lattice units.
  double s_default = 0, g_default = 0, kappa_default = 0;
  std::string origin = "derived from optics";
  try {
    const ValidatedConfig v = validate_config(cfg.optics);
    const EffectiveParams e = effective_params(v);
    s_default = lattice_depth_ratio(v);
    g_default = nlse_interaction(lieb_liniger_gamma(v).magnitude());
    kappa_default = e.kappa / (e.e_recoil * cfg.optics.gamma_total);
  } catch (const Error& e) {
    origin = fmt::format("default; optics not mappable: {}", e.what());
  }
  auto derived = [&](const char* key, double fallback) {
    const json* v = s.find(key);
    if (v) return Section::as_number(*v, s.field(key));
    cfg.provenance.push_back(fmt::format("{} = {} ({})", s.field(key), show(fallback), origin));
    return fallback;
  };
  p.v1_over_er = derived("v1_over_er", s_default);
  p.g_int = derived("g_int", g_default);
  p.kappa_dimless = derived("kappa_dimless", kappa_default);
  p.n_periods = static_cast<int>(s.integer("n_periods", p.n_periods));
  p.grid_points = static_cast<int>(s.integer("grid_points", p.grid_points));
  if (const json* v = s.find("schedule")) {
    if (!v->is_array()) throw ParseError("nlse.schedule: expected an array");
    for (std::size_t i = 0; i < v->size(); ++i)
      p.schedule.push_back(read_control_point((*v)[i], fmt::format("nlse.schedule[{}]", i)));
  } else {
    s.defaulted("schedule", "[]");
  }
  run.initial = s.text("initial", run.initial);
  run.ground_tol = s.number("ground_tol", run.ground_tol);
  run.dt = s.number("dt", run.dt);
  run.steps = s.integer("steps", run.steps);
  run.sample_every = s.integer("sample_every", run.sample_every);
  s.reject_unknown();

  require(run.initial == "ground" || run.initial == "uniform", "nlse.initial", "expected \"ground\" or \"uniform\"");
  require(run.ground_tol > 0, "nlse.ground_tol", "must be positive");
  require(run.dt > 0, "nlse.dt", "must be positive");
  require(run.steps >= 0, "nlse.steps", "must be non-negative");
  require(run.sample_every >= 1, "nlse.sample_every", "must be at least 1");
  require(p.kappa_dimless >= 0, "nlse.kappa_dimless", "must be non-negative");
  // Values derived from optics (e.g. a negative depth below the Lambda pole)
  // are checked when the nlse subcommand runs, so other subcommands still
  // accept the file.
  NlseParams shape = p;
  for (const char* key : {"v1_over_er", "g_int", "kappa_dimless"})
    if (!node || !node->contains(key)) {
      if (std::string_view(key) == "v1_over_er") shape.v1_over_er = 0;
      else if (std::string_view(key) == "g_int") shape.g_int = 0;
      else shape.kappa_dimless = 0;
    }
  try {
    shape.validate();
  } catch (const Error& e) {
    throw ParseError(fmt::format("nlse: {}", e.what()));
  }
}

void read_ed(const json* node, RunConfig& cfg) {
  Section s(node, "ed", cfg.provenance);
  EdRun& ed = cfg.ed;
  ed.sizes = read_list<int>(
      s, "sizes", ed.sizes,
      [](const json& v, const std::string& where) {
        const long n = Section::as_integer(v, where);
        require(n >= 2 && n <= 16, where, "chain length must lie in [2, 16]");
        return static_cast<int>(n);
      },
      "[4, 6]");
  ed.ratios = read_list<double>(
      s, "ratios", ed.ratios,
      [](const json& v, const std::string& where) {
        const double x = Section::as_number(v, where);
        require(x >= 0, where, "must be non-negative");
        return x;
      },
      "[1, 2, 3, 4, 5, 6, 7, 8]");
  ed.n_max = static_cast<int>(s.integer("n_max", ed.n_max));
  ed.periodic = s.boolean("periodic", ed.periodic);
  s.reject_unknown();
  require(ed.n_max >= 1 && ed.n_max <= 15, "ed.n_max", "must lie in [1, 15]");
  require(std::is_sorted(ed.ratios.begin(), ed.ratios.end()) &&
              std::adjacent_find(ed.ratios.begin(), ed.ratios.end()) == ed.ratios.end(),
          "ed.ratios", "must be strictly ascending");
}

void read_output(const json* node, RunConfig& cfg) {
  Section s(node, "output", cfg.provenance);
  OutputSpec& out = cfg.output;
  out.directory = s.text("directory", out.directory.string());
  if (const json* v = s.find("formats")) {
    const json list = v->is_string() ? json::array({*v}) : *v;
    if (!list.is_array() || list.empty()) throw ParseError("output.formats: expected \"csv\", \"json\" or a list");
    out.formats.clear();
    for (const auto& item : list) {
      const std::string name = item.is_string() ? item.get<std::string>() : "";
      Format f;
      if (name == "csv") f = Format::Csv;
      else if (name == "json") f = Format::Json;
      else throw ParseError("output.formats: expected \"csv\" or \"json\"");
      if (std::find(out.formats.begin(), out.formats.end(), f) == out.formats.end()) out.formats.push_back(f);
    }
  } else {
    s.defaulted("formats", "[\"csv\"]");
  }
  out.emit_plot_script = s.boolean("emit_plot_script", out.emit_plot_script);
  s.reject_unknown();
  require(!out.directory.empty(), "output.directory", "must not be empty");
}

json range_json(const AxisRange& r) { return json::array({r.min, r.max, r.count}); }

}  // namespace

std::string_view to_string(Format format) noexcept { return format == Format::Csv ? "csv" : "json"; }

RunConfig parse_config_text(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto head = text.substr(0, byte);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(head.begin(), head.end(), '\n'));
    const std::size_t nl = head.rfind('\n');
    const std::size_t column = nl == std::string_view::npos ? byte + 1 : byte - nl;
    throw ParseError(fmt::format("{}:{}:{}: malformed JSON", origin, line, column));
  }
  if (!doc.is_object()) throw ParseError(fmt::format("{}: top level must be an object", origin));
  for (const auto& [key, value] : doc.items())
    if (key != "optics" && key != "sweep" && key != "nlse" && key != "ed" && key != "output") throw UnknownKey(key);

  auto section = [&](const char* name) -> const json* {
    auto it = doc.find(name);
    return it == doc.end() ? nullptr : &*it;
  };
  RunConfig cfg;
  read_optics(section("optics"), cfg);
  read_sweep(section("sweep"), cfg);
  read_nlse(section("nlse"), cfg);
  read_ed(section("ed"), cfg);
  read_output(section("output"), cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("{}: cannot read file", path.string()));
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_config_text(text, path.string());
}

json resolved_json(const RunConfig& cfg) {
  const OpticalConfig& o = cfg.optics;
  json schedule = json::array();
  for (const ControlPoint& p : cfg.nlse.params.schedule)
    schedule.push_back({{"time", p.time}, {"s", p.s}, {"g", p.g}, {"kappa", p.kappa}});
  json formats = json::array();
  for (Format f : cfg.output.formats) formats.push_back(to_string(f));
  const NlseRun& n = cfg.nlse;
  return {
      {"optics",
       {{"gamma_total", o.gamma_total},
        {"gamma_1d_ratio", o.gamma_1d_ratio},
        {"delta0", o.delta0},
        {"delta_small", o.delta_small},
        {"delta_p", o.delta_p},
        {"omega", o.omega},
        {"n0", o.n0},
        {"n1_fraction", o.n1_fraction},
        {"n_ph", o.n_ph},
        {"delta_omega", o.delta_omega},
        {"v", o.v},
        {"fiber_length", o.fiber_length}}},
      {"sweep",
       {{"delta_p_range", range_json(cfg.sweep.delta_p)},
        {"omega_range", range_json(cfg.sweep.omega)},
        {"crossing_bracket", json::array({cfg.crossing_bracket.first, cfg.crossing_bracket.second})}}},
      {"nlse",
       {{"v1_over_er", n.params.v1_over_er},
        {"g_int", n.params.g_int},
        {"kappa_dimless", n.params.kappa_dimless},
        {"n_periods", n.params.n_periods},
        {"grid_points", n.params.grid_points},
        {"schedule", schedule},
        {"initial", n.initial},
        {"ground_tol", n.ground_tol},
        {"dt", n.dt},
        {"steps", n.steps},
        {"sample_every", n.sample_every}}},
      {"ed",
       {{"sizes", cfg.ed.sizes}, {"ratios", cfg.ed.ratios}, {"n_max", cfg.ed.n_max}, {"periodic", cfg.ed.periodic}}},
      {"output", {{"formats", formats}, {"emit_plot_script", cfg.output.emit_plot_script}}},
  };
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string config_hash(const RunConfig& cfg) { return sha256_hex(resolved_json(cfg).dump()); }

}  // namespace fiberpol::cli
