#include "fiberpol/cli/commands.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fiberpol/bh_ed.hpp"
#include "fiberpol/cli/output.hpp"
#include "fiberpol/errors.hpp"
#include "fiberpol/many_body.hpp"
#include "fiberpol/nlse.hpp"
#include "fiberpol/optics_map.hpp"
#include "fiberpol/sweep.hpp"

namespace fiberpol::cli {

using ojson = nlohmann::ordered_json;

namespace {

ojson number(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

std::string flag_list(const RegimeFlags& f) {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(f.sg_valid, "sg_valid");
  add(f.bh_valid, "bh_valid");
  add(f.k_formula_valid, "k_formula_valid");
  add(f.sign_warning, "sign_warning");
  return out;
}

ojson point_json(const ManyBodyPoint& p) {
  ojson j;
  j["gamma_abs"] = number(p.gamma_abs);
  j["v1_over_er"] = number(p.v1_over_er);
  j["k_luttinger"] = number(p.k_luttinger);
  j["j_over_er"] = number(p.j_over_er);
  j["u_over_er"] = number(p.u_over_er);
  j["u_over_j"] = number(p.u_over_j);
  j["phase"] = to_string(p.phase);
  j["flags"] = {{"sg_valid", p.flags.sg_valid},
                {"bh_valid", p.flags.bh_valid},
                {"k_formula_valid", p.flags.k_formula_valid},
                {"sign_warning", p.flags.sign_warning}};
  return j;
}

ojson effective_json(const EffectiveParams& e) {
  ojson j;
  j["lambda_factor"] = e.lambda_factor;
  j["xi_factor"] = e.xi_factor;
  j["v_g"] = e.v_g;
  j["mass"] = ojson::array({e.mass.real(), e.mass.imag()});
  j["v0"] = e.v0;
  j["v1"] = e.v1;
  j["chi"] = e.chi;
  j["e_recoil"] = e.e_recoil;
  j["kappa"] = e.kappa;
  j["od"] = e.od;
  return j;
}

Table sweep_table(const std::vector<SweepRecord>& records) {
  Table t;
  t.columns = {"delta_p_over_gamma", "omega_over_gamma", "gamma_signed", "gamma_abs", "v1_over_er",
               "k_luttinger", "j_over_er", "u_over_er", "u_over_j", "v_g_m_per_s",
               "kappa_per_s", "phase", "flags"};
  for (const SweepRecord& r : records) {
    const ManyBodyPoint& p = r.point;
    t.add({r.delta_p, r.omega, r.gamma_signed, p.gamma_abs, p.v1_over_er, p.k_luttinger, p.j_over_er, p.u_over_er,
           p.u_over_j, r.v_g, r.kappa, std::string(to_string(p.phase)), r.ok() ? flag_list(p.flags) : "gap"});
  }
  return t;
}

void write_provenance(OutputDir& out, const RunConfig& cfg) {
  std::string text;
  // The output location is not part of the resolved config, so it stays out
  // of the file as well; it is still echoed on the diagnostic stream.
  for (const std::string& line : cfg.provenance)
    if (line.rfind("output.directory", 0) != 0) text += line + '\n';
  if (text.empty()) text = "# every setting was given explicitly\n";
  out.write("provenance.log", text);
}

void write_plot(OutputDir& out, const RunConfig& cfg, const std::string& name, const std::string& body) {
  if (!cfg.output.emit_plot_script || !out.has_format(Format::Csv)) return;
  out.write(name, "set datafile separator ','\nset key autotitle columnhead\n" + body);
}

void run_map(const RunConfig& cfg, OutputDir& out) {
  const ValidatedConfig v = validate_config(cfg.optics);
  const EffectiveParams e = effective_params(v);
  const LiebLinigerGamma gamma = lieb_liniger_gamma(v);
  const ManyBodyPoint p = make_point(gamma.value, lattice_depth_ratio(v));
  ojson doc;
  doc["effective_params"] = effective_json(e);
  doc["gamma_signed"] = gamma.value;
  doc["many_body"] = point_json(p);
  doc["warnings"] = v.warnings();
  out.write_json("map.json", doc);
}

void run_sweep(const RunConfig& cfg, OutputDir& out) {
  out.write_table("sweep", sweep_table(sweep_grid(cfg.sweep)));
  write_plot(out, cfg, "sweep.gp",
             "set xlabel 'Delta_p/Gamma'\nset ylabel 'Omega/Gamma'\nset view map\n"
             "splot 'sweep.csv' using 1:2:4 with points palette pt 5 title '|gamma|'\n"
             "pause -1\n"
             "splot 'sweep.csv' using 1:2:5 with points palette pt 5 title 'V1/E_R'\n");
}

void run_phase(const RunConfig& cfg, OutputDir& out) {
  const std::vector<SweepRecord> records = sweep_grid(cfg.sweep);
  const std::vector<Polyline> lines = phase_boundaries(cfg.sweep);
  ojson doc;
  doc["delta_p_range"] = ojson::array({cfg.sweep.delta_p.min, cfg.sweep.delta_p.max, cfg.sweep.delta_p.count});
  doc["omega_range"] = ojson::array({cfg.sweep.omega.min, cfg.sweep.omega.max, cfg.sweep.omega.count});
  doc["critical_u_over_j"] = kCriticalUOverJ;
  ojson polylines = ojson::array();
  for (const Polyline& line : lines) {
    ojson vertices = ojson::array();
    for (const Point2& pt : line.vertices) vertices.push_back(ojson::array({pt.x, pt.y}));
    polylines.push_back({{"model", to_string(line.model)}, {"vertices", vertices}});
  }
  doc["polylines"] = polylines;
  out.write_json("phase_boundaries.json", doc);
  out.write_table("phase_grid", sweep_table(records));
  write_plot(out, cfg, "phase.gp",
             "set xlabel 'Delta_p/Gamma'\nset ylabel 'Omega/Gamma'\n"
             "code(s) = s eq 'SF' ? 1 : s eq 'MOTT_SG' ? 2 : s eq 'MOTT_BH' ? 3 : 0\n"
             "plot 'phase_grid.csv' using 1:2:(code(strcol(12))) with points palette pt 5 notitle\n");
}

void run_crossing(const RunConfig& cfg, OutputDir& out) {
  const double dp = cfg.optics.delta_p;
  Table curves;
  curves.columns = {"omega_over_gamma", "j_over_er", "u_over_er", "u_over_j"};
  for (double omega : cfg.sweep.omega.values()) {
    const SweepRecord r = evaluate_node(cfg.optics, dp, omega);
    curves.add({omega, r.point.j_over_er, r.point.u_over_er, r.point.u_over_j});
  }
  const double root = find_mott_crossing(cfg.optics, dp, cfg.crossing_bracket);
  const SweepRecord at = evaluate_node(cfg.optics, dp, root);
  if (!at.ok()) throw DomainError("crossing lands on a gap record: " + at.error);
  ojson doc;
  doc["delta_p_over_gamma"] = dp;
  doc["omega_over_gamma"] = root;
  doc["u_over_j"] = number(at.point.u_over_j);
  doc["j_over_er"] = number(at.point.j_over_er);
  doc["u_over_er"] = number(at.point.u_over_er);
  doc["gamma_abs"] = number(at.point.gamma_abs);
  doc["v1_over_er"] = number(at.point.v1_over_er);
  doc["critical_u_over_j"] = kCriticalUOverJ;
  doc["bracket"] = ojson::array({cfg.crossing_bracket.first, cfg.crossing_bracket.second});
  out.write_table("crossing_curves", curves);
  out.write_json("crossing_root.json", doc);
  write_plot(out, cfg, "crossing.gp",
             fmt::format("set xlabel 'Omega/Gamma'\nset ylabel 'energy / E_R'\nset arrow from {0},graph 0 to "
                         "{0},graph 1 nohead dashtype 2\n"
                         "plot 'crossing_curves.csv' using 1:2 with lines, '' using 1:3 with lines\n",
                         format_number(root)));
}

std::string little_endian_doubles(const std::vector<Complex>& psi) {
  std::string bytes;
  bytes.reserve(psi.size() * 16);
  auto put = [&](double x) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  };
  for (const Complex& z : psi) {
    put(z.real());
    put(z.imag());
  }
  return bytes;
}

void run_nlse(const RunConfig& cfg, OutputDir& out) {
  const NlseRun& run = cfg.nlse;
  const NlseParams& params = run.params;
  params.validate();

  // Release mapping needs the physical scales; resolve them before any
  // evolution so a bad optics section fails fast.
  const ValidatedConfig v = validate_config(cfg.optics);
  const EffectiveParams e = effective_params(v);

  FieldState initial;
  if (run.initial == "ground") {
    NlseParams prep = params;  // lossless, static copy at the base depth and interaction
    prep.kappa_dimless = 0;
    prep.schedule.clear();
    initial = ground_state(prep, run.ground_tol);
  } else {
    initial = uniform_state(params);
  }
  const Trajectory traj = evolve(initial, params, run.dt, run.steps, run.sample_every);
  const ReleaseProfile release =
      release_profile(traj.state, params, e.v_g, e.e_recoil * cfg.optics.gamma_total, cfg.optics.n_ph);

  Table series;
  series.columns = {"tau", "norm", "energy", "contrast"};
  for (const Observables& o : traj.series) series.add({o.tau, o.norm, o.energy, o.contrast});
  Table pulse;
  pulse.columns = {"time_s", "intensity"};
  for (std::size_t i = 0; i < release.time.size(); ++i) pulse.add({release.time[i], release.intensity[i]});

  out.write_table("nlse_trajectory", series);
  out.write("nlse_state.bin", little_endian_doubles(traj.state.psi));
  ojson sidecar;
  sidecar["grid_points"] = params.grid_points;
  sidecar["n_periods"] = params.n_periods;
  sidecar["time"] = traj.state.time;
  sidecar["encoding"] = "little-endian float64, interleaved (real, imag)";
  out.write_json("nlse_state.json", sidecar);
  out.write_table("nlse_release", pulse);
  write_plot(out, cfg, "nlse.gp",
             "set xlabel 'tau'\nplot 'nlse_trajectory.csv' using 1:2 with lines, '' using 1:4 with lines\n"
             "pause -1\nset xlabel 't [s]'\nplot 'nlse_release.csv' using 1:2 with lines\n");
}

void run_ed(const RunConfig& cfg, OutputDir& out) {
  const EdRun& ed = cfg.ed;
  const CriticalEstimate est = estimate_critical_ratio(ed.sizes, ed.ratios, ed.n_max, ed.periodic);
  Table points;
  points.columns = {"L", "N", "n_max", "u_over_j", "e0_over_j", "gap_over_j", "scaled_gap", "var_n"};
  for (const EdResult& r : est.points)
    points.add({long{r.sites}, long{r.bosons}, long{r.n_max}, r.u_over_j, r.e0, r.gap, r.sites * r.gap, r.var_n});
  ojson doc;
  doc["estimate_u_over_j_c"] = est.mean;
  doc["spread"] = est.spread;
  doc["crossings"] = est.crossings;
  doc["reference_u_over_j_c"] = kCriticalUOverJ;
  doc["sizes"] = ed.sizes;
  doc["n_max"] = ed.n_max;
  doc["periodic"] = ed.periodic;
  out.write_table("ed_points", points);
  out.write_json("ed_estimate.json", doc);
  std::string sizes;
  for (int l : ed.sizes) sizes += (sizes.empty() ? "" : " ") + std::to_string(l);
  write_plot(out, cfg, "ed.gp",
             fmt::format("set xlabel 'U/J'\nset ylabel 'L * gap / J'\n"
                         "plot for [L in \"{}\"] 'ed_points.csv' using ($1 == L ? $4 : 1/0):7 with linespoints "
                         "title 'L = '.L\n",
                         sizes));
}

std::string error_name(const std::string& what) {
  const auto colon = what.find(':');
  return colon == std::string::npos ? "Error" : what.substr(0, colon);
}

void report(std::ostream& diag, std::string_view subcommand, std::string_view kind, const std::string& what) {
  nlohmann::ordered_json line;
  line["error"] = error_name(what);
  line["kind"] = kind;
  line["subcommand"] = subcommand;
  line["message"] = what;
  diag << line.dump() << '\n';
}

}  // namespace

int dispatch(std::string_view subcommand, const RunConfig& cfg, std::ostream& diag) {
  try {
    if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) == kSubcommands.end())
      throw ConfigError(fmt::format("unknown subcommand '{}'", subcommand));
    OutputDir out(cfg, std::string(subcommand));
    if (subcommand == "map") run_map(cfg, out);
    else if (subcommand == "sweep") run_sweep(cfg, out);
    else if (subcommand == "phase") run_phase(cfg, out);
    else if (subcommand == "crossing") run_crossing(cfg, out);
    else if (subcommand == "nlse") run_nlse(cfg, out);
    else run_ed(cfg, out);
    write_provenance(out, cfg);
    return kExitOk;
  } catch (const Error& e) {
    const bool domain = e.kind() == ErrorKind::Domain;
    report(diag, subcommand, domain ? "domain" : "convergence", e.what());
    return domain ? kExitDomain : kExitConvergence;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& diag) {
  CLI::App app{"Effective-model maps, phase diagrams, mean-field and ED checks for stationary-light polaritons",
               "fiberpol"};
  app.set_version_flag("--version", "fiberpol 1.0.0");
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON run configuration (defaults apply when omitted)");
  app.add_option("--out", out_dir, "output directory (overrides output.directory)");
  app.add_option("--format", format, "tabular output format (overrides output.formats)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "reserved; no stochastic paths use it");
  app.require_subcommand(1, 1);
  app.fallthrough();
  const std::array<const char*, 6> help{
      "effective parameters and many-body point for the optics section",
      "grid sweep over (Delta_p, Omega)",
      "phase boundaries and labelled grid",
      "U/J = 3.85 crossing along Omega at the configured Delta_p",
      "mean-field evolution, final state and release profile",
      "exact diagonalisation and critical U/J estimate",
  };
  for (std::size_t i = 0; i < kSubcommands.size(); ++i) app.add_subcommand(std::string(kSubcommands[i]), help[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, diag);
    return code == 0 ? kExitOk : kExitUsage;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    cfg = config_path.empty() ? parse_config_text("{}", "<defaults>") : parse_config(config_path);
  } catch (const Error& e) {
    report(diag, subcommand, "domain", e.what());
    return kExitDomain;
  }
  if (!out_dir.empty()) {
    cfg.output.directory = out_dir;
    cfg.provenance.push_back("output.directory = " + out_dir + " (--out)");
  }
  if (!format.empty()) {
    cfg.output.formats = {format == "csv" ? Format::Csv : Format::Json};
    cfg.provenance.push_back("output.formats = [\"" + format + "\"] (--format)");
  }
  for (const std::string& line : cfg.provenance) diag << "provenance: " << line << '\n';

  const int code = dispatch(subcommand, cfg, diag);
  if (code == kExitOk) out << fmt::format("{}: wrote {} (config {})\n", subcommand, cfg.output.directory.string(),
                                          config_hash(cfg).substr(0, 12));
  return code;
}

}  // namespace fiberpol::cli
