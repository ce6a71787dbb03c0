#include "kkscatter/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "kkscatter/config.hpp"
#include "kkscatter/constants.hpp"
#include "kkscatter/errors.hpp"
#include "kkscatter/kramers_kronig.hpp"
#include "kkscatter/parallel.hpp"
#include "kkscatter/scattering.hpp"
#include "kkscatter/simd/kernels.hpp"
#include "kkscatter/sweep.hpp"
#include "kkscatter/transfer_matrix.hpp"

namespace kkscatter {

using constants::kPi;

namespace {

constexpr double kDeg = kPi / 180.0;

struct CommonOptions {
  std::string config_path;
  unsigned jobs = 0;
  std::string simd;
  std::string format;
  std::string out_path;
  std::optional<int> precision;
  std::optional<double> delta0;
  std::optional<double> omega_c;
  std::string convention;
};

struct DeltaOptions {
  std::vector<double> values;
  std::vector<double> range;  // start stop count

  std::vector<double> resolve() const {
    std::vector<double> out = values;
    if (!range.empty()) {
      const double count = range[2];
      if (!(count >= 2.0) || count != std::floor(count)) {
        throw ConfigError("--delta-range count must be an integer >= 2");
      }
      const Axis a = Axis::linspace("delta", range[0], range[1], static_cast<std::size_t>(count));
      out.insert(out.end(), a.values.begin(), a.values.end());
    }
    if (out.empty()) throw ConfigError("no detuning given (use --delta or --delta-range)");
    return out;
  }
};

void add_delta_options(CLI::App* cmd, DeltaOptions& d) {
  cmd->add_option("--delta", d.values, "Probe detuning(s) in units of gamma31");
  cmd->add_option("--delta-range", d.range, "START STOP COUNT, evenly spaced detunings")
      ->expected(3);
}

RunConfig resolve_config(const CommonOptions& c) {
  RunConfig cfg = c.config_path.empty() ? default_config() : load_config(c.config_path);
  if (c.delta0) cfg.medium.delta0 = *c.delta0;
  if (c.omega_c) cfg.medium.omega_c = *c.omega_c;
  if (!c.convention.empty()) cfg.medium.index_convention = parse_index_convention(c.convention);
  if (c.delta0 && cfg.medium.omega_d0) {
    cfg.medium.omega_d0.reset();
    cfg.medium.delta_d.reset();
  }
  if (!c.simd.empty()) cfg.numerics.simd = c.simd;
  if (!c.format.empty()) {
    if (c.format == "csv") cfg.output.format = OutputFormat::kCsv;
    else if (c.format == "json") cfg.output.format = OutputFormat::kJson;
    else throw ConfigError("--format must be csv or json");
  }
  if (!c.out_path.empty()) cfg.output.path = c.out_path;
  if (c.precision) cfg.output.precision = *c.precision;
  validate(cfg);
  simd::set_active_isa(simd::parse_isa(cfg.numerics.simd));
  return cfg;
}

void emit(const SweepTable& table, const RunConfig& cfg, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (cfg.output.format == OutputFormat::kJson) write_json(os, table);
    else write_csv(os, table, cfg.output.precision);
  };
  if (cfg.output.path == "-") {
    write(out);
    return;
  }
  std::ofstream file(cfg.output.path);
  if (!file) throw ConfigError("cannot open output file '" + cfg.output.path + "'");
  write(file);
  if (!file) throw Error("failed writing '" + cfg.output.path + "'");
}

// Table with the resolved configuration echoed into the metadata.
SweepTable base_table(const RunConfig& cfg, const std::string& command) {
  SweepTable t;
  t.metadata["command"] = command;
  t.metadata["code_version"] = std::string(kCodeVersion);
  t.metadata["numerics.simd_active"] = std::string(simd::to_string(simd::active_isa()));
  std::istringstream in(write_config(cfg));
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) t.metadata[section + "." + line.substr(0, eq)] = line.substr(eq + 3);
  }
  return t;
}

IncidenceGeometry geometry(const MediumParams& p, double theta_deg) {
  if (!(std::fabs(theta_deg) < 90.0)) throw DomainError("--theta must lie in (-90, 90) degrees");
  return IncidenceGeometry::for_medium(p, theta_deg * kDeg);
}

Discretization discretization(const RunConfig& cfg) {
  return {cfg.numerics.n_layers, cfg.numerics.rel_tol};
}

int cmd_profile(const RunConfig& cfg, double delta, std::size_t layers, std::ostream& out) {
  const MediumParams p = cfg.medium.params();
  const auto chi = sample_susceptibility(p, delta, layers);
  const IndexProfile prof = sample_profile(p, delta, layers);
  SweepTable t = base_table(cfg, "profile");
  t.columns = {"x", "re_chi", "im_chi", "re_n", "im_n"};
  for (std::size_t j = 0; j < layers; ++j) {
    t.rows.push_back({prof.midpoint(j), chi[j].real(), chi[j].imag(), prof[j].real(),
                      prof[j].imag()});
  }
  t.metadata["delta"] = format_number(delta);
  t.metadata["layers"] = std::to_string(layers);
  emit(t, cfg, out);
  return kExitOk;
}

int cmd_coeffs(const RunConfig& cfg, const std::vector<double>& deltas,
               const std::vector<double>& thetas_deg, unsigned jobs, std::ostream& out) {
  const MediumParams p = cfg.medium.params();
  std::vector<IncidenceGeometry> geoms;
  for (double th : thetas_deg) geoms.push_back(geometry(p, th));
  const std::size_t n = deltas.size() * geoms.size();
  SweepTable t = base_table(cfg, "coeffs");
  t.columns = {"delta", "theta_deg", "r_l", "phi_l", "r_r", "phi_r", "t", "phi_t", "n_layers"};
  t.rows.resize(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    const double delta = deltas[i / geoms.size()];
    const std::size_t g = i % geoms.size();
    const ConvergedCoefficients c = coefficients(p, delta, geoms[g], discretization(cfg));
    t.rows[i] = {delta,          thetas_deg[g],    c.coeffs.r_l(), c.coeffs.phi_l(),
                 c.coeffs.r_r(), c.coeffs.phi_r(), c.coeffs.t(),   c.coeffs.phi_t(),
                 static_cast<double>(c.n_layers)};
  });
  emit(t, cfg, out);
  return kExitOk;
}

int cmd_scatter(const RunConfig& cfg, double delta, double theta_deg, double phi, double i_l,
                double i_r, std::ostream& out) {
  const MediumParams p = cfg.medium.params();
  const TwoChannelDrive drive = TwoChannelDrive::make(i_l, i_r, phi);
  const auto c = coefficients(p, delta, geometry(p, theta_deg), discretization(cfg));
  const ScatteringOutcome o = two_channel(c.coeffs, drive);
  SweepTable t = base_table(cfg, "scatter");
  t.columns = {"delta", "theta_deg", "phi", "i_l", "i_r", "s_l", "s_r", "contrast", "absorption"};
  t.rows.push_back({delta, theta_deg, phi, i_l, i_r, o.s_l, o.s_r, o.contrast, o.absorption});
  emit(t, cfg, out);
  return kExitOk;
}

int cmd_kkmetric(const RunConfig& cfg, const std::vector<double>& deltas, unsigned jobs,
                 std::ostream& out) {
  const MediumParams p = cfg.medium.params();
  const KKThresholds th{cfg.numerics.kk_threshold_lower, cfg.numerics.kk_threshold_upper};
  std::vector<KKMetricResult> res(deltas.size());
  parallel_for(deltas.size(), jobs, [&](std::size_t i) {
    res[i] = d_kk(p, deltas[i], cfg.numerics.kk_resolution, th);
  });
  SweepTable t = base_table(cfg, "kkmetric");
  t.columns = {"delta", "d_kk"};
  std::vector<std::string> phase;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    t.rows.push_back({deltas[i], res[i].d_kk});
    phase.emplace_back(to_string(res[i].phase));
  }
  t.text_columns.emplace_back("phase_class", std::move(phase));
  emit(t, cfg, out);
  return kExitOk;
}

int cmd_cpa(const RunConfig& cfg, double delta, double theta_deg, double i_l, std::ostream& out) {
  const MediumParams p = cfg.medium.params();
  const auto c = coefficients(p, delta, geometry(p, theta_deg), discretization(cfg));
  SweepTable t = base_table(cfg, "cpa");
  t.columns = {"delta", "theta_deg", "phi_star", "intensity_ratio", "i_l", "i_r",
               "s_l",   "s_r",       "absorption"};
  std::vector<std::string> side, feasible;
  for (Side s : {Side::kLeft, Side::kRight}) {
    const CoherentCondition cond = coherent_condition(c.coeffs, s);
    const auto drive = coherent_drive(cond, i_l);
    std::vector<double> row{delta, theta_deg, cond.phi_star, cond.intensity_ratio, i_l};
    if (drive) {
      const ScatteringOutcome o = two_channel(c.coeffs, *drive);
      row.insert(row.end(), {drive->i_r, o.s_l, o.s_r, o.absorption});
    } else {
      row.insert(row.end(), {0.0, 0.0, 0.0, 0.0});
    }
    t.rows.push_back(std::move(row));
    side.emplace_back(to_string(s));
    feasible.emplace_back(drive ? "true" : "false");
  }
  t.text_columns.emplace_back("side", std::move(side));
  t.text_columns.emplace_back("feasible", std::move(feasible));
  emit(t, cfg, out);
  return kExitOk;
}

int cmd_amax(const RunConfig& cfg, const std::vector<double>& deltas, RatioRule rule, double i_l,
             double i_r, unsigned jobs, std::ostream& out) {
  const MediumParams p = cfg.medium.params();
  AbsorptionSearch search = cfg.sweep_options(1).search;
  search.rule = rule;
  search.i_l = i_l;
  search.i_r = i_r;
  search.jobs = 1;
  std::vector<AbsorptionMaximum> res(deltas.size());
  parallel_for(deltas.size(), jobs, [&](std::size_t i) {
    res[i] = max_absorption_over(p, deltas[i], search, discretization(cfg));
  });
  SweepTable t = base_table(cfg, "amax");
  t.columns = {"delta", "a_max", "theta_star_deg", "phi_star", "i_r"};
  std::vector<std::string> feasible;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const auto& r = res[i];
    t.rows.push_back({deltas[i], r.a_max, r.theta ? *r.theta / kDeg : 0.0, r.phi.value_or(0.0),
                      r.i_r});
    feasible.emplace_back(r.theta ? "true" : "false");
  }
  t.text_columns.emplace_back("feasible", std::move(feasible));
  t.metadata["ratio_rule"] = std::string(to_string(rule));
  emit(t, cfg, out);
  return kExitOk;
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const char* flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(std::string(flag) + " expects NAME=VALUE, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
  return v;
}

// Angles given on the command line are in degrees; sweep axes use radians.
double to_internal(const std::string& name, double v) {
  return name == "theta" ? v * kDeg : v;
}

int cmd_figure(const RunConfig& cfg, const std::string& id, const std::vector<std::string>& fixes,
               const std::vector<std::string>& axes, unsigned jobs, std::ostream& out) {
  SweepSpec spec = figure_preset(id);
  for (const auto& f : fixes) {
    const auto [name, value] = split_assignment(f, "--fix");
    spec.fixed[name] = to_internal(name, parse_number(value, "--fix " + name));
  }
  for (const auto& a : axes) {
    const auto [name, value] = split_assignment(a, "--axis");
    std::vector<double> parts;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_number(item, "--axis " + name));
    if (parts.size() != 3 || parts[2] < 2.0 || parts[2] != std::floor(parts[2])) {
      throw ConfigError("--axis expects NAME=START:STOP:COUNT with COUNT >= 2");
    }
    const Axis axis = Axis::linspace(name, to_internal(name, parts[0]), to_internal(name, parts[1]),
                                     static_cast<std::size_t>(parts[2]));
    bool replaced = false;
    for (auto& existing : spec.axes) {
      if (existing.name == name) {
        existing = axis;
        replaced = true;
      }
    }
    if (!replaced) throw ConfigError("figure " + id + " has no axis '" + name + "'");
  }
  SweepTable table = run_sweep(spec, cfg.medium.params(), cfg.sweep_options(jobs));
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (table.columns[c] != "theta") continue;
    table.columns[c] = "theta_deg";
    for (auto& row : table.rows) row[c] /= kDeg;
  }
  if (auto it = table.metadata.find("fixed.theta"); it != table.metadata.end()) {
    table.metadata["fixed.theta_deg"] = format_number(spec.fixed.at("theta") / kDeg);
    table.metadata.erase(it);
  }
  table.metadata["units"] = "rates in gamma31, theta in deg, phi in rad, x in m";
  emit(table, cfg, out);
  return kExitOk;
}

int cmd_selftest(std::ostream& out) {
  bool ok = true;
  for (const auto& c : run_selftest()) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << '\n';
    ok = ok && c.passed;
  }
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-channel scattering from a cold-atom medium under spatial Kramers-Kronig "
               "modulation",
               "kkscatter"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  app.add_option("--config", common.config_path, "INI config file (default: built-in values)");
  app.add_option("--jobs", common.jobs, "Worker threads (0: hardware parallelism)");
  app.add_option("--simd", common.simd, "Kernel set: auto, scalar or avx2");
  app.add_option("--format", common.format, "Output format: csv or json");
  app.add_option("--out", common.out_path, "Output file ('-' for stdout)");
  app.add_option("--precision", common.precision, "Significant digits after the point");
  app.add_option("--delta0", common.delta0, "Level-shift amplitude in units of gamma31");
  app.add_option("--omega-c", common.omega_c, "Coupling Rabi frequency in units of gamma31");
  app.add_option("--convention", common.convention, "Index convention: gaussian or si");

  auto* profile = app.add_subcommand("profile", "Sample chi(x) and n(x) on layer midpoints");
  double profile_delta = 0.0;
  std::size_t profile_layers = 256;
  profile->add_option("--delta", profile_delta, "Probe detuning in units of gamma31")->required();
  profile->add_option("--layers", profile_layers, "Number of layers")->check(CLI::Range(2, 1 << 24));

  auto* coeffs = app.add_subcommand("coeffs", "Reflection and transmission amplitudes");
  DeltaOptions coeff_deltas;
  std::vector<double> coeff_thetas{0.0};
  add_delta_options(coeffs, coeff_deltas);
  coeffs->add_option("--theta", coeff_thetas, "Incidence angle(s) in degrees");

  auto* scatter = app.add_subcommand("scatter", "Two-channel outputs for one drive");
  double sc_delta = 0.0, sc_theta = 0.0, sc_phi = 0.0, sc_il = 1.0, sc_ir = 1.0;
  scatter->add_option("--delta", sc_delta, "Probe detuning in units of gamma31")->required();
  scatter->add_option("--theta", sc_theta, "Incidence angle in degrees");
  scatter->add_option("--phi", sc_phi, "Relative input phase in radians");
  scatter->add_option("--il", sc_il, "Left input intensity");
  scatter->add_option("--ir", sc_ir, "Right input intensity");

  auto* kkmetric = app.add_subcommand("kkmetric", "Spatial KK figure of merit and phase");
  DeltaOptions kk_deltas;
  add_delta_options(kkmetric, kk_deltas);

  auto* cpa = app.add_subcommand("cpa", "One-sided coherent operating points");
  double cpa_delta = 0.0, cpa_theta = 0.0, cpa_il = 1.0;
  cpa->add_option("--delta", cpa_delta, "Probe detuning in units of gamma31")->required();
  cpa->add_option("--theta", cpa_theta, "Incidence angle in degrees");
  cpa->add_option("--il", cpa_il, "Left input intensity");

  auto* amax = app.add_subcommand("amax", "Maximum absorption over angle and phase");
  DeltaOptions amax_deltas;
  std::string amax_rule = "EQ10";
  double amax_il = 1.0, amax_ir = 1.0;
  add_delta_options(amax, amax_deltas);
  amax->add_option("--rule", amax_rule, "Intensity ratio rule: EQ10, EQ9 or NONE");
  amax->add_option("--il", amax_il, "Left input intensity");
  amax->add_option("--ir", amax_ir, "Right input intensity (rule NONE)");

  auto* figure = app.add_subcommand("figure", "Data table for a figure preset");
  std::string figure_id;
  std::vector<std::string> figure_fix, figure_axis;
  figure->add_option("id", figure_id, "Figure id, e.g. FIG2G")->required();
  figure->add_option("--fix", figure_fix, "NAME=VALUE parameter override (theta in degrees)");
  figure->add_option("--axis", figure_axis, "NAME=START:STOP:COUNT axis override");

  auto* selftest = app.add_subcommand("selftest", "Run the structural invariant checks");

  std::vector<std::string> argv_store{"kkscatter"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (selftest->parsed()) return cmd_selftest(out);
    const RunConfig cfg = resolve_config(common);
    const unsigned jobs = common.jobs == 0 ? default_jobs() : common.jobs;
    if (profile->parsed()) return cmd_profile(cfg, profile_delta, profile_layers, out);
    if (coeffs->parsed()) return cmd_coeffs(cfg, coeff_deltas.resolve(), coeff_thetas, jobs, out);
    if (scatter->parsed()) return cmd_scatter(cfg, sc_delta, sc_theta, sc_phi, sc_il, sc_ir, out);
    if (kkmetric->parsed()) return cmd_kkmetric(cfg, kk_deltas.resolve(), jobs, out);
    if (cpa->parsed()) return cmd_cpa(cfg, cpa_delta, cpa_theta, cpa_il, out);
    if (amax->parsed()) {
      return cmd_amax(cfg, amax_deltas.resolve(), parse_ratio_rule(amax_rule), amax_il, amax_ir,
                      jobs, out);
    }
    if (figure->parsed()) return cmd_figure(cfg, figure_id, figure_fix, figure_axis, jobs, out);
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << " (last " << e.last() << ", previous "
        << e.previous() << ")\n";
    return kExitConvergenceError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

std::vector<SelftestCheck> run_selftest() {
  std::vector<SelftestCheck> checks;
  auto record = [&](std::string name, bool passed, std::string detail) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  };
  auto sci = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return std::string(buf);
  };
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const MediumParams medium;
  const double k = vacuum_wavenumber(medium);

  {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const cdouble n(0.2 + 2.8 * unit(rng), unit(rng));
      const double d = 1e-9 + 5e-8 * unit(rng);
      const auto g = IncidenceGeometry::make(1.2 * unit(rng), k);
      worst = std::max(worst, std::abs(layer_matrix(n, d, g).det() - 1.0));
    }
    record("layer matrices are unimodular", worst < 1e-12, "max |det-1| " + sci(worst));
  }
  {
    const cdouble n(1.3, 0.05);
    const double theta = 0.4;
    const IndexProfile slab(std::vector<cdouble>(512, n), 2e-6);
    const auto g = IncidenceGeometry::make(theta, k);
    const auto c = scattering_coefficients(total_matrix(slab, g));
    const double c0 = std::cos(theta);
    const cdouble np = longitudinal_index(n, theta);
    const cdouble r01 = (c0 - np) / (c0 + np);
    const cdouble e = std::exp(cdouble(0.0, 2.0) * k * 2e-6 * np);
    const cdouble airy = r01 * (1.0 - e) / (1.0 - r01 * r01 * e);
    const double sym = std::abs(c.r_l_complex - c.r_r_complex);
    const double dev = std::abs(c.r_l_complex - airy);
    record("uniform slab is reciprocal and matches the Airy formula", sym < 1e-10 && dev < 1e-10,
           "|r_l-r_r| " + sci(sym) + ", |r-airy| " + sci(dev));
  }
  {
    double worst_a = 0.0, worst_side = 0.0;
    bool passive = true;
    for (int s = 0; s < 8; ++s) {
      const double delta = -200.0 + 250.0 * unit(rng);
      const auto c = coefficients_at(medium, delta, IncidenceGeometry::for_medium(medium, 0.0), 4096);
      for (int i = 0; i < 125; ++i) {
        const TwoChannelDrive d{2.0 * unit(rng), 2.0 * unit(rng), 2.0 * kPi * unit(rng)};
        const double a = two_channel(c, d).absorption;
        passive = passive && a >= -1e-9 && a <= 1.0 + 1e-9;
        worst_a = std::max(worst_a, a);
      }
      for (Side side : {Side::kLeft, Side::kRight}) {
        const auto drive = coherent_drive(coherent_condition(c, side), 1.0);
        if (!drive) continue;
        const auto o = two_channel(c, *drive);
        const double target = side == Side::kLeft ? o.s_l : o.s_r;
        worst_side = std::max(worst_side, target / (drive->i_l + drive->i_r));
      }
    }
    record("random drives are passive", passive, "max A " + sci(worst_a));
    record("coherent conditions null the targeted side", worst_side < 1e-12,
           "max S/(I_L+I_R) " + sci(worst_side));
  }
  {
    MediumParams plus = medium, minus = medium;
    plus.delta0 = 150.0;
    minus.delta0 = -150.0;
    const auto g = IncidenceGeometry::for_medium(medium, 0.0);
    const auto a = coefficients_at(plus, -75.0, g, 4096);
    const auto b = coefficients_at(minus, 75.0, g, 4096);
    const double dev = std::max(std::abs(a.r_l_complex - b.r_r_complex),
                                std::abs(a.r_r_complex - b.r_l_complex));
    record("reversing delta0 swaps the reflection sides", dev < 1e-10, "dev " + sci(dev));
  }
  if (simd::isa_supported(simd::Isa::kAvx2)) {
    const simd::Isa saved = simd::active_isa();
    const auto g = IncidenceGeometry::for_medium(medium, 0.3);
    simd::set_active_isa(simd::Isa::kScalar);
    const auto ref = scattering_coefficients(total_matrix(sample_profile(medium, -100.0, 4096), g));
    simd::set_active_isa(simd::Isa::kAvx2);
    const auto vec = scattering_coefficients(total_matrix(sample_profile(medium, -100.0, 4096), g));
    simd::set_active_isa(saved);
    const double dev = std::max({std::abs(ref.r_l_complex - vec.r_l_complex),
                                 std::abs(ref.r_r_complex - vec.r_r_complex),
                                 std::abs(ref.t_complex - vec.t_complex)});
    record("AVX2 kernels agree with the scalar reference", dev < 1e-10, "dev " + sci(dev));
  } else {
    record("AVX2 kernels agree with the scalar reference", true, "skipped: AVX2 unavailable");
  }
  return checks;
}

}  // namespace kkscatter
