#include "kkscatter/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "kkscatter/constants.hpp"
#include "kkscatter/parallel.hpp"
#include "kkscatter/simd/kernels.hpp"
#include "kkscatter/transfer_matrix.hpp"

namespace kkscatter {

using constants::kPi;
using constants::kTwoPi;

Axis Axis::linspace(std::string name, double start, double stop, std::size_t count) {
  if (count < 2) throw SpecError("axis '" + name + "' needs count >= 2");
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  v.back() = stop;
  return {std::move(name), std::move(v)};
}

Axis Axis::list(std::string name, std::vector<double> values) {
  return {std::move(name), std::move(values)};
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"delta", "delta0", "omega_c", "theta",
                                              "phi",   "i_l",    "i_r",     "x"};
  return names;
}

const std::vector<std::string>& sweep_observables() {
  static const std::vector<std::string> names{
      "im_n",  "re_n", "r_l",      "r_r",        "t",    "phi_l", "phi_r",
      "phi_t", "s_l",  "s_r",      "contrast",   "absorption", "d_kk", "a_max"};
  return names;
}

std::size_t SweepTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw DomainError("no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> SweepTable::column_values(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

namespace {

bool contains(const std::vector<std::string>& names, const std::string& n) {
  return std::find(names.begin(), names.end(), n) != names.end();
}

bool needs_any(const SweepSpec& spec, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (contains(spec.observables, n)) return true;
  }
  return false;
}

bool defines(const SweepSpec& spec, const std::string& name) {
  if (spec.fixed.count(name)) return true;
  for (const auto& a : spec.axes) {
    if (a.name == name) return true;
  }
  return false;
}

}  // namespace

void validate(const SweepSpec& spec) {
  if (spec.axes.empty()) throw SpecError("sweep needs at least one axis");
  std::set<std::string> seen;
  for (const auto& a : spec.axes) {
    if (!contains(sweep_parameters(), a.name)) {
      throw SpecError("unknown sweep parameter '" + a.name + "'");
    }
    if (!seen.insert(a.name).second) throw SpecError("duplicate axis '" + a.name + "'");
    if (a.values.size() < 2) throw SpecError("axis '" + a.name + "' needs count >= 2");
    for (double v : a.values) {
      if (!std::isfinite(v)) throw SpecError("axis '" + a.name + "' has a non-finite value");
    }
  }
  for (const auto& [name, value] : spec.fixed) {
    if (!contains(sweep_parameters(), name)) {
      throw SpecError("unknown sweep parameter '" + name + "'");
    }
    if (seen.count(name)) throw SpecError("parameter '" + name + "' is both fixed and swept");
    if (!std::isfinite(value)) throw SpecError("fixed '" + name + "' is not finite");
  }
  if (spec.observables.empty()) throw SpecError("sweep needs at least one observable");
  std::set<std::string> obs;
  for (const auto& o : spec.observables) {
    if (!contains(sweep_observables(), o)) throw SpecError("unknown observable '" + o + "'");
    if (!obs.insert(o).second) throw SpecError("duplicate observable '" + o + "'");
  }
  if (spec.delta_per_delta0 && defines(spec, "delta")) {
    throw SpecError("delta is tied to delta0 and cannot also be set");
  }
  if (!spec.delta_per_delta0 && !defines(spec, "delta") &&
      needs_any(spec, {"r_l", "r_r", "t", "phi_l", "phi_r", "phi_t", "s_l", "s_r", "contrast",
                       "absorption", "d_kk", "a_max", "im_n", "re_n"})) {
    throw SpecError("delta is neither swept nor fixed");
  }
  if (needs_any(spec, {"im_n", "re_n"}) && !defines(spec, "x")) {
    throw SpecError("im_n/re_n need the position x to be swept or fixed");
  }
  if (contains(spec.observables, "a_max") && (defines(spec, "theta") || defines(spec, "phi"))) {
    throw SpecError("a_max maximizes over theta and phi; they cannot be set");
  }
  if (spec.ratio_rule != RatioRule::kNone && defines(spec, "i_r")) {
    throw SpecError("i_r is set by the ratio rule and cannot also be given");
  }
}

namespace {

struct Point {
  double delta = 0.0;
  double delta0 = 0.0;
  double omega_c = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double i_l = 1.0;
  double i_r = 1.0;
  double x = 0.0;
};

void assign(Point& p, const std::string& name, double v) {
  if (name == "delta") p.delta = v;
  else if (name == "delta0") p.delta0 = v;
  else if (name == "omega_c") p.omega_c = v;
  else if (name == "theta") p.theta = v;
  else if (name == "phi") p.phi = v;
  else if (name == "i_l") p.i_l = v;
  else if (name == "i_r") p.i_r = v;
  else if (name == "x") p.x = v;
}

Point base_point(const SweepSpec& spec, const MediumParams& params) {
  Point p;
  p.delta0 = params.delta0;
  p.omega_c = params.omega_c;
  for (const auto& [name, value] : spec.fixed) assign(p, name, value);
  return p;
}

MediumParams medium_at(const MediumParams& base, const Point& p) {
  MediumParams m = base;
  if (m.delta0 != p.delta0) {
    m.delta0 = p.delta0;
    m.omega_d0.reset();
    m.delta_d.reset();
  }
  m.omega_c = p.omega_c;
  return m;
}

class Evaluator {
 public:
  Evaluator(const SweepSpec& spec, const MediumParams& params, const SweepOptions& options)
      : spec_(spec), params_(params), options_(options) {}

  std::vector<double> operator()(Point p) {
    if (spec_.delta_per_delta0) p.delta = *spec_.delta_per_delta0 * p.delta0;
    const MediumParams m = medium_at(params_, p);
    std::optional<ScatteringCoefficients> coeffs;
    auto get_coeffs = [&]() -> const ScatteringCoefficients& {
      if (!coeffs) coeffs = cached(m, p, p.theta);
      return *coeffs;
    };
    if (spec_.ratio_rule != RatioRule::kNone &&
        needs_any(spec_, {"s_l", "s_r", "contrast", "absorption"})) {
      const ScatteringCoefficients& c =
          spec_.ratio_at_normal && p.theta != 0.0 ? normal_coeffs(m, p) : get_coeffs();
      const Side side = spec_.ratio_rule == RatioRule::kEq9 ? Side::kLeft : Side::kRight;
      const auto drive = coherent_drive(coherent_condition(c, side), p.i_l);
      if (!drive) {
        throw DomainError("ratio rule " + std::string(to_string(spec_.ratio_rule)) +
                          " has no solution at this point");
      }
      p.i_r = drive->i_r;
    }

    std::vector<double> out;
    out.reserve(spec_.observables.size());
    std::optional<ScatteringOutcome> outcome;
    auto get_outcome = [&]() -> const ScatteringOutcome& {
      if (!outcome) outcome = two_channel(get_coeffs(), TwoChannelDrive::make(p.i_l, p.i_r, p.phi));
      return *outcome;
    };
    std::optional<cdouble> n;
    auto get_n = [&] {
      if (!n) {
        n = refractive_index(index_scale(m.convention) * susceptibility(p.delta, p.x, m));
      }
      return *n;
    };
    for (const auto& o : spec_.observables) {
      if (o == "im_n") out.push_back(get_n().imag());
      else if (o == "re_n") out.push_back(get_n().real());
      else if (o == "r_l") out.push_back(get_coeffs().r_l());
      else if (o == "r_r") out.push_back(get_coeffs().r_r());
      else if (o == "t") out.push_back(get_coeffs().t());
      else if (o == "phi_l") out.push_back(get_coeffs().phi_l());
      else if (o == "phi_r") out.push_back(get_coeffs().phi_r());
      else if (o == "phi_t") out.push_back(get_coeffs().phi_t());
      else if (o == "s_l") out.push_back(get_outcome().s_l);
      else if (o == "s_r") out.push_back(get_outcome().s_r);
      else if (o == "contrast") out.push_back(get_outcome().contrast);
      else if (o == "absorption") out.push_back(get_outcome().absorption);
      else if (o == "d_kk") {
        out.push_back(d_kk(m, p.delta, options_.kk_resolution, options_.thresholds).d_kk);
      } else if (o == "a_max") {
        AbsorptionSearch s = options_.search;
        s.rule = spec_.ratio_rule;
        s.i_l = p.i_l;
        s.i_r = p.i_r;
        s.jobs = 1;
        out.push_back(max_absorption_over(m, p.delta, s, options_.disc).a_max);
      }
    }
    return out;
  }

 private:
  struct Key {
    double delta, delta0, omega_c, theta;
    bool operator==(const Key&) const = default;
  };

  ScatteringCoefficients cached(const MediumParams& m, const Point& p, double theta) {
    const Key key{p.delta, p.delta0, p.omega_c, theta};
    if (last_key_ && *last_key_ == key) return last_value_;
    last_value_ =
        coefficients(m, p.delta, IncidenceGeometry::for_medium(m, theta), options_.disc).coeffs;
    last_key_ = key;
    return last_value_;
  }

  ScatteringCoefficients normal_coeffs(const MediumParams& m, const Point& p) {
    const Key key{p.delta, p.delta0, p.omega_c, 0.0};
    if (normal_key_ && *normal_key_ == key) return normal_value_;
    normal_value_ =
        coefficients(m, p.delta, IncidenceGeometry::for_medium(m, 0.0), options_.disc).coeffs;
    normal_key_ = key;
    return normal_value_;
  }

  const SweepSpec& spec_;
  const MediumParams& params_;
  const SweepOptions& options_;
  std::optional<Key> last_key_;
  ScatteringCoefficients last_value_;
  std::optional<Key> normal_key_;
  ScatteringCoefficients normal_value_;
};

void check_point_domain(const Point& p, const MediumParams& params) {
  if (!(std::fabs(p.theta) < kPi / 2.0)) throw SpecError("theta must lie in (-90, 90) degrees");
  if (!(p.i_l >= 0.0) || !(p.i_r >= 0.0)) throw SpecError("intensities must be >= 0");
  if (!(p.x >= 0.0 && p.x <= params.length)) throw SpecError("x must lie in [0, L]");
}

std::string number_text(double v) { return format_number(v); }

std::map<std::string, std::string> metadata_for(const SweepSpec& spec,
                                                const MediumParams& params,
                                                const SweepOptions& options) {
  std::map<std::string, std::string> md;
  md["code_version"] = std::string(kCodeVersion);
  md["figure_id"] = spec.id;
  if (!spec.note.empty()) md["note"] = spec.note;
  md["medium.gamma31_hz"] = number_text(params.gamma31 / kTwoPi);
  md["medium.gamma21_hz"] = number_text(params.gamma21 * params.gamma31 / kTwoPi);
  md["medium.omega_c"] = number_text(params.omega_c);
  md["medium.delta_c"] = number_text(params.delta_c);
  md["medium.delta0"] = number_text(params.delta0);
  md["medium.n0_per_m3"] = number_text(params.n0);
  md["medium.d13_cm"] = number_text(params.d13);
  md["medium.length_m"] = number_text(params.length);
  md["medium.lambda_m"] = number_text(params.lambda_probe);
  md["medium.index_convention"] = std::string(to_string(params.convention));
  md["numerics.n_layers"] =
      options.disc.n_layers == 0 ? "auto" : std::to_string(options.disc.n_layers);
  md["numerics.rel_tol"] = number_text(options.disc.rel_tol);
  md["numerics.kk_resolution"] = std::to_string(options.kk_resolution);
  md["numerics.kk_threshold_lower"] = number_text(options.thresholds.lower);
  md["numerics.kk_threshold_upper"] = number_text(options.thresholds.upper);
  md["numerics.amax_theta_min_deg"] = number_text(options.search.theta_min * 180.0 / kPi);
  md["numerics.amax_theta_max_deg"] = number_text(options.search.theta_max * 180.0 / kPi);
  md["numerics.amax_theta_points"] = std::to_string(options.search.theta_points);
  md["numerics.amax_phi_points"] = std::to_string(options.search.phi_points);
  md["numerics.simd"] = std::string(simd::to_string(simd::active_isa()));
  md["sweep.ratio_rule"] = std::string(to_string(spec.ratio_rule));
  md["sweep.ratio_at_normal"] = spec.ratio_at_normal ? "true" : "false";
  if (spec.delta_per_delta0) md["sweep.delta_per_delta0"] = number_text(*spec.delta_per_delta0);
  for (const auto& [k, v] : spec.fixed) md["fixed." + k] = number_text(v);
  md["units"] = "rates in gamma31, theta/phi in rad, x in m";
  return md;
}

}  // namespace

std::vector<double> evaluate_point(const SweepSpec& spec, const MediumParams& params,
                                   const SweepOptions& options,
                                   const std::map<std::string, double>& point) {
  validate(spec);
  validate(params);
  Point p = base_point(spec, params);
  for (const auto& a : spec.axes) {
    const auto it = point.find(a.name);
    if (it == point.end()) throw SpecError("point is missing axis '" + a.name + "'");
    assign(p, a.name, it->second);
  }
  check_point_domain(p, params);
  Evaluator eval(spec, params, options);
  return eval(p);
}

SweepTable run_sweep(const SweepSpec& spec, const MediumParams& params,
                     const SweepOptions& options) {
  validate(spec);
  validate(params);
  const auto start = std::chrono::steady_clock::now();

  std::size_t total = 1;
  for (const auto& a : spec.axes) total *= a.values.size();

  const Point base = base_point(spec, params);
  auto axis_values = [&](std::size_t flat) {
    std::vector<double> v(spec.axes.size());
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto& a = spec.axes[k];
      v[k] = a.values[flat % a.values.size()];
      flat /= a.values.size();
    }
    return v;
  };
  for (const auto& a : spec.axes) {
    for (double v : a.values) {
      Point p = base;
      assign(p, a.name, v);
      check_point_domain(p, params);
    }
  }
  check_point_domain(base, params);

  SweepTable table;
  for (const auto& a : spec.axes) table.columns.push_back(a.name);
  for (const auto& o : spec.observables) table.columns.push_back(o);
  table.rows.resize(total);

  const unsigned jobs = options.jobs == 0 ? default_jobs() : options.jobs;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, total));
  parallel_for(workers, static_cast<unsigned>(workers), [&](std::size_t w) {
    Evaluator eval(spec, params, options);
    const std::size_t begin = total * w / workers;
    const std::size_t end = total * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) {
      std::vector<double> row = axis_values(i);
      Point p = base;
      for (std::size_t k = 0; k < row.size(); ++k) assign(p, spec.axes[k].name, row[k]);
      const std::vector<double> obs = eval(p);
      row.insert(row.end(), obs.begin(), obs.end());
      for (double v : row) {
        if (!std::isfinite(v)) throw DomainError("sweep produced a non-finite value");
      }
      table.rows[i] = std::move(row);
    }
  });

  table.metadata = metadata_for(spec, params, options);
  table.metadata["rows"] = std::to_string(total);
  table.metadata["jobs"] = std::to_string(workers);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", seconds);
  table.metadata["wall_time_s"] = buf;
  return table;
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{
      "FIG2A", "FIG2B", "FIG2C", "FIG2D", "FIG2E", "FIG2F", "FIG2G", "FIG3A", "FIG3B",
      "FIG3C", "FIG4A", "FIG4B", "FIG4C", "FIG4D", "FIG4E", "FIG4F", "FIG5A", "FIG5B",
      "FIG5C", "FIG6"};
  return ids;
}

SweepSpec figure_preset(std::string_view id) {
  constexpr double kLength = 5.0e-6;
  constexpr double kDeg = kPi / 180.0;
  const std::string name(id);
  SweepSpec s;
  s.id = name;
  auto x_axis = [&] { return Axis::linspace("x", 0.0, kLength, 101); };

  if (name == "FIG2A" || name == "FIG2B") {
    s.axes = {Axis::linspace("delta0", -300.0, 300.0, 121), x_axis()};
    s.delta_per_delta0 = -0.5;
    s.fixed = {{"omega_c", 10.0}, {"theta", 0.0}};
    s.observables = {name == "FIG2A" ? "im_n" : "re_n"};
    s.note = "delta0 extent estimated from figure";
  } else if (name == "FIG2C" || name == "FIG2D") {
    s.axes = {Axis::linspace("omega_c", 0.0, 20.0, 81), x_axis()};
    s.fixed = {{"delta0", 200.0}, {"delta", -100.0}, {"theta", 0.0}};
    s.observables = {name == "FIG2C" ? "im_n" : "re_n"};
    s.note = "omega_c extent estimated from figure";
  } else if (name == "FIG2E" || name == "FIG2F") {
    s.axes = {Axis::linspace("delta", -300.0, 100.0, 161), x_axis()};
    s.fixed = {{"delta0", 200.0}, {"omega_c", 10.0}, {"theta", 0.0}};
    s.observables = {name == "FIG2E" ? "im_n" : "re_n"};
    s.note = "delta extent estimated from figure";
  } else if (name == "FIG2G") {
    s.axes = {Axis::linspace("delta0", -300.0, 300.0, 121)};
    s.delta_per_delta0 = -0.5;
    s.fixed = {{"omega_c", 10.0}, {"theta", 0.0}};
    s.observables = {"r_l", "r_r", "t"};
    s.note = "delta0 extent estimated from figure";
  } else if (name == "FIG3A") {
    s.axes = {Axis::linspace("phi", 0.0, kTwoPi, 256)};
    s.fixed = {{"delta", -100.0}, {"delta0", 200.0}, {"omega_c", 10.0},
               {"i_l", 1.0},      {"i_r", 1.15},     {"theta", 0.0}};
    s.observables = {"s_l", "s_r"};
  } else if (name == "FIG3B") {
    s.axes = {Axis::linspace("delta", -200.0, 0.0, 81), Axis::linspace("phi", 0.0, kTwoPi, 64)};
    s.fixed = {{"delta0", 200.0}, {"omega_c", 10.0}, {"i_l", 1.0}, {"i_r", 1.15}, {"theta", 0.0}};
    s.observables = {"contrast"};
    s.note = "delta extent estimated from figure";
  } else if (name == "FIG3C") {
    s.axes = {Axis::linspace("delta", -200.0, 20.0, 111)};
    s.fixed = {{"delta0", 200.0}, {"omega_c", 10.0}};
    s.observables = {"d_kk"};
    s.note = "delta extent estimated from figure";
  } else if (name == "FIG4A" || name == "FIG4B" || name == "FIG4C" || name == "FIG4D") {
    const bool vary_right = name == "FIG4A" || name == "FIG4B";
    s.axes = {Axis::list("phi", {0.0, 0.4 * kPi, kPi, 1.4 * kPi}),
              Axis::linspace(vary_right ? "i_r" : "i_l", 0.0, 2.0, 101)};
    s.fixed = {{"delta", -100.0}, {"delta0", 200.0}, {"omega_c", 10.0}, {"theta", 0.0},
               {vary_right ? "i_l" : "i_r", 1.0}};
    s.observables = {name == "FIG4A" || name == "FIG4C" ? "s_r" : "s_l"};
    s.note = "intensity extent estimated from figure";
  } else if (name == "FIG4E" || name == "FIG4F") {
    s.axes = {Axis::linspace("omega_c", 0.0, 20.0, 81), Axis::linspace("phi", 0.0, kTwoPi, 64)};
    s.fixed = {{"delta", -100.0}, {"delta0", 200.0}, {"i_l", 1.0}, {"i_r", 1.15}, {"theta", 0.0}};
    s.observables = {name == "FIG4E" ? "s_r" : "s_l"};
    s.note = "omega_c extent estimated from figure";
  } else if (name == "FIG5A" || name == "FIG5B" || name == "FIG5C") {
    s.axes = {Axis::linspace("theta", 0.0, 60.0 * kDeg, 61),
              Axis::linspace("phi", 0.0, kTwoPi, 64)};
    s.fixed = {{"delta", -50.0}, {"delta0", 100.0}, {"omega_c", 10.0}, {"i_l", 1.0}};
    s.ratio_rule = RatioRule::kEq10;
    s.observables = {name == "FIG5A" ? "s_r" : name == "FIG5B" ? "s_l" : "absorption"};
    s.note = "theta extent estimated from figure";
  } else if (name == "FIG6") {
    s.axes = {Axis::linspace("delta", -130.0, 10.0, 141)};
    s.fixed = {{"delta0", 100.0}, {"omega_c", 10.0}, {"i_l", 1.0}};
    s.ratio_rule = RatioRule::kEq10;
    s.observables = {"a_max"};
  } else {
    std::string known;
    for (const auto& i : figure_ids()) known += (known.empty() ? "" : ", ") + i;
    throw SpecError("unknown figure id '" + name + "' (known: " + known + ")");
  }
  return s;
}

std::string format_number(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", precision, value);
  return buf;
}

void write_csv(std::ostream& out, const SweepTable& table, int precision) {
  bool first = true;
  auto sep = [&] {
    if (!first) out << ',';
    first = false;
  };
  for (const auto& c : table.columns) {
    sep();
    out << c;
  }
  for (const auto& [name, values] : table.text_columns) {
    sep();
    out << name;
  }
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    first = true;
    for (double v : table.rows[r]) {
      sep();
      out << format_number(v, precision);
    }
    for (const auto& [name, values] : table.text_columns) {
      sep();
      out << values.at(r);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const SweepTable& table) {
  nlohmann::ordered_json j;
  j["metadata"] = table.metadata;
  std::vector<std::string> names = table.columns;
  for (const auto& [name, values] : table.text_columns) names.push_back(name);
  j["columns"] = names;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    std::vector<double> col;
    col.reserve(table.rows.size());
    for (const auto& r : table.rows) col.push_back(r[c]);
    data[table.columns[c]] = col;
  }
  for (const auto& [name, values] : table.text_columns) data[name] = values;
  j["data"] = std::move(data);
  out << j.dump(2) << '\n';
}

}  // namespace kkscatter
