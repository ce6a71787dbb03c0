#include "kkscatter/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "kkscatter/constants.hpp"

extern char** environ;

namespace kkscatter {

using constants::kPi;
using constants::kTwoPi;

MediumParams MediumSection::params() const {
  MediumParams p;
  p.gamma31 = kTwoPi * gamma31_hz;
  p.gamma21 = gamma21_hz / gamma31_hz;
  p.omega_c = omega_c;
  p.delta_c = delta_c;
  p.delta0 = delta0;
  p.n0 = n0_per_m3;
  p.d13 = d13_cm;
  p.length = length_m;
  p.lambda_probe = lambda_m;
  p.convention = index_convention;
  p.omega_d0 = omega_d0;
  p.delta_d = delta_d;
  return p;
}

SweepOptions RunConfig::sweep_options(unsigned jobs) const {
  SweepOptions o;
  o.disc.n_layers = numerics.n_layers;
  o.disc.rel_tol = numerics.rel_tol;
  o.kk_resolution = numerics.kk_resolution;
  o.thresholds = {numerics.kk_threshold_lower, numerics.kk_threshold_upper};
  o.search.theta_min = numerics.amax_theta_min_deg * kPi / 180.0;
  o.search.theta_max = numerics.amax_theta_max_deg * kPi / 180.0;
  o.search.theta_points = numerics.amax_theta_points;
  o.search.phi_points = numerics.amax_phi_points;
  o.jobs = jobs;
  return o;
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("constraint violation: " + what);
  };
  require(std::isfinite(c.medium.gamma31_hz) && c.medium.gamma31_hz > 0.0,
          "medium.gamma31_hz must be > 0");
  require(std::isfinite(c.medium.gamma21_hz) && c.medium.gamma21_hz > 0.0,
          "medium.gamma21_hz must be > 0");
  require(c.medium.omega_d0.has_value() == c.medium.delta_d.has_value(),
          "medium.omega_d0 and medium.delta_d must be given together");
  try {
    validate(c.medium.params());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("constraint violation: ") + e.what());
  }
  const auto& n = c.numerics;
  require(n.n_layers == 0 || n.n_layers >= 2, "numerics.n_layers must be auto or >= 2");
  require(std::isfinite(n.rel_tol) && n.rel_tol > 0.0, "numerics.rel_tol must be > 0");
  require(n.kk_resolution >= 64 && n.kk_resolution <= kMaxKKResolution,
          "numerics.kk_resolution must lie in [64, " + std::to_string(kMaxKKResolution) + "]");
  require(n.kk_threshold_lower > 0.0 && n.kk_threshold_lower < n.kk_threshold_upper &&
              n.kk_threshold_upper < 1.0,
          "numerics.kk_threshold_* must satisfy 0 < lower < upper < 1");
  require(n.amax_theta_min_deg >= 0.0 && n.amax_theta_min_deg <= n.amax_theta_max_deg &&
              n.amax_theta_max_deg < 90.0,
          "numerics.amax_theta_*_deg must satisfy 0 <= min <= max < 90");
  require(n.amax_theta_points >= 1 && n.amax_phi_points >= 1,
          "numerics.amax_*_points must be >= 1");
  require(n.simd == "auto" || n.simd == "scalar" || n.simd == "avx2",
          "numerics.simd must be auto, scalar or avx2");
  require(c.output.precision >= 1 && c.output.precision <= 17,
          "output.precision must lie in [1, 17]");
  require(!c.output.path.empty(), "output.path must not be empty");
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d)) {
    throw ConfigError("parse error: " + key + " = '" + v + "' is not a finite number");
  }
  return d;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
    throw ConfigError("parse error: " + key + " = '" + v + "' is not a non-negative integer");
  }
  errno = 0;
  const unsigned long long n = std::strtoull(v.c_str(), nullptr, 10);
  if (errno == ERANGE) throw ConfigError("parse error: " + key + " is out of range");
  return static_cast<std::size_t>(n);
}

// Applies one key; returns false for an unknown key.
bool set_key(RunConfig& c, const std::string& section, const std::string& key,
             const std::string& value) {
  const std::string full = section + "." + key;
  auto& m = c.medium;
  auto& n = c.numerics;
  auto& o = c.output;
  if (section == "medium") {
    if (key == "gamma31_hz") m.gamma31_hz = to_double(full, value);
    else if (key == "gamma21_hz") m.gamma21_hz = to_double(full, value);
    else if (key == "omega_c") m.omega_c = to_double(full, value);
    else if (key == "delta_c") m.delta_c = to_double(full, value);
    else if (key == "delta0") m.delta0 = to_double(full, value);
    else if (key == "n0_per_m3") m.n0_per_m3 = to_double(full, value);
    else if (key == "d13_cm") m.d13_cm = to_double(full, value);
    else if (key == "length_m") m.length_m = to_double(full, value);
    else if (key == "lambda_m") m.lambda_m = to_double(full, value);
    else if (key == "omega_d0") m.omega_d0 = to_double(full, value);
    else if (key == "delta_d") m.delta_d = to_double(full, value);
    else if (key == "index_convention") m.index_convention = parse_index_convention(value);
    else return false;
  } else if (section == "numerics") {
    if (key == "n_layers") n.n_layers = value == "auto" ? 0 : to_count(full, value);
    else if (key == "rel_tol") n.rel_tol = to_double(full, value);
    else if (key == "kk_resolution") n.kk_resolution = to_count(full, value);
    else if (key == "kk_threshold_lower") n.kk_threshold_lower = to_double(full, value);
    else if (key == "kk_threshold_upper") n.kk_threshold_upper = to_double(full, value);
    else if (key == "amax_theta_min_deg") n.amax_theta_min_deg = to_double(full, value);
    else if (key == "amax_theta_max_deg") n.amax_theta_max_deg = to_double(full, value);
    else if (key == "amax_theta_points") n.amax_theta_points = to_count(full, value);
    else if (key == "amax_phi_points") n.amax_phi_points = to_count(full, value);
    else if (key == "simd") n.simd = value;
    else return false;
  } else if (section == "output") {
    if (key == "format") {
      if (value == "csv") o.format = OutputFormat::kCsv;
      else if (value == "json") o.format = OutputFormat::kJson;
      else throw ConfigError("parse error: output.format must be csv or json");
    } else if (key == "path") {
      o.path = value;
    } else if (key == "precision") {
      o.precision = static_cast<int>(std::min<std::size_t>(to_count(full, value), 1000));
    } else {
      return false;
    }
  } else {
    throw ConfigError("unknown config section [" + section + "]");
  }
  return true;
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("parse error: " + where + "unterminated section");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (section != "medium" && section != "numerics" && section != "output") {
        throw ConfigError("parse error: " + where + "unknown config section [" + section + "]");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("parse error: " + where + "expected key = value");
    if (section.empty()) throw ConfigError("parse error: " + where + "key outside any section");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (!seen.insert(section + "." + key).second) {
      throw ConfigError("parse error: " + where + "duplicate key " + section + "." + key);
    }
    try {
      if (!set_key(c, section, key, value)) {
        throw ConfigError("unknown config key " + section + "." + key);
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  validate(c);
  return c;
}

std::map<std::string, std::string> kkscatter_environment() {
  std::map<std::string, std::string> env;
  for (char** e = environ; e && *e; ++e) {
    const std::string_view entry(*e);
    if (entry.rfind("KKSCATTER_", 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  return env;
}

void apply_env_overrides(RunConfig& config, const std::map<std::string, std::string>& env) {
  static constexpr std::string_view kPrefix = "KKSCATTER_";
  for (const auto& [name, value] : env) {
    if (name.rfind(kPrefix, 0) != 0) continue;
    std::string rest = name.substr(kPrefix.size());
    std::transform(rest.begin(), rest.end(), rest.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    const auto us = rest.find('_');
    if (us == std::string::npos) {
      throw ConfigError("environment override " + name + " does not name <SECTION>_<KEY>");
    }
    const std::string section = rest.substr(0, us);
    const std::string key = rest.substr(us + 1);
    try {
      if (!set_key(config, section, key, trim(value))) {
        throw ConfigError("unknown config key " + section + "." + key);
      }
    } catch (const ConfigError& e) {
      throw ConfigError("environment override " + name + ": " + e.what());
    }
  }
  validate(config);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig c = parse_config(buf.str());
  apply_env_overrides(c, kkscatter_environment());
  return c;
}

RunConfig default_config() {
  RunConfig c;
  apply_env_overrides(c, kkscatter_environment());
  return c;
}

std::string write_config(const RunConfig& c) {
  std::ostringstream out;
  const auto& m = c.medium;
  out << "[medium]\n";
  out << "gamma31_hz = " << number(m.gamma31_hz) << '\n';
  out << "gamma21_hz = " << number(m.gamma21_hz) << '\n';
  out << "omega_c = " << number(m.omega_c) << '\n';
  out << "delta_c = " << number(m.delta_c) << '\n';
  out << "delta0 = " << number(m.delta0) << '\n';
  out << "n0_per_m3 = " << number(m.n0_per_m3) << '\n';
  out << "d13_cm = " << number(m.d13_cm) << '\n';
  out << "length_m = " << number(m.length_m) << '\n';
  out << "lambda_m = " << number(m.lambda_m) << '\n';
  out << "index_convention = " << to_string(m.index_convention) << '\n';
  if (m.omega_d0) out << "omega_d0 = " << number(*m.omega_d0) << '\n';
  if (m.delta_d) out << "delta_d = " << number(*m.delta_d) << '\n';
  const auto& n = c.numerics;
  out << "\n[numerics]\n";
  out << "n_layers = " << (n.n_layers == 0 ? std::string("auto") : std::to_string(n.n_layers))
      << '\n';
  out << "rel_tol = " << number(n.rel_tol) << '\n';
  out << "kk_resolution = " << n.kk_resolution << '\n';
  out << "kk_threshold_lower = " << number(n.kk_threshold_lower) << '\n';
  out << "kk_threshold_upper = " << number(n.kk_threshold_upper) << '\n';
  out << "amax_theta_min_deg = " << number(n.amax_theta_min_deg) << '\n';
  out << "amax_theta_max_deg = " << number(n.amax_theta_max_deg) << '\n';
  out << "amax_theta_points = " << n.amax_theta_points << '\n';
  out << "amax_phi_points = " << n.amax_phi_points << '\n';
  out << "simd = " << n.simd << '\n';
  out << "\n[output]\n";
  out << "format = " << (c.output.format == OutputFormat::kCsv ? "csv" : "json") << '\n';
  out << "path = " << c.output.path << '\n';
  out << "precision = " << c.output.precision << '\n';
  return out.str();
}

}  // namespace kkscatter
