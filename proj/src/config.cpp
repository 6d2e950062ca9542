#include "vhj/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace vhj {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "env.preset",
      "env.form",
      "env.gamma",
      "env.a_min",
      "env.potential.model",
      "env.potential.value",
      "env.potential.amplitude",
      "env.potential.period",
      "env.potential.harmonics",
      "env.potential.modes",
      "env.potential.decay",
      "env.potential.bump_density",
      "env.potential.bump_width",
      "env.pin.model",
      "env.pin.value",
      "env.pin.amplitude",
      "env.pin.period",
      "env.pin.harmonics",
      "env.pin.modes",
      "env.pin.decay",
      "env.pin.bump_density",
      "env.pin.bump_width",
      "env.general.c0_lo",
      "env.general.c0_hi",
      "env.diffusion.model",
      "env.diffusion.value",
      "env.diffusion.amplitude",
      "env.diffusion.period",
      "env.diffusion.harmonics",
      "env.diffusion.modes",
      "env.diffusion.decay",
      "env.diffusion.bump_density",
      "env.diffusion.bump_width",
      "run.seeds",
      "run.seed_base",
      "run.window",
      "run.workers",
      "run.output_dir",
      "run.plots",
      "cell.tol",
      "cell.grid_dx",
      "cell.delta",
      "cell.bisect_depth",
      "cell.lambda0_tol",
      "cell.lambda0_richardson",
      "theta.trim",
      "theta.lambda_min",
      "theta.lambda_span",
      "theta.lambda_count",
      "theta.lambda_points",
      "theta.grid",
      "theta.grid_count",
      "theta.label_tol",
      "gap.collar",
      "gap.mu_step",
      "gap.reach",
      "gap.n_schedule",
      "gap.interior_theta_res",
      "parabolic.dx",
      "parabolic.t_end",
      "parabolic.theta",
      "parabolic.theta_points",
      "parabolic.sample_count",
      "parabolic.cfl_safety",
      "parabolic.halfwidth",
      "parabolic.tail_fraction",
      "parabolic.dump_spacetime",
      "eps.list",
      "eps.t_obs",
      "bridge.mu",
      "bridge.epsilon",
      "bridge.margin",
      "bridge.lambda_offset",
      "bridge.n",
      "validate.suite",
      "validate.double_run",
  };
  return keys;
}

FieldSpec field_from_config(const RunConfig& c, const std::string& prefix) {
  FieldSpec f;
  const std::string model = c.get_string(prefix + ".model", "constant");
  f.model = field_model_from_name(model);
  f.constant_value = c.get_double(prefix + ".value", 0.0);
  f.amplitude = c.get_double(prefix + ".amplitude", 1.0);
  f.period = c.get_double(prefix + ".period", 1.0);
  f.modes = c.get_int(prefix + ".modes", 16);
  f.decay = c.get_double(prefix + ".decay", 2.0);
  f.bump_density = c.get_double(prefix + ".bump_density", 1.0);
  f.bump_width = c.get_double(prefix + ".bump_width", 0.35);
  if (c.has(prefix + ".harmonics")) f.harmonics = c.get_list(prefix + ".harmonics", {1.0});
  return f;
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config file not found: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return from_text(os.str());
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (c.kv_.count(key))
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key " + key);
    c.kv_[key] = val;
  }
  c.validate_keys();
  return c;
}

void RunConfig::validate_keys() const {
  for (const auto& [k, v] : kv_)
    if (!known_keys().count(k)) throw ConfigError("unknown config key: " + k);
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

double RunConfig::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw ConfigError("config key " + key + ": not a number: " + it->second);
  }
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw ConfigError("config key " + key + ": not an integer: " + it->second);
  }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("config key " + key + ": not a boolean: " + it->second);
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::vector<double> RunConfig::get_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<double> out;
  std::istringstream is(it->second);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (...) {
      throw ConfigError("config key " + key + ": bad list element: " + tok);
    }
  }
  if (out.empty()) throw ConfigError("config key " + key + ": empty list");
  return out;
}

EnvironmentSpec RunConfig::environment() const {
  if (has("env.preset")) {
    EnvironmentSpec s = preset_env(get_string("env.preset", ""));
    return s;
  }
  EnvironmentSpec s;
  s.form = ham_form_from_name(get_string("env.form", "separable"));
  s.gamma = get_double("env.gamma", 2.0);
  s.a_min = get_double("env.a_min", 1.0);
  s.potential = field_from_config(*this, "env.potential");
  s.pin = field_from_config(*this, "env.pin");
  s.diffusion = field_from_config(*this, "env.diffusion");
  if (!has("env.diffusion.model")) {
    s.diffusion.model = FieldModel::constant;
    s.diffusion.constant_value = 1.0;
  }
  s.general_c0_lo = get_double("env.general.c0_lo", 0.5);
  s.general_c0_hi = get_double("env.general.c0_hi", 1.5);
  s.validate();
  return s;
}

ThetaConfig RunConfig::theta_config() const {
  ThetaConfig cfg;
  const double w = get_double("run.window", 40.0);
  cfg.window = {-w, w};
  cfg.trim = get_double("theta.trim", 0.8);
  cfg.tol = get_double("cell.tol", 1e-9);
  cfg.cell.grid_dx = get_double("cell.grid_dx", 1.0 / 256);
  cfg.cell.delta = get_double("cell.delta", cfg.cell.delta);
  cfg.cell.bisect_depth = get_int("cell.bisect_depth", cfg.cell.bisect_depth);
  cfg.cell.lambda0_tol = get_double("cell.lambda0_tol", cfg.cell.lambda0_tol);
  cfg.cell.lambda0_richardson =
      get_bool("cell.lambda0_richardson", cfg.cell.lambda0_richardson);
  cfg.label_tol = get_double("theta.label_tol", cfg.label_tol);
  cfg.collar = get_double("gap.collar", cfg.collar);
  cfg.mu_step = get_double("gap.mu_step", cfg.mu_step);
  cfg.reach = get_double("gap.reach", cfg.reach);
  cfg.interior_theta_res = get_double("gap.interior_theta_res", cfg.interior_theta_res);
  if (has("gap.n_schedule")) {
    cfg.n_schedule.clear();
    for (double v : get_list("gap.n_schedule", {}))
      cfg.n_schedule.push_back(static_cast<int>(v));
  }
  cfg.workers = workers();
  return cfg;
}

std::vector<uint64_t> RunConfig::seeds() const {
  const int n = get_int("run.seeds", 1);
  if (n < 1) throw ConfigError("run.seeds must be >= 1");
  const uint64_t base = static_cast<uint64_t>(get_int("run.seed_base", 42));
  std::vector<uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(base + static_cast<uint64_t>(i));
  return out;
}

std::vector<double> RunConfig::lambda_grid(double lambda0) const {
  if (has("theta.lambda_points")) return get_list("theta.lambda_points", {});
  const double lo = has("theta.lambda_min") ? get_double("theta.lambda_min", 0.0) : lambda0;
  const double span = get_double("theta.lambda_span", 10.0);
  const int count = get_int("theta.lambda_count", 20);
  if (count < 1) throw ConfigError("theta.lambda_count must be >= 1");
  return linspace(lo, lo + span, count);
}

std::vector<double> RunConfig::theta_grid() const {
  if (has("theta.grid")) return get_list("theta.grid", {});
  return {};
}

std::string RunConfig::output_dir() const { return get_string("run.output_dir", "out"); }

unsigned RunConfig::workers() const {
  const int w = get_int("run.workers", 0);
  if (w < 0) throw ConfigError("run.workers must be >= 0");
  return static_cast<unsigned>(w);
}

std::string RunConfig::hash() const {
  std::string normalized;
  for (const auto& [k, v] : kv_) normalized += k + "=" + v + "\n";
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(normalized)));
  return buf;
}

EnvironmentSpec preset_env(const std::string& name) {
  EnvironmentSpec s;
  s.form = HamForm::separable;
  s.gamma = 2.0;
  s.potential.model = FieldModel::constant;
  s.potential.constant_value = 0.0;
  s.diffusion.model = FieldModel::constant;
  s.diffusion.constant_value = 1.0;
  s.a_min = 1.0;
  if (name == "xfree_p2") return s;
  if (name == "xfree_p3") {
    s.gamma = 3.0;
    return s;
  }
  if (name == "xfree_dw") {
    s.form = HamForm::double_well;
    return s;
  }
  if (name == "cosine") {
    s.potential.model = FieldModel::periodic_cosine;
    s.potential.amplitude = 1.0;
    s.potential.period = 1.0;
    s.potential.harmonics = {1.0};
    return s;
  }
  if (name == "doublewell") {
    s.form = HamForm::double_well;
    s.potential.model = FieldModel::periodic_cosine;
    s.potential.amplitude = 0.5;
    s.potential.period = 1.0;
    s.potential.harmonics = {1.0};
    return s;
  }
  if (name == "random_fourier") {
    s.potential.model = FieldModel::random_fourier;
    s.potential.amplitude = 0.8;
    s.potential.period = 8.0;
    s.potential.modes = 12;
    s.potential.decay = 2.0;
    s.diffusion.model = FieldModel::periodic_cosine;
    s.diffusion.amplitude = 1.0;
    s.diffusion.period = 3.0;
    s.diffusion.harmonics = {1.0};
    s.a_min = 0.6;
    return s;
  }
  if (name == "pinned") {
    s.form = HamForm::pinned;
    s.gamma = 3.0;
    s.pin.model = FieldModel::periodic_cosine;
    s.pin.amplitude = 1.0;
    s.pin.period = 1.0;
    s.pin.harmonics = {1.0};
    s.potential.model = FieldModel::periodic_cosine;
    s.potential.amplitude = 0.3;
    s.potential.period = 1.0;
    s.potential.harmonics = {1.0};
    return s;
  }
  throw ConfigError("unknown environment preset: " + name);
}

}  // namespace vhj
