#include "gbhe/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

namespace gbhe {

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != static_cast<int>(d)) throw std::invalid_argument("config: " + key + " expects an integer, got '" + v + "'");
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw std::invalid_argument("config: " + key + " expects a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',' || c == ' ' || c == '[' || c == ']' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) v = v.substr(1, v.size() - 2);
  return v;
}

}  // namespace

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "sgbhe-uniform") {
    c.levels = {8, 16, 32, 64};
  } else if (experiment == "gbhe-be-uniform") {
    c.levels = {8, 16, 32, 64};
  } else if (experiment == "gbhe-cn-uniform") {
    c.degree = 2;
    c.levels = {4, 8, 16, 32};
  } else if (experiment == "lshape-adaptive-case1" || experiment == "lshape-adaptive-case2") {
    c.levels = {4, 8, 16, 32, 64};
    c.adapt.mu = 0.5;
    c.adapt.max_refinements = 60;
    c.adapt.max_dofs = 60000;
  } else if (experiment == "moving-singularity") {
    c.dt = 0.1;
    c.initial_n = 4;
    c.adapt.mu = 0.5;
    c.adapt.max_refinements = 7;
  } else {
    throw std::invalid_argument("unknown experiment: " + experiment);
  }
  return c;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = unquote(raw);
  ModelParams& p = c.params;
  if (key == "experiment") {
    c.experiment = v;
  } else if (key == "alpha") {
    p.alpha = to_double(key, v);
  } else if (key == "nu") {
    p.nu = to_double(key, v);
  } else if (key == "beta") {
    p.beta = to_double(key, v);
  } else if (key == "gamma") {
    p.gamma = to_double(key, v);
  } else if (key == "delta") {
    p.delta = to_int(key, v);
  } else if (key == "eta") {
    p.eta = to_double(key, v);
    c.eta_series = {p.eta};
  } else if (key == "eta_series") {
    c.eta_series.clear();
    for (const auto& s : split_list(v)) c.eta_series.push_back(to_double(key, s));
  } else if (key == "penalty") {
    p.penalty = to_double(key, v);
  } else if (key == "kernel") {
    c.kernel = v;
  } else if (key == "kernel_tau") {
    c.kernel_tau = to_double(key, v);
  } else if (key == "kernel_scale") {
    c.kernel_scale = to_double(key, v);
  } else if (key == "degree") {
    c.degree = to_int(key, v);
  } else if (key == "levels") {
    c.levels.clear();
    for (const auto& s : split_list(v)) c.levels.push_back(to_int(key, s));
  } else if (key == "mu") {
    c.adapt.mu = to_double(key, v);
  } else if (key == "tol") {
    c.adapt.tol = to_double(key, v);
  } else if (key == "max_refinements") {
    c.adapt.max_refinements = to_int(key, v);
  } else if (key == "max_dofs") {
    c.adapt.max_dofs = to_int(key, v);
  } else if (key == "dt") {
    c.dt = to_double(key, v);
  } else if (key == "final_time") {
    c.final_time = to_double(key, v);
  } else if (key == "cn_memory_half") {
    c.cn_memory_half = to_bool(key, v);
  } else if (key == "cn_source") {
    if (v == "midpoint") c.cn_source = CnSource::Midpoint;
    else if (v == "endpoint-average") c.cn_source = CnSource::EndpointAverage;
    else throw std::invalid_argument("config: cn_source must be midpoint or endpoint-average");
  } else if (key == "memory_jump_gradient") {
    c.memory_jump_gradient = to_bool(key, v);
  } else if (key == "newton_tol") {
    c.newton.tol = to_double(key, v);
  } else if (key == "newton_max_iter") {
    c.newton.max_iter = to_int(key, v);
  } else if (key == "initial_n") {
    c.initial_n = to_int(key, v);
  } else if (key == "reset_each_step") {
    c.reset_each_step = to_bool(key, v);
  } else if (key == "out_dir") {
    c.out_dir = v;
  } else if (key == "dump_meshes") {
    c.dump_meshes = to_bool(key, v);
  } else if (key == "snapshot_every") {
    c.snapshot_every = to_int(key, v);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ExperimentConfig load_config(std::istream& is) {
  CLI::ConfigINI ini;
  const std::vector<CLI::ConfigItem> items = ini.from_config(is);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string experiment;
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    std::string value;
    for (std::size_t i = 0; i < it.inputs.size(); ++i) value += (i ? "," : "") + it.inputs[i];
    if (it.name == "experiment") experiment = unquote(value);
    else entries.emplace_back(it.name, value);
  }
  if (experiment.empty()) throw std::invalid_argument("config: missing 'experiment'");
  ExperimentConfig c = default_config(experiment);
  for (const auto& [k, v] : entries) apply_setting(c, k, v);
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  return load_config(is);
}

}  // namespace gbhe
