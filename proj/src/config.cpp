#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "aircomp/error.hpp"
#include "aircomp/harness.hpp"
#include "json.hpp"

namespace aircomp {

namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys = {
    "K",           "N",          "L",
    "path_loss_db", "noise_dbm", "power_dbm",
    "region_over_lambda", "wavelength", "min_spacing_over_lambda",
    "trials",      "master_seed", "scheme",
    "optimizer"};

const std::set<std::string> kOptimizerKeys = {
    "outer_max_iters", "outer_rel_tol", "inner_max_iters", "armijo_c",
    "step_shrink",     "init_step",     "init_mode",       "multistarts"};

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
  return v;
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError(key, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(key, "out of range");
  return static_cast<int>(v);
}

SweepAxis get_axis(const json& j, const std::string& key, bool integral) {
  SweepAxis axis;
  auto read_one = [&](const json& item) {
    return integral ? static_cast<double>(get_int(item, key))
                    : get_number(item, key);
  };
  if (j.is_array()) {
    axis.is_list = true;
    if (j.empty()) throw ConfigError(key, "sweep list must be non-empty");
    for (const auto& item : j) axis.values.push_back(read_one(item));
    for (std::size_t i = 1; i < axis.values.size(); ++i) {
      if (!(axis.values[i] > axis.values[i - 1])) {
        throw ConfigError(key, "sweep list must be strictly increasing");
      }
    }
  } else {
    axis.values.push_back(read_one(j));
  }
  return axis;
}

void parse_optimizer(const json& j, OptimizerConfig& opt) {
  if (!j.is_object()) throw ConfigError("optimizer", "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string name = "optimizer." + key;
    if (!kOptimizerKeys.contains(key)) throw ConfigError(name, "unknown key");
    if (key == "outer_max_iters") {
      opt.outer_max_iters = get_int(value, name);
    } else if (key == "outer_rel_tol") {
      opt.outer_rel_tol = get_number(value, name);
    } else if (key == "inner_max_iters") {
      opt.inner_max_iters = get_int(value, name);
    } else if (key == "armijo_c") {
      opt.armijo_c = get_number(value, name);
    } else if (key == "step_shrink") {
      opt.step_shrink = get_number(value, name);
    } else if (key == "init_step") {
      opt.init_step = get_number(value, name);
    } else if (key == "init_mode") {
      if (!value.is_string()) throw ConfigError(name, "expected a string");
      const auto mode = parse_init_mode(value.get<std::string>());
      if (!mode) throw ConfigError(name, "expected grid, random or ula-clipped");
      opt.init_mode = *mode;
    } else if (key == "multistarts") {
      opt.multistarts = get_int(value, name);
    }
  }
}

}  // namespace

std::string ExperimentConfig::sweep_name() const {
  if (num_antennas.is_list) return "N";
  if (region_over_lambda.is_list) return "region_over_lambda";
  return "power_dbm";
}

const SweepAxis& ExperimentConfig::sweep_axis() const {
  if (num_antennas.is_list) return num_antennas;
  if (region_over_lambda.is_list) return region_over_lambda;
  return power_dbm;
}

ScenarioConfig ExperimentConfig::point(double sweep_value) const {
  ScenarioConfig sc;
  sc.num_sensors = num_sensors;
  sc.num_antennas = static_cast<int>(num_antennas.values.front());
  sc.paths_per_sensor = paths_per_sensor;
  sc.path_loss_db = path_loss_db;
  sc.noise_dbm = noise_dbm;
  sc.power_dbm = power_dbm.values.front();
  sc.region_over_lambda = region_over_lambda.values.front();
  sc.wavelength = wavelength;
  sc.min_spacing_over_lambda = min_spacing_over_lambda;
  const std::string name = sweep_name();
  if (name == "N") {
    sc.num_antennas = static_cast<int>(sweep_value);
  } else if (name == "region_over_lambda") {
    sc.region_over_lambda = sweep_value;
  } else {
    sc.power_dbm = sweep_value;
  }
  return sc;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.num_sensors < 1) throw ConfigError("K", "must be >= 1");
  if (cfg.paths_per_sensor < 1) throw ConfigError("L", "must be >= 1");
  for (double n : cfg.num_antennas.values) {
    if (n < 1.0) throw ConfigError("N", "must be >= 1");
  }
  for (double a : cfg.region_over_lambda.values) {
    if (!(a > 0.0)) throw ConfigError("region_over_lambda", "must be > 0");
  }
  if (!(cfg.wavelength > 0.0)) throw ConfigError("wavelength", "must be > 0");
  if (!(cfg.min_spacing_over_lambda >= 0.0)) {
    throw ConfigError("min_spacing_over_lambda", "must be >= 0");
  }
  if (cfg.trials < 1) throw ConfigError("trials", "must be >= 1");
  const int lists = int{cfg.num_antennas.is_list} +
                    int{cfg.power_dbm.is_list} +
                    int{cfg.region_over_lambda.is_list};
  if (lists > 1) {
    throw ConfigError("sweep", "at most one of N, power_dbm, region_over_lambda may be a list");
  }
  try {
    validate(cfg.optimizer);
  } catch (const InvalidInputError& e) {
    throw ConfigError("optimizer", e.what());
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "config must be an object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : root.items()) {
    if (!kTopKeys.contains(key)) throw ConfigError(key, "unknown key");
    if (key == "K") {
      cfg.num_sensors = get_int(value, key);
    } else if (key == "N") {
      cfg.num_antennas = get_axis(value, key, true);
    } else if (key == "L") {
      cfg.paths_per_sensor = get_int(value, key);
    } else if (key == "path_loss_db") {
      cfg.path_loss_db = get_number(value, key);
    } else if (key == "noise_dbm") {
      cfg.noise_dbm = get_number(value, key);
    } else if (key == "power_dbm") {
      cfg.power_dbm = get_axis(value, key, false);
    } else if (key == "region_over_lambda") {
      cfg.region_over_lambda = get_axis(value, key, false);
    } else if (key == "wavelength") {
      cfg.wavelength = get_number(value, key);
    } else if (key == "min_spacing_over_lambda") {
      cfg.min_spacing_over_lambda = get_number(value, key);
    } else if (key == "trials") {
      cfg.trials = get_int(value, key);
    } else if (key == "master_seed") {
      if (!value.is_number_unsigned()) {
        throw ConfigError(key, "expected a non-negative integer");
      }
      cfg.master_seed = value.get<std::uint64_t>();
    } else if (key == "scheme") {
      const std::string s = value.is_string() ? value.get<std::string>() : "";
      if (s == "ma") {
        cfg.scheme = Scheme::kMa;
      } else if (s == "fpa") {
        cfg.scheme = Scheme::kFpa;
      } else if (s == "both") {
        cfg.scheme = Scheme::kBoth;
      } else {
        throw ConfigError(key, "expected ma, fpa or both");
      }
    } else if (key == "optimizer") {
      parse_optimizer(value, cfg.optimizer);
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace aircomp
