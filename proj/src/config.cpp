#include "aircont/config.hpp"

#include <fstream>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "aircont/rng.hpp"

namespace aircont {

namespace {

using nlohmann::json;

const std::vector<double> kDefaultGain = {6.67, 11.09, 41.15, 11.27};

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
    }
  }
}

double get_number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError("\"" + key + "\" must be a number");
  }
  return v.get<double>();
}

long get_integer(const json& obj, const std::string& key, long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError("\"" + key + "\" must be an integer");
  }
  return v.get<long>();
}

bool get_flag(const json& obj, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) {
    throw ConfigError("\"" + key + "\" must be a boolean");
  }
  return v.get<bool>();
}

Vector get_vector(const json& v, const std::string& where) {
  if (!v.is_array()) {
    throw ConfigError(where + " must be a list of numbers");
  }
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ConfigError(where + " entry " + std::to_string(i) +
                        " is not a number");
    }
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

Matrix get_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) {
    throw ConfigError(where + " must be a nonempty list of rows");
  }
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  Matrix out;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!v[r].is_array()) {
      throw ConfigError(where + " row " + std::to_string(r) + " is not a list");
    }
    if (r == 0) {
      cols = v[r].size();
      out.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (v[r].size() != cols) {
      throw ConfigError(where + " row " + std::to_string(r) + " has " +
                        std::to_string(v[r].size()) + " entries, expected " +
                        std::to_string(cols));
    }
    for (std::size_t c = 0; c < v[r].size(); ++c) {
      if (!v[r][c].is_number()) {
        throw ConfigError(where + " entry (" + std::to_string(r) + ", " +
                          std::to_string(c) + ") is not a number");
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          v[r][c].get<double>();
    }
  }
  return out;
}

PlantModel parse_plant(const json& root) {
  if (root.contains("A") != root.contains("b")) {
    throw ConfigError("a custom plant needs both \"A\" and \"b\"");
  }
  if (!root.contains("A")) {
    return default_ball_and_beam();
  }
  Matrix a = get_matrix(root.at("A"), "plant matrix A");
  Vector b = get_vector(root.at("b"), "plant vector b");
  std::vector<std::string> labels;
  if (root.contains("labels")) {
    const json& l = root.at("labels");
    if (!l.is_array()) throw ConfigError("\"labels\" must be a list of strings");
    for (const auto& entry : l) {
      if (!entry.is_string()) {
        throw ConfigError("\"labels\" must be a list of strings");
      }
      labels.push_back(entry.get<std::string>());
    }
  }
  try {
    return make_plant(std::move(a), std::move(b), std::move(labels));
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid plant: ") + e.what());
  }
}

Vector default_gain_for(const PlantModel& plant, const std::string& what) {
  if (plant.size() == static_cast<int>(kDefaultGain.size())) {
    return Eigen::Map<const Vector>(kDefaultGain.data(),
                                    static_cast<Eigen::Index>(kDefaultGain.size()));
  }
  throw ConfigError(what + " is required for a plant with " +
                    std::to_string(plant.size()) +
                    " states (the built-in gain fits 4 states)");
}

std::vector<double> to_std(const Vector& v) {
  return {v.data(), v.data() + v.size()};
}

json vector_to_json(const Vector& v) { return json(to_std(v)); }

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

ToolConfig parse_config(const json& root, std::optional<std::uint64_t> seed_override) {
  if (!root.is_object()) {
    throw ConfigError("config root must be an object");
  }

  // A run manifest embeds the resolved config under "config".
  if (root.contains("command") && root.contains("config")) {
    check_keys(root, {"command", "version", "seed", "config", "outputs"},
               "manifest");
    return parse_config(root.at("config"), seed_override);
  }

  check_keys(root, {"name", "A", "b", "labels", "timing", "grid", "sweep", "sim"},
             "config");
  for (const char* section : {"timing", "grid", "sweep", "sim"}) {
    if (root.contains(section) && !root.at(section).is_object()) {
      throw ConfigError(std::string("\"") + section + "\" must be an object");
    }
  }

  ToolConfig cfg;
  if (root.contains("name") && !root.at("name").is_string()) {
    throw ConfigError("\"name\" must be a string");
  }
  cfg.name = root.value("name", std::string("ball-and-beam"));
  cfg.plant = parse_plant(root);

  const json timing = root.contains("timing") ? root.at("timing") : json::object();
  check_keys(timing, {"slot_duration", "sensors"}, "timing");
  cfg.timing.slot_duration = get_number(timing, "slot_duration", 0.01);
  cfg.timing.sensors =
      static_cast<int>(get_integer(timing, "sensors", cfg.plant.size()));

  const json grid = root.contains("grid") ? root.at("grid") : json::object();
  check_keys(grid,
             {"delta_min", "delta_max", "delta_steps", "ratio_min", "ratio_max",
              "ratio_steps", "gain", "stability_margin"},
             "grid");
  cfg.grid.delta_min = get_number(grid, "delta_min", 0.005);
  cfg.grid.delta_max = get_number(grid, "delta_max", 0.30);
  cfg.grid.delta_steps = static_cast<int>(get_integer(grid, "delta_steps", 60));
  cfg.grid.ratio_min = get_number(grid, "ratio_min", 0.0);
  cfg.grid.ratio_max = get_number(grid, "ratio_max", 1.0);
  cfg.grid.ratio_steps = static_cast<int>(get_integer(grid, "ratio_steps", 50));
  cfg.grid.stability_margin = get_number(grid, "stability_margin", 0.0);
  cfg.grid.gain = grid.contains("gain")
                      ? get_vector(grid.at("gain"), "grid gain")
                      : default_gain_for(cfg.plant, "grid.gain");

  const json sweep = root.contains("sweep") ? root.at("sweep") : json::object();
  check_keys(sweep,
             {"N_list", "p_bar_values", "sigma2_values", "p_bar_fixed",
              "sigma2_fixed", "trials", "seed"},
             "sweep");
  SweepConfig defaults;
  if (sweep.contains("N_list")) {
    cfg.sweep.sensor_counts.clear();
    for (double v : to_std(get_vector(sweep.at("N_list"), "sweep N_list"))) {
      cfg.sweep.sensor_counts.push_back(static_cast<int>(v));
    }
  } else {
    cfg.sweep.sensor_counts = defaults.sensor_counts;
  }
  cfg.sweep.p_bar_values =
      sweep.contains("p_bar_values")
          ? to_std(get_vector(sweep.at("p_bar_values"), "sweep p_bar_values"))
          : defaults.p_bar_values;
  cfg.sweep.sigma2_values =
      sweep.contains("sigma2_values")
          ? to_std(get_vector(sweep.at("sigma2_values"), "sweep sigma2_values"))
          : defaults.sigma2_values;
  cfg.sweep.p_bar_fixed = get_number(sweep, "p_bar_fixed", defaults.p_bar_fixed);
  cfg.sweep.sigma2_fixed =
      get_number(sweep, "sigma2_fixed", defaults.sigma2_fixed);
  cfg.sweep.trials = get_integer(sweep, "trials", defaults.trials);
  cfg.sweep.seed = static_cast<std::uint64_t>(
      get_integer(sweep, "seed", static_cast<long>(defaults.seed)));

  const json sim = root.contains("sim") ? root.at("sim") : json::object();
  check_keys(sim,
             {"x0", "horizon", "delta_ideal", "delta_air", "delta_sota", "gain",
              "seed", "noise_enabled", "channel"},
             "sim");
  cfg.sim.horizon = get_number(sim, "horizon", 10.0);
  cfg.sim.delta_ideal = get_number(sim, "delta_ideal", 0.01);
  cfg.sim.delta_air = get_number(sim, "delta_air", 0.01);
  cfg.sim.delta_sota = get_number(sim, "delta_sota", 0.05);
  cfg.sim.seed = static_cast<std::uint64_t>(get_integer(sim, "seed", 1));
  cfg.sim.noise_enabled = get_flag(sim, "noise_enabled", true);
  if (sim.contains("x0")) {
    cfg.sim.x0 = get_vector(sim.at("x0"), "sim x0");
  } else {
    cfg.sim.x0 = Vector::Zero(cfg.plant.size());
    cfg.sim.x0(0) = 0.1;
  }
  cfg.sim.gain = sim.contains("gain")
                     ? get_vector(sim.at("gain"), "sim gain")
                     : default_gain_for(cfg.plant, "sim.gain");

  if (seed_override) {
    cfg.sweep.seed = *seed_override;
    cfg.sim.seed = *seed_override;
  }

  if (sim.contains("channel")) {
    const json& ch = sim.at("channel");
    check_keys(ch, {"h", "h_a", "sigma2", "sigma_s2", "sigma_a2", "p_bar"},
               "sim channel");
    for (const char* key : {"h", "h_a", "sigma2", "sigma_s2", "sigma_a2", "p_bar"}) {
      if (!ch.contains(key)) {
        throw ConfigError(std::string("sim channel needs \"") + key + "\"");
      }
    }
    try {
      cfg.sim.channel = make_channel(
          get_vector(ch.at("h"), "channel h"), get_number(ch, "h_a", 1.0),
          get_number(ch, "sigma2", 0.5), get_number(ch, "sigma_s2", 0.5),
          get_number(ch, "sigma_a2", 0.5), get_number(ch, "p_bar", 2.5));
    } catch (const Error& e) {
      throw ConfigError(std::string("invalid sim channel: ") + e.what());
    }
  } else {
    // One Rayleigh realization drawn from the sim seed; materialized into
    // the manifest so reruns never resample.
    RngStream stream(derive_stream_key(cfg.sim.seed, {0xc4a2ULL}));
    Vector h(cfg.plant.size());
    for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = stream.rayleigh_unit();
    const double h_a = stream.rayleigh_unit();
    cfg.sim.channel = make_channel(h, h_a, 0.5, 0.5, 0.5, 2.5);
  }

  return cfg;
}

ToolConfig load_config_file(const std::string& path,
                            std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  return parse_config(root, seed_override);
}

ToolConfig default_config(std::optional<std::uint64_t> seed_override) {
  return parse_config(json::object(), seed_override);
}

json config_to_json(const ToolConfig& cfg) {
  json root;
  root["name"] = cfg.name;
  root["A"] = matrix_to_json(cfg.plant.A);
  root["b"] = vector_to_json(cfg.plant.b);
  if (!cfg.plant.labels.empty()) root["labels"] = cfg.plant.labels;
  root["timing"] = {{"slot_duration", cfg.timing.slot_duration},
                    {"sensors", cfg.timing.sensors}};
  root["grid"] = {{"delta_min", cfg.grid.delta_min},
                  {"delta_max", cfg.grid.delta_max},
                  {"delta_steps", cfg.grid.delta_steps},
                  {"ratio_min", cfg.grid.ratio_min},
                  {"ratio_max", cfg.grid.ratio_max},
                  {"ratio_steps", cfg.grid.ratio_steps},
                  {"gain", vector_to_json(cfg.grid.gain)},
                  {"stability_margin", cfg.grid.stability_margin}};
  root["sweep"] = {{"N_list", cfg.sweep.sensor_counts},
                   {"p_bar_values", cfg.sweep.p_bar_values},
                   {"sigma2_values", cfg.sweep.sigma2_values},
                   {"p_bar_fixed", cfg.sweep.p_bar_fixed},
                   {"sigma2_fixed", cfg.sweep.sigma2_fixed},
                   {"trials", cfg.sweep.trials},
                   {"seed", cfg.sweep.seed}};
  root["sim"] = {{"x0", vector_to_json(cfg.sim.x0)},
                 {"horizon", cfg.sim.horizon},
                 {"delta_ideal", cfg.sim.delta_ideal},
                 {"delta_air", cfg.sim.delta_air},
                 {"delta_sota", cfg.sim.delta_sota},
                 {"gain", vector_to_json(cfg.sim.gain)},
                 {"seed", cfg.sim.seed},
                 {"noise_enabled", cfg.sim.noise_enabled},
                 {"channel",
                  {{"h", vector_to_json(cfg.sim.channel.h)},
                   {"h_a", cfg.sim.channel.h_a},
                   {"sigma2", cfg.sim.channel.sigma2},
                   {"sigma_s2", cfg.sim.channel.sigma_s2},
                   {"sigma_a2", cfg.sim.channel.sigma_a2},
                   {"p_bar", cfg.sim.channel.p_bar}}}};
  return root;
}

StabilityGridSpec make_grid_spec(const ToolConfig& cfg) {
  StabilityGridSpec spec;
  spec.delta_min = cfg.grid.delta_min;
  spec.delta_max = cfg.grid.delta_max;
  spec.delta_steps = cfg.grid.delta_steps;
  spec.ratio_min = cfg.grid.ratio_min;
  spec.ratio_max = cfg.grid.ratio_max;
  spec.ratio_steps = cfg.grid.ratio_steps;
  spec.effective_gain = cfg.grid.gain;
  spec.plant = cfg.plant;
  spec.timing = cfg.timing;
  spec.stability_margin = cfg.grid.stability_margin;
  return spec;
}

void write_manifest(const std::string& path, const std::string& command,
                    const ToolConfig& cfg,
                    const std::vector<std::string>& outputs) {
  json manifest;
  manifest["command"] = command;
  manifest["version"] = kVersion;
  manifest["seed"] = command == "mse-sweep" ? cfg.sweep.seed : cfg.sim.seed;
  manifest["config"] = config_to_json(cfg);
  manifest["outputs"] = outputs;
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write manifest " + path);
  }
  out << manifest.dump(2) << '\n';
}

}  // namespace aircont
