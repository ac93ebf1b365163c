#ifndef AIRCONT_CONFIG_HPP
#define AIRCONT_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "aircont/montecarlo.hpp"
#include "aircont/plant.hpp"
#include "aircont/scaling.hpp"
#include "aircont/stability.hpp"
#include "aircont/types.hpp"

namespace aircont {

/// Grid section of the config file (plant and timing are injected when the
/// stability sweep runs).
struct GridConfig {
  double delta_min = 0.005;
  double delta_max = 0.30;
  int delta_steps = 60;
  double ratio_min = 0.0;
  double ratio_max = 1.0;
  int ratio_steps = 50;
  Vector gain;
  double stability_margin = 0.0;
};

/// Trajectory-experiment section: one run per scheme on a shared channel
/// realization.
struct SimSection {
  Vector x0;
  double horizon = 10.0;
  double delta_ideal = 0.01;
  double delta_air = 0.01;
  double delta_sota = 0.05;
  Vector gain;
  std::uint64_t seed = 1;
  bool noise_enabled = true;
  ChannelRealization channel;
};

/// A fully resolved tool configuration: every default materialized,
/// including the sampled sim channel. Serializing and re-parsing it yields
/// the same configuration.
struct ToolConfig {
  std::string name;
  PlantModel plant;
  NetworkTiming timing;
  GridConfig grid;
  SweepConfig sweep;
  SimSection sim;
};

/// Parses a config file (or an emitted run manifest, recognized by its
/// `command`/`config` keys). Unknown keys anywhere are errors. A seed
/// override replaces both the sweep and sim seeds before defaults are
/// resolved, so a sampled sim channel depends on the final seed.
ToolConfig load_config_file(const std::string& path,
                            std::optional<std::uint64_t> seed_override = {});

ToolConfig parse_config(const nlohmann::json& root,
                        std::optional<std::uint64_t> seed_override = {});

/// The built-in defaults (ball-and-beam plant, paper-scale grid and sweep).
ToolConfig default_config(std::optional<std::uint64_t> seed_override = {});

nlohmann::json config_to_json(const ToolConfig& cfg);

StabilityGridSpec make_grid_spec(const ToolConfig& cfg);

void write_manifest(const std::string& path, const std::string& command,
                    const ToolConfig& cfg,
                    const std::vector<std::string>& outputs);

}  // namespace aircont

#endif  // AIRCONT_CONFIG_HPP
