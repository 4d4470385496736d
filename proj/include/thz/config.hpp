#pragma once

#include <string>

#include "thz/channel.hpp"
#include "thz/frame.hpp"

namespace thz::harness {

// Full description of one simulated scenario: frame dimensions, carrier
// geometry, multipath statistics and the beamspace grids.
struct ScenarioConfig {
  std::string name = "custom";
  frame::SystemConfig system;
  channel::PhysicalConfig physical;
  channel::PathSamplingConfig sampling;
  int grid_tx = 64;
  int grid_rx = 64;
  bool per_subcarrier_gain = true;
  // Normalize each realization to unit average entry energy so that
  // SNR = 1/sigma^2 is comparable across scenarios.
  bool normalize_channel = true;

  int n_subcarriers() const { return system.n_subcarriers(); }
  void validate() const;
};

/// Named presets. "system1" and "system2" carry the full-scale parameter
/// sets; "system1-reduced" is the desk-scale variant used by the test
/// sweeps (N_T = N_R = 16, N_RF = 4, K = 8, G = 16, M = 20).
ScenarioConfig preset(const std::string& name);

/// Loads a scenario from a flat key-value config file with [section]
/// headers; unknown keys are rejected. See README for the schema.
ScenarioConfig load_scenario_file(const std::string& path);

}  // namespace thz::harness
