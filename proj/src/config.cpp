#include "thz/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace thz::harness {

void ScenarioConfig::validate() const {
  system.validate();
  physical.validate();
  if (physical.n_subcarriers != system.n_subcarriers())
    throw std::invalid_argument(
        "ScenarioConfig: physical K must equal N_p + L - 1");
  if (grid_tx < std::max(system.n_t, system.n_r) ||
      grid_rx < std::max(system.n_t, system.n_r))
    throw std::invalid_argument(
        "ScenarioConfig: grid sizes must be >= max(N_T, N_R)");
  if (sampling.n_delay_taps != system.n_taps)
    throw std::invalid_argument(
        "ScenarioConfig: sampling delay taps must equal system L");
}

namespace {

ScenarioConfig base_scenario() {
  ScenarioConfig s;
  s.physical.f_c = 1e12;
  s.physical.bandwidth = 20e9;
  s.physical.distance = 10.0;
  s.physical.k_abs = {0.0033};
  s.physical.tx_gain = std::pow(10.0, 31.0 / 20.0);
  s.physical.rx_gain = std::pow(10.0, 31.0 / 20.0);
  s.physical.pulse.rolloff = 0.8;
  s.sampling.n_nlos_clusters = 3;
  s.sampling.n_rays_per_cluster = 1;
  s.sampling.angle_std = 0.1;
  // Roughness per the three indoor media; index and medium absorption are
  // not pinned by measurement here, see README.
  s.sampling.media = {
      {2.24, 0.05e-3, 1000.0}, {2.24, 0.13e-3, 1000.0}, {2.24, 0.15e-3, 1000.0}};
  return s;
}

void finalize(ScenarioConfig& s) {
  s.physical.n_subcarriers = s.system.n_subcarriers();
  s.sampling.n_delay_taps = s.system.n_taps;
  s.sampling.mean_grid_size = std::max(s.grid_tx, s.grid_rx);
  s.validate();
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig s = base_scenario();
  s.name = name;
  if (name == "system1") {
    s.system.n_t = 32;
    s.system.n_r = 32;
    s.system.n_rf = 6;
    s.system.n_pilot_symbols = 13;  // K = 16 with L = 4
    s.system.n_taps = 4;
    s.system.n_pilot_blocks = 30;
    s.system.n_data_blocks = 100;
    s.grid_tx = s.grid_rx = 64;
  } else if (name == "system2") {
    s.system.n_t = 64;
    s.system.n_r = 64;
    s.system.n_rf = 12;
    s.system.n_pilot_symbols = 28;  // K = 32 with L = 5
    s.system.n_taps = 5;
    s.system.n_pilot_blocks = 30;
    s.system.n_data_blocks = 200;
    s.grid_tx = s.grid_rx = 128;
  } else if (name == "system1-reduced") {
    s.system.n_t = 16;
    s.system.n_r = 16;
    s.system.n_rf = 4;
    s.system.n_pilot_symbols = 6;  // K = 8 with L = 3
    s.system.n_taps = 3;
    s.system.n_pilot_blocks = 20;
    s.system.n_data_blocks = 50;
    s.grid_tx = s.grid_rx = 16;
  } else {
    throw std::invalid_argument("preset: unknown preset '" + name + "'");
  }
  finalize(s);
  return s;
}

namespace {

std::vector<double> parse_double_list(const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  ScenarioConfig s = base_scenario();
  s.name = path;
  std::string line, section;
  std::map<std::string, std::vector<double>> media_cols;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto as_int = [&] { return std::stoi(value); };
    auto as_double = [&] { return std::stod(value); };

    if (section == "scenario") {
      if (key == "name") s.name = value;
      else if (key == "grid_tx") s.grid_tx = as_int();
      else if (key == "grid_rx") s.grid_rx = as_int();
      else if (key == "per_subcarrier_gain") s.per_subcarrier_gain = as_int() != 0;
      else if (key == "normalize_channel") s.normalize_channel = as_int() != 0;
      else throw std::runtime_error(path + ": unknown scenario key " + key);
    } else if (section == "system") {
      if (key == "n_t") s.system.n_t = as_int();
      else if (key == "n_r") s.system.n_r = as_int();
      else if (key == "n_rf") s.system.n_rf = as_int();
      else if (key == "n_s") s.system.n_s = as_int();
      else if (key == "n_pilot_symbols") s.system.n_pilot_symbols = as_int();
      else if (key == "n_taps") s.system.n_taps = as_int();
      else if (key == "n_pilot_blocks") s.system.n_pilot_blocks = as_int();
      else if (key == "n_data_blocks") s.system.n_data_blocks = as_int();
      else if (key == "phase_bits") s.system.phase_bits = as_int();
      else if (key == "pilot_constellation") s.system.pilot_constellation = value;
      else if (key == "data_constellation") s.system.data_constellation = value;
      else throw std::runtime_error(path + ": unknown system key " + key);
    } else if (section == "physical") {
      if (key == "f_c") s.physical.f_c = as_double();
      else if (key == "bandwidth") s.physical.bandwidth = as_double();
      else if (key == "distance") s.physical.distance = as_double();
      else if (key == "k_abs") s.physical.k_abs = parse_double_list(value);
      else if (key == "tx_gain_db")
        s.physical.tx_gain = std::pow(10.0, as_double() / 20.0);
      else if (key == "rx_gain_db")
        s.physical.rx_gain = std::pow(10.0, as_double() / 20.0);
      else if (key == "rolloff") s.physical.pulse.rolloff = as_double();
      else throw std::runtime_error(path + ": unknown physical key " + key);
    } else if (section == "sampling") {
      if (key == "n_nlos_clusters") s.sampling.n_nlos_clusters = as_int();
      else if (key == "n_rays_per_cluster")
        s.sampling.n_rays_per_cluster = as_int();
      else if (key == "angle_std") s.sampling.angle_std = as_double();
      else throw std::runtime_error(path + ": unknown sampling key " + key);
    } else if (section == "media") {
      if (key == "refractive_index" || key == "sigma_rough_mm" ||
          key == "varsigma")
        media_cols[key] = parse_double_list(value);
      else throw std::runtime_error(path + ": unknown media key " + key);
    } else {
      throw std::runtime_error(path + ": unknown section [" + section + "]");
    }
  }

  if (!media_cols.empty()) {
    const auto& n = media_cols["refractive_index"];
    const auto& rough = media_cols["sigma_rough_mm"];
    const auto& var = media_cols["varsigma"];
    const std::size_t count = std::max({n.size(), rough.size(), var.size()});
    if (count == 0)
      throw std::runtime_error(path + ": empty [media] section");
    s.sampling.media.clear();
    for (std::size_t i = 0; i < count; ++i) {
      channel::ReflectingMedium m;
      if (i < n.size()) m.refractive_index = n[i];
      if (i < rough.size()) m.sigma_rough = rough[i] * 1e-3;
      if (i < var.size()) m.varsigma = var[i];
      s.sampling.media.push_back(m);
    }
  }

  finalize(s);
  return s;
}

}  // namespace thz::harness
