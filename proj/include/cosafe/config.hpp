#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace cosafe {

/// Planner and simulation knobs. `resolution_m == 0` means "auto":
/// one twentieth of the shorter workspace side.
struct PlannerConfig {
  double t_max_s = 60.0;
  double dt_s = 0.05;
  int n_substeps = 10;
  int n_min = 1;
  int n_max = 20;
  double resolution_m = 0.0;
  std::uint64_t seed = 1;
  int k_lead = 10;

  bool set(const std::string& key, const std::string& value) {
    try {
      if (key == "t_max_s") t_max_s = std::stod(value);
      else if (key == "dt_s") dt_s = std::stod(value);
      else if (key == "n_substeps") n_substeps = std::stoi(value);
      else if (key == "n_min") n_min = std::stoi(value);
      else if (key == "n_max") n_max = std::stoi(value);
      else if (key == "resolution_m") resolution_m = std::stod(value);
      else if (key == "seed") seed = std::stoull(value);
      else if (key == "k_lead") k_lead = std::stoi(value);
      else return false;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad value '" + value + "' for config key " + key);
    }
    return true;
  }
};

}  // namespace cosafe
