#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcf/fixedpoint.hpp"
#include "gcf/sdsim.hpp"
#include "gcf/spec.hpp"

namespace gcf::cli {

// Everything a command needs, loadable from JSON; unknown keys are rejected.
struct DesignConfig {
  int decimation_factor = 16;
  int pp_split = -1;
  double q = kOptimalQ;
  std::optional<double> f_c;  // if absent, 1 / (2 rho)
  std::optional<double> rho;  // if both absent, rho = 64
  double chi = 1e-4;
  double prob = 0.95;
  std::optional<double> y;  // if absent, derived from prob
  std::string normalization = "unit_dc";
  std::optional<int> input_width;  // no silent default
  int points_per_band = 129;
  int global_points = 4096;
  std::string output_dir = "out";
  int trials = 2000;
  std::uint64_t seed = 1;
  std::size_t n_samples = std::size_t{1} << 18;
  double amplitude = 0.5;
  double fs = 25600.0;
  std::size_t welch_segment = 4096;
  std::vector<double> sweep_chi{5e-3, 1e-3, 1e-4};
  std::vector<double> sweep_y{2.0, 1.63};
  bool debug_corrupt_coefficient = false;

  static DesignConfig from_json(const nlohmann::json& j);
  // Resolved values, derived fields included.
  nlohmann::json to_json() const;

  double resolved_f_c() const;
  GcfSpec spec() const;
  fxp::ToleranceSpec tolerance() const;
  fxp::Normalization norm() const;
  int require_input_width() const;
  sd::SdConfig sd_config() const;
};

// Keys accepted in a config file; flags are the same names with '-' for '_'.
const std::vector<std::string>& config_keys();

}  // namespace gcf::cli
