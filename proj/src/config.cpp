#include "gcf/config.hpp"

#include <algorithm>

#include "gcf/errors.hpp"

namespace gcf::cli {

using nlohmann::json;

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "decimation_factor", "pp_split",      "q",           "f_c",
      "rho",               "chi",           "prob",        "y",
      "normalization",     "input_width",   "points_per_band", "global_points",
      "output_dir",        "trials",        "seed",        "n_samples",
      "amplitude",         "fs",            "welch_segment", "sweep_chi",
      "sweep_y",           "debug_corrupt_coefficient"};
  return keys;
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config key \"") + key + "\": " + e.what());
  }
}

template <typename T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v{};
  read(j, key, v);
  out = v;
}

}  // namespace

DesignConfig DesignConfig::from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  const auto& keys = config_keys();
  for (const auto& [k, v] : j.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw ParameterError("unknown config key \"" + k + "\"");
    }
  }
  DesignConfig c;
  read(j, "decimation_factor", c.decimation_factor);
  read(j, "pp_split", c.pp_split);
  read(j, "q", c.q);
  read(j, "f_c", c.f_c);
  read(j, "rho", c.rho);
  read(j, "chi", c.chi);
  read(j, "prob", c.prob);
  read(j, "y", c.y);
  read(j, "normalization", c.normalization);
  read(j, "input_width", c.input_width);
  read(j, "points_per_band", c.points_per_band);
  read(j, "global_points", c.global_points);
  read(j, "output_dir", c.output_dir);
  read(j, "trials", c.trials);
  read(j, "seed", c.seed);
  read(j, "n_samples", c.n_samples);
  read(j, "amplitude", c.amplitude);
  read(j, "fs", c.fs);
  read(j, "welch_segment", c.welch_segment);
  read(j, "sweep_chi", c.sweep_chi);
  read(j, "sweep_y", c.sweep_y);
  read(j, "debug_corrupt_coefficient", c.debug_corrupt_coefficient);

  if (c.f_c && c.rho && std::abs(*c.f_c - 0.5 / *c.rho) > 1e-12 * *c.f_c) {
    throw ParameterError("f_c and rho disagree: f_c must equal 1/(2 rho)");
  }
  // validate eagerly so errors surface before any work starts
  (void)c.spec();
  (void)c.tolerance();
  (void)c.norm();
  if (c.input_width && *c.input_width < 1) throw ParameterError("input_width must be >= 1");
  if (c.points_per_band < fxp::kMinPointsPerBand) {
    throw ParameterError("points_per_band must be >= " + std::to_string(fxp::kMinPointsPerBand));
  }
  if (c.global_points < 0) throw ParameterError("global_points must be >= 0");
  if (c.trials < fxp::kMinMonteCarloTrials) {
    throw ParameterError("trials must be >= " + std::to_string(fxp::kMinMonteCarloTrials));
  }
  for (double chi : c.sweep_chi) {
    if (!(chi > 0.0)) throw ParameterError("sweep_chi entries must be positive");
  }
  for (double y : c.sweep_y) {
    if (!(y > 0.0)) throw ParameterError("sweep_y entries must be positive");
  }
  return c;
}

double DesignConfig::resolved_f_c() const {
  if (f_c) return *f_c;
  return 0.5 / rho.value_or(64.0);
}

GcfSpec DesignConfig::spec() const {
  GcfSpec s = GcfSpec::from_decimation(decimation_factor, pp_split, resolved_f_c(), q);
  if (rho) {
    s.rho = rho;
  } else if (!f_c) {
    s.rho = 64.0;
  }
  return s;
}

fxp::ToleranceSpec DesignConfig::tolerance() const {
  return y ? fxp::ToleranceSpec::from_multiplier(chi, *y)
           : fxp::ToleranceSpec::from_probability(chi, prob);
}

fxp::Normalization DesignConfig::norm() const { return fxp::parse_normalization(normalization); }

int DesignConfig::require_input_width() const {
  if (!input_width) throw ParameterError("input_width is required (bits of the filter input word)");
  return *input_width;
}

sd::SdConfig DesignConfig::sd_config() const {
  sd::SdConfig s;
  s.fs = fs;
  s.fx_ratio = resolved_f_c();
  s.amplitude = amplitude;
  s.n_samples = n_samples;
  s.seed = seed;
  s.validate();
  return s;
}

json DesignConfig::to_json() const {
  const GcfSpec s = spec();
  const auto t = tolerance();
  json j = {{"decimation_factor", decimation_factor},
            {"pp_split", pp_split},
            {"q", q},
            {"f_c", resolved_f_c()},
            {"rho", s.rho ? json(*s.rho) : json(nullptr)},
            {"chi", chi},
            {"prob", prob},
            {"y", t.y},
            {"normalization", normalization},
            {"input_width", input_width ? json(*input_width) : json(nullptr)},
            {"points_per_band", points_per_band},
            {"global_points", global_points},
            {"output_dir", output_dir},
            {"trials", trials},
            {"seed", seed},
            {"n_samples", n_samples},
            {"amplitude", amplitude},
            {"fs", fs},
            {"welch_segment", welch_segment},
            {"sweep_chi", sweep_chi},
            {"sweep_y", sweep_y},
            {"debug_corrupt_coefficient", debug_corrupt_coefficient}};
  return j;
}

}  // namespace gcf::cli
