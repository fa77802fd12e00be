#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gcf/fixedpoint.hpp"
#include "gcf/spec.hpp"

namespace gcf::sd {

inline constexpr int kModulatorOrder = 2;
inline constexpr int kFilterOrder = 3;
// Inputs beyond this fraction of full scale can overload the loop.
inline constexpr double kStableInputLimit = 0.8;
inline constexpr int kSignalFilterTaps = 1025;

struct SdConfig {
  double fs = 25600.0;     // Hz, labels only
  double fx_ratio = 1.0 / 256.0;
  double amplitude = 0.5;  // peak, relative to quantizer full scale
  std::size_t n_samples = std::size_t{1} << 18;
  std::uint64_t seed = 1;

  void validate() const;
};

// White Gaussian noise through a Hann-windowed sinc low-pass (cutoff fx_ratio),
// scaled to peak amplitude.
std::vector<double> generate_bandlimited_signal(const SdConfig& cfg);

struct ModulatorOutput {
  std::vector<std::int8_t> bits;  // +1 / -1
  std::size_t overloads = 0;      // samples with |x| above kStableInputLimit
};

// Double integrator, unity feedback, 2-level quantizer:
//   v1 += x[n] - y[n-1];  v2 += v1 - y[n-1];  y[n] = v2 >= 0 ? +1 : -1
// giving Y = X + (1 - z^-1)^2 E.
ModulatorOutput sd_modulate(std::span<const double> x);

// Fixed-point cascade of decimate-by-two stages 1 + r_k (z^-1 + z^-2) + z^-3
// with r_k rounded to fmt.fraction_bits. Integer arithmetic is exact; stage k's
// register holds 1 + i_n_k integer/sign bits plus (k+1) f_n fraction bits and
// an OverflowError names the stage that exceeds it. Output scaled by h_o.
std::vector<double> decimate_fixed_point(std::span<const std::int8_t> input, const GcfSpec& spec,
                                         const fxp::FixedPointFormat& fmt);

// Same structure in double precision with exact multipliers.
std::vector<double> decimate_float(std::span<const double> input, const GcfSpec& spec);

enum class Window { hann, rectangular };
Window parse_window(std::string_view s);

struct Psd {
  std::vector<double> freqs;  // cycles/sample, 0 .. 1/2
  std::vector<double> power;  // one-sided, integrates to the variance over [0, 1/2]
  double resolution() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
};

inline constexpr std::size_t kDefaultSegment = 4096;

Psd welch_psd(std::span<const double> x, std::size_t segment = kDefaultSegment,
              double overlap_fraction = 0.5, Window window = Window::hann);

struct SimulationRun {
  SdConfig config;
  GcfSpec spec;
  fxp::FixedPointFormat format;
  std::vector<double> input;
  std::vector<std::int8_t> bitstream;
  std::size_t overloads = 0;
  std::vector<double> decimated;
  Psd psd_in;
  Psd psd_out;
};

SimulationRun run_experiment(const SdConfig& cfg, const GcfSpec& spec,
                             const fxp::FixedPointFormat& fmt,
                             std::size_t segment = kDefaultSegment);

}  // namespace gcf::sd
