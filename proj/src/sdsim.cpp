#include "gcf/sdsim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "gcf/errors.hpp"
#include "gcf/filter_core.hpp"

namespace gcf::sd {

void SdConfig::validate() const {
  if (!(fx_ratio > 0.0 && fx_ratio < 0.5)) throw ParameterError("fx_ratio must lie in (0, 1/2)");
  if (!(amplitude >= 0.0 && amplitude <= kStableInputLimit)) {
    throw ParameterError("amplitude must lie in [0, 0.8] to avoid modulator overload");
  }
  if (n_samples == 0) throw ParameterError("n_samples must be positive");
  if (!(fs > 0.0)) throw ParameterError("fs must be positive");
}

std::vector<double> generate_bandlimited_signal(const SdConfig& cfg) {
  cfg.validate();
  constexpr int taps = kSignalFilterTaps;
  constexpr int mid = taps / 2;
  std::vector<double> h(taps);
  for (int n = 0; n < taps; ++n) {
    const double t = n - mid;
    const double arg = std::numbers::pi * 2.0 * cfg.fx_ratio * t;
    const double sinc = (t == 0) ? 1.0 : std::sin(arg) / arg;
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (n + 1) / (taps + 1));
    h[n] = 2.0 * cfg.fx_ratio * sinc * w;
  }

  std::vector<double> out(cfg.n_samples, 0.0);
  if (cfg.amplitude == 0.0) return out;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(cfg.n_samples + taps - 1);
  for (double& v : noise) v = gauss(rng);

  // fully overlapped part only, no start-up transient
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    const double* src = noise.data() + i + taps - 1;
    double acc = 0.0;
    for (int j = 0; j < taps; ++j) acc += h[j] * src[-j];
    out[i] = acc;
  }
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : out) v *= cfg.amplitude / peak;
  }
  return out;
}

ModulatorOutput sd_modulate(std::span<const double> x) {
  ModulatorOutput out;
  out.bits.resize(x.size());
  double v1 = 0.0, v2 = 0.0, y_prev = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (std::abs(x[n]) > kStableInputLimit) ++out.overloads;
    v1 += x[n] - y_prev;
    v2 += v1 - y_prev;
    const std::int8_t y = v2 >= 0.0 ? 1 : -1;
    out.bits[n] = y;
    y_prev = y;
  }
  return out;
}

namespace {

__extension__ typedef __int128 wide;

constexpr int kMaxRegisterBits = 120;

wide pow2(int n) { return static_cast<wide>(1) << n; }

double to_double(wide v) { return static_cast<double>(static_cast<long double>(v)); }

void require_cascade(const GcfSpec& spec) {
  if (!spec.full_cascade()) {
    throw ParameterError("fixed-point decimation runs the cascaded form only (p_p = -1), got p_p = " +
                         std::to_string(spec.p_p));
  }
}

}  // namespace

std::vector<double> decimate_fixed_point(std::span<const std::int8_t> input, const GcfSpec& spec,
                                         const fxp::FixedPointFormat& fmt) {
  require_cascade(spec);
  const CascadeCoefficients c = stage_coefficients(spec);
  const int f = fmt.fraction_bits;
  if (f < 0) throw ParameterError("fraction bits must be >= 0");
  if (fmt.integer_bits.size() != c.size()) {
    throw ParameterError("format has " + std::to_string(fmt.integer_bits.size()) +
                         " integer widths for " + std::to_string(c.size()) + " stages");
  }
  if (fmt.sign_bits + fmt.max_integer_bits() + f * spec.p > kMaxRegisterBits) {
    throw ParameterError("datapath needs more than " + std::to_string(kMaxRegisterBits) +
                         " bits; reduce fraction bits or decimation factor");
  }

  const wide in_limit = pow2(fmt.input_width);
  std::vector<wide> x(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    x[i] = input[i];
    if (x[i] >= in_limit || x[i] < -in_limit) {
      throw OverflowError(-1, "input sample " + std::to_string(i) + " exceeds input width " +
                                  std::to_string(fmt.input_width));
    }
  }

  const wide one = pow2(f);
  double dc = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    dc *= 2.0 + 2.0 * c.r[k];
    const auto rq = static_cast<wide>(std::llround(std::ldexp(c.r[k], f)));
    // value bits above the binary point: i_n_k; below it: (k+1) f
    const wide limit = pow2(fmt.integer_bits[k] + f * static_cast<int>(k + 1));
    auto at = [&](std::ptrdiff_t i) -> wide { return i >= 0 ? x[static_cast<std::size_t>(i)] : 0; };

    std::vector<wide> y(x.size() / 2);
    for (std::size_t m = 0; m < y.size(); ++m) {
      const auto n = static_cast<std::ptrdiff_t>(2 * m);
      const wide acc = (at(n) + at(n - 3)) * one + rq * (at(n - 1) + at(n - 2));
      if (acc >= limit || acc < -limit) {
        throw OverflowError(static_cast<int>(k),
                            "overflow in cascade stage " + std::to_string(k) + " (" +
                                std::to_string(1 + fmt.integer_bits[k]) + " integer bits)");
      }
      y[m] = acc;
    }
    x = std::move(y);
  }

  const double scale = std::ldexp(1.0 / dc, -f * spec.p);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = to_double(x[i]) * scale;
  return out;
}

std::vector<double> decimate_float(std::span<const double> input, const GcfSpec& spec) {
  require_cascade(spec);
  const CascadeCoefficients c = stage_coefficients(spec);
  std::vector<double> x(input.begin(), input.end());
  double dc = 1.0;
  for (double r : c.r) {
    dc *= 2.0 + 2.0 * r;
    auto at = [&](std::ptrdiff_t i) { return i >= 0 ? x[static_cast<std::size_t>(i)] : 0.0; };
    std::vector<double> y(x.size() / 2);
    for (std::size_t m = 0; m < y.size(); ++m) {
      const auto n = static_cast<std::ptrdiff_t>(2 * m);
      y[m] = at(n) + at(n - 3) + r * (at(n - 1) + at(n - 2));
    }
    x = std::move(y);
  }
  for (double& v : x) v /= dc;
  return x;
}

Window parse_window(std::string_view s) {
  if (s == "hann") return Window::hann;
  if (s == "rectangular") return Window::rectangular;
  throw ParameterError("unknown window \"" + std::string(s) + "\"");
}

Psd welch_psd(std::span<const double> x, std::size_t segment, double overlap_fraction,
              Window window) {
  if (segment < 2) throw ParameterError("Welch segment must be >= 2");
  if (segment > x.size()) {
    throw ParameterError("Welch segment (" + std::to_string(segment) +
                         ") longer than the signal (" + std::to_string(x.size()) + ")");
  }
  if (!(overlap_fraction >= 0.0 && overlap_fraction <= 0.9)) {
    throw ParameterError("overlap fraction must lie in [0, 0.9]");
  }
  const std::size_t step =
      std::max<std::size_t>(1, segment - static_cast<std::size_t>(std::lround(overlap_fraction * segment)));
  const std::size_t count = 1 + (x.size() - segment) / step;
  const std::size_t bins = segment / 2 + 1;

  std::vector<double> w(segment, 1.0);
  if (window == Window::hann) {
    // periodic Hann
    for (std::size_t n = 0; n < segment; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / segment);
    }
  }
  const double w_energy = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);

  struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
  };
  std::unique_ptr<double, FftwFree> buf(fftw_alloc_real(segment));
  std::unique_ptr<fftw_complex, FftwFree> spec(fftw_alloc_complex(bins));
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(segment), buf.get(), spec.get(),
                                        FFTW_ESTIMATE);

  Psd psd;
  psd.freqs.resize(bins);
  psd.power.assign(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b) psd.freqs[b] = static_cast<double>(b) / segment;

  for (std::size_t s = 0; s < count; ++s) {
    const double* src = x.data() + s * step;
    const double mean = std::accumulate(src, src + segment, 0.0) / segment;
    for (std::size_t n = 0; n < segment; ++n) buf.get()[n] = (src[n] - mean) * w[n];
    fftw_execute(plan);
    for (std::size_t b = 0; b < bins; ++b) {
      const double re = spec.get()[b][0], im = spec.get()[b][1];
      psd.power[b] += re * re + im * im;
    }
  }
  fftw_destroy_plan(plan);

  for (std::size_t b = 0; b < bins; ++b) {
    const bool edge = b == 0 || (segment % 2 == 0 && b == bins - 1);
    psd.power[b] *= (edge ? 1.0 : 2.0) / (w_energy * static_cast<double>(count));
  }
  return psd;
}

SimulationRun run_experiment(const SdConfig& cfg, const GcfSpec& spec,
                             const fxp::FixedPointFormat& fmt, std::size_t segment) {
  cfg.validate();
  if (std::abs(cfg.fx_ratio - spec.f_c) > 1e-9 * spec.f_c) {
    throw ParameterError("signal bandwidth fx_ratio must equal the filter's f_c");
  }
  static_assert(kFilterOrder >= kModulatorOrder + 1,
                "decimation filter order must be at least modulator order + 1");

  SimulationRun run;
  run.config = cfg;
  run.spec = spec;
  run.format = fmt;
  run.input = generate_bandlimited_signal(cfg);
  ModulatorOutput mod = sd_modulate(run.input);
  run.bitstream = std::move(mod.bits);
  run.overloads = mod.overloads;
  run.decimated = decimate_fixed_point(run.bitstream, spec, fmt);

  std::vector<double> bits(run.bitstream.begin(), run.bitstream.end());
  run.psd_in = welch_psd(bits, std::min(segment, bits.size()));
  std::size_t seg_out = std::min(segment, run.decimated.size());
  run.psd_out = welch_psd(run.decimated, seg_out);
  return run;
}

}  // namespace gcf::sd
