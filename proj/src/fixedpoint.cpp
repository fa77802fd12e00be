#include "gcf/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "gcf/errors.hpp"

namespace gcf::fxp {

using cd = std::complex<double>;

std::string_view to_string(Normalization n) {
  return n == Normalization::unit_dc ? "unit_dc" : "raw";
}

Normalization parse_normalization(std::string_view s) {
  if (s == "unit_dc") return Normalization::unit_dc;
  if (s == "raw") return Normalization::raw;
  throw ParameterError("normalization must be \"unit_dc\" or \"raw\", got \"" + std::string(s) +
                       "\"");
}

std::string_view to_string(ArchitectureCase c) {
  switch (c) {
    case ArchitectureCase::full_cascade: return "full-cascade";
    case ArchitectureCase::full_polyphase: return "full-polyphase";
    case ArchitectureCase::partial: return "partial";
  }
  return "unknown";
}

double p_from_y(double y) { return std::erf(y / std::numbers::sqrt2); }

double y_from_p(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw ParameterError("probability must lie in (0, 1), got " + std::to_string(prob));
  }
  double lo = 0.0, hi = 1.0;
  while (p_from_y(hi) < prob) hi *= 2.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (p_from_y(mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ToleranceSpec ToleranceSpec::from_probability(double chi, double prob) {
  if (!(chi > 0.0)) throw ParameterError("tolerance chi must be positive");
  return ToleranceSpec{chi, prob, y_from_p(prob)};
}

ToleranceSpec ToleranceSpec::from_multiplier(double chi, double y) {
  if (!(chi > 0.0)) throw ParameterError("tolerance chi must be positive");
  if (!(y > 0.0)) throw ParameterError("Gaussian multiplier y must be positive");
  return ToleranceSpec{chi, p_from_y(y), y};
}

int FixedPointFormat::max_integer_bits() const {
  if (integer_bits.empty()) return input_width;
  return *std::max_element(integer_bits.begin(), integer_bits.end());
}

// ---------------------------------------------------------------------------

MultiplierModel::MultiplierModel(const GcfSpec& spec, Normalization norm)
    : spec_(spec), norm_(norm) {
  const CascadeCoefficients c = stage_coefficients(spec);
  r_ = c.r;
  first_stage_ = c.first_stage;
  if (!spec.full_cascade()) {
    const PolyphaseBank bank = polyphase_impulse(spec);
    taps_ = bank.h_p;
    if (norm == Normalization::unit_dc) {
      const double dc = std::accumulate(taps_.begin(), taps_.end(), 0.0);
      for (double& t : taps_) t /= dc;
    }
  }
  if (norm == Normalization::unit_dc) {
    double dc = 1.0;
    for (double r : r_) dc *= 2.0 + 2.0 * r;
    cascade_gain_ = 1.0 / dc;
  }
}

ArchitectureCase MultiplierModel::architecture() const {
  if (spec_.full_cascade()) return ArchitectureCase::full_cascade;
  if (spec_.full_polyphase()) return ArchitectureCase::full_polyphase;
  return ArchitectureCase::partial;
}

cd MultiplierModel::polyphase(double f, std::span<const double> taps) const {
  if (taps.empty()) return 1.0;
  return evaluate_polynomial(taps, f);
}

cd MultiplierModel::response(double f) const { return response(f, taps_, r_, false); }

cd MultiplierModel::response(double f, std::span<const double> taps, std::span<const double> r,
                             bool self_normalize) const {
  cd p = polyphase(f, taps);
  cd n = 1.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    n *= spectral::cascade_stage_response(r[i], first_stage_ + static_cast<int>(i), f);
  }
  if (norm_ == Normalization::raw) return p * n;
  if (!self_normalize) return p * n * cascade_gain_;
  if (!taps.empty()) p /= std::accumulate(taps.begin(), taps.end(), 0.0);
  double dc = 1.0;
  for (double ri : r) dc *= 2.0 + 2.0 * ri;
  return p * n / dc;
}

cd MultiplierModel::derivative_r(std::size_t i, double f) const {
  cd d = polyphase(f, taps_) * cascade_gain_;
  for (std::size_t m = 0; m < r_.size(); ++m) {
    const int k = first_stage_ + static_cast<int>(m);
    if (m == i) {
      const double x = std::ldexp(2.0 * std::numbers::pi * f, k - 1);
      d *= 2.0 * std::polar(1.0, -3.0 * x) * std::cos(x);
    } else {
      d *= spectral::cascade_stage_response(r_[m], k, f);
    }
  }
  return d;
}

double MultiplierModel::tap_derivative_magnitude(double f) const {
  cd n = cascade_gain_;
  for (std::size_t m = 0; m < r_.size(); ++m) {
    n *= spectral::cascade_stage_response(r_[m], first_stage_ + static_cast<int>(m), f);
  }
  return std::abs(n);
}

double MultiplierModel::sensitivity(double f) const {
  double s = 0.0;
  if (!taps_.empty()) {
    const double t = tap_derivative_magnitude(f);
    s += static_cast<double>(taps_.size()) * t * t;
  }
  for (std::size_t i = 0; i < r_.size(); ++i) s += std::norm(derivative_r(i, f));
  return s;
}

SensitivityResult sensitivity(const GcfSpec& spec, std::span<const double> freqs,
                              Normalization norm) {
  const MultiplierModel model(spec, norm);
  SensitivityResult out;
  out.freqs.assign(freqs.begin(), freqs.end());
  out.s_t.reserve(freqs.size());
  for (double f : freqs) out.s_t.push_back(model.sensitivity(f));
  out.case_tag = model.architecture();
  out.n_multipliers = model.multiplier_count();
  out.normalization = norm;
  return out;
}

// ---------------------------------------------------------------------------

FractionalBits fractional_bits(const GcfSpec& spec, const ToleranceSpec& tol,
                               const spectral::FoldingBandSet& bands,
                               const spectral::ResponseGrid& grid, Normalization norm) {
  if (!(tol.chi > 0.0) || !(tol.y > 0.0)) throw ParameterError("invalid tolerance");
  for (const spectral::Band& b : bands.bands) {
    const auto n = std::count_if(grid.freqs.begin(), grid.freqs.end(),
                                 [&](double f) { return f >= b.lo && f <= b.hi; });
    if (n < kMinPointsPerBand) {
      throw ParameterError("grid has " + std::to_string(n) + " points in folding band k=" +
                           std::to_string(b.k) + ", need " + std::to_string(kMinPointsPerBand));
    }
  }
  const MultiplierModel model(spec, norm);
  FractionalBits out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (double f : grid.freqs) {
    if (!bands.contains(f)) continue;
    const double s = model.sensitivity(f);
    if (!(s > 0.0)) continue;
    const double ratio = tol.chi / (tol.y * std::sqrt(s));
    if (ratio < out.min_ratio) {
      out.min_ratio = ratio;
      out.binding_freq = f;
    }
  }
  if (!std::isfinite(out.min_ratio)) {
    throw InternalError("sensitivity vanishes over every folding band");
  }
  out.f_n = std::max(0, static_cast<int>(std::ceil(-std::log2(std::sqrt(12.0) * out.min_ratio))));
  return out;
}

FractionalBits fractional_bits(const GcfSpec& spec, const ToleranceSpec& tol,
                               int points_per_band, Normalization norm) {
  const auto bands = spectral::folding_bands(spec);
  return fractional_bits(spec, tol, bands, spectral::make_grid(bands, points_per_band, 0), norm);
}

double dynamic_range_growth(double r) { return std::log2(2.0 + 2.0 * std::abs(r)); }

IntegerBits integer_bits(const GcfSpec& spec, int input_width) {
  if (input_width < 1) throw ParameterError("input_width must be >= 1");
  IntegerBits out;
  int width = input_width;
  for (double r : stage_coefficients(spec).r) {
    const double g = dynamic_range_growth(r);
    out.g_k.push_back(g);
    width += static_cast<int>(std::ceil(g - 1e-12));
    out.i_n_k.push_back(width);
  }
  return out;
}

FixedPointFormat WordLengthReport::format() const {
  FixedPointFormat fmt;
  fmt.input_width = input_width;
  fmt.integer_bits = i_n_k;
  fmt.fraction_bits = f_n;
  return fmt;
}

WordLengthReport design_word_lengths(const GcfSpec& spec, const ToleranceSpec& tol,
                                     int input_width, int points_per_band, Normalization norm) {
  WordLengthReport rep;
  rep.spec = spec;
  rep.tolerance = tol;
  rep.normalization = norm;
  rep.input_width = input_width;
  const FractionalBits fb = fractional_bits(spec, tol, points_per_band, norm);
  rep.f_n = fb.f_n;
  rep.binding_freq = fb.binding_freq;
  const IntegerBits ib = integer_bits(spec, input_width);
  rep.g_k = ib.g_k;
  rep.i_n_k = ib.i_n_k;
  return rep;
}

// ---------------------------------------------------------------------------

double quantize(double value, int f_n) {
  if (f_n < 0) throw ParameterError("fraction bits must be >= 0");
  return std::ldexp(std::round(std::ldexp(value, f_n)), -f_n);
}

std::vector<double> quantize_coefficients(std::span<const double> values, int f_n) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(quantize(v, f_n));
  return out;
}

ErrorStats quantization_error_response(const GcfSpec& spec, int f_n,
                                       std::span<const double> freqs, Normalization norm) {
  const MultiplierModel model(spec, norm);
  const auto taps_q = quantize_coefficients(model.taps(), f_n);
  const auto r_q = quantize_coefficients(model.r(), f_n);

  ErrorStats out;
  out.sigma_dm = std::ldexp(1.0, -f_n) / std::sqrt(12.0);
  out.freqs.assign(freqs.begin(), freqs.end());
  for (double f : freqs) {
    const double h = std::abs(model.response(f, model.taps(), model.r(), true));
    const double hq = std::abs(model.response(f, taps_q, r_q, true));
    out.delta_h.push_back(hq - h);
    out.sigma_dh.push_back(out.sigma_dm * std::sqrt(model.sensitivity(f)));
  }
  return out;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over (seed, index)
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ index);
}

MonteCarloResult monte_carlo_coverage(const GcfSpec& spec, int f_n, double y, int trials,
                                      std::uint64_t seed, std::span<const double> freqs,
                                      Normalization norm) {
  if (trials < kMinMonteCarloTrials) {
    throw ParameterError("Monte Carlo needs at least " + std::to_string(kMinMonteCarloTrials) +
                         " trials");
  }
  if (!(y >= 0.0)) throw ParameterError("y must be non-negative");
  const MultiplierModel model(spec, norm);
  const double sigma_dm = std::ldexp(1.0, -f_n) / std::sqrt(12.0);
  const double half = std::ldexp(0.5, -f_n);

  MonteCarloResult out;
  out.trials = trials;
  std::vector<double> ref;
  double peak_sigma = 0.0;
  std::vector<double> all_sigma;
  for (double f : freqs) all_sigma.push_back(sigma_dm * std::sqrt(model.sensitivity(f)));
  for (double s : all_sigma) peak_sigma = std::max(peak_sigma, s);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    // Band centres keep their zero whatever the multipliers are.
    if (all_sigma[i] <= 1e-12 * peak_sigma) continue;
    out.freqs.push_back(freqs[i]);
    out.model_sigma.push_back(all_sigma[i]);
    ref.push_back(std::abs(model.response(freqs[i], model.taps(), model.r(), true)));
  }
  const std::size_t n = out.freqs.size();
  if (n == 0) throw ParameterError("no frequency with nonzero model sigma");

  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  std::vector<double> taps(model.taps().size()), r(model.r().size());
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(t)));
    std::uniform_real_distribution<double> err(-half, half);
    for (std::size_t i = 0; i < taps.size(); ++i) taps[i] = model.taps()[i] + err(rng);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = model.r()[i] + err(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::abs(model.response(out.freqs[i], taps, r, true)) - ref[i];
      sum[i] += d;
      sum_sq[i] += d * d;
      if (std::abs(d) <= y * out.model_sigma[i]) ++out.covered;
    }
  }
  out.samples = static_cast<std::uint64_t>(trials) * n;
  out.coverage = static_cast<double>(out.covered) / static_cast<double>(out.samples);
  out.empirical_std.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = sum[i] / trials;
    out.empirical_std[i] = std::sqrt(std::max(0.0, sum_sq[i] / trials - mean * mean));
  }
  return out;
}

}  // namespace gcf::fxp
