#include "gcf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gcf/errors.hpp"

namespace gcf::spectral {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

bool FoldingBandSet::contains(double f) const {
  return std::any_of(bands.begin(), bands.end(),
                     [f](const Band& b) { return f >= b.lo && f <= b.hi; });
}

FoldingBandSet folding_bands(int D, double f_c) {
  if (D < 2) throw ParameterError("decimation factor must be >= 2");
  if (!(f_c > 0.0)) throw ParameterError("f_c must be positive");
  if (!(f_c < 0.5 / D)) {
    throw ParameterError("f_c = " + std::to_string(f_c) + " >= 1/(2D): folding bands overlap");
  }
  FoldingBandSet set;
  set.D = D;
  set.f_c = f_c;
  set.k_max = (D % 2 == 0) ? D / 2 : (D - 1) / 2;
  for (int k = 1; k <= set.k_max; ++k) {
    const double c = static_cast<double>(k) / D;
    set.bands.push_back(Band{k, c, std::max(0.0, c - f_c), std::min(0.5, c + f_c)});
  }
  return set;
}

std::complex<double> comb_response(const CombSpec& comb, double f) {
  const double s = std::sin(kPi * f);
  double ratio;
  if (std::abs(s) < 1e-9) {
    // sin(pi f D) / (D sin(pi f)) ~ 1 - (pi f)^2 (D^2 - 1) / 6 near f = 0
    const double x = kPi * f;
    ratio = 1.0 - x * x * (static_cast<double>(comb.D) * comb.D - 1.0) / 6.0;
  } else {
    ratio = std::sin(kPi * f * comb.D) / (comb.D * s);
  }
  // linear phase e^{-j pi f (D-1)} per factor
  const cd one = std::polar(ratio, -kPi * f * (comb.D - 1));
  return std::pow(one, comb.order);
}

std::complex<double> cascade_stage_response(double r, int k, double f) {
  const double x = std::ldexp(2.0 * kPi * f, k - 1);
  return 2.0 * std::polar(1.0, -3.0 * x) * (std::cos(3.0 * x) + r * std::cos(x));
}

GcfResponse::GcfResponse(const GcfSpec& spec)
    : spec_(spec),
      bank_(polyphase_impulse(spec)),
      cascade_(stage_coefficients(spec)),
      gain_(normalization_gain(spec)),
      reassembled_(reassemble_branches(bank_.branches, bank_.h_p.size())) {}

std::complex<double> GcfResponse::cascade(double f) const {
  cd h = 1.0;
  for (std::size_t i = 0; i < cascade_.size(); ++i) {
    h *= cascade_stage_response(cascade_.r[i], cascade_.stage(i), f);
  }
  return h;
}

std::complex<double> GcfResponse::polyphase(double f) const {
  return evaluate_polynomial(reassembled_, f);
}

std::complex<double> GcfResponse::operator()(double f, bool normalized) const {
  const cd h = polyphase(f) * cascade(f);
  return normalized ? gain_.h_o * h : h;
}

std::complex<double> gcf_response(const GcfSpec& spec, double f, bool normalized) {
  return GcfResponse(spec)(f, normalized);
}

std::size_t ResponseGrid::in_band_count() const {
  return static_cast<std::size_t>(std::count(in_band.begin(), in_band.end(), true));
}

std::vector<double> ResponseGrid::in_band_freqs() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (in_band[i]) out.push_back(freqs[i]);
  }
  return out;
}

ResponseGrid make_grid(const FoldingBandSet& bands, int points_per_band, int global_points) {
  if (points_per_band < 2) throw ParameterError("points_per_band must be >= 2");
  if (global_points < 0) throw ParameterError("global_points must be >= 0");

  std::vector<double> f;
  if (global_points == 1) {
    f.push_back(0.0);
  } else {
    for (int i = 0; i < global_points; ++i) f.push_back(0.5 * i / (global_points - 1));
  }
  for (const Band& b : bands.bands) {
    for (int i = 0; i < points_per_band; ++i) {
      f.push_back(b.lo + (b.hi - b.lo) * i / (points_per_band - 1));
    }
    f.push_back(b.center);
  }
  std::sort(f.begin(), f.end());
  // Merge near-duplicates; keep exact band centres and edges.
  std::vector<double> merged;
  for (double x : f) {
    if (merged.empty() || x - merged.back() > 1e-13) {
      merged.push_back(x);
    } else if (bands.contains(x)) {
      merged.back() = x;
    }
  }
  ResponseGrid g;
  g.freqs = std::move(merged);
  g.in_band.resize(g.freqs.size());
  for (std::size_t i = 0; i < g.freqs.size(); ++i) g.in_band[i] = bands.contains(g.freqs[i]);
  return g;
}

namespace {

template <typename Fn>
ResponseGrid fill(ResponseGrid g, Fn&& eval) {
  g.values.resize(g.freqs.size());
  g.magnitude.resize(g.freqs.size());
  for (std::size_t i = 0; i < g.freqs.size(); ++i) {
    g.values[i] = eval(g.freqs[i]);
    g.magnitude[i] = std::abs(g.values[i]);
  }
  return g;
}

}  // namespace

ResponseGrid response_grid(const GcfSpec& spec, const FoldingBandSet& bands, int points_per_band,
                           int global_points, bool normalized) {
  const GcfResponse h(spec);
  return fill(make_grid(bands, points_per_band, global_points),
              [&](double f) { return h(f, normalized); });
}

ResponseGrid response_grid(const CombSpec& comb, const FoldingBandSet& bands, int points_per_band,
                           int global_points) {
  return fill(make_grid(bands, points_per_band, global_points),
              [&](double f) { return comb_response(comb, f); });
}

double magnitude_db(double magnitude) {
  if (!(magnitude > 0.0)) return -kAttenuationCapDb;
  return std::max(20.0 * std::log10(magnitude), -kAttenuationCapDb);
}

double worst_case_attenuation(const ResponseGrid& grid) {
  double peak = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.in_band[i]) peak = std::max(peak, grid.magnitude[i]);
  }
  if (peak < 0.0) throw ParameterError("response grid has no in-band points");
  return -magnitude_db(peak);
}

}  // namespace gcf::spectral
