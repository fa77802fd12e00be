#include "gcf/filter_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "gcf/errors.hpp"

namespace gcf {

double stage_multiplier(double alpha, int k) {
  return 1.0 + 2.0 * std::cos(std::ldexp(alpha, k));
}

CascadeCoefficients stage_coefficients(const GcfSpec& spec) {
  CascadeCoefficients c;
  c.first_stage = spec.first_cascade_stage();
  c.r.reserve(static_cast<std::size_t>(spec.cascade_stages()));
  for (int k = spec.first_cascade_stage(); k <= spec.p - 1; ++k) {
    c.r.push_back(stage_multiplier(spec.alpha, k));
  }
  return c;
}

PolyphaseBank polyphase_impulse(int D1, double alpha) {
  if (D1 < 1) throw ParameterError("D1 must be >= 1");
  using cd = std::complex<double>;

  PolyphaseBank bank;
  bank.D1 = D1;
  // (1 - z^-D1)(1 - e^{j a D1} z^-D1)(1 - e^{-j a D1} z^-D1)
  //   = 1 - r z^-D1 + r z^-2D1 - z^-3D1,  r = 1 + 2 cos(a D1)
  bank.r_block = 1.0 + 2.0 * std::cos(alpha * D1);
  bank.x_t.assign(static_cast<std::size_t>(3 * D1 + 1), 0.0);
  bank.x_t[0] = 1.0;
  bank.x_t[D1] = -bank.r_block;
  bank.x_t[2 * D1] = bank.r_block;
  bank.x_t[3 * D1] = -1.0;

  // Dividing by (1 - z^-1)(1 - e^{ja} z^-1)(1 - e^{-ja} z^-1) is the triple
  // modulated cumulative sum; run it as three prefix sums.
  const auto L = static_cast<std::size_t>(3 * D1 - 2);
  bank.h_p.resize(L);
  cd s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t n = 0; n < L; ++n) {
    const double a = alpha * static_cast<double>(n);
    s1 += bank.x_t[n];
    s2 += std::polar(1.0, a) * s1;
    s3 += std::polar(1.0, -2.0 * a) * s2;
    const cd h = std::polar(1.0, a) * s3;
    bank.h_p[n] = h.real();
    bank.imag_residue = std::max(bank.imag_residue, std::abs(h.imag()));
  }
  const double peak =
      std::abs(*std::max_element(bank.h_p.begin(), bank.h_p.end(),
                                 [](double x, double y) { return std::abs(x) < std::abs(y); }));
  if (bank.imag_residue > 1e-9 * std::max(peak, 1.0)) {
    throw InternalError("polyphase impulse response is not real (residue " +
                        std::to_string(bank.imag_residue) + ")");
  }
  bank.branches = polyphase_decompose(bank.h_p, D1);
  return bank;
}

PolyphaseBank polyphase_impulse(const GcfSpec& spec) {
  return polyphase_impulse(spec.D1, spec.alpha);
}

std::vector<std::vector<double>> polyphase_decompose(std::span<const double> h_p, int D1) {
  if (D1 < 1) throw ParameterError("D1 must be >= 1");
  if (h_p.size() != static_cast<std::size_t>(3 * D1 - 2)) {
    throw ParameterError("polyphase bank length must be 3*D1 - 2 = " +
                         std::to_string(3 * D1 - 2) + ", got " + std::to_string(h_p.size()));
  }
  const std::size_t d = static_cast<std::size_t>(D1);
  const std::size_t len = (h_p.size() + d - 1) / d;
  std::vector<std::vector<double>> branches(d, std::vector<double>(len, 0.0));
  for (std::size_t i = 0; i < h_p.size(); ++i) branches[i % d][i / d] = h_p[i];
  return branches;
}

std::vector<double> reassemble_branches(const std::vector<std::vector<double>>& branches,
                                        std::size_t length) {
  const std::size_t d = branches.size();
  std::vector<double> h(length, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t n = 0; n < branches[k].size(); ++n) {
      const std::size_t i = d * n + k;
      if (i < length) h[i] = branches[k][n];
    }
  }
  return h;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::complex<double> evaluate_polynomial(std::span<const double> c, double f) {
  // Horner in z^-1 = e^{-j 2 pi f}
  const std::complex<double> zinv = std::polar(1.0, -2.0 * std::numbers::pi * f);
  std::complex<double> acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * zinv + *it;
  return acc;
}

std::vector<double> expand_full_polynomial(const PolyphaseBank& bank,
                                           const CascadeCoefficients& cascade) {
  std::vector<double> poly = bank.h_p;
  for (std::size_t i = 0; i < cascade.size(); ++i) {
    const auto m = static_cast<std::size_t>(cascade.delay(i));
    std::vector<double> stage(3 * m + 1, 0.0);
    stage[0] = 1.0;
    stage[m] = cascade.r[i];
    stage[2 * m] = cascade.r[i];
    stage[3 * m] = 1.0;
    poly = convolve(poly, stage);
  }
  return poly;
}

std::vector<double> expand_full_polynomial(const GcfSpec& spec) {
  return expand_full_polynomial(polyphase_impulse(spec), stage_coefficients(spec));
}

std::vector<double> comb_polynomial(const CombSpec& comb) {
  const std::vector<double> box(static_cast<std::size_t>(comb.D), 1.0);
  std::vector<double> poly{1.0};
  for (int i = 0; i < comb.order; ++i) poly = convolve(poly, box);
  return poly;
}

NormalizationGain normalization_gain(const GcfSpec& spec) {
  const PolyphaseBank bank = polyphase_impulse(spec);
  const CascadeCoefficients cascade = stage_coefficients(spec);

  const double dc_p = std::accumulate(bank.h_p.begin(), bank.h_p.end(), 0.0);
  double dc_n = 1.0;
  for (double r : cascade.r) dc_n *= 2.0 + 2.0 * r;

  const std::vector<double> full = expand_full_polynomial(bank, cascade);
  const double dc = std::accumulate(full.begin(), full.end(), 0.0);
  if (!(std::abs(dc) > 0.0) || !(dc_p > 0.0) || !(dc_n > 0.0)) {
    throw InternalError("filter has zero DC gain");
  }
  return NormalizationGain{1.0 / dc, 1.0 / dc_p, 1.0 / dc_n};
}

}  // namespace gcf
