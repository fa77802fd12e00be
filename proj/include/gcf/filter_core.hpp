#pragma once

#include <complex>
#include <span>
#include <vector>

#include "gcf/spec.hpp"

namespace gcf {

// Multipliers r_k = 1 + 2 cos(2^k alpha) of the cascade stages
// 1 + r_k (z^-m + z^-2m) + z^-3m, m = 2^k, k = first_stage ... first_stage + size - 1.
struct CascadeCoefficients {
  int first_stage = 0;
  std::vector<double> r;

  int stage(std::size_t i) const { return first_stage + static_cast<int>(i); }
  // Delay unit of stage i referred to the filter input rate. After commutation
  // every stage runs at its own input rate with unit delays.
  long delay(std::size_t i) const { return 1L << stage(i); }
  std::size_t size() const { return r.size(); }
};

struct PolyphaseBank {
  int D1 = 1;
  double r_block = 3.0;
  std::vector<double> x_t;  // length 3*D1 + 1, nonzero at 0, D1, 2*D1, 3*D1
  std::vector<double> h_p;  // length 3*D1 - 2
  std::vector<std::vector<double>> branches;
  double imag_residue = 0.0;  // max |Im h_p(n)| left by the complex recursion
};

struct NormalizationGain {
  double h_o = 1.0;            // 1 / H(e^{j0})
  double h_o_polyphase = 1.0;  // 1 / H_P(e^{j0})
  double h_o_cascade = 1.0;    // 1 / H_N(e^{j0})
};

double stage_multiplier(double alpha, int k);

CascadeCoefficients stage_coefficients(const GcfSpec& spec);

PolyphaseBank polyphase_impulse(int D1, double alpha);
PolyphaseBank polyphase_impulse(const GcfSpec& spec);

// e_k(n) = h_p(D1 n + k), zero-padded to ceil(L / D1) entries per branch.
std::vector<std::vector<double>> polyphase_decompose(std::span<const double> h_p, int D1);

// Inverse of polyphase_decompose: sum_k z^-k E_k(z^D1), trimmed to `length`.
std::vector<double> reassemble_branches(const std::vector<std::vector<double>>& branches,
                                        std::size_t length);

// Coefficients of H_P(z) H_N(z), degree 3(D-1), by explicit polynomial products.
std::vector<double> expand_full_polynomial(const GcfSpec& spec);
std::vector<double> expand_full_polynomial(const PolyphaseBank& bank,
                                           const CascadeCoefficients& cascade);

// (1 + z^-1 + ... + z^-(D-1))^order, integer-valued.
std::vector<double> comb_polynomial(const CombSpec& comb);

NormalizationGain normalization_gain(const GcfSpec& spec);

// Polynomial helpers shared by the other modules.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);
// sum_n c(n) e^{-j 2 pi f n}
std::complex<double> evaluate_polynomial(std::span<const double> c, double f);

}  // namespace gcf
