#pragma once

#include <optional>

namespace gcf {

// Zero-rotation factor that maximizes folding-band rejection of a 3rd-order GCF.
inline constexpr double kOptimalQ = 0.79;

// alpha = q * 2 pi f_c. Requires 0 <= q <= 1 and 0 < f_c < 1/2.
double compute_alpha(double q, double f_c);

// One 3rd-order generalized comb filter decimating by D = 2^p, split as
// D = D1 * D2 between a polyphase bank (D1 = 2^(p_p+1)) and a cascade of
// p - p_p - 1 decimate-by-two stages (D2 = 2^(p-p_p-1)).
struct GcfSpec {
  int p = 1;
  int p_p = -1;
  int D = 2;
  int D1 = 1;
  int D2 = 2;
  double q = kOptimalQ;
  double f_c = 0.0;    // cycles/sample at the filter input
  double alpha = 0.0;  // radians
  std::optional<double> rho;

  static GcfSpec make(int p, int p_p, double f_c, double q = kOptimalQ);
  static GcfSpec from_decimation(int D, int p_p, double f_c, double q = kOptimalQ);
  // f_c = 1 / (2 rho); rho is kept as metadata.
  static GcfSpec from_oversampling(int D, int p_p, double rho, double q = kOptimalQ);
  // Explicit rotation; q is derived as alpha / (2 pi f_c) and must stay in [0, 1].
  static GcfSpec with_alpha(int p, int p_p, double f_c, double alpha);

  int cascade_stages() const { return p - p_p - 1; }
  int first_cascade_stage() const { return p_p + 1; }
  int polyphase_length() const { return 3 * D1 - 2; }
  int multiplier_count() const { return polyphase_length() + cascade_stages(); }
  bool full_cascade() const { return p_p == -1; }
  bool full_polyphase() const { return p_p == p - 1; }
};

// Classical comb ((1/D)(1 - z^-D)/(1 - z^-1))^order.
struct CombSpec {
  int D = 2;
  int order = 3;

  static CombSpec make(int D, int order = 3);
};

// log2 of a power of two, or ParameterError.
int exact_log2(int D);

}  // namespace gcf
