#include "gcf/spec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gcf/errors.hpp"

namespace gcf {

double compute_alpha(double q, double f_c) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ParameterError("q must lie in [0, 1], got " + std::to_string(q));
  }
  if (!(f_c > 0.0 && f_c < 0.5)) {
    throw ParameterError("f_c must lie in (0, 1/2), got " + std::to_string(f_c));
  }
  return q * 2.0 * std::numbers::pi * f_c;
}

int exact_log2(int D) {
  if (D < 2 || (D & (D - 1)) != 0) {
    throw ParameterError("decimation factor must be a power of two >= 2, got " +
                         std::to_string(D));
  }
  int p = 0;
  while ((1 << p) < D) ++p;
  return p;
}

namespace {

GcfSpec build(int p, int p_p, double f_c) {
  if (p < 1 || p > 20) {
    throw ParameterError("p must lie in [1, 20], got " + std::to_string(p));
  }
  if (p_p < -1 || p_p > p - 1) {
    throw ParameterError("split index p_p must lie in [-1, " + std::to_string(p - 1) +
                         "], got " + std::to_string(p_p));
  }
  GcfSpec s;
  s.p = p;
  s.p_p = p_p;
  s.D = 1 << p;
  s.D1 = 1 << (p_p + 1);
  s.D2 = 1 << (p - p_p - 1);
  if (!(f_c > 0.0 && f_c < 0.5 / s.D)) {
    throw ParameterError("f_c must lie in (0, 1/(2D)) = (0, " + std::to_string(0.5 / s.D) +
                         "), got " + std::to_string(f_c) + ": folding bands would overlap");
  }
  s.f_c = f_c;
  return s;
}

}  // namespace

GcfSpec GcfSpec::make(int p, int p_p, double f_c, double q) {
  GcfSpec s = build(p, p_p, f_c);
  s.q = q;
  s.alpha = compute_alpha(q, f_c);
  return s;
}

GcfSpec GcfSpec::from_decimation(int D, int p_p, double f_c, double q) {
  return make(exact_log2(D), p_p, f_c, q);
}

GcfSpec GcfSpec::from_oversampling(int D, int p_p, double rho, double q) {
  if (!(rho > 0.0)) throw ParameterError("oversampling ratio must be positive");
  GcfSpec s = from_decimation(D, p_p, 0.5 / rho, q);
  s.rho = rho;
  return s;
}

GcfSpec GcfSpec::with_alpha(int p, int p_p, double f_c, double alpha) {
  GcfSpec s = build(p, p_p, f_c);
  const double q = alpha / (2.0 * std::numbers::pi * f_c);
  if (!(q >= 0.0 && q <= 1.0 + 1e-12)) {
    throw ParameterError("alpha must lie in [0, 2 pi f_c], got " + std::to_string(alpha));
  }
  s.q = std::min(q, 1.0);
  s.alpha = alpha;
  return s;
}

CombSpec CombSpec::make(int D, int order) {
  if (D < 2) throw ParameterError("comb decimation factor must be >= 2");
  if (order < 1) throw ParameterError("comb order must be >= 1");
  return CombSpec{D, order};
}

}  // namespace gcf
