#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gcf/errors.hpp"
#include "gcf/filter_core.hpp"
#include "gcf/spec.hpp"
#include "gcf/spectral.hpp"
#include "oracles.hpp"

using namespace gcf;

namespace {
double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}
double peak(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}
}  // namespace

TEST_CASE("spec derives the split and the rotation angle") {
  const auto s = GcfSpec::from_oversampling(16, 1, 64.0);
  CHECK(s.p == 4);
  CHECK(s.D1 == 4);
  CHECK(s.D2 == 4);
  CHECK(s.f_c == doctest::Approx(1.0 / 128.0));
  CHECK(s.alpha == doctest::Approx(0.79 * 2.0 * oracle::kPi / 128.0).epsilon(1e-14));
  CHECK(s.polyphase_length() == 10);
  CHECK(s.multiplier_count() == 10 + 2);
  CHECK(s.cascade_stages() == 2);

  const auto c = GcfSpec::make(4, -1, 1.0 / 128.0);
  CHECK(c.D1 == 1);
  CHECK(c.D2 == 16);
  CHECK(c.full_cascade());
  CHECK(GcfSpec::make(4, 3, 1.0 / 128.0).full_polyphase());

  const auto w = GcfSpec::with_alpha(4, -1, 1.0 / 128.0, 0.0);
  CHECK(w.q == 0.0);
}

TEST_CASE("spec rejects invalid parameters") {
  CHECK_THROWS_AS(GcfSpec::from_decimation(12, -1, 0.001), ParameterError);
  CHECK_THROWS_AS(GcfSpec::make(4, 4, 0.001), ParameterError);
  CHECK_THROWS_AS(GcfSpec::make(4, -2, 0.001), ParameterError);
  CHECK_THROWS_AS(GcfSpec::make(4, -1, 1.0 / 32.0), ParameterError);  // bands overlap
  CHECK_THROWS_AS(GcfSpec::make(4, -1, 0.001, 1.5), ParameterError);
  CHECK_THROWS_AS(GcfSpec::make(4, -1, -0.001), ParameterError);
  CHECK_THROWS_AS(GcfSpec::with_alpha(4, -1, 1.0 / 128.0, 1.0), ParameterError);
  CHECK_THROWS_AS(CombSpec::make(1), ParameterError);
  CHECK_THROWS_AS(CombSpec::make(16, 0), ParameterError);
  CHECK(exact_log2(64) == 6);
  CHECK_THROWS_AS(exact_log2(48), ParameterError);
}

TEST_CASE("stage multipliers follow 1 + 2 cos(2^k alpha)") {
  for (int k = 0; k < 6; ++k) {
    CHECK(stage_multiplier(0.0, k) == 3.0);
    CHECK(stage_multiplier(0.05, k) == doctest::Approx(oracle::stage_r(0.05, k)).epsilon(1e-15));
  }
  const auto s = GcfSpec::make(4, 1, 1.0 / 128.0);
  const auto c = stage_coefficients(s);
  REQUIRE(c.size() == 2);
  CHECK(c.stage(0) == 2);
  CHECK(c.delay(1) == 8);
  CHECK(c.r[1] == doctest::Approx(oracle::stage_r(s.alpha, 3)));
}

TEST_CASE("polyphase impulse matches the literal triple sum") {
  for (int D1 : {1, 2, 4, 8}) {
    for (double alpha : {0.0, 0.01, 0.0387, 0.2}) {
      const auto bank = polyphase_impulse(D1, alpha);
      const auto ref = oracle::polyphase_triple_sum(D1, alpha);
      CAPTURE(D1);
      CAPTURE(alpha);
      CHECK(bank.h_p.size() == std::size_t(3 * D1 - 2));
      CHECK(max_abs_diff(bank.h_p, ref) <= 1e-12 * std::max(1.0, peak(ref)));
      CHECK(bank.imag_residue <= 1e-12 * std::max(1.0, peak(ref)));
      CHECK(bank.r_block == doctest::Approx(1.0 + 2.0 * std::cos(alpha * D1)));
    }
  }
}

TEST_CASE("polyphase impulse is palindromic and its DC gain matches the closed form") {
  for (int D1 : {2, 4, 8, 16, 32}) {
    const double alpha = 0.79 * 2 * oracle::kPi / (8.0 * D1 * 4);
    const auto h = polyphase_impulse(D1, alpha).h_p;
    for (std::size_t n = 0; n < h.size(); ++n) CHECK(h[n] == doctest::Approx(h[h.size() - 1 - n]));
    // H_P(1) = D1 (D1 r - ... ) via the cascade identity: H_P * prod(stages<log2 D1) = full product
    double prod = 1.0;
    for (int k = 0; (1 << k) < D1; ++k) prod *= 2.0 + 2.0 * oracle::stage_r(alpha, k);
    double sum = 0.0;
    for (double v : h) sum += v;
    CHECK(sum == doctest::Approx(prod).epsilon(1e-11));
  }
}

TEST_CASE("polyphase bank zeros sit on the rotated roots of unity") {
  const int D1 = 8;
  const double alpha = 0.05;
  const auto h = polyphase_impulse(D1, alpha).h_p;
  for (int k = 1; k < D1; ++k) {
    for (double s : {-1.0, 0.0, 1.0}) {
      const double f = double(k) / D1 + s * alpha / (2 * oracle::kPi);
      CHECK(std::abs(oracle::dtft(h, f)) <= 1e-9 * peak(h));
    }
  }
}

TEST_CASE("branch decomposition round-trips") {
  const auto bank = polyphase_impulse(4, 0.03);
  REQUIRE(bank.branches.size() == 4);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t n = 0; n < bank.branches[k].size(); ++n) {
      const std::size_t idx = 4 * n + k;
      CHECK(bank.branches[k][n] == (idx < bank.h_p.size() ? bank.h_p[idx] : 0.0));
    }
  CHECK(reassemble_branches(bank.branches, bank.h_p.size()) == bank.h_p);
  const std::vector<double> short_h{1.0, 2.0};
  CHECK_THROWS_AS(polyphase_decompose(short_h, 4), ParameterError);
}

TEST_CASE("expanded polynomial matches the closed-form product at random frequencies") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  for (int p_p = -1; p_p <= 3; ++p_p) {
    const auto s = GcfSpec::make(4, p_p, 1.0 / 128.0);
    const auto poly = expand_full_polynomial(s);
    const auto hp = oracle::polyphase_triple_sum(s.D1, s.alpha);
    CHECK(poly.size() == std::size_t(3 * s.D - 2));
    for (int i = 0; i < 100; ++i) {
      const double f = uni(rng);
      const auto ref = oracle::dtft(hp, f) * oracle::cascade_closed_form(s.alpha, s.p_p + 1, s.p, f);
      CHECK(std::abs(evaluate_polynomial(poly, f) - ref) <= 1e-9 * std::abs(oracle::dtft(poly, 0.0)));
    }
  }
}

TEST_CASE("split invariance of the full polynomial") {
  for (int D : {4, 8, 16, 32}) {
    const int p = exact_log2(D);
    const double f_c = 1.0 / (8.0 * D);
    const auto ref = expand_full_polynomial(GcfSpec::make(p, -1, f_c));
    for (int p_p = 0; p_p < p; ++p_p) {
      const auto poly = expand_full_polynomial(GcfSpec::make(p, p_p, f_c));
      CHECK(max_abs_diff(poly, ref) <= 1e-10 * peak(ref));
    }
  }
}

TEST_CASE("zero rotation degenerates to the integer comb") {
  for (int D : {2, 4, 8, 16, 32}) {
    const int p = exact_log2(D);
    const auto box = oracle::boxcar_power(D, 3);
    CHECK(comb_polynomial(CombSpec::make(D, 3)) == box);
    for (int p_p = -1; p_p < p; ++p_p) {
      CHECK(expand_full_polynomial(GcfSpec::with_alpha(p, p_p, 1.0 / (4.0 * D), 0.0)) == box);
    }
  }
  CHECK(comb_polynomial(CombSpec::make(4, 1)) == std::vector<double>{1, 1, 1, 1});
}

TEST_CASE("normalization gain gives unit DC") {
  const auto s = GcfSpec::make(5, 1, 1.0 / 256.0);
  const auto g = normalization_gain(s);
  const auto poly = expand_full_polynomial(s);
  double sum = 0.0;
  for (double v : poly) sum += v;
  CHECK(sum * g.h_o == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(g.h_o == doctest::Approx(g.h_o_polyphase * g.h_o_cascade));
}

TEST_CASE("convolution and polynomial evaluation basics") {
  const std::vector<double> a{1, 2}, b{1, -1, 3};
  CHECK(convolve(a, b) == std::vector<double>{1, 1, 1, 6});
  const std::vector<double> c{1, 0, 1};
  CHECK(std::abs(evaluate_polynomial(c, 0.25)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(evaluate_polynomial(c, 0.0).real() == 2.0);
}
