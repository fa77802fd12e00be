// Acceptance report: one PASS/FAIL line per criterion. Tolerances are fixed here.
// The process exits non-zero only if a check could not be evaluated.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gcf/errors.hpp"
#include "gcf/filter_core.hpp"
#include "gcf/fixedpoint.hpp"
#include "gcf/sdsim.hpp"
#include "gcf/spectral.hpp"
#include "oracles.hpp"

using namespace gcf;

namespace {

// criterion 1
constexpr int kReferenceFn = 7;
constexpr int kFnTolerance = 1;
constexpr double kC1Seconds = 1.0;
// criterion 2
constexpr double kC2Seconds = 30.0;
// criteria 3 and 5
constexpr double kSplitRelTol = 1e-10;
constexpr double kFdStep = 1e-6;
constexpr double kFdRelTol = 1e-5;
constexpr int kFdFrequencies = 50;
// criterion 6
constexpr int kMcTrials = 2000;
constexpr double kCoverageY2Lo = 0.93, kCoverageY2Hi = 0.97;
constexpr double kCoverageY1Lo = 0.66, kCoverageY1Hi = 0.71;
constexpr double kStdRelTol = 0.10;
// criterion 7
constexpr double kMaxExceedance = 0.05;
// criterion 8
constexpr double kRejectionGainDb = 8.0, kRejectionTolDb = 2.0;
// criterion 10
constexpr double kSlopeDb = 40.0, kSlopeTolDb = 6.0;
constexpr double kBandEdge = 16.0 / 256.0, kBandEdgeTol = 0.01;
constexpr double kFloorGapDb = 40.0;
constexpr double kC10Seconds = 60.0;

const GcfSpec kReference = GcfSpec::from_oversampling(16, -1, 64.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

// ---------------------------------------------------------------------------

Outcome c1_word_length() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto fb = fxp::fractional_bits(kReference, fxp::ToleranceSpec::from_multiplier(1e-4, 2.0));
  const double dt = seconds_since(t0);
  const auto raw = fxp::fractional_bits(kReference, fxp::ToleranceSpec::from_multiplier(1e-4, 2.0), 129,
                                        fxp::Normalization::raw);
  const bool ok = std::abs(fb.f_n - kReferenceFn) <= kFnTolerance && dt < kC1Seconds;
  return {ok, fmt("F_n=%d (unit_dc, y=2; raw mode gives %d) expected %d+-%d, %.3fs", fb.f_n,
                  raw.f_n, kReferenceFn, kFnTolerance, dt)};
}

Outcome c2_trends() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> chis{5e-3, 1e-3, 1e-4};
  const std::vector<double> ys{2.0, 1.63};
  // fn[y][D][p_p][chi]
  std::map<double, std::map<int, std::vector<std::vector<int>>>> fn;
  for (double y : ys) {
    for (int D : {8, 16, 32, 64}) {
      const int p = exact_log2(D);
      for (int p_p = -1; p_p < p; ++p_p) {
        const auto s = GcfSpec::from_oversampling(D, p_p, 4.0 * D);
        std::vector<int> row;
        for (double chi : chis) {
          row.push_back(fxp::fractional_bits(s, fxp::ToleranceSpec::from_multiplier(chi, y)).f_n);
        }
        fn[y][D].push_back(row);
      }
    }
  }
  const double dt = seconds_since(t0);
  bool mono_d1 = true, mono_chi = true, diff_range = true;
  int ones = 0, total = 0;
  for (auto& [D, rows] : fn[2.0]) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t c = 0; c < chis.size(); ++c) {
        if (i > 0 && rows[i][c] < rows[i - 1][c]) mono_d1 = false;
        if (c > 0 && rows[i][c] <= rows[i][c - 1]) mono_chi = false;
        const int d = rows[i][c] - fn[1.63][D][i][c];
        if (d < 0 || d > 1) diff_range = false;
        ones += d == 1;
        ++total;
      }
    }
  }
  for (auto& [D, rows] : fn[1.63]) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t c = 0; c < chis.size(); ++c) {
        if (i > 0 && rows[i][c] < rows[i - 1][c]) mono_d1 = false;
        if (c > 0 && rows[i][c] <= rows[i][c - 1]) mono_chi = false;
      }
  }
  const bool half = 2 * ones >= total;
  const bool ok = mono_d1 && mono_chi && diff_range && half && dt < kC2Seconds;
  return {ok, fmt("non-decreasing in D1: %s; increasing as chi falls: %s; y=2 vs 1.63 diff in {0,1}: %s; "
                  "diff=1 in %d/%d configs (need >= half): %s; %.2fs",
                  mono_d1 ? "yes" : "no", mono_chi ? "yes" : "no", diff_range ? "yes" : "no", ones,
                  total, half ? "yes" : "no", dt)};
}

Outcome c3_split_invariance() {
  double worst = 0.0;
  for (int D : {4, 8, 16}) {
    const int p = exact_log2(D);
    const double f_c = 1.0 / (8.0 * D);
    const auto ref = expand_full_polynomial(GcfSpec::make(p, -1, f_c));
    double peak = 0.0;
    for (double v : ref) peak = std::max(peak, std::abs(v));
    for (int p_p = 0; p_p < p; ++p_p) {
      const auto poly = expand_full_polynomial(GcfSpec::make(p, p_p, f_c));
      if (poly.size() != ref.size()) return {false, "length mismatch"};
      for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(poly[i] - ref[i]) / peak);
    }
  }
  return {worst <= kSplitRelTol, fmt("max relative difference %.3g (tol %.0e)", worst, kSplitRelTol)};
}

Outcome c4_comb_degeneration() {
  bool ok = true;
  for (int D : {2, 4, 8, 16}) {
    const auto box = oracle::boxcar_power(D, 3);
    for (int p_p = -1; p_p < exact_log2(D); ++p_p) {
      ok = ok && expand_full_polynomial(GcfSpec::with_alpha(exact_log2(D), p_p, 1.0 / (4.0 * D), 0.0)) == box;
    }
  }
  return {ok, ok ? "integer comb^3 reproduced exactly for D in {2,4,8,16}, all splits"
                 : "coefficient mismatch"};
}

Outcome c5_sensitivity() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(0.0, 0.5);
  double worst = 0.0;
  int configs = 0;
  for (int D : {4, 8, 16, 32}) {
    const int p = exact_log2(D);
    for (int p_p = -1; p_p < p; ++p_p) {
      const fxp::MultiplierModel m(GcfSpec::from_oversampling(D, p_p, 4.0 * D));
      ++configs;
      for (int i = 0; i < kFdFrequencies; ++i) {
        const double f = uni(rng);
        for (std::size_t u = 0; u < m.r().size(); ++u) {
          auto g = [&](double ru) {
            auto r = m.r();
            r[u] = ru;
            return m.response(f, m.taps(), r, false);
          };
          const double fd = std::abs(oracle::central_difference(g, m.r()[u], kFdStep));
          const double an = std::abs(m.derivative_r(u, f));
          if (an > 1e-12) worst = std::max(worst, std::abs(fd - an) / an);
        }
        for (std::size_t n = 0; n < m.taps().size(); ++n) {
          auto g = [&](double t) {
            auto taps = m.taps();
            taps[n] = t;
            return m.response(f, taps, m.r(), false);
          };
          const double fd = std::abs(oracle::central_difference(g, m.taps()[n], kFdStep));
          const double an = m.tap_derivative_magnitude(f);
          if (an > 1e-12) worst = std::max(worst, std::abs(fd - an) / an);
        }
      }
    }
  }
  bool exact = true;
  for (int p = 1; p <= 7; ++p) {
    const auto s = GcfSpec::make(p, p - 1, 1.0 / (8 << p));
    std::vector<double> freqs;
    for (int i = 0; i < kFdFrequencies; ++i) freqs.push_back(uni(rng));
    for (double v : fxp::sensitivity(s, freqs).s_t) exact = exact && v == 3.0 * s.D1 - 2;
  }
  return {worst <= kFdRelTol && exact,
          fmt("max FD relative error %.3g over %d configs x %d freqs (tol %.0e); full-polyphase "
              "S_T == 3*D1-2 for D1=2..128: %s",
              worst, configs, kFdFrequencies, kFdRelTol, exact ? "yes" : "no")};
}

Outcome c6_monte_carlo() {
  const auto bands = spectral::folding_bands(kReference);
  const auto freqs = spectral::make_grid(bands, 129, 0).in_band_freqs();
  const int f_n = fxp::fractional_bits(kReference, fxp::ToleranceSpec::from_multiplier(1e-4, 2.0)).f_n;
  const auto y2 = fxp::monte_carlo_coverage(kReference, f_n, 2.0, kMcTrials, 1, freqs);
  const auto y1 = fxp::monte_carlo_coverage(kReference, f_n, 1.0, kMcTrials, 1, freqs);
  int bad = 0;
  for (std::size_t i = 0; i < y2.freqs.size(); ++i) {
    if (std::abs(y2.empirical_std[i] / y2.model_sigma[i] - 1.0) > kStdRelTol) ++bad;
  }
  const bool cov2 = y2.coverage >= kCoverageY2Lo && y2.coverage <= kCoverageY2Hi;
  const bool cov1 = y1.coverage >= kCoverageY1Lo && y1.coverage <= kCoverageY1Hi;
  const bool ok = cov2 && cov1 && (f_n < 6 || bad == 0);
  return {ok, fmt("F_n=%d, %d trials: coverage y=2 %.4f in [%.2f,%.2f]: %s; y=1 %.4f in [%.2f,%.2f]: %s; "
                  "std within %.0f%% of model at %zu/%zu frequencies",
                  f_n, kMcTrials, y2.coverage, kCoverageY2Lo, kCoverageY2Hi, cov2 ? "yes" : "no",
                  y1.coverage, kCoverageY1Lo, kCoverageY1Hi, cov1 ? "yes" : "no", kStdRelTol * 100,
                  y2.freqs.size() - bad, y2.freqs.size())};
}

Outcome c7_fidelity() {
  const double chi = 1e-4;
  const int f_n = fxp::fractional_bits(kReference, fxp::ToleranceSpec::from_multiplier(chi, 2.0)).f_n;
  const fxp::MultiplierModel m(kReference);
  const auto r_q = fxp::quantize_coefficients(m.r(), f_n);
  const auto freqs = spectral::make_grid(spectral::folding_bands(kReference), 129, 0).in_band_freqs();
  double worst = 0.0;
  std::size_t over = 0;
  for (double f : freqs) {
    const double d = std::abs(std::abs(m.response(f, m.taps(), r_q, true)) - std::abs(m.response(f)));
    worst = std::max(worst, d);
    over += d > chi;
  }
  const double frac = double(over) / freqs.size();
  const bool ok = worst <= chi || frac < kMaxExceedance;
  return {ok, fmt("F_n=%d: max in-band |d|H|| = %.3g (chi %.0e), exceedance %.2f%% of %zu points", f_n,
                  worst, chi, 100 * frac, freqs.size())};
}

Outcome c8_rejection() {
  const auto bands = spectral::folding_bands(kReference);
  const double g = spectral::worst_case_attenuation(spectral::response_grid(kReference, bands, 129, 0));
  const double c = spectral::worst_case_attenuation(spectral::response_grid(CombSpec::make(16, 3), bands, 129, 0));
  const bool ok = std::abs((g - c) - kRejectionGainDb) <= kRejectionTolDb;
  return {ok, fmt("GCF %.2f dB, comb3 %.2f dB, improvement %.2f dB (expected %.0f+-%.0f)", g, c, g - c,
                  kRejectionGainDb, kRejectionTolDb)};
}

Outcome c9_dynamic_range() {
  double worst_g = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double alpha = oracle::kPi * i / 10000.0;
    for (int k = 0; k < 8; ++k) worst_g = std::max(worst_g, fxp::dynamic_range_growth(stage_multiplier(alpha, k)));
  }
  int runs = 0;
  std::string overflow;
  for (int D : {2, 4, 8}) {
    const int p = exact_log2(D);
    for (double alpha : {0.0, 0.79 * 2 * oracle::kPi / (8.0 * D), 0.5 / D}) {
      const auto s = GcfSpec::with_alpha(p, -1, 1.0 / (4.0 * D), alpha);
      fxp::FixedPointFormat fmt;
      fmt.input_width = 1;
      fmt.integer_bits = fxp::integer_bits(s, 1).i_n_k;
      fmt.fraction_bits = 12;
      auto seq = oracle::de_bruijn(3 * D - 2);
      seq.insert(seq.end(), seq.begin(), seq.begin() + (3 * D - 2));
      for (int phase = 0; phase < D; ++phase) {
        std::vector<std::int8_t> x(static_cast<std::size_t>(phase), 1);
        x.insert(x.end(), seq.begin(), seq.end());
        try {
          sd::decimate_fixed_point(x, s, fmt);
        } catch (const OverflowError& e) {
          overflow = e.what();
        }
        ++runs;
      }
    }
  }
  const bool ok = worst_g <= 3.0 && overflow.empty();
  return {ok, fmt("max g_k %.15g (<= 3); %d exhaustive +-1 runs (D=2,4,8): %s", worst_g, runs,
                  overflow.empty() ? "no overflow" : overflow.c_str())};
}

Outcome c10_sigma_delta() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = std::size_t{1} << 18;

  // slope of the shaped noise, measured with a busy out-of-range tone so the loop never idles
  std::vector<double> tone(n);
  for (std::size_t i = 0; i < n; ++i) tone[i] = 0.5 * std::sin(2 * oracle::kPi * 0.03 * double(i));
  const auto bits_tone = sd::sd_modulate(tone).bits;
  const std::vector<double> bt(bits_tone.begin(), bits_tone.end());
  const auto pt = sd::welch_psd(bt, 4096);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < pt.freqs.size(); ++i) {
    if (pt.freqs[i] >= 1e-3 && pt.freqs[i] <= 1e-2) {
      lx.push_back(std::log10(pt.freqs[i]));
      ly.push_back(10 * std::log10(pt.power[i]));
    }
  }
  const double slope = oracle::ls_slope(lx, ly);

  // reference experiment: band-limited input, D = 16, f_c = 1/256
  sd::SdConfig cfg;
  cfg.n_samples = n;
  const auto spec = GcfSpec::from_decimation(16, -1, cfg.fx_ratio);
  const auto rep = fxp::design_word_lengths(spec, fxp::ToleranceSpec::from_multiplier(1e-4, 2.0), 1);
  const auto run = sd::run_experiment(cfg, spec, rep.format(), 4096);
  const double dt = seconds_since(t0);

  std::vector<double> oob_in, floor_out, in_band;
  for (std::size_t i = 0; i < run.psd_in.freqs.size(); ++i)
    if (run.psd_in.freqs[i] >= 0.25) oob_in.push_back(run.psd_in.power[i]);
  for (std::size_t i = 0; i < run.psd_out.freqs.size(); ++i)
    if (run.psd_out.freqs[i] >= 0.125) floor_out.push_back(run.psd_out.power[i] * spec.D);
  const double gap = 10 * std::log10(median(oob_in) / median(floor_out));

  const auto pd = sd::welch_psd(run.decimated, 1024);
  for (std::size_t i = 0; i < pd.freqs.size(); ++i)
    if (pd.freqs[i] >= 0.005 && pd.freqs[i] <= 0.04) in_band.push_back(pd.power[i]);
  const double level = median(in_band);
  double edge = -1.0;
  for (std::size_t i = 0; i < pd.freqs.size(); ++i) {
    if (pd.freqs[i] > 0.03 && pd.power[i] < level * std::pow(10.0, -0.6)) {
      edge = pd.freqs[i];
      break;
    }
  }
  const bool ok_slope = std::abs(slope - kSlopeDb) <= kSlopeTolDb;
  const bool ok_edge = std::abs(edge - kBandEdge) <= kBandEdgeTol;
  const bool ok_gap = gap >= kFloorGapDb;
  return {ok_slope && ok_edge && ok_gap && dt < kC10Seconds,
          fmt("slope %.1f dB/dec (40+-6): %s; decimated band edge %.4f (0.0625+-0.01): %s; "
              "floor gap %.1f dB (>= 40): %s; %zu decimated samples, F_n=%d, %.2fs",
              slope, ok_slope ? "yes" : "no", edge, ok_edge ? "yes" : "no", gap, ok_gap ? "yes" : "no",
              run.decimated.size(), rep.f_n, dt)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"word-length reproduction", c1_word_length},
      {"F_n trends over D1, chi and y", c2_trends},
      {"split invariance", c3_split_invariance},
      {"comb degeneration", c4_comb_degeneration},
      {"sensitivity correctness", c5_sensitivity},
      {"statistical model (Monte Carlo)", c6_monte_carlo},
      {"quantized-response fidelity", c7_fidelity},
      {"GCF vs comb3 rejection", c8_rejection},
      {"dynamic range", c9_dynamic_range},
      {"sigma-delta experiment", c10_sigma_delta}};
  int passed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    try {
      const Outcome o = fn();
      passed += o.pass;
      std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    } catch (const std::exception& e) {
      std::printf("[ERROR] %2d %s: %s\n", index, name, e.what());
      return 2;
    }
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", passed, criteria.size());
  return 0;
}
