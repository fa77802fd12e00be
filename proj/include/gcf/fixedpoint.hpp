#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gcf/filter_core.hpp"
#include "gcf/spec.hpp"
#include "gcf/spectral.hpp"

namespace gcf::fxp {

// unit_dc: sensitivities of the unit-DC-gain response. The polyphase taps are
//   held in normalized form h_P / H_P(1) (they are what gets quantized) and
//   the cascade gain 1 / prod(2 + 2 r_k) is an exact scale factor.
// raw: the unnormalized product H_P H_N.
enum class Normalization { unit_dc, raw };

std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view s);

// y such that prob = erf(y / sqrt 2), by bisection to 1e-10.
double y_from_p(double prob);
double p_from_y(double y);

struct ToleranceSpec {
  double chi = 1e-4;  // bound on |Delta|H|| over the folding bands
  double prob = 0.95;
  double y = 0.0;

  static ToleranceSpec from_probability(double chi, double prob);
  // For reproducing tables that quote a rounded y (2 for 95%, 1.63 for 90%).
  static ToleranceSpec from_multiplier(double chi, double y);
};

struct FixedPointFormat {
  int sign_bits = 1;
  int input_width = 1;
  std::vector<int> integer_bits;  // per cascade stage, accumulated
  int fraction_bits = 0;

  int max_integer_bits() const;
  int total_bits() const { return sign_bits + max_integer_bits() + fraction_bits; }
};

enum class ArchitectureCase { full_cascade, full_polyphase, partial };
std::string_view to_string(ArchitectureCase c);

// The multipliers of one architecture and the response they produce.
class MultiplierModel {
 public:
  MultiplierModel(const GcfSpec& spec, Normalization norm = Normalization::unit_dc);

  const GcfSpec& spec() const { return spec_; }
  Normalization normalization() const { return norm_; }
  ArchitectureCase architecture() const;

  // Polyphase taps that are multipliers (empty in the full-cascade case,
  // where H_P = 1 is a wire).
  const std::vector<double>& taps() const { return taps_; }
  const std::vector<double>& r() const { return r_; }
  double cascade_gain() const { return cascade_gain_; }
  int multiplier_count() const { return static_cast<int>(taps_.size() + r_.size()); }

  std::complex<double> response(double f) const;
  // Response with substituted multipliers. With self_normalize, each
  // sub-filter is rescaled to unit DC gain (ignored in raw mode).
  std::complex<double> response(double f, std::span<const double> taps, std::span<const double> r,
                                bool self_normalize) const;

  // dH/dr_i for cascade stage i (0-based within the cascade), product form:
  // the stage factor is replaced by 2 e^{-j3x} cos x, the other factors kept.
  std::complex<double> derivative_r(std::size_t i, double f) const;
  // |dH/dtap_n| is the same for every tap.
  double tap_derivative_magnitude(double f) const;

  double sensitivity(double f) const;

 private:
  std::complex<double> polyphase(double f, std::span<const double> taps) const;

  GcfSpec spec_;
  Normalization norm_;
  std::vector<double> taps_;
  std::vector<double> r_;
  int first_stage_ = 0;
  double cascade_gain_ = 1.0;
};

struct SensitivityResult {
  std::vector<double> freqs;
  std::vector<double> s_t;
  ArchitectureCase case_tag = ArchitectureCase::full_cascade;
  int n_multipliers = 0;
  Normalization normalization = Normalization::unit_dc;
};

SensitivityResult sensitivity(const GcfSpec& spec, std::span<const double> freqs,
                              Normalization norm = Normalization::unit_dc);

struct FractionalBits {
  int f_n = 0;
  double binding_freq = 0.0;
  double min_ratio = 0.0;  // min over FB of chi / (y sqrt(S_T))
};

// The grid must hold at least kMinPointsPerBand samples in every band.
inline constexpr int kMinPointsPerBand = 65;

FractionalBits fractional_bits(const GcfSpec& spec, const ToleranceSpec& tol,
                               const spectral::FoldingBandSet& bands,
                               const spectral::ResponseGrid& grid,
                               Normalization norm = Normalization::unit_dc);
// Band-only grid with points_per_band samples per band.
FractionalBits fractional_bits(const GcfSpec& spec, const ToleranceSpec& tol,
                               int points_per_band = spectral::kDefaultPointsPerBand,
                               Normalization norm = Normalization::unit_dc);

double dynamic_range_growth(double r);

struct IntegerBits {
  std::vector<double> g_k;
  std::vector<int> i_n_k;
};

IntegerBits integer_bits(const GcfSpec& spec, int input_width);

struct WordLengthReport {
  GcfSpec spec;
  ToleranceSpec tolerance;
  Normalization normalization = Normalization::unit_dc;
  int input_width = 1;
  int f_n = 0;
  double binding_freq = 0.0;
  std::vector<double> g_k;
  std::vector<int> i_n_k;

  FixedPointFormat format() const;
};

WordLengthReport design_word_lengths(const GcfSpec& spec, const ToleranceSpec& tol,
                                     int input_width,
                                     int points_per_band = spectral::kDefaultPointsPerBand,
                                     Normalization norm = Normalization::unit_dc);

// round(m 2^f_n) / 2^f_n, ties away from zero.
double quantize(double value, int f_n);
std::vector<double> quantize_coefficients(std::span<const double> values, int f_n);

struct ErrorStats {
  double sigma_dm = 0.0;  // 2^-f_n / sqrt(12)
  std::vector<double> freqs;
  std::vector<double> sigma_dh;  // sigma_dm sqrt(S_T)
  std::vector<double> delta_h;   // |H_q| - |H|
};

ErrorStats quantization_error_response(const GcfSpec& spec, int f_n,
                                       std::span<const double> freqs,
                                       Normalization norm = Normalization::unit_dc);

struct MonteCarloResult {
  double coverage = 0.0;
  std::uint64_t covered = 0;
  std::uint64_t samples = 0;
  int trials = 0;
  std::vector<double> freqs;  // points with nonzero model sigma
  std::vector<double> model_sigma;
  std::vector<double> empirical_std;
};

inline constexpr int kMinMonteCarloTrials = 1000;

// Every multiplier gets an independent uniform error on [-2^-f_n/2, 2^-f_n/2];
// coverage is the fraction of (trial, frequency) pairs with
// |Delta|H|| <= y sigma_dh. Trial t draws from a substream seeded by (seed, t).
MonteCarloResult monte_carlo_coverage(const GcfSpec& spec, int f_n, double y, int trials,
                                      std::uint64_t seed, std::span<const double> freqs,
                                      Normalization norm = Normalization::unit_dc);

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace gcf::fxp
