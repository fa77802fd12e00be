#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "gcf/filter_core.hpp"
#include "gcf/spec.hpp"

namespace gcf::spectral {

// Attenuation reported for an exact zero, keeps dB plots finite.
inline constexpr double kAttenuationCapDb = 300.0;

inline constexpr int kDefaultPointsPerBand = 129;
inline constexpr int kDefaultGlobalPoints = 4096;

struct Band {
  int k = 0;
  double center = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Intervals [k/D - f_c, k/D + f_c], k = 1..k_M, clipped to [0, 1/2]. QN in these
// bands aliases onto the baseband after decimation by D.
struct FoldingBandSet {
  int D = 2;
  double f_c = 0.0;
  int k_max = 0;
  std::vector<Band> bands;

  bool contains(double f) const;
};

FoldingBandSet folding_bands(int D, double f_c);
inline FoldingBandSet folding_bands(const GcfSpec& s) { return folding_bands(s.D, s.f_c); }

std::complex<double> comb_response(const CombSpec& comb, double f);

// Precomputed evaluator of H(e^{j 2 pi f}) = [h_o] H_P H_N.
class GcfResponse {
 public:
  explicit GcfResponse(const GcfSpec& spec);

  std::complex<double> operator()(double f, bool normalized = true) const;
  // Cascade part via the closed cos form, one factor per stage.
  std::complex<double> cascade(double f) const;
  // Polyphase part from the reassembled branch bank.
  std::complex<double> polyphase(double f) const;

  const GcfSpec& spec() const { return spec_; }
  const PolyphaseBank& bank() const { return bank_; }
  const CascadeCoefficients& coefficients() const { return cascade_; }
  const NormalizationGain& gain() const { return gain_; }

 private:
  GcfSpec spec_;
  PolyphaseBank bank_;
  CascadeCoefficients cascade_;
  NormalizationGain gain_;
  std::vector<double> reassembled_;
};

std::complex<double> gcf_response(const GcfSpec& spec, double f, bool normalized = true);

// One factor 2 e^{-j3x}[cos 3x + r cos x] of the cascade, x = 2^(k-1) omega.
std::complex<double> cascade_stage_response(double r, int k, double f);

struct ResponseGrid {
  std::vector<double> freqs;
  std::vector<std::complex<double>> values;
  std::vector<double> magnitude;
  std::vector<bool> in_band;

  std::size_t size() const { return freqs.size(); }
  std::size_t in_band_count() const;
  std::vector<double> in_band_freqs() const;
};

// Frequencies only: global_points uniform samples of [0, 1/2] (0 allowed) plus
// points_per_band samples of every band, both edges and the centre included.
ResponseGrid make_grid(const FoldingBandSet& bands, int points_per_band = kDefaultPointsPerBand,
                       int global_points = kDefaultGlobalPoints);

ResponseGrid response_grid(const GcfSpec& spec, const FoldingBandSet& bands,
                           int points_per_band = kDefaultPointsPerBand,
                           int global_points = kDefaultGlobalPoints, bool normalized = true);
ResponseGrid response_grid(const CombSpec& comb, const FoldingBandSet& bands,
                           int points_per_band = kDefaultPointsPerBand,
                           int global_points = kDefaultGlobalPoints);

// -20 log10(max in-band magnitude) of a unit-DC-gain response, capped.
double worst_case_attenuation(const ResponseGrid& grid);
double magnitude_db(double magnitude);

}  // namespace gcf::spectral
