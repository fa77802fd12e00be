#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gcf/errors.hpp"
#include "gcf/filter_core.hpp"
#include "gcf/fixedpoint.hpp"
#include "gcf/sdsim.hpp"
#include "gcf/spectral.hpp"

namespace py = pybind11;
using namespace gcf;

namespace {

using Freqs = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Freqs& a) { return {a.data(), static_cast<std::size_t>(a.size())}; }

template <class F>
py::array_t<std::complex<double>> map_complex(const Freqs& freqs, F&& f) {
  py::array_t<std::complex<double>> out(freqs.size());
  auto o = out.mutable_unchecked<1>();
  const auto in = view(freqs);
  for (std::size_t i = 0; i < in.size(); ++i) o(i) = f(in[i]);
  return out;
}

fxp::Normalization norm_of(const std::string& s) { return fxp::parse_normalization(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fixed-point generalized comb filter design";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<OverflowError>(m, "RegisterOverflow", PyExc_OverflowError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  m.attr("OPTIMAL_Q") = kOptimalQ;

  py::class_<GcfSpec>(m, "GcfSpec")
      .def_static("make", &GcfSpec::make, py::arg("p"), py::arg("p_p"), py::arg("f_c"),
                  py::arg("q") = kOptimalQ)
      .def_static("from_decimation", &GcfSpec::from_decimation, py::arg("D"), py::arg("p_p"),
                  py::arg("f_c"), py::arg("q") = kOptimalQ)
      .def_static("from_oversampling", &GcfSpec::from_oversampling, py::arg("D"), py::arg("p_p"),
                  py::arg("rho"), py::arg("q") = kOptimalQ)
      .def_static("with_alpha", &GcfSpec::with_alpha, py::arg("p"), py::arg("p_p"), py::arg("f_c"),
                  py::arg("alpha"))
      .def_readonly("p", &GcfSpec::p)
      .def_readonly("p_p", &GcfSpec::p_p)
      .def_readonly("D", &GcfSpec::D)
      .def_readonly("D1", &GcfSpec::D1)
      .def_readonly("D2", &GcfSpec::D2)
      .def_readonly("q", &GcfSpec::q)
      .def_readonly("f_c", &GcfSpec::f_c)
      .def_readonly("alpha", &GcfSpec::alpha)
      .def_property_readonly("polyphase_length", &GcfSpec::polyphase_length)
      .def_property_readonly("multiplier_count", &GcfSpec::multiplier_count)
      .def("__repr__", [](const GcfSpec& s) {
        return "GcfSpec(D=" + std::to_string(s.D) + ", p_p=" + std::to_string(s.p_p) +
               ", f_c=" + std::to_string(s.f_c) + ")";
      });

  py::class_<CombSpec>(m, "CombSpec")
      .def_static("make", &CombSpec::make, py::arg("D"), py::arg("order") = 3)
      .def_readonly("D", &CombSpec::D)
      .def_readonly("order", &CombSpec::order);

  m.def("stage_multipliers", [](const GcfSpec& s) { return stage_coefficients(s).r; });
  m.def("polyphase_impulse", [](const GcfSpec& s) { return polyphase_impulse(s).h_p; });
  m.def("expand_full_polynomial", py::overload_cast<const GcfSpec&>(&expand_full_polynomial));
  m.def("comb_polynomial", &comb_polynomial);

  m.def("gcf_response", [](const GcfSpec& s, const Freqs& f, bool normalized) {
    const spectral::GcfResponse h(s);
    return map_complex(f, [&](double x) { return h(x, normalized); });
  }, py::arg("spec"), py::arg("freqs"), py::arg("normalized") = true);
  m.def("comb_response", [](const CombSpec& c, const Freqs& f) {
    return map_complex(f, [&](double x) { return spectral::comb_response(c, x); });
  });
  m.def("folding_bands", [](int D, double f_c) {
    std::vector<std::tuple<int, double, double, double>> out;
    for (const auto& b : spectral::folding_bands(D, f_c).bands) out.emplace_back(b.k, b.center, b.lo, b.hi);
    return out;
  }, "list of (k, center, lo, hi)");
  m.def("worst_case_attenuation", [](const GcfSpec& s, bool comb, int points_per_band) {
    const auto bands = spectral::folding_bands(s);
    return comb ? spectral::worst_case_attenuation(
                      spectral::response_grid(CombSpec::make(s.D, 3), bands, points_per_band, 0))
                : spectral::worst_case_attenuation(spectral::response_grid(s, bands, points_per_band, 0));
  }, py::arg("spec"), py::arg("comb") = false, py::arg("points_per_band") = spectral::kDefaultPointsPerBand);

  m.def("y_from_p", &fxp::y_from_p);
  m.def("p_from_y", &fxp::p_from_y);
  m.def("quantize", &fxp::quantize, py::arg("value"), py::arg("f_n"));
  m.def("sensitivity", [](const GcfSpec& s, const Freqs& f, const std::string& norm) {
    return fxp::sensitivity(s, view(f), norm_of(norm)).s_t;
  }, py::arg("spec"), py::arg("freqs"), py::arg("normalization") = "unit_dc");
  m.def("fractional_bits", [](const GcfSpec& s, double chi, double y, int ppb, const std::string& norm) {
    return fxp::fractional_bits(s, fxp::ToleranceSpec::from_multiplier(chi, y), ppb, norm_of(norm)).f_n;
  }, py::arg("spec"), py::arg("chi"), py::arg("y"), py::arg("points_per_band") = spectral::kDefaultPointsPerBand,
     py::arg("normalization") = "unit_dc");
  m.def("integer_bits", [](const GcfSpec& s, int input_width) {
    const auto ib = fxp::integer_bits(s, input_width);
    return py::dict(py::arg("g_k") = ib.g_k, py::arg("i_n_k") = ib.i_n_k);
  });
  m.def("monte_carlo_coverage", [](const GcfSpec& s, int f_n, double y, int trials, std::uint64_t seed,
                                   const Freqs& f) {
    const auto r = fxp::monte_carlo_coverage(s, f_n, y, trials, seed, view(f));
    return py::dict(py::arg("coverage") = r.coverage, py::arg("freqs") = r.freqs,
                    py::arg("model_sigma") = r.model_sigma, py::arg("empirical_std") = r.empirical_std);
  }, py::arg("spec"), py::arg("f_n"), py::arg("y"), py::arg("trials") = 2000, py::arg("seed") = 1,
     py::arg("freqs"));

  m.def("generate_bandlimited_signal", [](double fx_ratio, double amplitude, std::size_t n, std::uint64_t seed) {
    sd::SdConfig c;
    c.fx_ratio = fx_ratio;
    c.amplitude = amplitude;
    c.n_samples = n;
    c.seed = seed;
    return sd::generate_bandlimited_signal(c);
  }, py::arg("fx_ratio"), py::arg("amplitude"), py::arg("n_samples"), py::arg("seed") = 1);
  m.def("sd_modulate", [](const Freqs& x) { return sd::sd_modulate(view(x)).bits; });
  m.def("decimate_float", [](const Freqs& x, const GcfSpec& s) { return sd::decimate_float(view(x), s); });
  m.def("decimate_fixed_point", [](const std::vector<std::int8_t>& bits, const GcfSpec& s, int f_n,
                                   int input_width) {
    fxp::FixedPointFormat fmt;
    fmt.input_width = input_width;
    fmt.integer_bits = fxp::integer_bits(s, input_width).i_n_k;
    fmt.fraction_bits = f_n;
    return sd::decimate_fixed_point(bits, s, fmt);
  }, py::arg("bits"), py::arg("spec"), py::arg("f_n"), py::arg("input_width") = 1);
  m.def("welch_psd", [](const Freqs& x, std::size_t segment, double overlap, const std::string& window) {
    const auto p = sd::welch_psd(view(x), segment, overlap, sd::parse_window(window));
    return py::make_tuple(p.freqs, p.power);
  }, py::arg("x"), py::arg("segment") = sd::kDefaultSegment, py::arg("overlap") = 0.5,
     py::arg("window") = "hann");
}
