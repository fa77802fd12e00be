// gcfdesign: design, inspect and simulate fixed-point generalized comb decimators.
//
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 runtime numeric error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gcf/config.hpp"
#include "gcf/errors.hpp"
#include "gcf/filter_core.hpp"
#include "gcf/fixedpoint.hpp"
#include "gcf/io.hpp"
#include "gcf/sdsim.hpp"
#include "gcf/spectral.hpp"

namespace fs = std::filesystem;
using gcf::io::json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string config_file;
  std::map<std::string, std::string> overrides;
  bool sweep = false;
};

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

void add_config_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("-c,--config", opt.config_file, "JSON config file");
  for (const std::string& key : gcf::cli::config_keys()) {
    cmd->add_option_function<std::string>(
        flag_name(key), [&opt, key](const std::string& v) { opt.overrides[key] = v; },
        "override config key " + key);
  }
}

gcf::cli::DesignConfig load_config(const Options& opt) {
  json j = json::object();
  if (!opt.config_file.empty()) {
    std::ifstream is(opt.config_file);
    if (!is) throw gcf::ParameterError("cannot read config file " + opt.config_file);
    try {
      is >> j;
    } catch (const json::exception& e) {
      throw gcf::ParameterError(std::string("malformed config: ") + e.what());
    }
  }
  for (const auto& [key, text] : opt.overrides) {
    // numbers, booleans and arrays parse as JSON; anything else is a string
    try {
      j[key] = json::parse(text);
    } catch (const json::exception&) {
      j[key] = text;
    }
  }
  return gcf::cli::DesignConfig::from_json(j);
}

std::ofstream create(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

void write_json(const fs::path& p, const json& j) { create(p) << j.dump(2) << '\n'; }

struct Design {
  gcf::fxp::WordLengthReport report;
  gcf::fxp::MultiplierModel model;
  std::vector<double> taps_q;
  std::vector<double> r_q;
};

Design make_design(const gcf::cli::DesignConfig& cfg) {
  const gcf::GcfSpec spec = cfg.spec();
  auto report = gcf::fxp::design_word_lengths(spec, cfg.tolerance(), cfg.require_input_width(),
                                              cfg.points_per_band, cfg.norm());
  gcf::fxp::MultiplierModel model(spec, cfg.norm());
  auto taps_q = gcf::fxp::quantize_coefficients(model.taps(), report.f_n);
  auto r_q = gcf::fxp::quantize_coefficients(model.r(), report.f_n);
  return Design{std::move(report), std::move(model), std::move(taps_q), std::move(r_q)};
}

// ---------------------------------------------------------------------------

int cmd_design(const gcf::cli::DesignConfig& cfg, bool sweep) {
  const fs::path out = cfg.output_dir;
  fs::create_directories(out);
  const json echo = cfg.to_json();
  const Design d = make_design(cfg);

  json coeffs = {{"spec", gcf::io::to_json(d.report.spec)},
                 {"fraction_bits", d.report.f_n},
                 {"exact", {{"taps", d.model.taps()}, {"r", d.model.r()}}},
                 {"quantized", {{"taps", d.taps_q}, {"r", d.r_q}}}};
  write_json(out / "report.json", {{"config", echo}, {"report", gcf::io::to_json(d.report)},
                                   {"coefficients", coeffs}});
  write_json(out / "coefficients.json", {{"config", echo}, {"coefficients", coeffs}});

  const std::string comment = echo.dump();
  {
    auto os = create(out / "r_exact.csv");
    gcf::io::write_coefficients_csv(os, d.model.r(), comment);
  }
  {
    auto os = create(out / "r_quantized.csv");
    gcf::io::write_coefficients_csv(os, d.r_q, comment);
  }
  if (!d.model.taps().empty()) {
    auto os = create(out / "taps_exact.csv");
    gcf::io::write_coefficients_csv(os, d.model.taps(), comment);
    auto qs = create(out / "taps_quantized.csv");
    gcf::io::write_coefficients_csv(qs, d.taps_q, comment);
  }

  if (sweep) {
    auto os = create(out / "fn_sweep.csv");
    gcf::io::write_comment(os, comment);
    os << "D,D1,p_p,chi,y,f_n\n";
    const gcf::GcfSpec base = cfg.spec();
    for (double y : cfg.sweep_y) {
      for (double chi : cfg.sweep_chi) {
        for (int pp = -1; pp <= base.p - 1; ++pp) {
          const auto s = gcf::GcfSpec::make(base.p, pp, base.f_c, base.q);
          const auto tol = gcf::fxp::ToleranceSpec::from_multiplier(chi, y);
          const auto fb = gcf::fxp::fractional_bits(s, tol, cfg.points_per_band, cfg.norm());
          os << s.D << ',' << s.D1 << ',' << pp << ',' << chi << ',' << y << ',' << fb.f_n << '\n';
        }
      }
    }
  }
  std::cout << gcf::io::format_table(d.report);
  return 0;
}

struct Fidelity {
  double max_deviation = 0.0;
  double exceedance = 0.0;  // fraction of in-band points with |Delta|H|| > chi
};

Fidelity fidelity(const Design& d, const gcf::spectral::ResponseGrid& grid, double chi) {
  Fidelity fid;
  std::size_t over = 0, n = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.in_band[i]) continue;
    const double f = grid.freqs[i];
    const double dev =
        std::abs(std::abs(d.model.response(f, d.taps_q, d.r_q, true)) -
                 std::abs(d.model.response(f, d.model.taps(), d.model.r(), true)));
    fid.max_deviation = std::max(fid.max_deviation, dev);
    over += dev > chi;
    ++n;
  }
  fid.exceedance = n ? static_cast<double>(over) / n : 0.0;
  return fid;
}

int cmd_response(const gcf::cli::DesignConfig& cfg) {
  const fs::path out = cfg.output_dir;
  fs::create_directories(out);
  const json echo = cfg.to_json();
  const std::string comment = echo.dump();
  const Design d = make_design(cfg);
  const gcf::GcfSpec spec = cfg.spec();
  const auto bands = gcf::spectral::folding_bands(spec);

  const auto exact = gcf::spectral::response_grid(spec, bands, cfg.points_per_band, cfg.global_points);
  auto quant = gcf::spectral::make_grid(bands, cfg.points_per_band, cfg.global_points);
  for (double f : quant.freqs) {
    quant.values.push_back(d.model.response(f, d.taps_q, d.r_q, true));
    quant.magnitude.push_back(std::abs(quant.values.back()));
  }
  const auto comb = gcf::spectral::response_grid(gcf::CombSpec::make(spec.D, 3), bands,
                                                 cfg.points_per_band, cfg.global_points);
  {
    auto os = create(out / "response_exact.csv");
    gcf::io::write_grid_csv(os, exact, {}, comment);
  }
  {
    auto os = create(out / "response_quantized.csv");
    gcf::io::write_grid_csv(os, quant, {}, comment);
  }
  {
    auto os = create(out / "response_comb.csv");
    gcf::io::write_grid_csv(os, comb, {}, comment);
  }
  {
    auto os = create(out / "bands.csv");
    gcf::io::write_comment(os, comment);
    os << "k,center,lo,hi\n" << std::setprecision(17);
    for (const auto& b : bands.bands) os << b.k << ',' << b.center << ',' << b.lo << ',' << b.hi << '\n';
  }
  const Fidelity fid = fidelity(d, exact, cfg.chi);
  const json summary = {{"config", echo},
                        {"f_n", d.report.f_n},
                        {"max_in_band_deviation", fid.max_deviation},
                        {"exceedance_fraction", fid.exceedance},
                        {"attenuation_dB",
                         {{"gcf_exact", gcf::spectral::worst_case_attenuation(exact)},
                          {"gcf_quantized", gcf::spectral::worst_case_attenuation(quant)},
                          {"comb3", gcf::spectral::worst_case_attenuation(comb)}}}};
  write_json(out / "response_summary.json", summary);
  std::cout << "F_n = " << d.report.f_n << ", max in-band |d|H|| = " << fid.max_deviation
            << " (chi = " << cfg.chi << ")\n";
  return 0;
}

int cmd_sensitivity(const gcf::cli::DesignConfig& cfg) {
  const fs::path out = cfg.output_dir;
  fs::create_directories(out);
  const json echo = cfg.to_json();
  const gcf::GcfSpec spec = cfg.spec();
  const auto bands = gcf::spectral::folding_bands(spec);
  const auto grid = gcf::spectral::response_grid(spec, bands, cfg.points_per_band, cfg.global_points);
  const auto sens = gcf::fxp::sensitivity(spec, grid.freqs, cfg.norm());

  int f_n = -1;
  std::vector<double> sigma(grid.size(), 0.0), delta(grid.size(), 0.0);
  std::vector<gcf::io::Column> cols{{"s_t", sens.s_t}};
  if (cfg.input_width) {
    f_n = make_design(cfg).report.f_n;
    const auto err = gcf::fxp::quantization_error_response(spec, f_n, grid.freqs, cfg.norm());
    sigma = err.sigma_dh;
    delta = err.delta_h;
    cols.push_back({"sigma_dh", sigma});
    cols.push_back({"delta_h", delta});
  }
  json meta = {{"config", echo},
               {"case", std::string(gcf::fxp::to_string(sens.case_tag))},
               {"n_multipliers", sens.n_multipliers},
               {"f_n", f_n < 0 ? json(nullptr) : json(f_n)}};
  auto os = create(out / "sensitivity.csv");
  gcf::io::write_grid_csv(os, grid, cols, meta.dump());
  std::cout << "S_T (" << gcf::fxp::to_string(sens.case_tag) << ", N=" << sens.n_multipliers
            << ") written for " << grid.size() << " frequencies\n";
  return 0;
}

int cmd_compare(const gcf::cli::DesignConfig& cfg) {
  const fs::path out = cfg.output_dir;
  fs::create_directories(out);
  const json echo = cfg.to_json();
  const gcf::GcfSpec spec = cfg.spec();
  const auto bands = gcf::spectral::folding_bands(spec);
  const auto gcf_grid = gcf::spectral::response_grid(spec, bands, cfg.points_per_band, 0);
  const auto comb_grid =
      gcf::spectral::response_grid(gcf::CombSpec::make(spec.D, 3), bands, cfg.points_per_band, 0);

  auto os = create(out / "compare.csv");
  gcf::io::write_comment(os, echo.dump());
  os << "k,center,lo,hi,gcf_attenuation_dB,comb_attenuation_dB,improvement_dB\n";
  std::cout << std::left << std::setw(4) << "k" << std::setw(12) << "centre" << std::setw(14)
            << "GCF [dB]" << std::setw(14) << "comb3 [dB]" << "gain [dB]\n";
  for (const auto& b : bands.bands) {
    double g = 0.0, c = 0.0;
    for (std::size_t i = 0; i < gcf_grid.size(); ++i) {
      const double f = gcf_grid.freqs[i];
      if (f < b.lo || f > b.hi) continue;
      g = std::max(g, gcf_grid.magnitude[i]);
      c = std::max(c, comb_grid.magnitude[i]);
    }
    const double ga = -gcf::spectral::magnitude_db(g), ca = -gcf::spectral::magnitude_db(c);
    os << std::setprecision(17) << b.k << ',' << b.center << ',' << b.lo << ',' << b.hi << ','
       << ga << ',' << ca << ',' << ga - ca << '\n';
    std::cout << std::setprecision(6) << std::setw(4) << b.k << std::setw(12) << b.center
              << std::setw(14) << ga << std::setw(14) << ca << ga - ca << '\n';
  }
  const double wg = gcf::spectral::worst_case_attenuation(gcf_grid);
  const double wc = gcf::spectral::worst_case_attenuation(comb_grid);
  write_json(out / "compare_summary.json",
             {{"config", echo},
              {"worst_case_attenuation_dB", {{"gcf", wg}, {"comb3", wc}, {"improvement", wg - wc}}}});
  std::cout << "worst case: GCF " << wg << " dB, comb3 " << wc << " dB, improvement " << wg - wc
            << " dB\n";
  return 0;
}

// ---------------------------------------------------------------------------

json check(const std::string& name, bool passed, json details) {
  return {{"name", name}, {"passed", passed}, {"details", std::move(details)}};
}

json check_split_invariance(const gcf::cli::DesignConfig& cfg) {
  const gcf::GcfSpec base = cfg.spec();
  std::vector<double> ref;
  double worst = 0.0;
  for (int pp = -1; pp <= base.p - 1; ++pp) {
    const auto s = gcf::GcfSpec::make(base.p, pp, base.f_c, base.q);
    auto bank = gcf::polyphase_impulse(s);
    auto cascade = gcf::stage_coefficients(s);
    if (cfg.debug_corrupt_coefficient && pp == base.p - 1) bank.h_p[0] += 1e-3;
    if (cfg.debug_corrupt_coefficient && pp == -1 && !cascade.r.empty()) cascade.r[0] += 1e-3;
    const auto poly = gcf::expand_full_polynomial(bank, cascade);
    if (ref.empty()) {
      ref = poly;
      continue;
    }
    double peak = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      peak = std::max(peak, std::abs(ref[i]));
      diff = std::max(diff, std::abs(poly.at(i) - ref[i]));
    }
    worst = std::max(worst, diff / peak);
  }
  return check("split_invariance", worst <= 1e-10, {{"max_relative_difference", worst}});
}

json check_comb_degeneration(const gcf::cli::DesignConfig& cfg) {
  const gcf::GcfSpec base = cfg.spec();
  const auto s = gcf::GcfSpec::with_alpha(base.p, base.p_p, base.f_c, 0.0);
  const auto poly = gcf::expand_full_polynomial(s);
  const auto comb = gcf::comb_polynomial(gcf::CombSpec::make(s.D, 3));
  const bool ok = poly == comb;
  return check("comb_degeneration", ok, {{"length", poly.size()}});
}

json check_finite_difference(const gcf::cli::DesignConfig& cfg) {
  const gcf::fxp::MultiplierModel model(cfg.spec(), cfg.norm());
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(0.0, 0.5);
  constexpr double h = 1e-6;
  double worst = 0.0;
  std::vector<double> r = model.r();
  for (int n = 0; n < 50; ++n) {
    const double f = uni(rng);
    for (std::size_t u = 0; u < r.size(); ++u) {
      r[u] = model.r()[u] + h;
      const auto up = model.response(f, model.taps(), r, false);
      r[u] = model.r()[u] - h;
      const auto down = model.response(f, model.taps(), r, false);
      r[u] = model.r()[u];
      const auto fd = (up - down) / (2.0 * h);
      const auto an = model.derivative_r(u, f);
      if (std::abs(an) < 1e-12) continue;
      worst = std::max(worst, std::abs(fd - an) / std::abs(an));
    }
  }
  return check("finite_difference_sensitivity", worst <= 1e-5,
               {{"max_relative_error", worst}, {"frequencies", 50}, {"step", h}});
}

json check_monte_carlo(const gcf::cli::DesignConfig& cfg, const Design& d) {
  const auto bands = gcf::spectral::folding_bands(d.report.spec);
  const auto freqs = gcf::spectral::make_grid(bands, cfg.points_per_band, 0).in_band_freqs();
  const double y = d.report.tolerance.y;
  const auto mc = gcf::fxp::monte_carlo_coverage(d.report.spec, d.report.f_n, y, cfg.trials,
                                                 cfg.seed, freqs, cfg.norm());
  const double predicted = gcf::fxp::p_from_y(y);
  // S_T bounds the variance from above, so the design promises at least `predicted`.
  const bool ok = mc.coverage >= predicted - 0.02;
  return check("monte_carlo_coverage", ok,
               {{"coverage", mc.coverage},
                {"gaussian_prediction", predicted},
                {"gaussian_fit", std::abs(mc.coverage - predicted) <= 0.02},
                {"trials", mc.trials},
                {"samples", mc.samples}});
}

json check_fidelity(const gcf::cli::DesignConfig& cfg, const Design& d) {
  const auto bands = gcf::spectral::folding_bands(d.report.spec);
  const auto grid = gcf::spectral::response_grid(d.report.spec, bands, cfg.points_per_band, 0);
  const Fidelity fid = fidelity(d, grid, cfg.chi);
  const bool ok = fid.max_deviation <= cfg.chi || fid.exceedance < 0.05;
  return check("quantized_fidelity", ok,
               {{"max_in_band_deviation", fid.max_deviation},
                {"chi", cfg.chi},
                {"exceedance_fraction", fid.exceedance}});
}

int cmd_validate(const gcf::cli::DesignConfig& cfg) {
  const fs::path out = cfg.output_dir;
  fs::create_directories(out);
  const Design d = make_design(cfg);
  json checks = json::array({check_split_invariance(cfg), check_comb_degeneration(cfg),
                             check_finite_difference(cfg), check_monte_carlo(cfg, d),
                             check_fidelity(cfg, d)});
  bool all = true;
  for (const auto& c : checks) {
    const bool ok = c.at("passed").get<bool>();
    all = all && ok;
    std::cout << (ok ? "PASS " : "FAIL ") << c.at("name").get<std::string>() << ' '
              << c.at("details").dump() << '\n';
  }
  write_json(out / "validate.json", {{"config", cfg.to_json()}, {"passed", all}, {"checks", checks}});
  return all ? 0 : kExitValidation;
}

int cmd_simulate(const gcf::cli::DesignConfig& cfg) {
  const gcf::GcfSpec spec = cfg.spec();
  if (!spec.full_cascade()) {
    throw gcf::ParameterError("simulate runs the cascaded architecture; set pp_split to -1");
  }
  const Design d = make_design(cfg);
  const auto run = gcf::sd::run_experiment(cfg.sd_config(), spec, d.report.format(), cfg.welch_segment);
  gcf::io::write_simulation(cfg.output_dir, run, cfg.to_json());
  std::cout << "simulated " << run.bitstream.size() << " samples -> " << run.decimated.size()
            << " decimated (F_n = " << d.report.f_n << ", overload events " << run.overloads
            << "), useful band edge after decimation " << spec.f_c * spec.D << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-point generalized comb filter design toolkit"};
  app.require_subcommand(1);

  Options opt;
  auto* design = app.add_subcommand("design", "word-length design report and coefficient files");
  add_config_options(design, opt);
  design->add_flag("--sweep", opt.sweep, "also tabulate F_n over splits, sweep_chi and sweep_y");
  auto* response = app.add_subcommand("response", "exact, quantized and comb response grids");
  add_config_options(response, opt);
  auto* sensitivity = app.add_subcommand("sensitivity", "sensitivity S_T grid dump");
  add_config_options(sensitivity, opt);
  auto* validate = app.add_subcommand("validate", "Monte Carlo and oracle checks");
  add_config_options(validate, opt);
  auto* simulate = app.add_subcommand("simulate", "sigma-delta modulation and decimation run");
  add_config_options(simulate, opt);
  auto* compare = app.add_subcommand("compare", "GCF vs comb3 attenuation per folding band");
  add_config_options(compare, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    const auto cfg = load_config(opt);
    if (*design) return cmd_design(cfg, opt.sweep);
    if (*response) return cmd_response(cfg);
    if (*sensitivity) return cmd_sensitivity(cfg);
    if (*validate) return cmd_validate(cfg);
    if (*simulate) return cmd_simulate(cfg);
    if (*compare) return cmd_compare(cfg);
  } catch (const gcf::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gcf::OverflowError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const gcf::InternalError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
