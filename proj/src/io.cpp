#include "gcf/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "gcf/errors.hpp"

namespace gcf::io {

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

std::ofstream open(const std::filesystem::path& p, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(p, mode);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  return os;
}

}  // namespace

json to_json(const GcfSpec& s) {
  json j = {{"D", s.D},   {"D1", s.D1},        {"D2", s.D2},   {"p", s.p},
            {"p_p", s.p_p}, {"q", s.q},        {"f_c", s.f_c}, {"alpha", s.alpha}};
  j["rho"] = s.rho ? json(*s.rho) : json(nullptr);
  return j;
}

json to_json(const CombSpec& c) { return {{"D", c.D}, {"order", c.order}}; }

json to_json(const fxp::ToleranceSpec& t) {
  return {{"chi", t.chi}, {"prob", t.prob}, {"y", t.y}};
}

json to_json(const fxp::FixedPointFormat& f) {
  return {{"sign_bits", f.sign_bits},
          {"input_width", f.input_width},
          {"integer_bits", f.integer_bits},
          {"fraction_bits", f.fraction_bits},
          {"total_bits", f.total_bits()}};
}

json to_json(const fxp::WordLengthReport& r) {
  return {{"spec", to_json(r.spec)},
          {"tolerance", to_json(r.tolerance)},
          {"normalization", std::string(fxp::to_string(r.normalization))},
          {"input_width", r.input_width},
          {"f_n", r.f_n},
          {"binding_freq", r.binding_freq},
          {"g_k", r.g_k},
          {"i_n_k", r.i_n_k},
          {"format", to_json(r.format())}};
}

json to_json(const sd::SdConfig& c) {
  return {{"fs", c.fs},
          {"fx_ratio", c.fx_ratio},
          {"amplitude", c.amplitude},
          {"n_samples", c.n_samples},
          {"seed", c.seed}};
}

void write_comment(std::ostream& os, std::string_view text) {
  if (text.empty()) return;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
}

void write_coefficients_csv(std::ostream& os, std::span<const double> values,
                            std::string_view comment) {
  write_comment(os, comment);
  os << "index,value\n" << std::setprecision(kDigits);
  for (std::size_t i = 0; i < values.size(); ++i) os << i << ',' << values[i] << '\n';
}

void write_grid_csv(std::ostream& os, const spectral::ResponseGrid& grid,
                    const std::vector<Column>& extra, std::string_view comment) {
  for (const Column& c : extra) {
    if (c.values.size() != grid.size()) {
      throw ParameterError("column " + c.name + " does not match the grid size");
    }
  }
  write_comment(os, comment);
  os << "freq,re,im,magnitude,magnitude_dB,in_band";
  for (const Column& c : extra) os << ',' << c.name;
  os << '\n' << std::setprecision(kDigits);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << grid.freqs[i] << ',' << grid.values[i].real() << ',' << grid.values[i].imag() << ','
       << grid.magnitude[i] << ',' << spectral::magnitude_db(grid.magnitude[i]) << ','
       << (grid.in_band[i] ? 1 : 0);
    for (const Column& c : extra) os << ',' << c.values[i];
    os << '\n';
  }
}

void write_psd_csv(std::ostream& os, const sd::Psd& psd, std::string_view comment) {
  write_comment(os, comment);
  os << "freq,power,power_dB\n" << std::setprecision(kDigits);
  for (std::size_t i = 0; i < psd.freqs.size(); ++i) {
    const double db = psd.power[i] > 0.0 ? 10.0 * std::log10(psd.power[i])
                                         : -spectral::kAttenuationCapDb;
    os << psd.freqs[i] << ',' << psd.power[i] << ',' << db << '\n';
  }
}

void write_bitstream(std::ostream& os, std::span<const std::int8_t> bits) {
  for (std::int8_t b : bits) {
    if (b != 1 && b != -1) throw ParameterError("bitstream values must be +1 or -1");
    os.put(b > 0 ? '\x01' : '\x00');
  }
}

std::vector<std::int8_t> read_bitstream(std::istream& is) {
  std::vector<std::int8_t> bits;
  for (char c; is.get(c);) {
    if (c == '\x01') {
      bits.push_back(1);
    } else if (c == '\x00') {
      bits.push_back(-1);
    } else {
      throw ParameterError("bitstream byte must be 0x00 or 0x01");
    }
  }
  return bits;
}

void write_simulation(const std::filesystem::path& dir, const sd::SimulationRun& run,
                      const json& config) {
  std::filesystem::create_directories(dir);
  json provenance = {{"config", config},
                     {"sd_config", to_json(run.config)},
                     {"spec", to_json(run.spec)},
                     {"format", to_json(run.format)},
                     {"overloads", run.overloads},
                     {"n_bitstream", run.bitstream.size()},
                     {"n_decimated", run.decimated.size()}};
  open(dir / "config.json") << provenance.dump(2) << '\n';

  auto bin = open(dir / "bitstream.bin", std::ios::out | std::ios::binary);
  write_bitstream(bin, run.bitstream);

  const std::string echo = config.dump();
  auto dec = open(dir / "decimated.csv");
  write_comment(dec, echo);
  dec << "index,value\n" << std::setprecision(kDigits);
  for (std::size_t i = 0; i < run.decimated.size(); ++i) dec << i << ',' << run.decimated[i] << '\n';

  auto pin = open(dir / "psd_in.csv");
  write_psd_csv(pin, run.psd_in, echo);
  auto pout = open(dir / "psd_out.csv");
  write_psd_csv(pout, run.psd_out, echo);
}

std::string format_table(const fxp::WordLengthReport& r) {
  std::ostringstream os;
  os << "GCF D=" << r.spec.D << " (D1=" << r.spec.D1 << ", D2=" << r.spec.D2
     << ", p_p=" << r.spec.p_p << "), alpha=" << std::setprecision(6) << r.spec.alpha
     << " rad, f_c=" << r.spec.f_c << '\n';
  os << "tolerance chi=" << r.tolerance.chi << ", y=" << r.tolerance.y
     << " (p=" << r.tolerance.prob << "), S_T " << fxp::to_string(r.normalization) << '\n';
  os << "F_n = " << r.f_n << " fraction bits (binding at f=" << r.binding_freq << ")\n";
  os << std::left << std::setw(8) << "stage" << std::setw(12) << "G_k" << "I_n^k\n";
  for (std::size_t i = 0; i < r.g_k.size(); ++i) {
    os << std::setw(8) << (r.spec.first_cascade_stage() + static_cast<int>(i)) << std::setw(12)
       << r.g_k[i] << r.i_n_k[i] << '\n';
  }
  const auto fmt = r.format();
  os << "coefficient word: 1 + " << fmt.max_integer_bits() << " + " << fmt.fraction_bits << " = "
     << fmt.total_bits() << " bits\n";
  return os.str();
}

}  // namespace gcf::io
