#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gcf/fixedpoint.hpp"
#include "gcf/sdsim.hpp"
#include "gcf/spec.hpp"
#include "gcf/spectral.hpp"

namespace gcf::io {

using json = nlohmann::json;

json to_json(const GcfSpec& spec);
json to_json(const CombSpec& comb);
json to_json(const fxp::ToleranceSpec& tol);
json to_json(const fxp::FixedPointFormat& fmt);
json to_json(const fxp::WordLengthReport& report);
json to_json(const sd::SdConfig& cfg);

// Lines written as "# <text>" ahead of the CSV header.
void write_comment(std::ostream& os, std::string_view text);

// index,value - one coefficient per line at round-trip precision.
void write_coefficients_csv(std::ostream& os, std::span<const double> values,
                            std::string_view comment = {});

struct Column {
  std::string name;
  std::span<const double> values;
};

// freq,re,im,magnitude,magnitude_dB,in_band[,extra...]
void write_grid_csv(std::ostream& os, const spectral::ResponseGrid& grid,
                    const std::vector<Column>& extra = {}, std::string_view comment = {});

// freq,power,power_dB
void write_psd_csv(std::ostream& os, const sd::Psd& psd, std::string_view comment = {});

// One byte per sample: 0x00 = -1, 0x01 = +1.
void write_bitstream(std::ostream& os, std::span<const std::int8_t> bits);
std::vector<std::int8_t> read_bitstream(std::istream& is);

// config.json, bitstream.bin, decimated.csv, psd_in.csv, psd_out.csv
void write_simulation(const std::filesystem::path& dir, const sd::SimulationRun& run,
                      const json& config);

std::string format_table(const fxp::WordLengthReport& report);

}  // namespace gcf::io
