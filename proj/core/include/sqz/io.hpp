#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sqz/cavity.hpp"
#include "sqz/dataset.hpp"
#include "sqz/synth.hpp"

namespace sqz::io {

// Input that fails schema or syntax validation; carries the line number
// for CSV sources (0 when not applicable).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) +
                                          ")"
                                    : what),
        line(line) {}
  int line;
};

// Dataset CSV schema. Header is mandatory:
//   pump_mW,sigma_pump_mW,frequency_Hz,quadrature,value_dB,sigma_dB
// quadrature is sqz|antisqz; lines starting with '#' are comments and
// are preserved round-trip as metadata.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv_file(const std::string& path,
                              const CavityConstants& cavity);
void write_dataset_csv(std::ostream& out, const Dataset& dataset);
void write_dataset_csv_file(const std::string& path, const Dataset& dataset);

// Trace CSV: "# ..." comments, header "index,value_linear", one sample
// per line.
void write_trace_csv(std::ostream& out, const Trace& trace);

// JSON element array -> cavity layout. Lengths in mm, wavelength in nm.
CavityLayout layout_from_json(const nlohmann::json& j);
nlohmann::json layout_to_json(const CavityLayout& layout);

// Squeezer parameters in external units (mW, degrees).
SqueezerParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const SqueezerParams& params);

nlohmann::json load_json_file(const std::string& path);

// FNV-1a over the canonical dump, for stamping reports.
std::string config_hash(const nlohmann::json& j);

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace sqz::io
