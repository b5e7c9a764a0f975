#include "sqz/io.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "sqz/constants.hpp"

namespace sqz::io {

namespace {

constexpr std::array<const char*, 6> kDatasetColumns = {
    "pump_mW", "sigma_pump_mW", "frequency_Hz",
    "quadrature", "value_dB", "sigma_dB"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_number(const std::string& s, const char* column, int line) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw ParseError(std::string("invalid number '") + s + "' in column " +
                         column,
                     line);
  }
}

// Shortest representation that survives a text round trip.
std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  for (int prec = 1; prec < 17; ++prec) {
    char trial[64];
    std::snprintf(trial, sizeof(trial), "%.*g", prec, v);
    std::sscanf(trial, "%lf", &back);
    if (back == v) return trial;
  }
  return buf;
}

// Multiplies the decimal string by 10^k without touching the binary value,
// so unit conversion cannot perturb a round trip.
std::string shift_decimal(const std::string& s, int k) {
  std::string digits;
  std::string sign;
  int exp10 = 0;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    if (s[i] == '-') sign = "-";
    ++i;
  }
  int before_dot = 0;
  bool seen_dot = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) ||
                          s[i] == '.');
       ++i) {
    if (s[i] == '.') {
      seen_dot = true;
      continue;
    }
    digits.push_back(s[i]);
    if (!seen_dot) ++before_dot;
  }
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E'))
    exp10 = std::stoi(s.substr(i + 1));
  else if (i < s.size())
    return s;  // not a plain number; leave untouched

  // value = 0.digits * 10^point with the decimal point "point" digits in
  int point = before_dot + exp10 + k;
  while (!digits.empty() && digits.front() == '0') {
    digits.erase(digits.begin());
    --point;
  }
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  if (digits.empty()) return "0";

  const int n = static_cast<int>(digits.size());
  std::string out = sign;
  if (point > 0 && point <= 17) {
    if (point >= n)
      out += digits + std::string(point - n, '0');
    else
      out += digits.substr(0, point) + "." + digits.substr(point);
  } else if (point <= 0 && point > -4) {
    out += "0." + std::string(-point, '0') + digits;
  } else {
    out += digits.substr(0, 1);
    if (n > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(point - 1);
  }
  return out;
}

double get_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ParseError(std::string("missing or non-numeric field '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  Dataset dataset;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped[0] == '#') {
      dataset.metadata.push_back(stripped.substr(1).empty()
                                     ? ""
                                     : trim(stripped.substr(1)));
      continue;
    }
    const auto fields = split_csv(stripped);
    if (!header_seen) {
      for (std::size_t i = 0; i < kDatasetColumns.size(); ++i) {
        if (i >= fields.size() || fields[i] != kDatasetColumns[i])
          throw ParseError(std::string("missing or misplaced column '") +
                               kDatasetColumns[i] + "' in header",
                           line_no);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != kDatasetColumns.size())
      throw ParseError("expected " + std::to_string(kDatasetColumns.size()) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no);
    MeasurementPoint p;
    p.pump_power = parse_number(shift_decimal(fields[0], -3), "pump_mW",
                                line_no);
    p.sigma_pump = parse_number(shift_decimal(fields[1], -3), "sigma_pump_mW",
                                line_no);
    p.frequency = parse_number(fields[2], "frequency_Hz", line_no);
    if (fields[3] == "sqz")
      p.tag = QuadratureTag::squeezed;
    else if (fields[3] == "antisqz")
      p.tag = QuadratureTag::antisqueezed;
    else
      throw ParseError("quadrature must be sqz or antisqz, got '" + fields[3] +
                           "'",
                       line_no);
    p.value_db = parse_number(fields[4], "value_dB", line_no);
    p.sigma_db = parse_number(fields[5], "sigma_dB", line_no);
    dataset.points.push_back(p);
  }
  if (!header_seen) throw ParseError("missing dataset header row");
  return dataset;
}

Dataset read_dataset_csv_file(const std::string& path,
                              const CavityConstants& cavity) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file '" + path + "'");
  Dataset dataset = read_dataset_csv(in);
  dataset.cavity = cavity;
  return dataset;
}

void write_dataset_csv(std::ostream& out, const Dataset& dataset) {
  for (const auto& note : dataset.metadata) out << "# " << note << "\n";
  for (std::size_t i = 0; i < kDatasetColumns.size(); ++i)
    out << (i ? "," : "") << kDatasetColumns[i];
  out << "\n";
  for (const auto& p : dataset.points) {
    out << shift_decimal(format_number(p.pump_power), 3) << ","
        << shift_decimal(format_number(p.sigma_pump), 3) << ","
        << format_number(p.frequency) << ","
        << (p.tag == QuadratureTag::squeezed ? "sqz" : "antisqz") << ","
        << format_number(p.value_db) << "," << format_number(p.sigma_db)
        << "\n";
  }
}

void write_dataset_csv_file(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file '" + path + "'");
  write_dataset_csv(out, dataset);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const char* kind = "vacuum";
  if (trace.kind == TraceKind::squeezed) kind = "squeezed";
  if (trace.kind == TraceKind::antisqueezed) kind = "antisqueezed";
  if (trace.kind == TraceKind::dark) kind = "dark";
  out << "# kind " << kind << "\n";
  out << "# seed " << trace.spec.seed << "\n";
  out << "# rbw_Hz " << format_number(trace.spec.rbw) << " vbw_Hz "
      << format_number(trace.spec.vbw) << " n_averages "
      << trace.spec.n_averages << "\n";
  out << "index,value_linear\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i)
    out << i << "," << format_number(trace.samples[i]) << "\n";
}

CavityLayout layout_from_json(const nlohmann::json& j) {
  if (!j.contains("elements") || !j.at("elements").is_array())
    throw ParseError("layout needs an 'elements' array");
  CavityLayout layout;
  layout.wavelength = get_number(j, "wavelength_nm") * 1e-9;
  for (const auto& e : j.at("elements")) {
    const std::string type = e.value("type", "");
    if (type == "gap") {
      layout.elements.push_back(Gap{get_number(e, "length_mm") * 1e-3});
    } else if (type == "slab") {
      layout.elements.push_back(Slab{get_number(e, "length_mm") * 1e-3,
                                     get_number(e, "refractive_index")});
    } else if (type == "interface") {
      layout.elements.push_back(FlatInterface{});
    } else if (type == "mirror") {
      CurvedMirror m;
      if (e.contains("roc_mm")) m.roc = get_number(e, "roc_mm") * 1e-3;
      m.power_reflectivity = e.value("power_reflectivity", 1.0);
      m.immersed_index = e.value("immersed_index", 1.0);
      layout.elements.push_back(m);
    } else {
      throw ParseError("unknown element type '" + type + "'");
    }
  }
  return layout;
}

nlohmann::json layout_to_json(const CavityLayout& layout) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["wavelength_nm"] = layout.wavelength * 1e9;
  auto& elements = j["elements"] = nlohmann::json::array();
  for (const auto& e : layout.elements) {
    nlohmann::json je;
    if (const auto* g = std::get_if<Gap>(&e)) {
      je["type"] = "gap";
      je["length_mm"] = g->length * 1e3;
    } else if (const auto* s = std::get_if<Slab>(&e)) {
      je["type"] = "slab";
      je["length_mm"] = s->length * 1e3;
      je["refractive_index"] = s->refractive_index;
    } else if (const auto* m = std::get_if<CurvedMirror>(&e)) {
      je["type"] = "mirror";
      if (std::isfinite(m->roc)) je["roc_mm"] = m->roc * 1e3;
      je["power_reflectivity"] = m->power_reflectivity;
      je["immersed_index"] = m->immersed_index;
    } else {
      je["type"] = "interface";
    }
    elements.push_back(je);
  }
  return j;
}

SqueezerParams params_from_json(const nlohmann::json& j) {
  SqueezerParams p;
  p.efficiency = get_number(j, "eta");
  p.threshold_power = get_number(j, "threshold_mW") * 1e-3;
  p.phase_jitter = deg_to_rad(j.value("theta_fluc_deg", 0.0));
  if (!j.contains("cavity"))
    throw ParseError("params need a 'cavity' object");
  const auto& c = j.at("cavity");
  p.cavity.coupler_transmissivity = get_number(c, "T");
  p.cavity.round_trip_loss = get_number(c, "L");
  p.cavity.round_trip_length = get_number(c, "l_m");
  return p;
}

nlohmann::json params_to_json(const SqueezerParams& params) {
  nlohmann::json j;
  j["eta"] = params.efficiency;
  j["threshold_mW"] = params.threshold_power * 1e3;
  j["theta_fluc_deg"] = rad_to_deg(params.phase_jitter);
  j["cavity"] = {{"T", params.cavity.coupler_transmissivity},
                 {"L", params.cavity.round_trip_loss},
                 {"l_m", params.cavity.round_trip_length}};
  return j;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  try {
    return nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON parse error in '") + path +
                     "': " + e.what());
  }
}

std::string config_hash(const nlohmann::json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sqz::io
