#include <doctest.h>

#include <nlohmann/json.hpp>

#include <sstream>

#include "sqz/io.hpp"
#include "sqz/synth.hpp"
#include "test_helpers.hpp"

using namespace sqz;
using sqz::testing::reference_params;

TEST_CASE("dataset CSV write/read identity") {
  const auto params = reference_params();
  TraceSpec spec;
  spec.n_points = 50;
  spec.rbw = 200e3;
  spec.vbw = 200;
  spec.relative_scatter = 0.0715;
  spec.seed = 5;
  const Dataset original = synth_pump_sweep(
      params, {0.006, 0.056, 0.106, 0.180}, 5e6, spec, 0.03);

  std::stringstream buffer;
  io::write_dataset_csv(buffer, original);
  Dataset parsed = io::read_dataset_csv(buffer);
  parsed.cavity = original.cavity;

  REQUIRE(parsed.points.size() == original.points.size());
  for (std::size_t i = 0; i < parsed.points.size(); ++i) {
    CHECK(parsed.points[i].pump_power == original.points[i].pump_power);
    CHECK(parsed.points[i].sigma_pump == original.points[i].sigma_pump);
    CHECK(parsed.points[i].frequency == original.points[i].frequency);
    CHECK(parsed.points[i].tag == original.points[i].tag);
    CHECK(parsed.points[i].value_db == original.points[i].value_db);
    CHECK(parsed.points[i].sigma_db == original.points[i].sigma_db);
  }
  CHECK(parsed.metadata == original.metadata);

  // and the re-serialization is byte-identical
  std::stringstream again;
  io::write_dataset_csv(again, parsed);
  std::stringstream first;
  io::write_dataset_csv(first, original);
  CHECK(again.str() == first.str());
}

TEST_CASE("dataset CSV error reporting") {
  std::stringstream missing_column(
      "pump_mW,sigma_pump_mW,frequency_Hz,quadrature,value_dB\n");
  CHECK_THROWS_WITH_AS(io::read_dataset_csv(missing_column),
                       doctest::Contains("sigma_dB"), io::ParseError);

  std::stringstream bad_number(
      "pump_mW,sigma_pump_mW,frequency_Hz,quadrature,value_dB,sigma_dB\n"
      "6,0.18,5e6,sqz,abc,0.3\n");
  try {
    io::read_dataset_csv(bad_number);
    FAIL("expected ParseError");
  } catch (const io::ParseError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("value_dB") != std::string::npos);
  }

  std::stringstream bad_tag(
      "pump_mW,sigma_pump_mW,frequency_Hz,quadrature,value_dB,sigma_dB\n"
      "6,0.18,5e6,weird,-3,0.3\n");
  CHECK_THROWS_AS(io::read_dataset_csv(bad_tag), io::ParseError);

  std::stringstream empty("");
  CHECK_THROWS_AS(io::read_dataset_csv(empty), io::ParseError);
}

TEST_CASE("layout JSON round trip") {
  const nlohmann::json j = {
      {"wavelength_nm", 1550},
      {"elements",
       {{{"type", "mirror"}, {"roc_mm", 25}, {"power_reflectivity", 0.9}},
        {{"type", "gap"}, {"length_mm", 23}},
        {{"type", "interface"}},
        {{"type", "slab"}, {"length_mm", 9.3}, {"refractive_index", 1.816}},
        {{"type", "mirror"},
         {"roc_mm", 12},
         {"power_reflectivity", 1.0},
         {"immersed_index", 1.816}}}}};
  const CavityLayout layout = io::layout_from_json(j);
  layout.validate();
  CHECK(layout.wavelength == doctest::Approx(1550e-9));
  CHECK(layout.elements.size() == 5);
  CHECK(std::get<Slab>(layout.elements[3]).refractive_index == 1.816);

  const nlohmann::json back = io::layout_to_json(layout);
  const CavityLayout twice = io::layout_from_json(back);
  CHECK(twice.wavelength ==
        doctest::Approx(layout.wavelength).epsilon(1e-12));
  CHECK(io::layout_to_json(twice).at("elements") == back.at("elements"));

  CHECK_THROWS_AS(io::layout_from_json(nlohmann::json{{"elements", 5}}),
                  io::ParseError);
  CHECK_THROWS_AS(
      io::layout_from_json(nlohmann::json{
          {"wavelength_nm", 1550},
          {"elements", {{{"type", "prism"}}}}}),
      io::ParseError);
}

TEST_CASE("params JSON round trip uses external units") {
  const auto params = reference_params();
  const nlohmann::json j = io::params_to_json(params);
  CHECK(j.at("threshold_mW").get<double>() == doctest::Approx(221.0));
  CHECK(j.at("theta_fluc_deg").get<double>() == doctest::Approx(0.66));
  const SqueezerParams back = io::params_from_json(j);
  CHECK(back.efficiency == params.efficiency);
  CHECK(back.threshold_power ==
        doctest::Approx(params.threshold_power).epsilon(1e-12));
  CHECK(back.phase_jitter ==
        doctest::Approx(params.phase_jitter).epsilon(1e-12));
  CHECK(back.cavity.round_trip_length == params.cavity.round_trip_length);

  CHECK_THROWS_WITH_AS(io::params_from_json(nlohmann::json{{"eta", 0.9}}),
                       doctest::Contains("threshold_mW"), io::ParseError);
}

TEST_CASE("config hash is stable and content sensitive") {
  const nlohmann::json a = {{"x", 1}, {"y", "z"}};
  const nlohmann::json b = {{"x", 2}, {"y", "z"}};
  CHECK(io::config_hash(a) == io::config_hash(a));
  CHECK(io::config_hash(a) != io::config_hash(b));
  CHECK(io::config_hash(a).size() == 16);
}

TEST_CASE("trace CSV carries provenance") {
  const auto params = reference_params();
  TraceSpec spec;
  spec.n_points = 5;
  spec.rbw = 200e3;
  spec.vbw = 200;
  spec.relative_scatter = 0.0;
  spec.seed = 9;
  const Trace trace =
      synth_zero_span(params, {0.18, 5e6}, TraceKind::squeezed, spec);
  std::stringstream out;
  io::write_trace_csv(out, trace);
  const std::string text = out.str();
  CHECK(text.find("# seed 9") != std::string::npos);
  CHECK(text.find("index,value_linear") != std::string::npos);
  CHECK(text.find("kind squeezed") != std::string::npos);
}
