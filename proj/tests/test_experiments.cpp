#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "snr4d/experiments.hpp"

using namespace snr4d;

namespace {

struct ParsedCsv {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

ParsedCsv parse_csv(const std::string& text) {
  ParsedCsv out;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      out.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (!header_seen) {
      out.columns = cells;
      header_seen = true;
    } else {
      out.rows.push_back(cells);
    }
  }
  return out;
}

double cell_num(const ParsedCsv& csv, std::size_t row, const std::string& col) {
  for (std::size_t i = 0; i < csv.columns.size(); ++i)
    if (csv.columns[i] == col) return std::stod(csv.rows[row][i]);
  throw std::runtime_error("no column " + col);
}

std::string cell_str(const ParsedCsv& csv, std::size_t row, const std::string& col) {
  for (std::size_t i = 0; i < csv.columns.size(); ++i)
    if (csv.columns[i] == col) return csv.rows[row][i];
  throw std::runtime_error("no column " + col);
}

ExperimentSpec base_spec(const std::filesystem::path& out_dir) {
  ExperimentSpec spec;
  spec.link.n_spans = 4;
  spec.ssfm.n_symbols = 1024;
  spec.ssfm.rng_seed = 9;
  spec.seeds = 1;
  spec.jobs = 2;
  spec.gmi_samples = 20000;
  spec.out_dir = out_dir;
  NliCoefficients a;
  a.eta_ss_per_w2 = 103.0;
  a.epsilon = 0.22;
  spec.coefficients.entries["pm-qam:16"] = a;
  NliCoefficients b = a;
  b.eta_ss_per_w2 = 125.0;  // same epsilon, different strength
  spec.coefficients.entries["pm-qam:4"] = b;
  return spec;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("csv document rendering") {
  CsvDocument doc;
  doc.add_metadata("tool", "snr4d test");
  doc.set_columns({"a", "b"});
  doc.add_row(1.5, "x");
  doc.add_row(2.0, "");
  const std::string text = doc.to_string();
  REQUIRE(text == "# tool: snr4d test\na,b\n1.5,x\n2,\n");
  REQUIRE_THROWS_AS(doc.add_row(1.0), ConfigError);  // width mismatch
}

TEST_CASE("result cache round trip and collision guard") {
  const auto dir = fresh_dir("snr4d_cache_test");
  ResultCache cache(dir);
  nlohmann::json value = {1.5, 2.5};
  cache.store("key one", value);
  auto hit = cache.load("key one");
  REQUIRE(hit.has_value());
  REQUIRE(*hit == value);
  REQUIRE_FALSE(cache.load("key two").has_value());

  // same hash file but different stored key must be ignored
  std::ofstream(dir / (fnv1a64_hex("key three") + ".json"))
      << R"({"key":"something else","value":[9]})";
  REQUIRE_FALSE(cache.load("key three").has_value());

  ResultCache disabled;
  REQUIRE_FALSE(disabled.enabled());
  REQUIRE_FALSE(disabled.load("key one").has_value());
}

TEST_CASE("coefficient file round trip") {
  const auto dir = fresh_dir("snr4d_coeff_test");
  const auto path = dir / "coeff.json";
  {
    nlohmann::json j;
    j["coefficients"]["pm-qam:16"] = {{"eta_ss_per_w2", 103.0},
                                      {"epsilon", 0.22},
                                      {"source", "ssfm_calibrated"}};
    std::ofstream(path) << j.dump();
  }
  const CoefficientTable table = load_coefficient_file(path);
  REQUIRE(table.has("pm-qam:16"));
  REQUIRE(table.get("pm-qam:16").eta_ss_per_w2 == 103.0);
  REQUIRE(table.get("pm-qam:16").source == CoeffSource::ssfm_calibrated);
  REQUIRE_THROWS_AS(table.get("pm-qam:64"), ConfigError);

  // single calibration record form
  {
    CalibrationResult r;
    r.coeff.eta_ss_per_w2 = 77.0;
    r.coeff.epsilon = 0.1;
    r.coeff.source = CoeffSource::ssfm_calibrated;
    r.slope = 1.1;
    r.r_squared = 0.9999;
    r.spans = {1, 2};
    r.sigma_ss_w = {1e-8, 2e-8};
    r.residuals_db = {0.0, 0.0};
    r.p_w = 1e-3;
    std::ofstream(path) << calibration_to_json(r, "pm-qam:4", "echo").dump();
  }
  const CoefficientTable single = load_coefficient_file(path);
  REQUIRE(single.get("pm-qam:4").eta_ss_per_w2 == 77.0);

  std::ofstream(path) << "{}";
  REQUIRE_THROWS_AS(load_coefficient_file(path), ConfigError);
  REQUIRE_THROWS_AS(load_coefficient_file(dir / "missing.json"), ConfigError);
}

TEST_CASE("resolve_format accepts tokens and paths") {
  REQUIRE(resolve_format("pm-qam:4").size() == 16);
  REQUIRE_THROWS_AS(resolve_format("pm-qam:5"), FormatError);
  REQUIRE_THROWS_AS(resolve_format("/nonexistent.4d"), FormatError);
  const auto a = generate_pm_qam(4);
  auto b = a;
  b.points[0][0] += 1e-3;
  REQUIRE(format_digest(a) != format_digest(b));
}

TEST_CASE("noise_vs_distance experiment") {
  auto spec = base_spec(fresh_dir("snr4d_exp_noise"));
  spec.formats = {"pm-qam:16", "pm-qam:4"};
  spec.distances.clear();
  for (int n = 1; n <= 60; ++n) spec.distances.push_back(n);

  const CsvDocument doc = run_noise_vs_distance(spec);
  const ParsedCsv csv = parse_csv(doc.to_string());
  REQUIRE(csv.columns ==
          std::vector<std::string>{"distance_km", "format", "ase_total_w", "ss_w", "sn_w"});
  REQUIRE(csv.rows.size() == 2 * 60);

  // per format: the ss/sn gap shrinks strictly with distance, first row is
  // a single span and finite
  for (std::size_t base : {std::size_t{0}, std::size_t{60}}) {
    REQUIRE(cell_num(csv, base, "distance_km") == 80.0);
    double prev_gap = 1e300;
    for (std::size_t i = 0; i < 60; ++i) {
      const double ss = cell_num(csv, base + i, "ss_w");
      const double sn = cell_num(csv, base + i, "sn_w");
      REQUIRE(std::isfinite(ss));
      REQUIRE(sn > 0);
      const double gap = ss / sn;
      REQUIRE(gap < prev_gap);
      prev_gap = gap;
    }
  }

  // same epsilon: ss curves of the two formats differ by a constant factor
  const double ratio0 = cell_num(csv, 0, "ss_w") / cell_num(csv, 60, "ss_w");
  for (std::size_t i = 1; i < 60; ++i) {
    const double ratio = cell_num(csv, i, "ss_w") / cell_num(csv, 60 + i, "ss_w");
    REQUIRE(ratio == Catch::Approx(ratio0).epsilon(1e-9));
  }

  // reruns are byte-identical
  REQUIRE(run_noise_vs_distance(spec).to_string() == doc.to_string());

  spec.coefficients.entries.erase("pm-qam:4");
  REQUIRE_THROWS_AS(run_noise_vs_distance(spec), ConfigError);
  spec.distances = {0};
  REQUIRE_THROWS_AS(run_noise_vs_distance(spec), ConfigError);
}

TEST_CASE("delta-SNR experiment on a miniature link") {
  auto spec = base_spec(fresh_dir("snr4d_exp_delta"));
  spec.formats = {"pm-qam:16"};
  spec.distances = {2, 4};

  const CsvDocument doc = run_delta_snr(spec);
  const ParsedCsv csv = parse_csv(doc.to_string());
  REQUIRE(csv.rows.size() == 4);  // 2 distances x 2 variants
  for (std::size_t i = 0; i < csv.rows.size(); i += 2) {
    REQUIRE(cell_str(csv, i, "model_variant") == "ss_only");
    REQUIRE(cell_str(csv, i + 1, "model_variant") == "ss_plus_sn");
    // the fuller model always predicts less SNR
    REQUIRE(cell_num(csv, i, "delta_snr_db") >= cell_num(csv, i + 1, "delta_snr_db"));
    // both variants share the SSFM reference
    REQUIRE(cell_num(csv, i, "snr_ssfm_db") == cell_num(csv, i + 1, "snr_ssfm_db"));
  }

  // second invocation is served from the cache and renders identically
  const CsvDocument again = run_delta_snr(spec);
  REQUIRE(again.to_string() == doc.to_string());
  REQUIRE(std::filesystem::exists(spec.out_dir / "cache"));

  spec.distances = {0, 2};
  REQUIRE_THROWS_AS(run_delta_snr(spec), ConfigError);
}

TEST_CASE("reach experiment orders the two model variants") {
  auto spec = base_spec(fresh_dir("snr4d_exp_reach"));
  spec.formats = {"pm-qam:4"};
  spec.distances = {10, 50};
  spec.reach_max_spans = 400;

  const ReachOutput out = run_reach(spec);
  const ParsedCsv curve = parse_csv(out.curve.to_string());
  REQUIRE(curve.rows.size() == 4);
  const ParsedCsv reach = parse_csv(out.reach.to_string());
  REQUIRE(reach.rows.size() == 1);
  const double r_ss = cell_num(reach, 0, "reach_ss_only_spans");
  const double r_sn = cell_num(reach, 0, "reach_ss_plus_sn_spans");
  REQUIRE(r_sn <= r_ss);
  REQUIRE(cell_num(reach, 0, "relative_difference") >= 0.0);

  // NGMI decreases with distance along each variant's curve
  REQUIRE(cell_num(curve, 0, "ngmi") > cell_num(curve, 1, "ngmi"));
  REQUIRE(cell_num(curve, 2, "ngmi") > cell_num(curve, 3, "ngmi"));
}

TEST_CASE("snr_vs_power experiment") {
  auto spec = base_spec(fresh_dir("snr4d_exp_power"));
  spec.formats = {"pm-qam:16"};
  spec.distances = {4};
  spec.powers_dbm = {-2.0, 0.0, 2.0};

  const CsvDocument doc = run_snr_vs_power(spec);
  const ParsedCsv csv = parse_csv(doc.to_string());
  REQUIRE(csv.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(cell_num(csv, i, "snr_ss_plus_sn_db") <= cell_num(csv, i, "snr_ss_only_db"));
    REQUIRE(cell_str(csv, i, "snr_ssfm_db").empty());  // --with-ssfm off
  }

  spec.powers_dbm.clear();
  REQUIRE_THROWS_AS(run_snr_vs_power(spec), ConfigError);
}

TEST_CASE("experiment dispatcher writes files and validates names") {
  auto spec = base_spec(fresh_dir("snr4d_exp_dispatch"));
  spec.formats = {"pm-qam:16"};
  spec.distances = {1, 30, 60};

  const auto written = run_experiment("noise_vs_distance", spec);
  REQUIRE(written.size() == 1);
  REQUIRE(std::filesystem::exists(written[0]));
  REQUIRE(written[0].filename() == "noise_vs_distance.csv");

  REQUIRE_THROWS_AS(run_experiment("fig_one", spec), ConfigError);
}

TEST_CASE("cached mean SNR agrees between cold and warm calls") {
  const auto dir = fresh_dir("snr4d_cache_snr");
  ResultCache cache(dir);
  const auto fmt = generate_pm_qam(4);
  LinkConfig link;
  link.n_spans = 2;
  SsfmConfig cfg;
  cfg.n_symbols = 1024;
  const std::vector<int> taps{1, 2};
  const auto cold = ssfm_mean_snr_db(fmt, link, cfg, 2, taps, 2, &cache);
  const auto warm = ssfm_mean_snr_db(fmt, link, cfg, 2, taps, 2, &cache);
  REQUIRE(cold == warm);
  const auto uncached = ssfm_mean_snr_db(fmt, link, cfg, 2, taps, 2, nullptr);
  REQUIRE(cold == uncached);
}
