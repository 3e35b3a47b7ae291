#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "snr4d/calibration.hpp"
#include "snr4d/config.hpp"
#include "snr4d/csv.hpp"
#include "snr4d/metrics.hpp"
#include "snr4d/nli_model.hpp"
#include "snr4d/ssfm.hpp"
#include "snr4d/version.hpp"

namespace snr4d {

// ---------------------------------------------------------------------------
// format resolution

// Accepts either "pm-qam:N" or a path to a constellation file.
inline Constellation4D resolve_format(const std::string& token) {
  if (token.rfind("pm-qam:", 0) == 0) {
    const int order = detail::parse_int("format '" + token + "'", token.substr(7));
    return generate_pm_qam(order);
  }
  return load_format(token);
}

// Content digest used in cache keys, so renamed or edited coordinate files
// never alias each other.
inline std::string format_digest(const Constellation4D& c) {
  std::string bytes = c.name;
  bytes.append(reinterpret_cast<const char*>(c.points.data()),
               c.points.size() * sizeof(c.points[0]));
  bytes.append(reinterpret_cast<const char*>(c.labels.data()),
               c.labels.size() * sizeof(c.labels[0]));
  return fnv1a64_hex(bytes);
}

// ---------------------------------------------------------------------------
// coefficient files

struct CoefficientTable {
  std::map<std::string, NliCoefficients> entries;

  bool has(const std::string& format_name) const { return entries.count(format_name) != 0; }

  NliCoefficients get(const std::string& format_name) const {
    auto it = entries.find(format_name);
    if (it == entries.end())
      throw ConfigError("no NLI coefficients for format '" + format_name +
                        "'; supply --eta-ss/--epsilon, a coefficient file, or run calibrate");
    return it->second;
  }
};

inline nlohmann::json coefficients_to_json(const NliCoefficients& c) {
  return {{"eta_ss_per_w2", c.eta_ss_per_w2},
          {"epsilon", c.epsilon},
          {"source", c.source == CoeffSource::ssfm_calibrated ? "ssfm_calibrated" : "user_supplied"}};
}

inline NliCoefficients coefficients_from_json(const nlohmann::json& j) {
  NliCoefficients c;
  c.eta_ss_per_w2 = j.at("eta_ss_per_w2").get<double>();
  c.epsilon = j.value("epsilon", 0.0);
  c.source = j.value("source", "user_supplied") == std::string("ssfm_calibrated")
                 ? CoeffSource::ssfm_calibrated
                 : CoeffSource::user_supplied;
  validate(c);
  return c;
}

// Accepts {"coefficients": {name: {...}}} or a single calibration record
// {"format": name, "eta_ss_per_w2": ...}.
inline CoefficientTable load_coefficient_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coefficient file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  CoefficientTable table;
  try {
    if (j.contains("coefficients")) {
      for (const auto& [name, entry] : j.at("coefficients").items())
        table.entries[name] = coefficients_from_json(entry);
    } else if (j.contains("format")) {
      table.entries[j.at("format").get<std::string>()] = coefficients_from_json(j);
    } else {
      throw ConfigError(path.string() + ": expected a 'coefficients' map or a calibration record");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return table;
}

inline nlohmann::json calibration_to_json(const CalibrationResult& r,
                                          const std::string& format_name,
                                          const std::string& echo) {
  nlohmann::json fit;
  fit["slope"] = r.slope;
  fit["r_squared"] = r.r_squared;
  fit["power_dbm"] = w_to_dbm(r.p_w);
  fit["distances_spans"] = r.spans;
  fit["sigma_ss_w"] = r.sigma_ss_w;
  fit["residuals_db"] = r.residuals_db;
  fit["config_echo"] = echo;
  nlohmann::json j = coefficients_to_json(r.coeff);
  j["format"] = format_name;
  j["fit"] = fit;
  return j;
}

// ---------------------------------------------------------------------------
// result cache

// Simulation results keyed by a canonical description of the job; the key is
// stored alongside the value and compared on load, so a hash collision can
// only cause a recompute, never a wrong reuse.
class ResultCache {
 public:
  ResultCache() = default;
  explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  bool enabled() const { return !dir_.empty(); }

  std::optional<nlohmann::json> load(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    const auto path = dir_ / (fnv1a64_hex(key) + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;
    }
    if (j.value("key", std::string()) != key) return std::nullopt;
    return j.at("value");
  }

  void store(const std::string& key, const nlohmann::json& value) const {
    if (!enabled()) return;
    nlohmann::json j;
    j["key"] = key;
    j["value"] = value;
    std::ofstream out(dir_ / (fnv1a64_hex(key) + ".json"));
    out << j.dump(1);
  }

 private:
  std::filesystem::path dir_;
};

inline std::string canonical_ssfm_string(const SsfmConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "step_km=" << cfg.step_km << "\nn_symbols=" << cfg.n_symbols << "\nsps=" << cfg.sps
     << "\nseed=" << cfg.rng_seed << "\nase_on=" << cfg.ase_on
     << "\nnonlinearity_on=" << cfg.nonlinearity_on << "\nedge_exclusion=" << cfg.edge_exclusion
     << '\n';
  return os.str();
}

namespace detail {

inline std::string join_ints(std::span<const int> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

inline std::string ssfm_job_key(const std::string& kind, const Constellation4D& c,
                                const LinkConfig& link, const SsfmConfig& cfg, int seeds,
                                std::span<const int> taps) {
  return kind + "|format=" + c.name + "/" + format_digest(c) + "|seeds=" + std::to_string(seeds) +
         "|taps=" + join_ints(taps) + "\n" + canonical_config_string(link) +
         canonical_ssfm_string(cfg);
}

}  // namespace detail

// Mean effective SNR per tap over `seeds` full runs (noise powers averaged in
// the linear domain), cached when a cache is supplied.
inline std::vector<double> ssfm_mean_snr_db(const Constellation4D& c, const LinkConfig& link,
                                            const SsfmConfig& cfg, int seeds,
                                            std::span<const int> taps, unsigned jobs,
                                            const ResultCache* cache = nullptr) {
  const std::string key = detail::ssfm_job_key("mean_snr", c, link, cfg, seeds, taps);
  if (cache) {
    if (auto hit = cache->load(key)) return hit->get<std::vector<double>>();
  }

  std::vector<SsfmRunResult> runs(static_cast<std::size_t>(seeds));
  parallel_for(runs.size(), jobs, [&](std::size_t s) {
    SsfmConfig rc = cfg;
    rc.rng_seed = cfg.rng_seed + s;
    runs[s] = run_link(c, link, rc, taps);
  });

  const double p_w = dbm_to_w(link.signal.launch_power_dbm);
  std::vector<double> snr_db;
  for (std::size_t t = 0; t < runs.front().taps.size(); ++t) {
    double noise = 0;
    for (const auto& run : runs) noise += p_w / db_to_linear(run.taps[t].snr_eff_db);
    noise /= static_cast<double>(seeds);
    snr_db.push_back(linear_to_db(p_w / noise));
  }
  if (cache) cache->store(key, snr_db);
  return snr_db;
}

inline nlohmann::json noise_estimate_to_json(const NoiseTermEstimate& e) {
  return {{"n_spans", e.n_spans},       {"distance_km", e.distance_km},
          {"ase_w", e.ase_w},           {"ss_w", e.ss_w},
          {"sn_w", e.sn_w},             {"ase_se_w", e.ase_se_w},
          {"ss_se_w", e.ss_se_w},       {"sn_se_w", e.sn_se_w},
          {"sn_power_w", e.sn_power_w}, {"sn_power_se_w", e.sn_power_se_w},
          {"total_w", e.total_w},       {"total_se_w", e.total_se_w},
          {"snr_total_db", e.snr_total_db},
          {"n_runs", e.n_runs},         {"run_total_w", e.run_total_w},
          {"run_ss_w", e.run_ss_w},     {"run_ase_w", e.run_ase_w},
          {"run_sn_w", e.run_sn_w},     {"run_snr_db", e.run_snr_db}};
}

inline NoiseTermEstimate noise_estimate_from_json(const nlohmann::json& j) {
  NoiseTermEstimate e;
  e.n_spans = j.at("n_spans").get<int>();
  e.distance_km = j.at("distance_km").get<double>();
  e.ase_w = j.at("ase_w").get<double>();
  e.ss_w = j.at("ss_w").get<double>();
  e.sn_w = j.at("sn_w").get<double>();
  e.ase_se_w = j.at("ase_se_w").get<double>();
  e.ss_se_w = j.at("ss_se_w").get<double>();
  e.sn_se_w = j.at("sn_se_w").get<double>();
  e.sn_power_w = j.at("sn_power_w").get<double>();
  e.sn_power_se_w = j.at("sn_power_se_w").get<double>();
  e.total_w = j.at("total_w").get<double>();
  e.total_se_w = j.at("total_se_w").get<double>();
  e.snr_total_db = j.at("snr_total_db").get<double>();
  e.n_runs = j.at("n_runs").get<int>();
  e.run_total_w = j.at("run_total_w").get<std::vector<double>>();
  e.run_ss_w = j.at("run_ss_w").get<std::vector<double>>();
  e.run_ase_w = j.at("run_ase_w").get<std::vector<double>>();
  e.run_sn_w = j.at("run_sn_w").get<std::vector<double>>();
  e.run_snr_db = j.at("run_snr_db").get<std::vector<double>>();
  return e;
}

inline std::vector<NoiseTermEstimate> ssfm_noise_terms_cached(
    const Constellation4D& c, const LinkConfig& link, const SsfmConfig& cfg, int seeds,
    std::span<const int> taps, unsigned jobs, const ResultCache* cache = nullptr) {
  const std::string key = detail::ssfm_job_key("noise_terms", c, link, cfg, seeds, taps);
  if (cache) {
    if (auto hit = cache->load(key)) {
      std::vector<NoiseTermEstimate> out;
      for (const auto& item : *hit) out.push_back(noise_estimate_from_json(item));
      return out;
    }
  }
  auto out = estimate_noise_terms(c, link, cfg, seeds, taps, jobs);
  if (cache) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : out) j.push_back(noise_estimate_to_json(e));
    cache->store(key, j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// experiments

struct ExperimentSpec {
  LinkConfig link;
  SsfmConfig ssfm;
  std::vector<std::string> formats;
  std::vector<int> distances;  // span counts
  std::vector<double> powers_dbm;
  int seeds = 8;
  unsigned jobs = 0;
  double ngmi_threshold = 0.8;
  long gmi_samples = 100000;
  std::uint64_t gmi_seed = 7;
  bool with_ssfm = false;
  int reach_max_spans = 500;
  std::filesystem::path out_dir = ".";
  CoefficientTable coefficients;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"noise_vs_distance", "nli_vs_distance",
                                              "nli_by_format", "ngmi_vs_distance",
                                              "snr_vs_power"};
  return names;
}

namespace detail {

inline std::string canonical_experiment_string(const ExperimentSpec& spec,
                                               const std::string& name) {
  std::ostringstream os;
  os.precision(17);
  os << "experiment=" << name << '\n' << canonical_config_string(spec.link)
     << canonical_ssfm_string(spec.ssfm);
  os << "formats=";
  for (const auto& f : spec.formats) os << f << ',';
  os << "\ndistances=" << join_ints(spec.distances) << "\npowers=";
  for (double p : spec.powers_dbm) os << format_number(p) << ',';
  os << "\nseeds=" << spec.seeds << "\nngmi_threshold=" << spec.ngmi_threshold
     << "\ngmi_samples=" << spec.gmi_samples << "\ngmi_seed=" << spec.gmi_seed
     << "\nwith_ssfm=" << spec.with_ssfm << "\nreach_max_spans=" << spec.reach_max_spans << '\n';
  for (const auto& [fmt, coeff] : spec.coefficients.entries)
    os << "coeff." << fmt << "=" << coeff.eta_ss_per_w2 << '/' << coeff.epsilon << '\n';
  return os.str();
}

inline void stamp_metadata(CsvDocument& doc, const ExperimentSpec& spec, const std::string& name) {
  doc.add_metadata("tool", std::string("snr4d ") + version_string);
  doc.add_metadata("experiment", name);
  doc.add_metadata("config_hash", fnv1a64_hex(canonical_experiment_string(spec, name)));
  std::string seeds;
  for (int s = 0; s < spec.seeds; ++s) {
    if (s) seeds += ',';
    seeds += std::to_string(spec.ssfm.rng_seed + static_cast<std::uint64_t>(s));
  }
  doc.add_metadata("seeds", seeds);
  std::string formats;
  for (std::size_t i = 0; i < spec.formats.size(); ++i) {
    if (i) formats += ',';
    formats += spec.formats[i];
  }
  doc.add_metadata("formats", formats);
}

inline void require_distances(const ExperimentSpec& spec) {
  if (spec.distances.empty()) throw ConfigError("experiment needs a non-empty distance grid");
  for (int n : spec.distances)
    if (n < 1) throw ConfigError("distances must be >= 1 span");
}

inline std::vector<std::pair<std::string, Constellation4D>> resolve_formats(
    const ExperimentSpec& spec) {
  if (spec.formats.empty()) throw ConfigError("experiment needs at least one format");
  std::vector<std::pair<std::string, Constellation4D>> out;
  for (const auto& token : spec.formats) {
    Constellation4D c = resolve_format(token);
    out.emplace_back(c.name, std::move(c));
  }
  return out;
}

}  // namespace detail

// Fig.1-style data: the three noise powers against distance at fixed launch
// power, one curve set per format.
inline CsvDocument run_noise_vs_distance(const ExperimentSpec& spec) {
  detail::require_distances(spec);
  const auto formats = detail::resolve_formats(spec);

  CsvDocument doc;
  detail::stamp_metadata(doc, spec, "noise_vs_distance");
  doc.add_metadata("launch_power_dbm", format_number(spec.link.signal.launch_power_dbm));
  doc.set_columns({"distance_km", "format", "ase_total_w", "ss_w", "sn_w"});

  const double p_w = dbm_to_w(spec.link.signal.launch_power_dbm);
  for (const auto& [name, c] : formats) {
    const NliCoefficients coeff = spec.coefficients.get(name);
    for (int n : spec.distances) {
      LinkConfig link = spec.link;
      link.n_spans = n;
      const NoiseBudget b = snr_eff(p_w, link, coeff, true);
      doc.add_row(n * spec.link.fiber.span_length_km, name, b.ase_total_w, b.ss_w, b.sn_w);
    }
  }
  return doc;
}

// Fig.2(a)-style data: deviation of each model variant from the SSFM truth
// against distance.
inline CsvDocument run_delta_snr(const ExperimentSpec& spec) {
  detail::require_distances(spec);
  const auto formats = detail::resolve_formats(spec);
  ResultCache cache(spec.out_dir / "cache");

  CsvDocument doc;
  detail::stamp_metadata(doc, spec, "nli_vs_distance");
  doc.add_metadata("launch_power_dbm", format_number(spec.link.signal.launch_power_dbm));
  doc.set_columns({"distance_km", "format", "model_variant", "snr_model_db", "snr_ssfm_db",
                   "delta_snr_db"});

  const double p_w = dbm_to_w(spec.link.signal.launch_power_dbm);
  for (const auto& [name, c] : formats) {
    const NliCoefficients coeff = spec.coefficients.get(name);
    LinkConfig link = spec.link;
    link.n_spans = spec.distances.back();
    const auto ssfm_snr =
        ssfm_mean_snr_db(c, link, spec.ssfm, spec.seeds, spec.distances, spec.jobs, &cache);
    for (std::size_t i = 0; i < spec.distances.size(); ++i) {
      LinkConfig at = spec.link;
      at.n_spans = spec.distances[i];
      const double km = at.n_spans * spec.link.fiber.span_length_km;
      for (bool include_sn : {false, true}) {
        const double model_db = snr_eff(p_w, at, coeff, include_sn).snr_eff_db;
        doc.add_row(km, name, include_sn ? "ss_plus_sn" : "ss_only", model_db, ssfm_snr[i],
                    model_db - ssfm_snr[i]);
      }
    }
  }
  return doc;
}

// Fig.2(b)-style data: NLI power per format at one distance, for both model
// variants and the SSFM estimate.
inline CsvDocument run_nli_by_format(const ExperimentSpec& spec) {
  detail::require_distances(spec);
  const auto formats = detail::resolve_formats(spec);
  ResultCache cache(spec.out_dir / "cache");
  const int n_spans = spec.distances.back();

  CsvDocument doc;
  detail::stamp_metadata(doc, spec, "nli_by_format");
  doc.add_metadata("distance_km", format_number(n_spans * spec.link.fiber.span_length_km));
  doc.add_metadata("launch_power_dbm", format_number(spec.link.signal.launch_power_dbm));
  doc.set_columns({"format", "bits_per_4d", "nli_model_ss_w", "nli_model_ss_sn_w",
                   "nli_ssfm_w", "nli_ssfm_se_w"});

  const double p_w = dbm_to_w(spec.link.signal.launch_power_dbm);
  for (const auto& [name, c] : formats) {
    const NliCoefficients coeff = spec.coefficients.get(name);
    LinkConfig link = spec.link;
    link.n_spans = n_spans;
    const double ase_span = ase_power_per_span(link);
    const double model_ss = sigma2_ss_w(p_w, n_spans, coeff);
    const double model_sn = sigma2_sn_w(p_w, n_spans, coeff, ase_span);
    const std::vector<int> taps{n_spans};
    const auto est =
        ssfm_noise_terms_cached(c, link, spec.ssfm, spec.seeds, taps, spec.jobs, &cache);
    const double ssfm_nli = est[0].ss_w + est[0].sn_w;
    const double ssfm_se = est[0].ss_se_w + est[0].sn_se_w;
    doc.add_row(name, c.bits(), model_ss, model_ss + model_sn, ssfm_nli, ssfm_se);
  }
  return doc;
}

// Fig.3-style data: NGMI against distance at per-distance optimal launch
// power, plus the reach summary at the configured threshold.
struct ReachOutput {
  CsvDocument curve;
  CsvDocument reach;
};

inline ReachOutput run_reach(const ExperimentSpec& spec) {
  detail::require_distances(spec);
  const auto formats = detail::resolve_formats(spec);

  ReachOutput out;
  detail::stamp_metadata(out.curve, spec, "ngmi_vs_distance");
  out.curve.set_columns(
      {"distance_km", "format", "model_variant", "p_opt_dbm", "snr_eff_db", "ngmi"});
  detail::stamp_metadata(out.reach, spec, "ngmi_vs_distance.reach");
  out.reach.add_metadata("ngmi_threshold", format_number(spec.ngmi_threshold));
  out.reach.set_columns({"format", "reach_ss_only_spans", "reach_ss_plus_sn_spans",
                         "reach_ss_only_km", "reach_ss_plus_sn_km", "relative_difference"});

  for (const auto& [name, c] : formats) {
    const NliCoefficients coeff = spec.coefficients.get(name);
    const int m = c.bits();
    for (bool include_sn : {false, true}) {
      for (int n : spec.distances) {
        LinkConfig link = spec.link;
        link.n_spans = n;
        const OptimalPower p = optimal_launch_power(link, coeff, include_sn);
        const GmiEstimate g = gmi(c, p.snr_eff_db, spec.gmi_samples, spec.gmi_seed);
        out.curve.add_row(n * spec.link.fiber.span_length_km, name,
                          include_sn ? "ss_plus_sn" : "ss_only", p.power_dbm, p.snr_eff_db,
                          ngmi(g, m));
      }
    }

    ReachOptions ropt;
    ropt.max_spans = spec.reach_max_spans;
    ropt.gmi_samples = spec.gmi_samples;
    ropt.gmi_seed = spec.gmi_seed;
    auto provider = [&coeff](int) { return coeff; };
    const int reach_ss = reach_at_ngmi(spec.link, provider, c, spec.ngmi_threshold, false, ropt);
    const int reach_sn = reach_at_ngmi(spec.link, provider, c, spec.ngmi_threshold, true, ropt);
    out.reach.add_row(name, reach_ss, reach_sn, reach_ss * spec.link.fiber.span_length_km,
                      reach_sn * spec.link.fiber.span_length_km,
                      static_cast<double>(reach_ss - reach_sn) / reach_ss);
  }
  return out;
}

// Fig.3 inset-style data: effective SNR against launch power at fixed
// distances, optionally with SSFM reference points.
inline CsvDocument run_snr_vs_power(const ExperimentSpec& spec) {
  detail::require_distances(spec);
  if (spec.powers_dbm.empty()) throw ConfigError("snr_vs_power needs a power grid");
  const auto formats = detail::resolve_formats(spec);
  ResultCache cache(spec.out_dir / "cache");

  CsvDocument doc;
  detail::stamp_metadata(doc, spec, "snr_vs_power");
  doc.set_columns({"distance_km", "format", "power_dbm", "snr_ss_only_db", "snr_ss_plus_sn_db",
                   "snr_ssfm_db"});

  for (const auto& [name, c] : formats) {
    const NliCoefficients coeff = spec.coefficients.get(name);
    for (int n : spec.distances) {
      LinkConfig link = spec.link;
      link.n_spans = n;
      const double km = n * spec.link.fiber.span_length_km;
      const std::vector<int> taps{n};
      for (double p_dbm : spec.powers_dbm) {
        link.signal.launch_power_dbm = p_dbm;
        const double p_w = dbm_to_w(p_dbm);
        const double ss_only = snr_eff(p_w, link, coeff, false).snr_eff_db;
        const double ss_sn = snr_eff(p_w, link, coeff, true).snr_eff_db;
        std::string ssfm_cell;
        if (spec.with_ssfm) {
          const auto snr =
              ssfm_mean_snr_db(c, link, spec.ssfm, spec.seeds, taps, spec.jobs, &cache);
          ssfm_cell = format_number(snr[0]);
        }
        doc.add_row(km, name, p_dbm, ss_only, ss_sn, ssfm_cell);
      }
    }
  }
  return doc;
}

// Companion gnuplot script for a quick look at an experiment CSV. The CSV
// stays the contract; this is a convenience.
inline void write_gnuplot_script(const std::filesystem::path& csv_path, const std::string& title,
                                 const std::string& plot_clause) {
  std::filesystem::path gp = csv_path;
  gp.replace_extension(".gp");
  std::ofstream out(gp);
  out << "set datafile separator ','\n"
      << "set datafile commentschars '#'\n"
      << "set key autotitle columnhead outside\n"
      << "set grid\n"
      << "set title '" << title << "'\n"
      << "csv = '" << csv_path.filename().string() << "'\n"
      << plot_clause << '\n'
      << "pause -1\n";
}

// Dispatch by experiment name; writes CSV files under spec.out_dir and
// returns the written paths.
inline std::vector<std::filesystem::path> run_experiment(const std::string& name,
                                                         const ExperimentSpec& spec,
                                                         bool gnuplot = false) {
  std::filesystem::create_directories(spec.out_dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const CsvDocument& doc, const std::string& filename) {
    const auto path = spec.out_dir / filename;
    doc.write_file(path);
    written.push_back(path);
  };

  if (name == "noise_vs_distance") {
    emit(run_noise_vs_distance(spec), "noise_vs_distance.csv");
    if (gnuplot)
      write_gnuplot_script(written.back(), "noise power vs distance",
                           "set logscale y\nset xlabel 'distance [km]'\nset ylabel 'power [W]'\n"
                           "plot for [c=3:5] csv using 1:c with lines");
  } else if (name == "nli_vs_distance") {
    emit(run_delta_snr(spec), "nli_vs_distance.csv");
    if (gnuplot)
      write_gnuplot_script(written.back(), "model deviation vs distance",
                           "set xlabel 'distance [km]'\nset ylabel 'delta SNR [dB]'\n"
                           "plot csv using 1:6 with linespoints");
  } else if (name == "nli_by_format") {
    emit(run_nli_by_format(spec), "nli_by_format.csv");
    if (gnuplot)
      write_gnuplot_script(written.back(), "NLI power by format",
                           "set style data histogram\nset style fill solid 0.6\nset logscale y\n"
                           "set ylabel 'power [W]'\n"
                           "plot for [c=3:5] csv using c:xtic(1)");
  } else if (name == "ngmi_vs_distance") {
    const auto out = run_reach(spec);
    emit(out.curve, "ngmi_vs_distance.csv");
    if (gnuplot)
      write_gnuplot_script(written.back(), "NGMI vs distance at optimal launch power",
                           "set xlabel 'distance [km]'\nset ylabel 'NGMI'\n"
                           "plot csv using 1:6 with linespoints");
    emit(out.reach, "ngmi_vs_distance_reach.csv");
  } else if (name == "snr_vs_power") {
    emit(run_snr_vs_power(spec), "snr_vs_power.csv");
    if (gnuplot)
      write_gnuplot_script(written.back(), "effective SNR vs launch power",
                           "set xlabel 'launch power [dBm]'\nset ylabel 'SNR_eff [dB]'\n"
                           "plot csv using 3:4 with lines, csv using 3:5 with lines, "
                           "csv using 3:6 with points");
  } else {
    std::string known;
    for (const auto& n : experiment_names()) known += " " + n;
    throw ConfigError("unknown experiment '" + name + "'; known:" + known);
  }
  return written;
}

}  // namespace snr4d
