// Command-line driver: format inspection, analytic SNR prediction, split-step
// simulation, GMI evaluation, NLI-coefficient calibration and batch
// experiments. Exit codes: 0 on success, otherwise a stable per-category code
// printed together with a machine-readable error token on stderr.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "snr4d/calibration.hpp"
#include "snr4d/config.hpp"
#include "snr4d/csv.hpp"
#include "snr4d/experiments.hpp"
#include "snr4d/metrics.hpp"
#include "snr4d/nli_model.hpp"
#include "snr4d/ssfm.hpp"
#include "snr4d/version.hpp"

namespace {

using namespace snr4d;

int exit_code_for(const std::string& category) {
  static const std::map<std::string, int> codes{
      {"config_error", 10},    {"format_error", 11},      {"labeling_error", 12},
      {"numerical_error", 13}, {"estimator_error", 14},   {"calibration_error", 15},
      {"solver_error", 16},    {"reach_error", 17}};
  auto it = codes.find(category);
  return it == codes.end() ? 1 : it->second;
}

std::vector<double> parse_sweep(const std::string& text) {
  // "a:b:step" inclusive sweep
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("sweep '" + text + "' is not of the form a:b:step");
  const double a = detail::parse_double("sweep", text.substr(0, c1));
  const double b = detail::parse_double("sweep", text.substr(c1 + 1, c2 - c1 - 1));
  const double step = detail::parse_double("sweep", text.substr(c2 + 1));
  if (!(step > 0) || b < a) throw ConfigError("sweep '" + text + "' must have a<=b and step>0");
  std::vector<double> out;
  for (double v = a; v <= b + 1e-9 * step; v += step) out.push_back(v);
  return out;
}

std::vector<int> parse_span_list(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    for (double v : parse_sweep(text)) out.push_back(static_cast<int>(std::lround(v)));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(detail::parse_int("distance list", detail::trim(item)));
  if (out.empty()) throw ConfigError("empty distance list");
  return out;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Options shared by every subcommand that reads the link description.
struct LinkOptions {
  std::string config_path;
  std::vector<std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Link config file (INI)");
    cmd->add_option("--set", overrides,
                    "Override a config value, e.g. --set link.n_spans=40 (repeatable)");
  }

  LinkConfig resolve() const {
    LinkConfig link = config_path.empty() ? LinkConfig{} : load_link_config(config_path);
    apply_overrides(link, overrides);
    return link;
  }
};

struct SsfmOptions {
  int n_symbols = 8192;
  int sps = 4;
  double step_km = 0.1;
  std::uint64_t seed = 1;
  int edge_exclusion = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--symbols", n_symbols, "Symbols per run")->capture_default_str();
    cmd->add_option("--sps", sps, "Samples per symbol")->capture_default_str();
    cmd->add_option("--step-km", step_km, "Split-step size in km")->capture_default_str();
    cmd->add_option("--seed", seed, "Master RNG seed")->capture_default_str();
    cmd->add_option("--edge-exclusion", edge_exclusion,
                    "Symbols dropped at each end before metrics")
        ->capture_default_str();
  }

  SsfmConfig resolve() const {
    SsfmConfig cfg;
    cfg.n_symbols = n_symbols;
    cfg.sps = sps;
    cfg.step_km = step_km;
    cfg.rng_seed = seed;
    cfg.edge_exclusion = edge_exclusion;
    return cfg;
  }
};

void write_output(const CsvDocument& doc, const std::string& out_path) {
  if (out_path.empty())
    std::cout << doc.to_string();
  else
    doc.write_file(out_path);
}

// --- format info ------------------------------------------------------------

int cmd_format_info(const std::string& token) {
  const Constellation4D c = resolve_format(token);
  const FormatMoments mo = moments(c);
  std::printf("name:             %s\n", c.name.c_str());
  std::printf("points (M):       %zu\n", c.size());
  std::printf("bits/4D (m):      %d\n", c.bits());
  std::printf("mean 4D energy:   %.12g\n", mean_energy(c));
  std::printf("mu2 (x, y):       %.12g, %.12g\n", mo.mu2_x, mo.mu2_y);
  std::printf("mu4 (x, y):       %.12g, %.12g\n", mo.mu4_x, mo.mu4_y);
  std::printf("cross-corr:       %.12g\n", mo.cross_corr);
  std::printf("kurtosis excess:  %.12g\n", mo.kurtosis_excess);
  std::printf("orthant symmetric: %s\n", is_orthant_symmetric(c) ? "yes" : "no");
  return 0;
}

// --- predict ----------------------------------------------------------------

struct PredictArgs {
  LinkOptions link_opts;
  double eta_ss = -1;
  double epsilon = 0;
  std::string coeff_file;
  std::string format_token;
  std::string include_sn = "on";
  std::optional<double> power_dbm;
  std::string power_sweep;
  int spans = 0;
  std::string out_path;
};

NliCoefficients resolve_coefficients(double eta_ss, double epsilon, const std::string& coeff_file,
                                     const std::string& format_name) {
  if (eta_ss >= 0) {
    NliCoefficients c;
    c.eta_ss_per_w2 = eta_ss;
    c.epsilon = epsilon;
    c.source = CoeffSource::user_supplied;
    validate(c);
    return c;
  }
  if (!coeff_file.empty()) {
    const CoefficientTable table = load_coefficient_file(coeff_file);
    if (!format_name.empty()) return table.get(format_name);
    if (table.entries.size() == 1) return table.entries.begin()->second;
    throw ConfigError("coefficient file has several entries; pick one with --format");
  }
  throw ConfigError("supply --eta-ss (with optional --epsilon) or --coeff-file");
}

int cmd_predict(const PredictArgs& args) {
  LinkConfig link = args.link_opts.resolve();
  if (args.spans > 0) link.n_spans = args.spans;
  validate(link);

  std::string coeff_key = args.format_token;
  if (!coeff_key.empty()) coeff_key = resolve_format(args.format_token).name;
  const NliCoefficients coeff =
      resolve_coefficients(args.eta_ss, args.epsilon, args.coeff_file, coeff_key);
  const bool include_sn = args.include_sn == "on";

  std::vector<double> powers;
  if (!args.power_sweep.empty())
    powers = parse_sweep(args.power_sweep);
  else
    powers.push_back(args.power_dbm.value_or(link.signal.launch_power_dbm));

  CsvDocument doc;
  doc.add_metadata("tool", std::string("snr4d ") + version_string);
  doc.add_metadata("command", "predict");
  doc.add_metadata("config_hash", fnv1a64_hex(canonical_config_string(link)));
  doc.add_metadata("eta_ss_per_w2", format_number(coeff.eta_ss_per_w2));
  doc.add_metadata("epsilon", format_number(coeff.epsilon));
  doc.add_metadata("include_sn", include_sn ? "on" : "off");
  doc.add_metadata("n_spans", std::to_string(link.n_spans));
  doc.set_columns({"power_dbm", "ase_w", "ss_w", "sn_w", "snr_eff_db"});
  for (double p_dbm : powers) {
    const NoiseBudget b = snr_eff(dbm_to_w(p_dbm), link, coeff, include_sn);
    doc.add_row(p_dbm, b.ase_total_w, b.ss_w, b.sn_w, b.snr_eff_db);
  }
  write_output(doc, args.out_path);
  return 0;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  LinkOptions link_opts;
  SsfmOptions ssfm_opts;
  std::string format_token;
  int spans = 0;
  std::optional<double> power_dbm;
  std::string power_sweep;
  int seeds = 8;
  unsigned jobs = 0;
  bool toggle_ase = false;
  bool toggle_nl = false;
  std::string taps;
  std::string out_path;
};

int cmd_simulate(const SimulateArgs& args) {
  LinkConfig link = args.link_opts.resolve();
  if (args.spans > 0) link.n_spans = args.spans;
  validate(link);
  const Constellation4D c = resolve_format(args.format_token);

  SsfmConfig cfg = args.ssfm_opts.resolve();
  cfg.ase_on = !args.toggle_ase;
  cfg.nonlinearity_on = !args.toggle_nl;

  std::vector<int> taps;
  if (!args.taps.empty())
    taps = parse_span_list(args.taps);
  else
    taps.push_back(link.n_spans);
  std::sort(taps.begin(), taps.end());
  taps.erase(std::unique(taps.begin(), taps.end()), taps.end());
  if (taps.back() > link.n_spans) link.n_spans = taps.back();

  std::vector<double> powers;
  if (!args.power_sweep.empty())
    powers = parse_sweep(args.power_sweep);
  else
    powers.push_back(args.power_dbm.value_or(link.signal.launch_power_dbm));

  CsvDocument doc;
  doc.add_metadata("tool", std::string("snr4d ") + version_string);
  doc.add_metadata("command", "simulate");
  doc.add_metadata("format", c.name);
  doc.add_metadata("config_hash",
                   fnv1a64_hex(canonical_config_string(link) + canonical_ssfm_string(cfg)));
  doc.add_metadata("ssfm", config_echo(link, cfg));
  std::string seed_list;
  for (int s = 0; s < args.seeds; ++s)
    seed_list += (s ? "," : "") + std::to_string(cfg.rng_seed + static_cast<std::uint64_t>(s));
  doc.add_metadata("seeds", seed_list);
  doc.set_columns(
      {"power_dbm", "distance_km", "seed", "snr_eff_db", "ase_w", "ss_w", "sn_w"});

  const bool full_decomposition = cfg.ase_on && cfg.nonlinearity_on;
  for (double p_dbm : powers) {
    link.signal.launch_power_dbm = p_dbm;
    if (full_decomposition) {
      const auto est = estimate_noise_terms(c, link, cfg, args.seeds, taps, args.jobs);
      for (const auto& e : est) {
        for (int r = 0; r < e.n_runs; ++r) {
          const auto run_seed = cfg.rng_seed + static_cast<std::uint64_t>(r);
          doc.add_row(p_dbm, e.distance_km, std::to_string(run_seed), e.run_snr_db[r],
                      e.run_ase_w[r], e.run_ss_w[r], e.run_sn_w[r]);
        }
        doc.add_row(p_dbm, e.distance_km, "mean", e.snr_total_db, e.ase_w, e.ss_w, e.sn_w);
        doc.add_row(p_dbm, e.distance_km, "stderr", "", e.ase_se_w, e.ss_se_w, e.sn_se_w);
      }
    } else {
      // single-variant runs: report the directly measured noise term
      std::vector<SsfmRunResult> runs(static_cast<std::size_t>(args.seeds));
      parallel_for(runs.size(), args.jobs, [&](std::size_t s) {
        SsfmConfig rc = cfg;
        rc.rng_seed = cfg.rng_seed + s;
        runs[s] = run_link(c, link, rc, taps);
      });
      const double p_w = dbm_to_w(p_dbm);
      for (std::size_t t = 0; t < taps.size(); ++t) {
        const double km = taps[t] * link.fiber.span_length_km;
        double noise_sum = 0;
        for (const auto& run : runs) {
          const double noise = p_w / db_to_linear(run.taps[t].snr_eff_db);
          noise_sum += noise;
          const std::string ss_cell =
              cfg.nonlinearity_on && !cfg.ase_on ? format_number(noise) : std::string();
          const std::string ase_cell =
              cfg.ase_on && !cfg.nonlinearity_on ? format_number(noise) : std::string();
          doc.add_row(p_dbm, km, std::to_string(run.seed), run.taps[t].snr_eff_db, ase_cell,
                      ss_cell, "");
        }
        const double mean_noise = noise_sum / args.seeds;
        doc.add_row(p_dbm, km, "mean", linear_to_db(p_w / mean_noise),
                    cfg.ase_on && !cfg.nonlinearity_on ? format_number(mean_noise) : std::string(),
                    cfg.nonlinearity_on && !cfg.ase_on ? format_number(mean_noise) : std::string(),
                    "");
      }
    }
  }
  write_output(doc, args.out_path);
  return 0;
}

// --- gmi ----------------------------------------------------------------

struct GmiArgs {
  std::string format_token;
  std::optional<double> snr_db;
  std::string snr_sweep;
  long samples = 100000;
  std::uint64_t seed = 7;
  std::string out_path;
};

int cmd_gmi(const GmiArgs& args) {
  const Constellation4D c = resolve_format(args.format_token);
  std::vector<double> snrs;
  if (!args.snr_sweep.empty())
    snrs = parse_sweep(args.snr_sweep);
  else if (args.snr_db)
    snrs.push_back(*args.snr_db);
  else
    throw ConfigError("supply --snr-db or --snr-sweep");

  CsvDocument doc;
  doc.add_metadata("tool", std::string("snr4d ") + version_string);
  doc.add_metadata("command", "gmi");
  doc.add_metadata("format", c.name);
  doc.add_metadata("samples", std::to_string(args.samples));
  doc.add_metadata("seeds", std::to_string(args.seed));
  doc.set_columns({"snr_db", "gmi", "ngmi", "std_error"});
  const int m = c.bits();
  for (double snr_db : snrs) {
    const GmiEstimate g = gmi(c, snr_db, args.samples, args.seed);
    doc.add_row(snr_db, g.gmi_bits_per_4d, ngmi(g, m), g.std_error);
  }
  write_output(doc, args.out_path);
  return 0;
}

// --- calibrate ----------------------------------------------------------

struct CalibrateArgs {
  LinkOptions link_opts;
  SsfmOptions ssfm_opts;
  std::string format_token;
  std::string distances = "1,2,5,10,20,40";
  double power_dbm = -2.0;
  int seeds = 4;
  unsigned jobs = 0;
  std::string out_path;
};

int cmd_calibrate(const CalibrateArgs& args) {
  const LinkConfig link = args.link_opts.resolve();
  const Constellation4D c = resolve_format(args.format_token);
  const SsfmConfig cfg = args.ssfm_opts.resolve();
  const std::vector<int> distances = parse_span_list(args.distances);

  CalibrationOptions opt;
  opt.p_dbm = args.power_dbm;
  opt.n_runs = args.seeds;
  const CalibrationResult r = calibrate_eta(c, link, distances, cfg, opt, args.jobs);

  std::fprintf(stderr, "calibrated %s: eta_ss = %.6g /W^2, epsilon = %.4f (R^2 = %.6f)\n",
               c.name.c_str(), r.coeff.eta_ss_per_w2, r.coeff.epsilon, r.r_squared);
  for (std::size_t i = 0; i < r.spans.size(); ++i)
    std::fprintf(stderr, "  N=%4d  sigma2_ss = %.6e W  residual = %+.3f dB\n", r.spans[i],
                 r.sigma_ss_w[i], r.residuals_db[i]);

  const nlohmann::json j = calibration_to_json(r, c.name, config_echo(link, cfg));
  if (args.out_path.empty()) {
    std::cout << j.dump(1) << '\n';
  } else {
    std::ofstream out(args.out_path);
    if (!out) throw ConfigError("cannot write " + args.out_path);
    out << j.dump(1) << '\n';
  }
  return 0;
}

// --- experiment ---------------------------------------------------------

struct ExperimentArgs {
  LinkOptions link_opts;
  SsfmOptions ssfm_opts;
  std::string name;
  std::string formats;
  std::string coeff_file;
  double eta_ss = -1;
  double epsilon = 0;
  std::string distances;
  std::string powers;
  int seeds = 8;
  unsigned jobs = 0;
  double threshold = 0.8;
  long gmi_samples = 100000;
  bool with_ssfm = false;
  bool gnuplot = false;
  std::string out_dir = "results";
};

int cmd_experiment(const ExperimentArgs& args) {
  ExperimentSpec spec;
  spec.link = args.link_opts.resolve();
  spec.ssfm = args.ssfm_opts.resolve();
  spec.formats = split_csv(args.formats);
  spec.seeds = args.seeds;
  spec.jobs = args.jobs;
  spec.ngmi_threshold = args.threshold;
  spec.gmi_samples = args.gmi_samples;
  spec.with_ssfm = args.with_ssfm;
  spec.out_dir = args.out_dir;

  if (!args.distances.empty()) {
    spec.distances = parse_span_list(args.distances);
  } else if (args.name == "noise_vs_distance") {
    for (int n = 1; n <= 120; ++n) spec.distances.push_back(n);
  } else if (args.name == "nli_vs_distance") {
    spec.distances = {25, 50, 75, 100};
  } else if (args.name == "nli_by_format") {
    spec.distances = {100};
  } else if (args.name == "ngmi_vs_distance") {
    for (int n = 10; n <= 150; n += 10) spec.distances.push_back(n);
  } else {
    spec.distances = {spec.link.n_spans};
  }
  if (!args.powers.empty())
    spec.powers_dbm = parse_sweep(args.powers);
  else
    spec.powers_dbm = parse_sweep("-4:4:0.5");

  if (!args.coeff_file.empty()) {
    spec.coefficients = load_coefficient_file(args.coeff_file);
  } else if (args.eta_ss >= 0) {
    NliCoefficients c;
    c.eta_ss_per_w2 = args.eta_ss;
    c.epsilon = args.epsilon;
    validate(c);
    for (const auto& token : spec.formats) spec.coefficients.entries[resolve_format(token).name] = c;
  }

  const auto written = run_experiment(args.name, spec, args.gnuplot);
  for (const auto& path : written) std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective-SNR prediction and split-step validation for dual-polarization 4D "
               "optical links"};
  app.set_version_flag("--version", std::string("snr4d ") + snr4d::version_string);
  app.require_subcommand(1);

  // format info
  auto* format_cmd = app.add_subcommand("format", "Inspect modulation formats");
  format_cmd->require_subcommand(1);
  auto* info_cmd = format_cmd->add_subcommand("info", "Print size, energy and moments");
  std::string info_token;
  info_cmd->add_option("format", info_token, "pm-qam:N or a constellation file")->required();

  // predict
  PredictArgs predict;
  auto* predict_cmd =
      app.add_subcommand("predict", "Analytic effective-SNR budget from Eq.-style closed forms");
  predict.link_opts.attach(predict_cmd);
  predict_cmd->add_option("--eta-ss", predict.eta_ss, "Per-span S-S NLI coefficient (1/W^2)");
  predict_cmd->add_option("--epsilon", predict.epsilon, "Coherence factor");
  predict_cmd->add_option("--coeff-file", predict.coeff_file, "Calibrated coefficient JSON");
  predict_cmd->add_option("--format", predict.format_token, "Format key in the coefficient file");
  predict_cmd->add_option("--include-sn", predict.include_sn, "Include signal-ASE NLI (on|off)")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  predict_cmd->add_option("--power-dbm", predict.power_dbm, "Single launch power");
  predict_cmd->add_option("--power-sweep", predict.power_sweep, "Launch power sweep a:b:step");
  predict_cmd->add_option("--spans", predict.spans, "Override span count");
  predict_cmd->add_option("--out", predict.out_path, "Output CSV path (default stdout)");

  // simulate
  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Split-step Manakov simulation");
  simulate.link_opts.attach(simulate_cmd);
  simulate.ssfm_opts.attach(simulate_cmd);
  simulate_cmd->add_option("--format", simulate.format_token, "pm-qam:N or a constellation file")
      ->required();
  simulate_cmd->add_option("--spans", simulate.spans, "Override span count");
  simulate_cmd->add_option("--power-dbm", simulate.power_dbm, "Single launch power");
  simulate_cmd->add_option("--power-sweep", simulate.power_sweep, "Launch power sweep a:b:step");
  simulate_cmd->add_option("--seeds", simulate.seeds, "Number of seeded runs")
      ->capture_default_str();
  simulate_cmd->add_option("--jobs", simulate.jobs, "Worker threads (0 = hardware)");
  simulate_cmd->add_flag("--toggle-ase", simulate.toggle_ase, "Switch amplifier noise off");
  simulate_cmd->add_flag("--toggle-nl", simulate.toggle_nl, "Switch the Kerr nonlinearity off");
  simulate_cmd->add_option("--taps", simulate.taps,
                           "Receiver tap distances in spans (list or a:b:step)");
  simulate_cmd->add_option("--out", simulate.out_path, "Output CSV path (default stdout)");

  // gmi
  GmiArgs gmi_args;
  auto* gmi_cmd = app.add_subcommand("gmi", "Monte-Carlo GMI/NGMI over the 4D AWGN channel");
  gmi_cmd->add_option("--format", gmi_args.format_token, "pm-qam:N or a constellation file")
      ->required();
  gmi_cmd->add_option("--snr-db", gmi_args.snr_db, "Single SNR");
  gmi_cmd->add_option("--snr-sweep", gmi_args.snr_sweep, "SNR sweep a:b:step");
  gmi_cmd->add_option("--samples", gmi_args.samples, "Monte-Carlo samples")->capture_default_str();
  gmi_cmd->add_option("--seed", gmi_args.seed, "RNG seed")->capture_default_str();
  gmi_cmd->add_option("--out", gmi_args.out_path, "Output CSV path (default stdout)");

  // calibrate
  CalibrateArgs calibrate;
  auto* calibrate_cmd = app.add_subcommand(
      "calibrate", "Fit {eta_ss, epsilon} for a format from noiseless split-step runs");
  calibrate.link_opts.attach(calibrate_cmd);
  calibrate.ssfm_opts.attach(calibrate_cmd);
  calibrate_cmd->add_option("--format", calibrate.format_token, "pm-qam:N or a constellation file")
      ->required();
  calibrate_cmd->add_option("--distances", calibrate.distances, "Span counts for the fit")
      ->capture_default_str();
  calibrate_cmd->add_option("--power-dbm", calibrate.power_dbm, "Pseudo-linear launch power")
      ->capture_default_str();
  calibrate_cmd->add_option("--seeds", calibrate.seeds, "Runs per distance")
      ->capture_default_str();
  calibrate_cmd->add_option("--jobs", calibrate.jobs, "Worker threads (0 = hardware)");
  calibrate_cmd->add_option("--out", calibrate.out_path, "Coefficient JSON path (default stdout)");

  // experiment
  ExperimentArgs experiment;
  auto* experiment_cmd = app.add_subcommand("experiment", "Batch experiment drivers");
  experiment_cmd->add_option("name", experiment.name, "Experiment name")
      ->required()
      ->check(CLI::IsMember(snr4d::experiment_names()));
  experiment.link_opts.attach(experiment_cmd);
  experiment.ssfm_opts.attach(experiment_cmd);
  experiment_cmd->add_option("--formats", experiment.formats, "Comma-separated format tokens")
      ->required();
  experiment_cmd->add_option("--coeff-file", experiment.coeff_file, "Calibrated coefficient JSON");
  experiment_cmd->add_option("--eta-ss", experiment.eta_ss,
                             "Shared eta_ss for all formats (instead of --coeff-file)");
  experiment_cmd->add_option("--epsilon", experiment.epsilon, "Shared coherence factor");
  experiment_cmd->add_option("--distances", experiment.distances, "Spans (list or a:b:step)");
  experiment_cmd->add_option("--powers", experiment.powers, "Launch power sweep a:b:step");
  experiment_cmd->add_option("--seeds", experiment.seeds, "Seeds for SSFM-backed points")
      ->capture_default_str();
  experiment_cmd->add_option("--jobs", experiment.jobs, "Worker threads (0 = hardware)");
  experiment_cmd->add_option("--threshold", experiment.threshold, "NGMI threshold for reach")
      ->capture_default_str();
  experiment_cmd->add_option("--gmi-samples", experiment.gmi_samples, "GMI Monte-Carlo samples")
      ->capture_default_str();
  experiment_cmd->add_flag("--with-ssfm", experiment.with_ssfm,
                           "Add SSFM reference points to snr_vs_power");
  experiment_cmd->add_flag("--gnuplot", experiment.gnuplot,
                           "Also write a gnuplot script next to each CSV");
  experiment_cmd->add_option("--out", experiment.out_dir, "Output directory")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (info_cmd->parsed()) return cmd_format_info(info_token);
    if (predict_cmd->parsed()) return cmd_predict(predict);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate);
    if (gmi_cmd->parsed()) return cmd_gmi(gmi_args);
    if (calibrate_cmd->parsed()) return cmd_calibrate(calibrate);
    if (experiment_cmd->parsed()) return cmd_experiment(experiment);
  } catch (const snr4d::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 70;
  }
  return 0;
}
