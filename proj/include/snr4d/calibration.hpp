#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "snr4d/errors.hpp"
#include "snr4d/nli_model.hpp"
#include "snr4d/parallel.hpp"
#include "snr4d/ssfm.hpp"

namespace snr4d {

struct NoiseTermEstimate {
  int n_spans = 0;
  double distance_km = 0;
  // Means over runs. sn is the power-level subtraction total - ss - ase with
  // a zero-mean control variate removed: the sampling covariance between the
  // NLI error (shared with run B) and the linear ASE error (shared with
  // run C) dominates the raw subtraction's variance, and with common
  // randomness it can be estimated per run and cancelled without bias.
  double ase_w = 0, ss_w = 0, sn_w = 0;
  double ase_se_w = 0, ss_se_w = 0, sn_se_w = 0;
  // Raw subtraction without the control variate, kept as a diagnostic; it
  // may go slightly negative from Monte-Carlo noise, which is reported, not
  // clamped.
  double sn_power_w = 0, sn_power_se_w = 0;
  double total_w = 0, total_se_w = 0;
  double snr_total_db = 0;  // mean effective SNR of the full (A) runs
  int n_runs = 0;
  // per-run values, indexed by run (seed = cfg.rng_seed + run)
  std::vector<double> run_total_w, run_ss_w, run_ase_w, run_sn_w, run_snr_db;
};

namespace detail {

struct MeanSe {
  double mean = 0, se = 0;
};

inline MeanSe mean_and_se(std::span<const double> v) {
  MeanSe r;
  const auto n = static_cast<double>(v.size());
  for (double x : v) r.mean += x;
  r.mean /= n;
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

}  // namespace detail

// Decomposes the received error power into {ASE, signal-signal NLI,
// signal-ASE NLI} with three runs per seed:
//   A: ASE on,  nonlinearity on   -> total
//   B: ASE off, nonlinearity on   -> sigma2_ss
//   C: ASE on,  nonlinearity off  -> sigma2_ASE
// sn = A - B - C at the power level. All three runs share the seed, so the
// NLI error of A reappears in B and the linear ASE error in C; their sample
// cross term is what limits the raw subtraction, and it is estimated and
// removed per run. The noise embedded in A is the run-C error up to a
// rotation (the signal's mean Kerr phase acts on the co-propagating noise
// but not on run C), so the alignment factor is fitted before correlating.
inline std::vector<NoiseTermEstimate> estimate_noise_terms(const Constellation4D& c,
                                                           const LinkConfig& link,
                                                           const SsfmConfig& cfg, int n_runs,
                                                           std::span<const int> tap_spans = {},
                                                           unsigned jobs = 0) {
  if (n_runs < 1) throw EstimatorError("n_runs must be >= 1");
  validate(link);

  std::vector<int> taps(tap_spans.begin(), tap_spans.end());
  if (taps.empty()) taps.push_back(link.n_spans);
  std::sort(taps.begin(), taps.end());
  taps.erase(std::unique(taps.begin(), taps.end()), taps.end());

  // variant 0 = A (as configured), 1 = B (no ASE), 2 = C (no nonlinearity)
  std::vector<SsfmRunResult> runs(static_cast<std::size_t>(n_runs) * 3);
  parallel_for(runs.size(), jobs, [&](std::size_t job) {
    const int run = static_cast<int>(job / 3);
    const int variant = static_cast<int>(job % 3);
    SsfmConfig rc = cfg;
    rc.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(run);
    if (variant == 1) rc.ase_on = false;
    if (variant == 2) rc.nonlinearity_on = false;
    runs[job] = run_link(c, link, rc, taps);
  });

  std::vector<std::complex<double>> sym_x, sym_y;
  const double p_w = dbm_to_w(link.signal.launch_power_dbm);
  const auto first = static_cast<std::size_t>(cfg.edge_exclusion);
  const auto last = static_cast<std::size_t>(cfg.n_symbols - cfg.edge_exclusion);

  std::vector<NoiseTermEstimate> result;
  for (std::size_t t = 0; t < taps.size(); ++t) {
    std::vector<double> ss(static_cast<std::size_t>(n_runs)), ase(ss), total(ss), sn_cv(ss),
        sn_power(ss);
    for (int run = 0; run < n_runs; ++run) {
      draw_symbols(c, cfg.n_symbols, cfg.rng_seed + static_cast<std::uint64_t>(run), sym_x, sym_y);
      const auto& ta = runs[static_cast<std::size_t>(run) * 3 + 0].taps[t];
      const auto& tb = runs[static_cast<std::size_t>(run) * 3 + 1].taps[t];
      const auto& tc = runs[static_cast<std::size_t>(run) * 3 + 2].taps[t];
      double sig = 0, ea = 0, eb = 0, ec = 0;
      std::complex<double> s_ac{0, 0}, s_bc{0, 0};
      for (std::size_t i = first; i < last; ++i) {
        const auto xx = sym_x[i];
        const auto xy = sym_y[i];
        const auto eax = ta.sym_x[i] - xx, eay = ta.sym_y[i] - xy;
        const auto ebx = tb.sym_x[i] - xx, eby = tb.sym_y[i] - xy;
        const auto ecx = tc.sym_x[i] - xx, ecy = tc.sym_y[i] - xy;
        sig += std::norm(xx) + std::norm(xy);
        ea += std::norm(eax) + std::norm(eay);
        eb += std::norm(ebx) + std::norm(eby);
        ec += std::norm(ecx) + std::norm(ecy);
        s_ac += eax * std::conj(ecx) + eay * std::conj(ecy);
        s_bc += ebx * std::conj(ecx) + eby * std::conj(ecy);
      }
      // alignment of run C's noise to the noise embedded in run A, then the
      // cross term 2 Re<e_B, rot e_C> that contaminates ea - eb - ec
      const std::complex<double> rot = ec > 0 ? (s_ac - s_bc) / ec : std::complex<double>{0, 0};
      const double cross = 2.0 * std::real(std::conj(rot) * s_bc);
      const std::size_t r = static_cast<std::size_t>(run);
      total[r] = p_w * ea / sig;
      ss[r] = p_w * eb / sig;
      ase[r] = p_w * ec / sig;
      sn_power[r] = total[r] - ss[r] - ase[r];
      sn_cv[r] = sn_power[r] - p_w * cross / sig;
    }

    NoiseTermEstimate e;
    e.n_spans = taps[t];
    e.distance_km = taps[t] * link.fiber.span_length_km;
    e.n_runs = n_runs;
    const auto m_total = detail::mean_and_se(total);
    const auto m_ss = detail::mean_and_se(ss);
    const auto m_ase = detail::mean_and_se(ase);
    const auto m_snf = detail::mean_and_se(sn_cv);
    const auto m_snp = detail::mean_and_se(sn_power);
    e.total_w = m_total.mean;
    e.total_se_w = m_total.se;
    e.ss_w = m_ss.mean;
    e.ss_se_w = m_ss.se;
    e.ase_w = m_ase.mean;
    e.ase_se_w = m_ase.se;
    e.sn_w = m_snf.mean;
    e.sn_se_w = m_snf.se;
    e.sn_power_w = m_snp.mean;
    e.sn_power_se_w = m_snp.se;
    e.snr_total_db = linear_to_db(p_w / m_total.mean);
    e.run_total_w = total;
    e.run_ss_w = ss;
    e.run_ase_w = ase;
    e.run_sn_w = sn_cv;
    for (double tw : total) e.run_snr_db.push_back(linear_to_db(p_w / tw));
    // The -3 sigma model-violation gate needs a standard error that is
    // itself trustworthy; below ~6 runs a 3-sigma excursion of the
    // subtraction estimate is routine.
    if (n_runs >= 6 && m_snf.se > 0 && m_snf.mean < -3.0 * m_snf.se)
      throw EstimatorError("signal-ASE estimate below -3 standard errors at " +
                           std::to_string(taps[t]) + " spans; model violation or insufficient averaging");
    result.push_back(e);
  }
  return result;
}

struct CalibrationOptions {
  double p_dbm = -2.0;  // pseudo-linear operating point for the fit
  int n_runs = 4;
};

// Calibrates {eta_ss, epsilon} for one (format, link) pair from noiseless
// runs: sigma2_ss measured at each span count, then a log-log fit with
// slope 1+epsilon and intercept log(eta_ss P^3).
inline CalibrationResult calibrate_eta(const Constellation4D& c, LinkConfig link,
                                       std::span<const int> distances, const SsfmConfig& cfg,
                                       const CalibrationOptions& opt = {}, unsigned jobs = 0) {
  std::vector<int> taps(distances.begin(), distances.end());
  std::sort(taps.begin(), taps.end());
  taps.erase(std::unique(taps.begin(), taps.end()), taps.end());
  if (taps.size() < 2) throw CalibrationError("need >= 2 distinct calibration distances");
  if (taps.front() < 1) throw CalibrationError("calibration distances must be >= 1 span");
  if (opt.n_runs < 1) throw CalibrationError("n_runs must be >= 1");

  link.signal.launch_power_dbm = opt.p_dbm;
  link.n_spans = taps.back();
  validate(link);

  SsfmConfig run_cfg = cfg;
  run_cfg.ase_on = false;
  run_cfg.nonlinearity_on = true;

  std::vector<SsfmRunResult> runs(static_cast<std::size_t>(opt.n_runs));
  parallel_for(runs.size(), jobs, [&](std::size_t r) {
    SsfmConfig rc = run_cfg;
    rc.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(r);
    runs[r] = run_link(c, link, rc, taps);
  });

  const double p_w = dbm_to_w(opt.p_dbm);
  std::vector<double> sigma_ss(taps.size(), 0.0);
  for (const auto& run : runs)
    for (std::size_t t = 0; t < taps.size(); ++t)
      sigma_ss[t] += p_w / db_to_linear(run.taps[t].snr_eff_db);
  for (double& s : sigma_ss) s /= static_cast<double>(opt.n_runs);

  return calibrate_from_measurements(taps, sigma_ss, p_w);
}

}  // namespace snr4d
