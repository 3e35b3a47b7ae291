#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "snr4d/constellation.hpp"
#include "snr4d/errors.hpp"
#include "snr4d/link.hpp"
#include "snr4d/metrics.hpp"
#include "snr4d/util.hpp"

namespace snr4d {

enum class CoeffSource { user_supplied, ssfm_calibrated };

// One (format, link) pair is characterized by the per-span signal-signal NLI
// coefficient eta_ss and the coherence factor epsilon that governs how NLI
// accumulates across spans.
struct NliCoefficients {
  double eta_ss_per_w2 = 0.0;
  double epsilon = 0.0;
  CoeffSource source = CoeffSource::user_supplied;
};

inline void validate(const NliCoefficients& c) {
  if (!(c.eta_ss_per_w2 >= 0) || !std::isfinite(c.eta_ss_per_w2))
    throw ConfigError("eta_ss must be finite and >= 0");
  if (!std::isfinite(c.epsilon) || c.epsilon < -0.5 || c.epsilon > 1.0)
    throw ConfigError("epsilon out of the plausible [-0.5, 1] range");
}

// Signal-ASE NLI accumulation coefficient,
// xi = N^(2+eps)/(2+eps) + N^(1+eps)/2,
// the closed-form stand-in for sum_{n=1..N} n^(1+eps).
inline double xi(int n_spans, double epsilon) {
  const double n = static_cast<double>(n_spans);
  return std::pow(n, 2.0 + epsilon) / (2.0 + epsilon) + std::pow(n, 1.0 + epsilon) / 2.0;
}

// sigma^2_ss = eta_ss * N^(1+eps) * P^3
inline double sigma2_ss_w(double p_w, int n_spans, const NliCoefficients& coeff) {
  return coeff.eta_ss_per_w2 * std::pow(static_cast<double>(n_spans), 1.0 + coeff.epsilon) *
         p_w * p_w * p_w;
}

// sigma^2_sn = 3 * xi * eta_ss * sigma^2_ASE * P^2  (eta_sn = 3 eta_ss for a
// flat transmitted spectrum in the same bandwidth as the noise)
inline double sigma2_sn_w(double p_w, int n_spans, const NliCoefficients& coeff,
                          double sigma2_ase_w) {
  return 3.0 * xi(n_spans, coeff.epsilon) * coeff.eta_ss_per_w2 * sigma2_ase_w * p_w * p_w;
}

// Recovers the one-span coefficient from an accumulated eta_ss^(N) value.
inline double eta_from_accumulated(double eta_ss_acc, int n_spans, double epsilon) {
  return eta_ss_acc / std::pow(static_cast<double>(n_spans), 1.0 + epsilon);
}

// The three noise powers and the resulting effective SNR at one operating
// point: SNR_eff = P / (N_s sigma^2_ASE + sigma^2_ss + sigma^2_sn).
struct NoiseBudget {
  double p_w = 0;
  double ase_total_w = 0;
  double ss_w = 0;
  double sn_w = 0;
  double snr_eff_db = 0;

  double total_noise_w() const { return ase_total_w + ss_w + sn_w; }
  double snr_eff_linear() const { return p_w / total_noise_w(); }
};

inline NoiseBudget snr_eff(double p_w, const LinkConfig& link, const NliCoefficients& coeff,
                           bool include_sn) {
  NoiseBudget b;
  b.p_w = p_w;
  const double ase_span = ase_power_per_span(link);
  b.ase_total_w = link.n_spans * ase_span;
  b.ss_w = sigma2_ss_w(p_w, link.n_spans, coeff);
  b.sn_w = include_sn ? sigma2_sn_w(p_w, link.n_spans, coeff, ase_span) : 0.0;
  b.snr_eff_db = linear_to_db(b.p_w / b.total_noise_w());
  return b;
}

struct PowerGrid {
  double lo_dbm = -4.0;
  double hi_dbm = 4.0;
  double step_db = 0.1;
  double refine_tol_db = 0.01;
};

struct OptimalPower {
  double power_dbm = 0;
  double snr_eff_db = 0;
  bool at_grid_edge = false;  // set when SNR is monotone up to a bound (e.g. gamma = 0)
};

// Grid search refined by golden-section. With eta_ss = 0 the SNR is monotone
// in P; the upper grid edge is returned and flagged.
inline OptimalPower optimal_launch_power(const LinkConfig& link, const NliCoefficients& coeff,
                                         bool include_sn, const PowerGrid& grid = {}) {
  auto snr_at = [&](double p_dbm) {
    return snr_eff(dbm_to_w(p_dbm), link, coeff, include_sn).snr_eff_db;
  };

  const int n_steps = static_cast<int>(std::floor((grid.hi_dbm - grid.lo_dbm) / grid.step_db + 0.5));
  int best_i = 0;
  double best_snr = -1e300;
  for (int i = 0; i <= n_steps; ++i) {
    const double p = grid.lo_dbm + i * grid.step_db;
    const double s = snr_at(p);
    if (s > best_snr) {
      best_snr = s;
      best_i = i;
    }
  }

  OptimalPower result;
  if (best_i == 0 || best_i == n_steps) {
    result.power_dbm = grid.lo_dbm + best_i * grid.step_db;
    result.snr_eff_db = best_snr;
    result.at_grid_edge = true;
    return result;
  }

  // Golden-section on the bracketing interval.
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = grid.lo_dbm + (best_i - 1) * grid.step_db;
  double b = grid.lo_dbm + (best_i + 1) * grid.step_db;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = snr_at(c), fd = snr_at(d);
  while (b - a > grid.refine_tol_db) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = snr_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = snr_at(d);
    }
  }
  result.power_dbm = 0.5 * (a + b);
  result.snr_eff_db = snr_at(result.power_dbm);
  result.at_grid_edge = false;
  return result;
}

// Extracts {eta_ss, epsilon} from sigma^2_ss measurements at several span
// counts by a log-log least-squares fit: slope = 1 + epsilon, intercept =
// ln(eta_ss P^3). Kept separate from the simulator so it can be fed synthetic
// power-law data directly.
struct CalibrationResult {
  NliCoefficients coeff;
  double slope = 0;  // 1 + epsilon
  double r_squared = 0;
  std::vector<int> spans;
  std::vector<double> sigma_ss_w;
  std::vector<double> residuals_db;
  double p_w = 0;
};

inline CalibrationResult calibrate_from_measurements(std::span<const int> spans,
                                                     std::span<const double> sigma_ss_w,
                                                     double p_w) {
  if (spans.size() != sigma_ss_w.size() || spans.size() < 2)
    throw CalibrationError("need measurements at >= 2 distinct span counts");
  std::vector<double> xs, ys;
  xs.reserve(spans.size());
  ys.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i] < 1) throw CalibrationError("span counts must be >= 1");
    if (!(sigma_ss_w[i] > 0)) throw CalibrationError("sigma2_ss measurements must be > 0");
    xs.push_back(std::log(static_cast<double>(spans[i])));
    ys.push_back(std::log(sigma_ss_w[i]));
  }
  std::vector<int> distinct(spans.begin(), spans.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw CalibrationError("need >= 2 distinct span counts");

  const LinearFit fit = fit_linear(xs, ys);

  CalibrationResult r;
  r.slope = fit.slope;
  r.r_squared = fit.r_squared;
  r.coeff.epsilon = fit.slope - 1.0;
  r.coeff.eta_ss_per_w2 = std::exp(fit.intercept) / (p_w * p_w * p_w);
  r.coeff.source = CoeffSource::ssfm_calibrated;
  r.spans.assign(spans.begin(), spans.end());
  r.sigma_ss_w.assign(sigma_ss_w.begin(), sigma_ss_w.end());
  r.p_w = p_w;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const double predicted = std::exp(fit.intercept + fit.slope * xs[i]);
    r.residuals_db.push_back(linear_to_db(sigma_ss_w[i] / predicted));
  }
  if (r.r_squared < 0.99)
    throw CalibrationError("power-law fit R^2 = " + std::to_string(r.r_squared) +
                           " below 0.99; measurements do not follow eta * N^(1+eps)");
  validate(r.coeff);
  return r;
}

struct ReachOptions {
  int max_spans = 500;
  double gmi_tol_db = 0.02;
  long gmi_samples = 100000;
  std::uint64_t gmi_seed = 7;
  PowerGrid power_grid{};
};

// Largest span count whose effective SNR at the per-distance optimal launch
// power still meets the NGMI threshold. GMI is monotone in SNR, so the NGMI
// condition is equivalent to snr_eff >= required_snr(threshold * m); solving
// for the SNR once removes Monte-Carlo jitter from the span scan.
inline int reach_at_ngmi(const LinkConfig& link_template,
                         const std::function<NliCoefficients(int)>& coeff_provider,
                         const Constellation4D& c, double ngmi_threshold, bool include_sn,
                         const ReachOptions& opt = {}) {
  if (ngmi_threshold <= 0) return opt.max_spans;
  if (ngmi_threshold >= 1) throw ReachError("NGMI threshold must be below 1");

  const int m = c.bits();
  double snr_req;
  try {
    SnrSolveOptions solve;
    solve.n_samples = opt.gmi_samples;
    solve.seed = opt.gmi_seed;
    snr_req = required_snr(c, ngmi_threshold * m, opt.gmi_tol_db, solve);
  } catch (const SolverError& e) {
    throw ReachError(std::string("cannot solve required SNR: ") + e.what());
  }

  auto snr_at = [&](int n) {
    LinkConfig link = link_template;
    link.n_spans = n;
    return optimal_launch_power(link, coeff_provider(n), include_sn, opt.power_grid).snr_eff_db;
  };

  if (snr_at(1) < snr_req)
    throw ReachError("NGMI threshold unreachable even at a single span");
  if (snr_at(opt.max_spans) >= snr_req) return opt.max_spans;

  // SNR at optimal power is non-increasing in span count: binary search.
  int lo = 1, hi = opt.max_spans;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (snr_at(mid) >= snr_req)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace snr4d
