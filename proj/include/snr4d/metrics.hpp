#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "snr4d/constellation.hpp"
#include "snr4d/errors.hpp"
#include "snr4d/rng.hpp"
#include "snr4d/util.hpp"

namespace snr4d {

struct GmiEstimate {
  double gmi_bits_per_4d = 0;
  double std_error = 0;
  long n_samples = 0;
  double snr_db = 0;
};

namespace detail {

// Monte-Carlo GMI over the 4D AWGN channel with exact (sum-exp) bit LLRs.
// SNR is total 4D symbol energy over total noise energy, so for a unit-energy
// constellation the per-real-dimension noise variance is 1/(4*SNR).
// `indices` selects transmitted symbols; `normals` holds 4 standard normal
// deviates per sample. Accumulation is sequential in sample order.
inline GmiEstimate gmi_with_draws(const Constellation4D& c, double snr_db,
                                  std::span<const std::uint32_t> indices,
                                  std::span<const double> normals) {
  const std::size_t m_points = c.size();
  const int m = c.bits();
  const double snr = db_to_linear(snr_db);
  const double sigma2 = 1.0 / (4.0 * snr);
  const double sigma = std::sqrt(sigma2);
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma2);
  const long n = static_cast<long>(indices.size());

  std::vector<double> metric(m_points);
  std::vector<double> sum_bit0(static_cast<std::size_t>(m));
  std::vector<double> sum_bit1(static_cast<std::size_t>(m));

  double acc = 0, acc2 = 0;
  const double ln2 = std::log(2.0);
  for (long s = 0; s < n; ++s) {
    const std::uint32_t tx = indices[static_cast<std::size_t>(s)];
    const auto& x = c.points[tx];
    double y[4];
    for (int d = 0; d < 4; ++d)
      y[d] = x[d] + sigma * normals[static_cast<std::size_t>(4 * s + d)];

    double a_max = -1e300;
    for (std::size_t j = 0; j < m_points; ++j) {
      const auto& p = c.points[j];
      const double d0 = y[0] - p[0], d1 = y[1] - p[1], d2 = y[2] - p[2], d3 = y[3] - p[3];
      const double a = -(d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3) * inv_two_sigma2;
      metric[j] = a;
      if (a > a_max) a_max = a;
    }

    double total = 0;
    std::fill(sum_bit0.begin(), sum_bit0.end(), 0.0);
    std::fill(sum_bit1.begin(), sum_bit1.end(), 0.0);
    for (std::size_t j = 0; j < m_points; ++j) {
      const double w = std::exp(metric[j] - a_max);
      total += w;
      const std::uint32_t label = c.labels[j];
      for (int k = 0; k < m; ++k) {
        if ((label >> k) & 1u)
          sum_bit1[static_cast<std::size_t>(k)] += w;
        else
          sum_bit0[static_cast<std::size_t>(k)] += w;
      }
    }

    const std::uint32_t tx_label = c.labels[tx];
    double info = 0;
    for (int k = 0; k < m; ++k) {
      const double matched = ((tx_label >> k) & 1u) ? sum_bit1[static_cast<std::size_t>(k)]
                                                    : sum_bit0[static_cast<std::size_t>(k)];
      info += std::log(total / matched);
    }
    info /= ln2;
    acc += info;
    acc2 += info * info;
  }

  const double mean = acc / static_cast<double>(n);
  const double var = std::max(0.0, acc2 / static_cast<double>(n) - mean * mean);
  GmiEstimate est;
  // the true quantity lives in [0, m]; keep the estimate there when
  // Monte-Carlo noise pushes it past a boundary
  est.gmi_bits_per_4d = std::clamp(static_cast<double>(m) - mean, 0.0, static_cast<double>(m));
  est.std_error = std::sqrt(var / static_cast<double>(n));
  est.n_samples = n;
  est.snr_db = snr_db;
  return est;
}

inline void draw_gmi_samples(const Constellation4D& c, long n_samples, std::uint64_t seed,
                             std::vector<std::uint32_t>& indices, std::vector<double>& normals) {
  auto gen = make_generator(seed, RngStreamId::metrics);
  std::normal_distribution<double> normal(0.0, 1.0);
  indices.resize(static_cast<std::size_t>(n_samples));
  normals.resize(static_cast<std::size_t>(4 * n_samples));
  const auto m_points = static_cast<std::uint32_t>(c.size());
  for (auto& idx : indices) idx = uniform_index(gen, m_points);
  for (auto& z : normals) z = normal(gen);
}

}  // namespace detail

inline GmiEstimate gmi(const Constellation4D& c, double snr_db, long n_samples,
                       std::uint64_t seed) {
  if (n_samples < 10000) throw SolverError("gmi needs at least 1e4 samples");
  std::vector<std::uint32_t> indices;
  std::vector<double> normals;
  detail::draw_gmi_samples(c, n_samples, seed, indices, normals);
  return detail::gmi_with_draws(c, snr_db, indices, normals);
}

// NGMI = 1 - (m - GMI)/m; equals GMI/m under uniform inputs, so the
// GMI = 0.8m operating point sits exactly at NGMI = 0.8.
inline double ngmi(const GmiEstimate& g, int m) {
  return 1.0 - (static_cast<double>(m) - g.gmi_bits_per_4d) / static_cast<double>(m);
}

struct SnrSolveOptions {
  double bracket_lo_db = -20.0;
  double bracket_hi_db = 40.0;
  long n_samples = 100000;
  std::uint64_t seed = 7;
};

// Bisects GMI(snr) = target using one frozen set of noise draws across all
// iterates (common random numbers), so the root is free of Monte-Carlo
// jitter between iterations.
inline double required_snr(const Constellation4D& c, double target_gmi_bits, double tol_db,
                           const SnrSolveOptions& opt = {}) {
  const int m = c.bits();
  if (!(target_gmi_bits > 0) || !(target_gmi_bits < m))
    throw SolverError("target GMI must be in (0, m)");
  if (!(tol_db > 0)) throw SolverError("tol_db must be > 0");

  std::vector<std::uint32_t> indices;
  std::vector<double> normals;
  detail::draw_gmi_samples(c, opt.n_samples, opt.seed, indices, normals);
  auto eval = [&](double snr_db) {
    return detail::gmi_with_draws(c, snr_db, indices, normals).gmi_bits_per_4d;
  };

  double lo = opt.bracket_lo_db, hi = opt.bracket_hi_db;
  if (eval(hi) < target_gmi_bits)
    throw SolverError("target GMI unreachable at bracket top");
  if (eval(lo) >= target_gmi_bits)
    throw SolverError("target GMI already met at bracket bottom");
  while (hi - lo > tol_db) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) >= target_gmi_bits)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace snr4d
