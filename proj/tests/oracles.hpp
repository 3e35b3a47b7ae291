// Test-only reference implementations, kept independent of the library code
// paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracles {

// Physicists' Gauss-Hermite nodes and weights (weight function e^{-t^2}),
// computed by Newton iteration on the orthonormal recurrence.
inline void gauss_hermite(int n, std::vector<double>& t, std::vector<double>& w) {
  t.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * t[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * t[1];
    else
      z = 2.0 * z - t[static_cast<std::size_t>(i) - 2];

    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = 0.7511255444649425;  // pi^(-1/4)
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-14) break;
    }
    t[static_cast<std::size_t>(i)] = z;
    t[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
}

struct Format2D {
  std::vector<std::complex<double>> points;  // unit mean energy
  std::vector<std::uint32_t> labels;
  int bits = 0;
};

// Gray-labeled square QAM factor format, built here from scratch.
inline Format2D gray_square_qam(int order) {
  Format2D f;
  const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  int bits_per_axis = 0;
  for (int v = k; v > 1; v >>= 1) ++bits_per_axis;
  f.bits = 2 * bits_per_axis;
  double energy = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int q = 0; q < k; ++q) {
      const std::complex<double> p(2.0 * i - (k - 1), 2.0 * q - (k - 1));
      const std::uint32_t gi = static_cast<std::uint32_t>(i) ^ (static_cast<std::uint32_t>(i) >> 1);
      const std::uint32_t gq = static_cast<std::uint32_t>(q) ^ (static_cast<std::uint32_t>(q) >> 1);
      f.points.push_back(p);
      f.labels.push_back((gi << bits_per_axis) | gq);
      energy += std::norm(p);
    }
  }
  const double scale = 1.0 / std::sqrt(energy / static_cast<double>(f.points.size()));
  for (auto& p : f.points) p *= scale;
  return f;
}

// Exact-LLR GMI of a 2D format on the 2D AWGN channel by Gauss-Hermite
// quadrature: unit 2D symbol energy, per-real-dimension noise variance
// 1/(2 SNR). For PM products the 4D GMI is twice this value at the same SNR.
inline double gmi_2d_quadrature(const Format2D& f, double snr_db, int nodes = 32) {
  std::vector<double> t, w;
  gauss_hermite(nodes, t, w);
  const double snr = std::pow(10.0, snr_db / 10.0);
  const double sigma = std::sqrt(1.0 / (2.0 * snr));
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  const std::size_t m_points = f.points.size();
  const int m = f.bits;
  const double inv_pi = 1.0 / M_PI;
  const double ln2 = std::log(2.0);

  double info = 0.0;
  std::vector<double> metric(m_points);
  for (std::size_t i = 0; i < m_points; ++i) {
    for (int a = 0; a < nodes; ++a) {
      for (int b = 0; b < nodes; ++b) {
        const std::complex<double> y =
            f.points[i] + std::sqrt(2.0) * sigma * std::complex<double>(t[a], t[b]);
        double a_max = -1e300;
        for (std::size_t j = 0; j < m_points; ++j) {
          const double d = std::norm(y - f.points[j]);
          metric[j] = -d * inv_two_sigma2;
          a_max = std::max(a_max, metric[j]);
        }
        double total = 0.0;
        std::vector<double> s0(static_cast<std::size_t>(m), 0.0), s1(static_cast<std::size_t>(m), 0.0);
        for (std::size_t j = 0; j < m_points; ++j) {
          const double wt = std::exp(metric[j] - a_max);
          total += wt;
          for (int kbit = 0; kbit < m; ++kbit) {
            if ((f.labels[j] >> kbit) & 1u)
              s1[static_cast<std::size_t>(kbit)] += wt;
            else
              s0[static_cast<std::size_t>(kbit)] += wt;
          }
        }
        double sample_info = 0.0;
        for (int kbit = 0; kbit < m; ++kbit) {
          const double matched = ((f.labels[i] >> kbit) & 1u) ? s1[static_cast<std::size_t>(kbit)]
                                                              : s0[static_cast<std::size_t>(kbit)];
          sample_info += std::log(total / matched);
        }
        info += w[a] * w[b] * inv_pi * sample_info / ln2;
      }
    }
  }
  return m - info / static_cast<double>(m_points);
}

// One-sample Kolmogorov-Smirnov statistic against a supplied CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

}  // namespace oracles
