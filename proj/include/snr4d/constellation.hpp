#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "snr4d/errors.hpp"

namespace snr4d {

// A dual-polarization 4D modulation format: M points in (x1, x2, x3, x4)
// with m = log2(M) bit labels. Coordinates are dimensionless; launch power
// is applied in the transmitter, the constellation itself is kept at unit
// mean 4D symbol energy.
struct Constellation4D {
  std::string name;
  std::vector<std::array<double, 4>> points;  // M x 4
  std::vector<std::uint32_t> labels;          // M entries of m bits

  std::size_t size() const { return points.size(); }

  int bits() const {
    int m = 0;
    for (std::size_t v = points.size(); v > 1; v >>= 1) ++m;
    return m;
  }
};

struct FormatMoments {
  double mu2_x = 0;       // E[x1^2 + x2^2]
  double mu2_y = 0;       // E[x3^2 + x4^2]
  double mu4_x = 0;       // E[(x1^2 + x2^2)^2]
  double mu4_y = 0;       // E[(x3^2 + x4^2)^2]
  double cross_corr = 0;  // E[(x1^2 + x2^2)(x3^2 + x4^2)]
  // Mean over polarizations of E|u|^4 / E|u|^2^2 - 2, u the per-pol complex
  // amplitude. Constant-modulus per-pol formats give -1.
  double kurtosis_excess = 0;
};

namespace detail {

inline bool is_power_of_two(std::size_t v) { return v >= 2 && (v & (v - 1)) == 0; }

inline int log2_exact(std::size_t v) {
  int m = 0;
  while (v > 1) {
    v >>= 1;
    ++m;
  }
  return m;
}

}  // namespace detail

inline double mean_energy(const Constellation4D& c) {
  double e = 0;
  for (const auto& p : c.points) e += p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
  return e / static_cast<double>(c.points.size());
}

// Checks the structural invariants and throws on violation.
inline void validate(const Constellation4D& c) {
  const std::size_t m_points = c.points.size();
  if (!detail::is_power_of_two(m_points))
    throw FormatError("constellation size " + std::to_string(m_points) + " is not a power of two");
  if (c.labels.size() != m_points) throw FormatError("label count does not match point count");
  const int m = detail::log2_exact(m_points);
  std::vector<bool> seen(m_points, false);
  for (std::uint32_t label : c.labels) {
    if (label >= m_points)
      throw FormatError("label exceeds " + std::to_string(m) + " bits");
    if (seen[label]) throw LabelingError("duplicate label " + std::to_string(label));
    seen[label] = true;
  }
  for (const auto& p : c.points)
    for (double v : p)
      if (!std::isfinite(v)) throw FormatError("non-finite coordinate in " + c.name);
}

// Rescales to unit mean 4D symbol energy. Constellations already within
// 1e-12 of unit energy are returned untouched, which makes the operation
// idempotent bit for bit.
inline Constellation4D normalize(Constellation4D c) {
  const double e = mean_energy(c);
  if (!(e > 0)) throw FormatError("constellation has zero energy");
  if (std::abs(e - 1.0) <= 1e-12) return c;
  const double s = 1.0 / std::sqrt(e);
  for (auto& p : c.points)
    for (double& v : p) v *= s;
  return c;
}

// Plain-text format: one symbol per line, four decimal coordinates followed
// by the binary label string; '#' lines are comments.
inline Constellation4D load_format(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());

  Constellation4D c;
  c.name = path.stem().string();
  std::vector<std::string> label_tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::array<double, 4> p{};
    std::string label;
    if (!(ls >> p[0] >> p[1] >> p[2] >> p[3] >> label))
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 4 coordinates and a label");
    std::string trailing;
    if (ls >> trailing)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": trailing tokens");
    c.points.push_back(p);
    label_tokens.push_back(label);
  }

  if (!detail::is_power_of_two(c.points.size()))
    throw FormatError(path.string() + ": " + std::to_string(c.points.size()) +
                      " symbols is not a power of two");
  const int m = detail::log2_exact(c.points.size());
  for (std::size_t i = 0; i < label_tokens.size(); ++i) {
    const std::string& tok = label_tokens[i];
    if (static_cast<int>(tok.size()) != m)
      throw FormatError(path.string() + ": label '" + tok + "' is not " + std::to_string(m) +
                        " bits");
    std::uint32_t value = 0;
    for (char ch : tok) {
      if (ch != '0' && ch != '1')
        throw FormatError(path.string() + ": label '" + tok + "' is not binary");
      value = (value << 1) | static_cast<std::uint32_t>(ch - '0');
    }
    c.labels.push_back(value);
  }

  validate(c);
  return normalize(std::move(c));
}

// Polarization-multiplexed square QAM: the Cartesian product of two
// identical Gray-labeled 2D constellations. Label layout is
// [pol-X I bits | pol-X Q bits | pol-Y I bits | pol-Y Q bits].
inline Constellation4D generate_pm_qam(int order_2d) {
  if (order_2d != 4 && order_2d != 16 && order_2d != 64 && order_2d != 256)
    throw FormatError("unsupported QAM order " + std::to_string(order_2d) +
                      " (want 4, 16, 64 or 256)");
  const int k = static_cast<int>(std::lround(std::sqrt(double(order_2d))));
  const int bits_per_axis = detail::log2_exact(static_cast<std::size_t>(k));
  const int m2d = 2 * bits_per_axis;

  std::vector<double> level(static_cast<std::size_t>(k));
  std::vector<std::uint32_t> gray(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    level[static_cast<std::size_t>(i)] = static_cast<double>(2 * i - (k - 1));
    gray[static_cast<std::size_t>(i)] =
        static_cast<std::uint32_t>(i) ^ (static_cast<std::uint32_t>(i) >> 1);
  }

  Constellation4D c;
  c.name = "pm-qam:" + std::to_string(order_2d);
  const std::size_t m_total = static_cast<std::size_t>(order_2d) * static_cast<std::size_t>(order_2d);
  c.points.reserve(m_total);
  c.labels.reserve(m_total);
  for (int xi = 0; xi < k; ++xi)
    for (int xq = 0; xq < k; ++xq)
      for (int yi = 0; yi < k; ++yi)
        for (int yq = 0; yq < k; ++yq) {
          c.points.push_back({level[xi], level[xq], level[yi], level[yq]});
          const std::uint32_t lx = (gray[xi] << bits_per_axis) | gray[xq];
          const std::uint32_t ly = (gray[yi] << bits_per_axis) | gray[yq];
          c.labels.push_back((lx << m2d) | ly);
        }
  validate(c);
  return normalize(std::move(c));
}

// Exact moments under uniform symbol probabilities.
inline FormatMoments moments(const Constellation4D& c) {
  FormatMoments mo;
  const double inv_m = 1.0 / static_cast<double>(c.points.size());
  for (const auto& p : c.points) {
    const double px = p[0] * p[0] + p[1] * p[1];
    const double py = p[2] * p[2] + p[3] * p[3];
    mo.mu2_x += px;
    mo.mu2_y += py;
    mo.mu4_x += px * px;
    mo.mu4_y += py * py;
    mo.cross_corr += px * py;
  }
  mo.mu2_x *= inv_m;
  mo.mu2_y *= inv_m;
  mo.mu4_x *= inv_m;
  mo.mu4_y *= inv_m;
  mo.cross_corr *= inv_m;
  double excess = 0;
  int pols = 0;
  if (mo.mu2_x > 0) {
    excess += mo.mu4_x / (mo.mu2_x * mo.mu2_x) - 2.0;
    ++pols;
  }
  if (mo.mu2_y > 0) {
    excess += mo.mu4_y / (mo.mu2_y * mo.mu2_y) - 2.0;
    ++pols;
  }
  mo.kurtosis_excess = pols ? excess / pols : 0.0;
  return mo;
}

namespace detail {

inline bool point_set_contains(const std::vector<std::array<double, 4>>& sorted,
                               const std::array<double, 4>& q, double tol) {
  auto lo = std::lower_bound(sorted.begin(), sorted.end(), q[0] - tol,
                             [](const std::array<double, 4>& p, double v) { return p[0] < v; });
  for (; lo != sorted.end() && (*lo)[0] <= q[0] + tol; ++lo) {
    bool match = true;
    for (int d = 0; d < 4 && match; ++d) match = std::abs((*lo)[d] - q[d]) <= tol;
    if (match) return true;
  }
  return false;
}

}  // namespace detail

// Diagnostic only: true when negating either polarization's coordinate pair
// maps the point set onto itself.
inline bool is_orthant_symmetric(const Constellation4D& c, double tol = 1e-9) {
  std::vector<std::array<double, 4>> sorted = c.points;
  std::sort(sorted.begin(), sorted.end());
  for (int pol = 0; pol < 2; ++pol) {
    for (const auto& p : c.points) {
      std::array<double, 4> q = p;
      q[2 * pol] = -q[2 * pol];
      q[2 * pol + 1] = -q[2 * pol + 1];
      if (!detail::point_set_contains(sorted, q, tol)) return false;
    }
  }
  return true;
}

}  // namespace snr4d
