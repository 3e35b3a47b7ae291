#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "snr4d/constellation.hpp"
#include "snr4d/errors.hpp"
#include "snr4d/fft.hpp"
#include "snr4d/link.hpp"
#include "snr4d/nli_model.hpp"
#include "snr4d/parallel.hpp"
#include "snr4d/rng.hpp"
#include "snr4d/util.hpp"

namespace snr4d {

struct SsfmConfig {
  double step_km = 0.1;
  int n_symbols = 8192;
  int sps = 4;
  std::uint64_t rng_seed = 1;
  bool ase_on = true;
  bool nonlinearity_on = true;
  // Symbols dropped from each end before metrics. The whole chain is cyclic
  // (periodic grid, circular filters), so there are no filter transients and
  // 0 is a sound default; the knob exists for windowed post-processing.
  int edge_exclusion = 0;
};

// Sampled dual-polarization complex baseband envelope, sqrt(W) amplitude
// units. Pol X occupies [0, n), pol Y [n, 2n) of one aligned buffer so the
// batched transforms touch both at once.
struct WaveformGrid {
  ComplexBuffer samples;
  double sample_rate_hz = 0;
  int n_symbols = 0;
  int sps = 0;

  std::size_t grid_size() const {
    return static_cast<std::size_t>(n_symbols) * static_cast<std::size_t>(sps);
  }
  std::complex<double>* samples_x() { return samples.data(); }
  std::complex<double>* samples_y() { return samples.data() + grid_size(); }
  const std::complex<double>* samples_x() const { return samples.data(); }
  const std::complex<double>* samples_y() const { return samples.data() + grid_size(); }
};

inline WaveformGrid make_waveform_grid(int n_symbols, int sps, double symbol_rate_baud) {
  WaveformGrid w;
  w.n_symbols = n_symbols;
  w.sps = sps;
  w.sample_rate_hz = symbol_rate_baud * sps;
  w.samples = ComplexBuffer(2 * w.grid_size());
  return w;
}

namespace detail {

inline int steps_per_span(const FiberParams& fiber, const SsfmConfig& cfg) {
  const double ratio = fiber.span_length_km / cfg.step_km;
  const int n = static_cast<int>(std::lround(ratio));
  if (n < 1 || std::abs(n * cfg.step_km - fiber.span_length_km) > 1e-9 * fiber.span_length_km)
    throw ConfigError("step_km must divide span_length_km");
  return n;
}

inline void validate_ssfm(const SsfmConfig& cfg, const SignalParams& sig) {
  if (!(cfg.step_km > 0)) throw ConfigError("step_km must be > 0");
  if (cfg.n_symbols < 64 || cfg.n_symbols % 2 != 0)
    throw ConfigError("n_symbols must be even and >= 64");
  if (static_cast<double>(cfg.sps) < 2.0 * (1.0 + sig.rrc_rolloff))
    throw ConfigError("sps must be >= 2*(1+rolloff)");
  if (cfg.edge_exclusion < 0 || 2 * cfg.edge_exclusion >= cfg.n_symbols)
    throw ConfigError("edge_exclusion out of range");
}

// Signed grid frequency of FFT bin k (N even: bin N/2 maps to -Fs/2).
inline double bin_frequency_hz(std::size_t k, std::size_t n, double sample_rate_hz) {
  const auto ki = static_cast<long long>(k);
  const auto nn = static_cast<long long>(n);
  const long long signed_k = (ki < nn - ki) ? ki : ki - nn;
  return static_cast<double>(signed_k) * sample_rate_hz / static_cast<double>(n);
}

// Raised-cosine power spectrum (the matched-RRC cascade). On a grid whose
// bin spacing divides the symbol rate the aliases of this function sum to
// exactly 1, so the cyclic cascade is ISI-free to machine precision.
inline double raised_cosine_gain(double f_abs, double symbol_rate, double rolloff) {
  const double f1 = 0.5 * symbol_rate * (1.0 - rolloff);
  const double f2 = 0.5 * symbol_rate * (1.0 + rolloff);
  if (f_abs <= f1) return 1.0;
  if (f_abs >= f2) return 0.0;
  const double c = std::cos(M_PI * (f_abs - f1) / (2.0 * rolloff * symbol_rate));
  return c * c;
}

inline std::vector<double> rrc_response(std::size_t n, double sample_rate_hz,
                                        const SignalParams& sig) {
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = std::abs(bin_frequency_hz(k, n, sample_rate_hz));
    h[k] = std::sqrt(raised_cosine_gain(f, sig.symbol_rate_baud, sig.rrc_rolloff));
  }
  return h;
}

inline void apply_filter_both_pols(WaveformGrid& w, const std::vector<std::complex<double>>& h) {
  const std::size_t n = w.grid_size();
  auto* x = w.samples_x();
  auto* y = w.samples_y();
  for (std::size_t k = 0; k < n; ++k) {
    x[k] *= h[k];
    y[k] *= h[k];
  }
}

// Kerr phase rotation exp(j*coeff*(|Ex|^2+|Ey|^2)) applied to both
// polarizations. Per-step phases at sane launch powers are well below
// 0.05 rad, where the nested Taylor forms for sin/cos are exact to double
// precision; larger phases fall back to libm. The power sum doubles as the
// non-finite detector.
inline void kerr_rotate(std::complex<double>* x, std::complex<double>* y, std::size_t n,
                        double coeff, std::vector<double>& theta, long global_step) {
  theta.resize(n);
  double power_sum = 0.0;
  double max_theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::norm(x[i]) + std::norm(y[i]);
    power_sum += p;
    const double t = coeff * p;
    theta[i] = t;
    max_theta = std::max(max_theta, std::abs(t));
  }
  if (!std::isfinite(power_sum))
    throw NumericalError("non-finite sample during propagation", global_step);

  auto rotate = [&](std::size_t i, double c, double s) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    x[i] = {xr * c - xi * s, xr * s + xi * c};
    y[i] = {yr * c - yi * s, yr * s + yi * c};
  };

  if (max_theta < 0.05) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = theta[i];
      const double t2 = t * t;
      const double s = t * (1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0)));
      const double c = 1.0 - t2 / 2.0 * (1.0 - t2 / 12.0 * (1.0 - t2 / 30.0 * (1.0 - t2 / 56.0)));
      rotate(i, c, s);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) rotate(i, std::cos(theta[i]), std::sin(theta[i]));
  }
}

// Frequency-domain linear operator exp((j*beta2/2*w^2 - alpha/2) * dz),
// with the 1/N inverse-transform normalization folded in.
inline std::vector<std::complex<double>> linear_operator(std::size_t n, double sample_rate_hz,
                                                         const FiberParams& fiber, double dz_km) {
  const double alpha_np = db_per_km_to_np(fiber.alpha_db_per_km);
  const double beta2_s2_km = fiber.beta2_ps2_per_km * 1e-24;
  const double amp = std::exp(-0.5 * alpha_np * dz_km) / static_cast<double>(n);
  std::vector<std::complex<double>> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = 2.0 * M_PI * bin_frequency_hz(k, n, sample_rate_hz);
    const double phase = 0.5 * beta2_s2_km * w * w * dz_km;
    h[k] = std::polar(amp, phase);
  }
  return h;
}

}  // namespace detail

struct TxFrame {
  WaveformGrid grid;
  std::vector<std::complex<double>> sym_x, sym_y;  // transmitted symbols, unit 4D energy units
  double power_w = 0;                              // configured mean launch power
};

// The symbol draw is a stream of its own, keyed only by the master seed, so
// every run variant (ASE on/off, nonlinearity on/off, any step size) sees the
// same transmitted data.
inline void draw_symbols(const Constellation4D& c, int n_symbols, std::uint64_t seed,
                         std::vector<std::complex<double>>& sym_x,
                         std::vector<std::complex<double>>& sym_y) {
  auto gen = make_generator(seed, RngStreamId::symbols);
  const auto m_points = static_cast<std::uint32_t>(c.size());
  sym_x.resize(static_cast<std::size_t>(n_symbols));
  sym_y.resize(static_cast<std::size_t>(n_symbols));
  for (int i = 0; i < n_symbols; ++i) {
    const auto& p = c.points[uniform_index(gen, m_points)];
    sym_x[static_cast<std::size_t>(i)] = {p[0], p[1]};
    sym_y[static_cast<std::size_t>(i)] = {p[2], p[3]};
  }
}

// Draws i.i.d. symbols with the seeded generator, maps x1+j*x2 to pol X and
// x3+j*x4 to pol Y, pulse-shapes with the RRC spectrum on the cyclic grid and
// scales so the expected mean total power equals the launch power.
inline TxFrame transmit(const Constellation4D& c, const SignalParams& sig, int n_symbols, int sps,
                        std::uint64_t seed) {
  SsfmConfig probe;
  probe.n_symbols = n_symbols;
  probe.sps = sps;
  detail::validate_ssfm(probe, sig);
  if (std::abs(mean_energy(c) - 1.0) > 1e-9)
    throw FormatError("transmit expects a normalized constellation");

  TxFrame tx;
  tx.power_w = dbm_to_w(sig.launch_power_dbm);
  tx.grid = make_waveform_grid(n_symbols, sps, sig.symbol_rate_baud);
  draw_symbols(c, n_symbols, seed, tx.sym_x, tx.sym_y);

  auto* gx = tx.grid.samples_x();
  auto* gy = tx.grid.samples_y();
  for (int i = 0; i < n_symbols; ++i) {
    // zero-stuffed upsampling; the RRC multiply below interpolates
    gx[static_cast<std::size_t>(i) * sps] = tx.sym_x[static_cast<std::size_t>(i)];
    gy[static_cast<std::size_t>(i) * sps] = tx.sym_y[static_cast<std::size_t>(i)];
  }

  const std::size_t n = tx.grid.grid_size();
  DualPolFft fft(n);
  fft.forward(tx.grid.samples.data());
  const std::vector<double> rrc = detail::rrc_response(n, tx.grid.sample_rate_hz, sig);
  // sps*sqrt(P) makes the expected mean power (both pols) exactly P for a
  // unit-energy constellation; 1/n undoes the unnormalized inverse transform.
  const double scale = sps * std::sqrt(tx.power_w) / static_cast<double>(n);
  std::vector<std::complex<double>> h(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = rrc[k] * scale;
  detail::apply_filter_both_pols(tx.grid, h);
  fft.backward(tx.grid.samples.data());
  return tx;
}

// Symmetrized split-step over one span: half linear step, then per step a
// Kerr rotation with the Manakov 8/9 factor over the loss-aware effective
// length dz_eff = (1-e^(-alpha dz))/alpha, then a full (or final half)
// linear step. With the nonlinearity toggled off the span collapses to a
// single frequency-domain filter, which is the exact composition of the
// per-step linear operators.
inline void propagate_span_inplace(WaveformGrid& w, const FiberParams& fiber,
                                   const SsfmConfig& cfg, int span_index = 0) {
  const std::size_t n = w.grid_size();
  const int n_steps = detail::steps_per_span(fiber, cfg);
  DualPolFft fft(n);

  if (!cfg.nonlinearity_on) {
    const auto h_span =
        detail::linear_operator(n, w.sample_rate_hz, fiber, fiber.span_length_km);
    fft.forward(w.samples.data());
    detail::apply_filter_both_pols(w, h_span);
    fft.backward(w.samples.data());
    double power_sum = 0;
    for (std::size_t i = 0; i < 2 * n; ++i) power_sum += std::norm(w.samples[i]);
    if (!std::isfinite(power_sum))
      throw NumericalError("non-finite sample after linear span",
                           static_cast<long>(span_index) * n_steps);
    return;
  }
  const double alpha_np = db_per_km_to_np(fiber.alpha_db_per_km);
  const double dz = cfg.step_km;
  const double dz_eff = alpha_np > 0 ? -std::expm1(-alpha_np * dz) / alpha_np : dz;
  const double kerr_coeff = (8.0 / 9.0) * fiber.gamma_per_w_km * dz_eff;

  const auto h_half = detail::linear_operator(n, w.sample_rate_hz, fiber, 0.5 * dz);
  const auto h_full = detail::linear_operator(n, w.sample_rate_hz, fiber, dz);

  std::vector<double> theta;
  auto* data = w.samples.data();
  fft.forward(data);
  detail::apply_filter_both_pols(w, h_half);
  fft.backward(data);
  for (int s = 0; s < n_steps; ++s) {
    const long global_step = static_cast<long>(span_index) * n_steps + s;
    detail::kerr_rotate(w.samples_x(), w.samples_y(), n, kerr_coeff, theta, global_step);
    fft.forward(data);
    detail::apply_filter_both_pols(w, (s + 1 < n_steps) ? h_full : h_half);
    fft.backward(data);
  }
}

inline WaveformGrid propagate_span(const WaveformGrid& w, const FiberParams& fiber,
                                   const SsfmConfig& cfg, int span_index = 0) {
  WaveformGrid out = w;
  propagate_span_inplace(out, fiber, cfg, span_index);
  return out;
}

// EDFA: amplitude gain sqrt(G); when ASE is on, adds circular complex white
// Gaussian noise whose power density puts exactly sigma2_ASE (per span, both
// polarizations) into the reference bandwidth R*(1+rolloff). Draws come from
// a per-span stream, so they do not depend on the step size or on the
// nonlinearity toggle.
inline void amplify_inplace(WaveformGrid& w, const LinkConfig& link, const SsfmConfig& cfg,
                            std::uint64_t master_seed, int span_index) {
  const double gain_amp = std::sqrt(span_gain_linear(link));
  const std::size_t n2 = 2 * w.grid_size();
  for (std::size_t i = 0; i < n2; ++i) w.samples[i] *= gain_amp;

  if (!cfg.ase_on) return;
  const double sigma2_ase = ase_power_per_span(link);
  const double b_ref = occupied_bandwidth_hz(link.signal);
  const double per_pol_sample_var = 0.5 * sigma2_ase * (w.sample_rate_hz / b_ref);
  const double sigma_component = std::sqrt(0.5 * per_pol_sample_var);
  auto gen = make_generator(master_seed, RngStreamId::ase, static_cast<std::uint64_t>(span_index));
  std::normal_distribution<double> normal(0.0, sigma_component);
  for (std::size_t i = 0; i < n2; ++i) {
    const double re = normal(gen);
    const double im = normal(gen);
    w.samples[i] += std::complex<double>(re, im);
  }
}

struct RxResult {
  std::vector<std::complex<double>> sym_x, sym_y;  // gain/phase-normalized
  double snr_eff_db = 0;
  bool dsp_warning = false;  // SNR below -10 dB, DSP assumptions likely violated
};

// Receiver DSP: full-link chromatic dispersion compensation, matched RRC
// filter, symbol-spaced decimation (optimum phase is 0 on this grid), one
// data-aided complex gain per polarization (removes the constant phase
// rotation and scale), then SNR_eff = E|x|^2 / E|y-x|^2 jointly over both
// polarizations.
inline RxResult receive(const WaveformGrid& w, const LinkConfig& link, const TxFrame& tx,
                        int edge_exclusion = 0) {
  const std::size_t n = w.grid_size();
  WaveformGrid rx = w;
  DualPolFft fft(n);

  const double beta2_s2_km = link.fiber.beta2_ps2_per_km * 1e-24;
  const double l_total_km = link.fiber.span_length_km * link.n_spans;
  const std::vector<double> rrc = detail::rrc_response(n, w.sample_rate_hz, link.signal);
  std::vector<std::complex<double>> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double omega = 2.0 * M_PI * detail::bin_frequency_hz(k, n, w.sample_rate_hz);
    const double cdc_phase = -0.5 * beta2_s2_km * omega * omega * l_total_km;
    h[k] = std::polar(rrc[k] / static_cast<double>(n), cdc_phase);
  }
  fft.forward(rx.samples.data());
  detail::apply_filter_both_pols(rx, h);
  fft.backward(rx.samples.data());

  const auto n_symbols = static_cast<std::size_t>(w.n_symbols);
  RxResult out;
  out.sym_x.resize(n_symbols);
  out.sym_y.resize(n_symbols);
  const auto* px = rx.samples_x();
  const auto* py = rx.samples_y();
  for (std::size_t i = 0; i < n_symbols; ++i) {
    out.sym_x[i] = px[i * static_cast<std::size_t>(w.sps)];
    out.sym_y[i] = py[i * static_cast<std::size_t>(w.sps)];
  }

  const std::size_t first = static_cast<std::size_t>(edge_exclusion);
  const std::size_t last = n_symbols - static_cast<std::size_t>(edge_exclusion);

  auto normalize_pol = [&](std::vector<std::complex<double>>& y,
                           const std::vector<std::complex<double>>& x) {
    std::complex<double> corr{0, 0};
    double energy = 0;
    for (std::size_t i = first; i < last; ++i) {
      corr += y[i] * std::conj(x[i]);
      energy += std::norm(x[i]);
    }
    const std::complex<double> g = corr / energy;
    for (auto& v : y) v /= g;
  };
  normalize_pol(out.sym_x, tx.sym_x);
  normalize_pol(out.sym_y, tx.sym_y);

  double sig = 0, err = 0;
  for (std::size_t i = first; i < last; ++i) {
    sig += std::norm(tx.sym_x[i]) + std::norm(tx.sym_y[i]);
    err += std::norm(out.sym_x[i] - tx.sym_x[i]) + std::norm(out.sym_y[i] - tx.sym_y[i]);
  }
  out.snr_eff_db = linear_to_db(sig / err);
  out.dsp_warning = out.snr_eff_db < -10.0;
  return out;
}

struct SsfmTap {
  int n_spans = 0;
  double distance_km = 0;
  double snr_eff_db = 0;
  bool dsp_warning = false;
  std::vector<std::complex<double>> sym_x, sym_y;  // normalized received symbols
};

struct SsfmRunResult {
  std::uint64_t seed = 0;
  double power_dbm = 0;
  std::vector<SsfmTap> taps;
  std::string config_echo;
};

inline std::string config_echo(const LinkConfig& link, const SsfmConfig& cfg) {
  std::ostringstream os;
  os << "step_km=" << cfg.step_km << " n_steps_per_span=" << detail::steps_per_span(link.fiber, cfg)
     << " n_symbols=" << cfg.n_symbols << " sps=" << cfg.sps
     << " sample_rate_hz=" << cfg.sps * link.signal.symbol_rate_baud << " seed=" << cfg.rng_seed
     << " ase_on=" << cfg.ase_on << " nonlinearity_on=" << cfg.nonlinearity_on
     << " edge_exclusion=" << cfg.edge_exclusion;
  return os.str();
}

// Transmit, propagate span by span, and run the receiver at every requested
// tap distance. One propagation serves all tap distances, which is what makes
// multi-distance sweeps affordable.
inline SsfmRunResult run_link(const Constellation4D& c, const LinkConfig& link,
                              const SsfmConfig& cfg, std::span<const int> tap_spans = {}) {
  validate(link);
  detail::validate_ssfm(cfg, link.signal);

  std::vector<int> taps(tap_spans.begin(), tap_spans.end());
  if (taps.empty()) taps.push_back(link.n_spans);
  std::sort(taps.begin(), taps.end());
  taps.erase(std::unique(taps.begin(), taps.end()), taps.end());
  if (taps.front() < 1) throw ConfigError("tap span counts must be >= 1");

  SsfmRunResult result;
  result.seed = cfg.rng_seed;
  result.power_dbm = link.signal.launch_power_dbm;
  result.config_echo = config_echo(link, cfg);

  TxFrame tx = transmit(c, link.signal, cfg.n_symbols, cfg.sps, cfg.rng_seed);
  WaveformGrid field = tx.grid;

  std::size_t next_tap = 0;
  for (int span = 1; span <= taps.back(); ++span) {
    propagate_span_inplace(field, link.fiber, cfg, span - 1);
    amplify_inplace(field, link, cfg, cfg.rng_seed, span - 1);
    if (span == taps[next_tap]) {
      LinkConfig at_tap = link;
      at_tap.n_spans = span;
      RxResult rx = receive(field, at_tap, tx, cfg.edge_exclusion);
      SsfmTap tap;
      tap.n_spans = span;
      tap.distance_km = span * link.fiber.span_length_km;
      tap.snr_eff_db = rx.snr_eff_db;
      tap.dsp_warning = rx.dsp_warning;
      tap.sym_x = std::move(rx.sym_x);
      tap.sym_y = std::move(rx.sym_y);
      result.taps.push_back(std::move(tap));
      ++next_tap;
      if (next_tap == taps.size()) break;
    }
  }
  return result;
}

}  // namespace snr4d
