#pragma once

#include <cmath>
#include <string>

#include "snr4d/errors.hpp"
#include "snr4d/util.hpp"

namespace snr4d {

inline constexpr double planck_h_js = 6.62607015e-34;

struct FiberParams {
  double alpha_db_per_km = 0.2;
  double beta2_ps2_per_km = -21.7;
  double gamma_per_w_km = 1.3;
  double span_length_km = 80.0;
};

struct AmplifierParams {
  double noise_figure_db = 5.0;
  double center_frequency_hz = 193.41e12;  // 1550 nm C-band default
};

struct SignalParams {
  double symbol_rate_baud = 45e9;
  double rrc_rolloff = 0.01;
  double launch_power_dbm = 0.5;
};

struct LinkConfig {
  FiberParams fiber;
  AmplifierParams amp;
  SignalParams signal;
  int n_spans = 1;
};

inline void validate(const FiberParams& f) {
  if (!(f.alpha_db_per_km > 0)) throw ConfigError("alpha_db_per_km must be > 0");
  if (!(f.span_length_km > 0)) throw ConfigError("span_length_km must be > 0");
  if (f.gamma_per_w_km < 0) throw ConfigError("gamma_per_w_km must be >= 0");
  if (!std::isfinite(f.beta2_ps2_per_km)) throw ConfigError("beta2_ps2_per_km must be finite");
}

inline void validate(const AmplifierParams& a) {
  if (!(a.noise_figure_db > 0)) throw ConfigError("noise_figure_db must be > 0");
  if (!(a.center_frequency_hz > 0)) throw ConfigError("center_frequency_hz must be > 0");
}

inline void validate(const SignalParams& s) {
  if (!(s.symbol_rate_baud > 0)) throw ConfigError("symbol_rate_baud must be > 0");
  if (!(s.rrc_rolloff > 0) || s.rrc_rolloff > 1)
    throw ConfigError("rrc_rolloff must be in (0, 1]");
  if (!std::isfinite(s.launch_power_dbm)) throw ConfigError("launch_power_dbm must be finite");
}

inline void validate(const LinkConfig& l) {
  validate(l.fiber);
  validate(l.amp);
  validate(l.signal);
  if (l.n_spans < 1) throw ConfigError("n_spans must be >= 1");
}

// RRC occupied bandwidth; also the default reference bandwidth in which the
// per-span ASE power is counted.
inline double occupied_bandwidth_hz(const SignalParams& s) {
  return s.symbol_rate_baud * (1.0 + s.rrc_rolloff);
}

// EDFA gain exactly compensating the span loss.
inline double span_gain_linear(const LinkConfig& link) {
  return std::pow(10.0, link.fiber.alpha_db_per_km * link.fiber.span_length_km / 10.0);
}

// ASE power added by one amplifier, total over both polarizations, counted
// in `bandwidth_hz`. Uses the high-gain inversion mapping n_sp = 10^(NF/10)/2;
// noise is added once per span after full loss compensation.
inline double ase_power_per_span(const LinkConfig& link, double bandwidth_hz) {
  if (!(bandwidth_hz > 0)) throw ConfigError("bandwidth_hz must be > 0");
  const double gain = span_gain_linear(link);
  const double n_sp = db_to_linear(link.amp.noise_figure_db) / 2.0;
  const double photon_j = planck_h_js * link.amp.center_frequency_hz;
  return (gain - 1.0) * n_sp * photon_j * bandwidth_hz * 2.0;
}

inline double ase_power_per_span(const LinkConfig& link) {
  return ase_power_per_span(link, occupied_bandwidth_hz(link.signal));
}

inline double span_length_total_km(const LinkConfig& link) {
  return link.fiber.span_length_km * link.n_spans;
}

}  // namespace snr4d
