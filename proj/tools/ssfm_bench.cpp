// Self-timed throughput check for the split-step inner loop. The propagation
// cost is FFT-bound: two batched dual-pol transforms per step plus the Kerr
// rotation, so steps/s is the number that matters when sizing sweeps.
#include <chrono>
#include <cstdio>

#include "snr4d/ssfm.hpp"

using namespace snr4d;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  SsfmConfig cfg;
  cfg.n_symbols = argc > 1 ? std::atoi(argv[1]) : 8192;
  cfg.sps = argc > 2 ? std::atoi(argv[2]) : 4;
  const int n_spans = argc > 3 ? std::atoi(argv[3]) : 5;

  LinkConfig link;
  link.n_spans = n_spans;
  const auto fmt = generate_pm_qam(16);

  std::printf("grid: %d symbols x %d sps = %d samples, step %.2f km\n", cfg.n_symbols, cfg.sps,
              cfg.n_symbols * cfg.sps, cfg.step_km);

  // transform-only rate
  {
    WaveformGrid w = make_waveform_grid(cfg.n_symbols, cfg.sps, link.signal.symbol_rate_baud);
    DualPolFft fft(w.grid_size());
    const int reps = 400;
    const auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) {
      fft.forward(w.samples.data());
      fft.backward(w.samples.data());
    }
    const double dt = seconds_since(t0);
    std::printf("fft pair (fwd+bwd, both pols): %.3f ms\n", 1e3 * dt / reps);
  }

  // full span propagation
  {
    const auto tx = transmit(fmt, link.signal, cfg.n_symbols, cfg.sps, 1);
    WaveformGrid w = tx.grid;
    const int steps = n_spans * detail::steps_per_span(link.fiber, cfg);
    const auto t0 = clock_type::now();
    for (int s = 0; s < n_spans; ++s) propagate_span_inplace(w, link.fiber, cfg, s);
    const double dt = seconds_since(t0);
    std::printf("%d spans (%d steps): %.2f s -> %.0f steps/s, %.3f ms/step\n", n_spans, steps, dt,
                steps / dt, 1e3 * dt / steps);
  }

  // end-to-end run including transmitter, amplifiers and receiver taps
  {
    const auto t0 = clock_type::now();
    const auto run = run_link(fmt, link, cfg);
    const double dt = seconds_since(t0);
    std::printf("full run to %d spans: %.2f s (snr_eff %.2f dB)\n", n_spans, dt,
                run.taps.back().snr_eff_db);
  }
  return 0;
}
