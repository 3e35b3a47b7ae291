// Calibrates {eta_ss, epsilon} for PM-16QAM on a short link with a small
// grid, then compares the model prediction with a direct simulation. Desk
// runtimes only; enlarge the grid and seed count for real measurements.
#include <cstdio>
#include <vector>

#include "snr4d/calibration.hpp"
#include "snr4d/ssfm.hpp"

int main() {
  using namespace snr4d;

  LinkConfig link;
  link.n_spans = 8;
  link.signal.launch_power_dbm = 0.5;

  SsfmConfig cfg;
  cfg.n_symbols = 2048;
  cfg.rng_seed = 11;

  const auto fmt = generate_pm_qam(16);

  const std::vector<int> distances{1, 2, 4, 8};
  CalibrationOptions opt;
  opt.p_dbm = -2.0;
  opt.n_runs = 3;
  const CalibrationResult cal = calibrate_eta(fmt, link, distances, cfg, opt);
  std::printf("calibrated: eta_ss = %.2f /W^2, epsilon = %.3f (R^2 = %.5f)\n",
              cal.coeff.eta_ss_per_w2, cal.coeff.epsilon, cal.r_squared);

  const NoiseBudget model = snr_eff(dbm_to_w(0.5), link, cal.coeff, true);
  const auto run = run_link(fmt, link, cfg);
  std::printf("model SNR_eff: %.3f dB  |  simulated: %.3f dB (one seed)\n", model.snr_eff_db,
              run.taps.back().snr_eff_db);
  return 0;
}
