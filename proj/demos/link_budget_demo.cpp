// Minimal use of the analytic model: build a link, plug in NLI coefficients,
// sweep launch power and locate the optimum.
#include <cstdio>

#include "snr4d/link.hpp"
#include "snr4d/nli_model.hpp"

int main() {
  using namespace snr4d;

  LinkConfig link;  // defaults: 45 GBaud, 0.2 dB/km, -21.7 ps^2/km, 80 km spans, NF 5 dB
  link.n_spans = 50;

  NliCoefficients coeff;
  coeff.eta_ss_per_w2 = 103.0;
  coeff.epsilon = 0.22;

  std::printf("ASE per span: %.3e W (%.2f dBm)\n", ase_power_per_span(link),
              w_to_dbm(ase_power_per_span(link)));
  std::printf("%8s %12s %12s %12s %10s\n", "P [dBm]", "ASE [W]", "S-S [W]", "S-N [W]",
              "SNR [dB]");
  for (double p_dbm = -4.0; p_dbm <= 4.0; p_dbm += 1.0) {
    const NoiseBudget b = snr_eff(dbm_to_w(p_dbm), link, coeff, true);
    std::printf("%8.1f %12.3e %12.3e %12.3e %10.3f\n", p_dbm, b.ase_total_w, b.ss_w, b.sn_w,
                b.snr_eff_db);
  }

  const OptimalPower best = optimal_launch_power(link, coeff, true);
  std::printf("optimum: %.2f dBm -> %.3f dB%s\n", best.power_dbm, best.snr_eff_db,
              best.at_grid_edge ? " (grid edge)" : "");
  return 0;
}
