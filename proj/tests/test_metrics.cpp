#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "snr4d/constellation.hpp"
#include "snr4d/metrics.hpp"

using namespace snr4d;

TEST_CASE("Gauss-Hermite oracle sanity") {
  std::vector<double> t, w;
  oracles::gauss_hermite(32, t, w);
  double sum = 0, sum_t2 = 0;
  for (int i = 0; i < 32; ++i) {
    sum += w[i];
    sum_t2 += w[i] * t[i] * t[i];
  }
  REQUIRE(sum == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  REQUIRE(sum_t2 == Catch::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("GMI saturates at both SNR extremes") {
  const auto qpsk = generate_pm_qam(4);
  const auto high = gmi(qpsk, 40.0, 100000, 1);
  REQUIRE(high.gmi_bits_per_4d == Catch::Approx(4.0).margin(0.01));
  const auto low = gmi(qpsk, -30.0, 100000, 1);
  REQUIRE(std::abs(low.gmi_bits_per_4d) < 0.02);
}

TEST_CASE("PM-16QAM Monte-Carlo GMI matches the quadrature oracle") {
  const auto pm16 = generate_pm_qam(16);
  const auto factor = oracles::gray_square_qam(16);
  for (double snr_db : {6.0, 10.0, 14.0}) {
    const auto mc = gmi(pm16, snr_db, 200000, 3);
    const double reference = 2.0 * oracles::gmi_2d_quadrature(factor, snr_db);
    INFO("snr " << snr_db << " mc " << mc.gmi_bits_per_4d << " ref " << reference);
    REQUIRE(std::abs(mc.gmi_bits_per_4d - reference) < 3.0 * mc.std_error + 1e-3);
  }
}

TEST_CASE("PM product factorization holds for PM-QPSK too") {
  const auto pm4 = generate_pm_qam(4);
  const auto factor = oracles::gray_square_qam(4);
  const double snr_db = 4.0;
  const auto mc = gmi(pm4, snr_db, 200000, 5);
  const double reference = 2.0 * oracles::gmi_2d_quadrature(factor, snr_db);
  REQUIRE(std::abs(mc.gmi_bits_per_4d - reference) < 3.0 * mc.std_error + 1e-3);
}

TEST_CASE("GMI is monotone in SNR within Monte-Carlo resolution") {
  const auto pm16 = generate_pm_qam(16);
  GmiEstimate prev = gmi(pm16, -5.0, 50000, 11);
  for (double snr_db = -2.5; snr_db <= 20.0; snr_db += 2.5) {
    const GmiEstimate cur = gmi(pm16, snr_db, 50000, 11);
    REQUIRE(cur.gmi_bits_per_4d >
            prev.gmi_bits_per_4d - 3.0 * (cur.std_error + prev.std_error));
    prev = cur;
  }
}

TEST_CASE("NGMI normalization") {
  GmiEstimate g;
  g.gmi_bits_per_4d = 7.0;
  REQUIRE(ngmi(g, 7) == Catch::Approx(1.0).margin(1e-12));
  g.gmi_bits_per_4d = 0.8 * 7.0;
  REQUIRE(ngmi(g, 7) == Catch::Approx(0.8).margin(1e-12));
  g.gmi_bits_per_4d = 0.0;
  REQUIRE(ngmi(g, 7) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("gmi input validation") {
  const auto qpsk = generate_pm_qam(4);
  REQUIRE_THROWS_AS(gmi(qpsk, 10.0, 5000, 1), SolverError);
}

TEST_CASE("required SNR") {
  const auto qpsk = generate_pm_qam(4);

  SECTION("matches a dense sweep of the same estimator") {
    SnrSolveOptions opt;
    opt.n_samples = 100000;
    opt.seed = 7;
    const double target = 0.8 * 4.0;
    const double solved = required_snr(qpsk, target, 0.01, opt);

    double crossing = opt.bracket_hi_db;
    for (double snr = 0.0; snr <= 6.0; snr += 0.02) {
      if (gmi(qpsk, snr, opt.n_samples, opt.seed).gmi_bits_per_4d >= target) {
        crossing = snr;
        break;
      }
    }
    REQUIRE(solved == Catch::Approx(crossing).margin(0.035));
  }

  SECTION("monotone in the target") {
    SnrSolveOptions opt;
    opt.n_samples = 50000;
    REQUIRE(required_snr(qpsk, 3.6, 0.01, opt) > required_snr(qpsk, 3.2, 0.01, opt));
  }

  SECTION("deterministic for a fixed seed") {
    SnrSolveOptions opt;
    opt.n_samples = 50000;
    REQUIRE(required_snr(qpsk, 3.2, 0.01, opt) == required_snr(qpsk, 3.2, 0.01, opt));
  }

  SECTION("solver errors") {
    REQUIRE_THROWS_AS(required_snr(qpsk, 4.5, 0.01), SolverError);  // target >= m
    SnrSolveOptions narrow;
    narrow.bracket_hi_db = 5.0;
    narrow.n_samples = 20000;
    REQUIRE_THROWS_AS(required_snr(qpsk, 3.9, 0.01, narrow), SolverError);
    SnrSolveOptions high_floor;
    high_floor.bracket_lo_db = 10.0;
    high_floor.n_samples = 20000;
    REQUIRE_THROWS_AS(required_snr(qpsk, 3.2, 0.01, high_floor), SolverError);
  }
}
