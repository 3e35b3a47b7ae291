#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "snr4d/config.hpp"
#include "snr4d/link.hpp"
#include "snr4d/util.hpp"

using namespace snr4d;

namespace {

LinkConfig paper_link() {
  LinkConfig link;  // struct defaults are the paper system
  link.n_spans = 20;
  return link;
}

}  // namespace

TEST_CASE("span gain follows the loss it compensates") {
  LinkConfig link = paper_link();
  REQUIRE(span_gain_linear(link) == Catch::Approx(std::pow(10.0, 1.6)).epsilon(1e-12));

  link.fiber.span_length_km = 100.0;
  link.fiber.alpha_db_per_km = 0.25;
  REQUIRE(span_gain_linear(link) == Catch::Approx(std::pow(10.0, 2.5)).epsilon(1e-12));

  link.fiber.span_length_km = 0.0;  // degenerate but well-defined arithmetic
  REQUIRE(span_gain_linear(link) == 1.0);
}

TEST_CASE("ASE power per span") {
  LinkConfig link = paper_link();

  SECTION("zero-length span adds no noise") {
    link.fiber.span_length_km = 0.0;
    REQUIRE(ase_power_per_span(link, 45e9) == 0.0);
  }

  SECTION("paper defaults, regression value") {
    // (G-1) * 10^(NF/10)/2 * h * nu * B * 2 at alpha=0.2 dB/km, 80 km,
    // NF=5 dB, nu=193.41 THz, B=45 GHz*(1+0.01); about -31.5 dBm.
    const double expected = 7.148591964749462e-07;
    REQUIRE(ase_power_per_span(link) == Catch::Approx(expected).epsilon(1e-12));
    REQUIRE(w_to_dbm(ase_power_per_span(link)) == Catch::Approx(-31.4578).margin(1e-3));
  }

  SECTION("linear in bandwidth") {
    REQUIRE(ase_power_per_span(link, 90e9) ==
            Catch::Approx(2.0 * ase_power_per_span(link, 45e9)).epsilon(1e-12));
  }

  SECTION("strictly increasing in NF, gain and bandwidth") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      LinkConfig a = paper_link();
      a.fiber.alpha_db_per_km = 0.15 + 0.15 * u(gen);
      a.fiber.span_length_km = 40.0 + 80.0 * u(gen);
      a.amp.noise_figure_db = 3.0 + 4.0 * u(gen);
      const double bw = 20e9 + 60e9 * u(gen);
      const double base = ase_power_per_span(a, bw);

      LinkConfig higher_nf = a;
      higher_nf.amp.noise_figure_db += 0.5;
      REQUIRE(ase_power_per_span(higher_nf, bw) > base);

      LinkConfig longer = a;
      longer.fiber.span_length_km += 5.0;
      REQUIRE(ase_power_per_span(longer, bw) > base);

      REQUIRE(ase_power_per_span(a, bw * 1.1) > base);
    }
  }

  SECTION("invalid bandwidth") {
    REQUIRE_THROWS_AS(ase_power_per_span(link, 0.0), ConfigError);
  }
}

TEST_CASE("config file round trip") {
  const std::string text =
      "# paper system\n"
      "[fiber]\n"
      "alpha_db_per_km = 0.2\n"
      "beta2_ps2_per_km = -21.7\n"
      "gamma_per_w_km = 1.3\n"
      "span_length_km = 80\n"
      "[amplifier]\n"
      "noise_figure_db = 5\n"
      "center_frequency_hz = 193.41e12\n"
      "[signal]\n"
      "symbol_rate_baud = 45e9\n"
      "rrc_rolloff = 0.01\n"
      "launch_power_dbm = 0.5\n"
      "[link]\n"
      "n_spans = 20\n";
  std::istringstream in(text);
  const LinkConfig link = link_config_from_ini(parse_ini(in, "<test>"));
  REQUIRE(link.fiber.beta2_ps2_per_km == -21.7);
  REQUIRE(link.signal.symbol_rate_baud == 45e9);
  REQUIRE(link.n_spans == 20);
}

TEST_CASE("both readings of the ambiguous roll-off are accepted") {
  for (double rolloff : {0.01, 0.0001}) {
    LinkConfig link = paper_link();
    link.signal.rrc_rolloff = rolloff;
    REQUIRE_NOTHROW(validate(link));
    REQUIRE(occupied_bandwidth_hz(link.signal) ==
            Catch::Approx(45e9 * (1.0 + rolloff)).epsilon(1e-12));
  }
}

TEST_CASE("config errors") {
  SECTION("unknown key") {
    std::istringstream in("[fiber]\nloss = 0.2\n");
    REQUIRE_THROWS_AS(link_config_from_ini(parse_ini(in, "<t>")), ConfigError);
  }
  SECTION("unknown section") {
    std::istringstream in("[fibre]\nalpha_db_per_km = 0.2\n");
    REQUIRE_THROWS_AS(link_config_from_ini(parse_ini(in, "<t>")), ConfigError);
  }
  SECTION("key outside section") {
    std::istringstream in("alpha_db_per_km = 0.2\n");
    REQUIRE_THROWS_AS(parse_ini(in, "<t>"), ConfigError);
  }
  SECTION("bad number") {
    std::istringstream in("[fiber]\nalpha_db_per_km = fast\n");
    REQUIRE_THROWS_AS(link_config_from_ini(parse_ini(in, "<t>")), ConfigError);
  }
  SECTION("invalid values") {
    LinkConfig link = paper_link();
    link.n_spans = 0;
    REQUIRE_THROWS_AS(validate(link), ConfigError);
    link = paper_link();
    link.signal.rrc_rolloff = 0.0;
    REQUIRE_THROWS_AS(validate(link), ConfigError);
    link = paper_link();
    link.fiber.alpha_db_per_km = -0.1;
    REQUIRE_THROWS_AS(validate(link), ConfigError);
  }
}

TEST_CASE("overrides win over file values") {
  LinkConfig link = paper_link();
  apply_overrides(link, {"link.n_spans=50", "signal.launch_power_dbm=-1.5",
                         "signal.rrc_rolloff=0.0001"});
  REQUIRE(link.n_spans == 50);
  REQUIRE(link.signal.launch_power_dbm == -1.5);
  REQUIRE(link.signal.rrc_rolloff == 0.0001);
  REQUIRE_THROWS_AS(apply_overrides(link, {"n_spans=50"}), ConfigError);
  REQUIRE_THROWS_AS(apply_overrides(link, {"link.n_spans"}), ConfigError);
}

TEST_CASE("canonical config string is stable and hashable") {
  const LinkConfig link = paper_link();
  const std::string a = canonical_config_string(link);
  const std::string b = canonical_config_string(link);
  REQUIRE(a == b);
  REQUIRE(fnv1a64_hex(a).size() == 16);
  LinkConfig other = link;
  other.n_spans = 21;
  REQUIRE(fnv1a64_hex(canonical_config_string(other)) != fnv1a64_hex(a));
}
