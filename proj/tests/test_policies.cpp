#include <doctest.h>

#include <random>

#include "wiser/policies.hpp"

using namespace wiser;

namespace {

WlanConfig config_nm(int n, int m, int r, int t = 1, std::uint64_t seed = 1) {
  WlanConfig config;
  config.n_stations = n;
  config.n_antennas = m;
  config.n_rus = r;
  config.n_slots = t;
  config.rng_seed = seed;
  return config;
}

}  // namespace

TEST_CASE("PolicySpec parsing") {
  CHECK(PolicySpec::parse("bcq:4").kind == PolicySpec::Kind::Bcq);
  CHECK(PolicySpec::parse("bcq:4").k == 4);
  CHECK(PolicySpec::parse("bcq-per-ru:2").per_ru);
  CHECK(PolicySpec::parse("random").density == 0.5);
  CHECK(PolicySpec::parse("random:0.25").density == 0.25);
  CHECK(PolicySpec::parse("greedy").kind == PolicySpec::Kind::Greedy);
  CHECK(PolicySpec::parse("oracle").kind == PolicySpec::Kind::Oracle);
  CHECK(PolicySpec::parse("llm").kind == PolicySpec::Kind::Llm);
  CHECK_THROWS_AS(PolicySpec::parse("bcq"), ConfigError);
  CHECK_THROWS_AS(PolicySpec::parse("bcq:x"), ConfigError);
  CHECK_THROWS_AS(PolicySpec::parse("random:1.5"), ConfigError);
  CHECK_THROWS_AS(PolicySpec::parse("magic"), ConfigError);
  CHECK(PolicySpec::parse(PolicySpec::parse("bcq:4").str()).k == 4);
}

TEST_CASE("bcq_assign") {
  SUBCASE("k of N rows go all-ones") {
    const WlanConfig config = config_nm(10, 4, 9);
    GainMatrix zeta = GainMatrix::Random(10, 9).cwiseAbs();
    const AssignmentMatrix nu = bcq_assign(zeta, 4, config);
    int full = 0, empty = 0;
    for (int i = 0; i < 10; ++i) {
      if (nu.row(i).sum() == 9) ++full;
      if (nu.row(i).sum() == 0) ++empty;
    }
    CHECK(full == 4);
    CHECK(empty == 6);
    CHECK(validate(nu, config).empty());
  }

  SUBCASE("k = N = M selects everyone") {
    const WlanConfig config = config_nm(3, 3, 4);
    const AssignmentMatrix nu = bcq_assign(GainMatrix::Constant(3, 4, 1.0), 3, config);
    CHECK(nu == AssignmentMatrix::Ones(3, 4));
  }

  SUBCASE("known top-2 is selected, ties go to the lower index") {
    const WlanConfig config = config_nm(5, 2, 3);
    GainMatrix zeta = GainMatrix::Constant(5, 3, 1.0);
    zeta.row(3).setConstant(9.0);
    zeta.row(1).setConstant(5.0);
    AssignmentMatrix nu = bcq_assign(zeta, 2, config);
    CHECK(nu.row(3).sum() == 3);
    CHECK(nu.row(1).sum() == 3);
    CHECK(nu.sum() == 6);

    zeta.row(1).setConstant(9.0);  // tie between 1 and 3
    nu = bcq_assign(zeta, 1, config);
    CHECK(nu.row(1).sum() == 3);
    CHECK(nu.row(3).sum() == 0);
  }

  SUBCASE("k out of range") {
    const WlanConfig config = config_nm(10, 4, 9);
    const GainMatrix zeta = GainMatrix::Constant(10, 9, 1.0);
    CHECK_THROWS_AS(bcq_assign(zeta, 0, config), ValidationError);
    CHECK_THROWS_AS(bcq_assign(zeta, 5, config), ValidationError);  // k > M
  }
}

TEST_CASE("bcq_assign_per_ru ranks every RU independently") {
  const WlanConfig config = config_nm(4, 2, 2);
  GainMatrix zeta(4, 2);
  zeta << 9, 1,  //
      8, 2,      //
      1, 8,      //
      2, 9;
  const AssignmentMatrix nu = bcq_assign_per_ru(zeta, 2, config);
  CHECK(nu(0, 0) == 1);
  CHECK(nu(1, 0) == 1);
  CHECK(nu(2, 0) == 0);
  CHECK(nu(3, 1) == 1);
  CHECK(nu(2, 1) == 1);
  CHECK(nu(0, 1) == 0);
  CHECK(validate(nu, config).empty());
}

TEST_CASE("greedy_assign") {
  SUBCASE("capacity beyond demand admits everyone") {
    const WlanConfig config = config_nm(3, 4, 5);
    std::mt19937_64 rng(5);
    GainMatrix zeta(3, 5);
    for (int i = 0; i < 3; ++i)
      for (int l = 0; l < 5; ++l) zeta(i, l) = 1e-3 * (1 + static_cast<int>(rng() % 100));
    const AssignmentMatrix nu = greedy_assign(zeta, impact_factors(zeta, config), config);
    CHECK(nu == AssignmentMatrix::Ones(3, 5));
  }

  SUBCASE("a dominant agent is admitted on every RU") {
    const WlanConfig config = config_nm(6, 2, 4);
    GainMatrix zeta = GainMatrix::Constant(6, 4, 1e-3);
    zeta.row(2).setConstant(1.0);
    const AssignmentMatrix nu = greedy_assign(zeta, impact_factors(zeta, config), config);
    CHECK(nu.row(2).sum() == 4);
  }

  SUBCASE("feasible by construction") {
    std::mt19937_64 rng(6);
    const WlanConfig config = config_nm(8, 3, 5);
    for (int trial = 0; trial < 50; ++trial) {
      GainMatrix zeta(8, 5);
      for (int i = 0; i < 8; ++i)
        for (int l = 0; l < 5; ++l) zeta(i, l) = 1e-4 * (1 + static_cast<int>(rng() % 1000));
      const AssignmentMatrix nu = greedy_assign(zeta, impact_factors(zeta, config), config);
      CHECK(validate(nu, config).empty());
    }
  }
}

TEST_CASE("random_assign") {
  const WlanConfig config = config_nm(6, 2, 5);
  SUBCASE("seeded and reproducible") {
    CHECK(random_assign(99, config) == random_assign(99, config));
    CHECK(random_assign(99, config) != random_assign(100, config));
  }
  SUBCASE("zero density gives the zero matrix") {
    CHECK(random_assign(1, config, 0.0) == AssignmentMatrix::Zero(6, 5));
  }
  SUBCASE("always feasible after the built-in correction") {
    for (std::uint64_t seed = 0; seed < 50; ++seed)
      CHECK(validate(random_assign(seed, config, 0.9), config).empty());
  }
}

TEST_CASE("oracle_assign") {
  const McsTable table = McsTable::default_table();

  SUBCASE("single bit: assign iff it pays") {
    const WlanConfig config = config_nm(1, 1, 1, 1, 77);
    const ChannelRealization chan = generate_channels(config);
    const OracleResult best = oracle_assign(chan, 0, config, table);
    const double on_rate =
        evaluate_slot(chan, 0, AssignmentMatrix::Ones(1, 1), config, table).rate_sum();
    if (on_rate > 0.0)
      CHECK(best.assignment(0, 0) == 1);
    CHECK(best.rate_sum >= on_rate);
  }

  SUBCASE("N=2 M=1 R=2 equals a manual 16-case sweep") {
    const WlanConfig config = config_nm(2, 1, 2, 1, 1234);
    const ChannelRealization chan = generate_channels(config);
    const OracleResult best = oracle_assign(chan, 0, config, table);

    double sweep_best = -1.0;
    for (int mask = 0; mask < 16; ++mask) {
      AssignmentMatrix nu(2, 2);
      nu(0, 0) = mask & 1;
      nu(0, 1) = (mask >> 1) & 1;
      nu(1, 0) = (mask >> 2) & 1;
      nu(1, 1) = (mask >> 3) & 1;
      if (!validate(nu, config).empty()) continue;
      sweep_best = std::max(sweep_best, evaluate_slot(chan, 0, nu, config, table).rate_sum());
    }
    CHECK(best.rate_sum == sweep_best);
    CHECK(validate(best.assignment, config).empty());
  }

  SUBCASE("dominates the baselines on small instances") {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 20; ++trial) {
      const WlanConfig config = config_nm(2 + static_cast<int>(rng() % 2),
                                          1 + static_cast<int>(rng() % 2), 2, 1, rng());
      const ChannelRealization chan = generate_channels(config);
      const GainMatrix zeta = compute_gains(chan, 0);
      const OracleResult best = oracle_assign(chan, 0, config, table);

      std::vector<AssignmentMatrix> rivals;
      rivals.push_back(bcq_assign(zeta, 1, config));
      rivals.push_back(greedy_assign(zeta, impact_factors(zeta, config), config));
      rivals.push_back(random_assign(trial, config));
      for (const AssignmentMatrix& rival : rivals) {
        const AssignmentMatrix corrected = self_correct(rival, config).first;
        const double rate = evaluate_slot(chan, 0, corrected, config, table).rate_sum();
        CHECK(best.rate_sum >= rate - 1e-9);
      }
    }
  }

  SUBCASE("budget overrun is refused, never truncated") {
    const WlanConfig config = config_nm(4, 2, 6, 1, 3);  // 24 bits
    const ChannelRealization chan = generate_channels(config);
    CHECK_THROWS_AS(oracle_assign(chan, 0, config, table, 20), ValidationError);
  }
}
