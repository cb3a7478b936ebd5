#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "zed/error.hpp"
#include "zed/rf.hpp"
#include "zed/rng.hpp"

using namespace zed;
using namespace zed::rf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("DFT codebook and static configuration", "[rf]") {
  const auto book = dft_codebook(4);
  REQUIRE(book.size() == 4);
  CHECK(book[0] == PhaseVector{0, 0, 0, 0});
  CHECK_THAT(book[1][1], WithinRel(std::numbers::pi / 2.0, 1e-12));
  CHECK_THAT(book[2][3], WithinRel(std::numbers::pi, 1e-12));
  CHECK(static_configuration(3) == PhaseVector{0.0, std::numbers::pi, 0.0});
  CHECK_THROWS_AS(dft_codebook(0), ContractViolation);
}

TEST_CASE("log-distance path loss", "[rf]") {
  RfScene s;
  s.distance = 1.0;
  CHECK_THAT(per_antenna_power(s), WithinRel(1e-3, 1e-9));
  s.distance = 10.0;
  CHECK_THAT(per_antenna_power(s), WithinRel(1e-3 * std::pow(10.0, -2.7), 1e-9));
  s.distance = 0.1;
  CHECK_THAT(per_antenna_power(s), WithinRel(1e-3, 1e-9));
  s.tx_power = 0.0;
  CHECK_THROWS_AS(per_antenna_power(s), ContractViolation);
}

TEST_CASE("codebook average equals DC combining", "[rf]") {
  Rng rng(1);
  for (std::size_t m : {1u, 2u, 3u, 8u}) {
    RfScene base;
    base.antennas = m;
    const RfScene s = random_scene(base, 20.0, rng);
    double sum = 0.0;
    for (const auto& entry : dft_codebook(m)) sum += rf_dc_power(s, entry);
    CHECK_THAT(sum / static_cast<double>(m), WithinRel(dc_combining_power(s), 1e-9));
  }
}

TEST_CASE("single antenna has no combining gain", "[rf]") {
  RfScene s;
  s.antennas = 1;
  const RfOutcome o = rf_explore_exploit(s, RfSchedule{});
  CHECK_THAT(o.genie, WithinRel(o.dc, 1e-12));
  CHECK_THAT(o.static_power, WithinRel(o.dc, 1e-12));
  CHECK_THAT(o.dynamic_net, WithinRel(o.dc, 1e-12));
}

TEST_CASE("ideal exploration dominates static and DC combining", "[rf]") {
  Rng rng(2);
  RfSchedule sched;
  sched.exploration_shortfall = false;
  for (int i = 0; i < 200; ++i) {
    RfScene base;
    base.antennas = 8;
    const RfOutcome o = rf_explore_exploit(random_scene(base, 20.0, rng), sched);
    CHECK(o.selected == o.best);
    CHECK(o.genie >= o.static_power * (1.0 - 1e-9));
    CHECK(o.genie >= o.dc * (1.0 - 1e-9));
    CHECK_THAT(o.dynamic_net, WithinRel(o.genie, 1e-12));
  }
}

TEST_CASE("overhead and shortfall reduce the dynamic net", "[rf]") {
  RfScene s;
  s.antennas = 4;
  s.angle = 0.3;
  RfSchedule sched;
  sched.slot = 1e-3;
  sched.exploit = 1.0;
  const RfOutcome ideal = rf_explore_exploit(s, sched);
  CHECK(ideal.dynamic_net <= ideal.genie);
  s.tuning_power = 1e-3;
  s.measurement_power = 1e-3;
  const RfOutcome costly = rf_explore_exploit(s, sched);
  const double window = 4e-3 + 1.0;
  CHECK_THAT(costly.overhead, WithinRel(4.0 * (3e-3 + 1e-3) * 1e-3 / window, 1e-12));
  CHECK_THAT(costly.dynamic_net, WithinAbs(ideal.dynamic_net - costly.overhead, 1e-15));
}

TEST_CASE("noisy measurements need an rng", "[rf]") {
  RfScene s;
  s.antennas = 4;
  RfSchedule sched;
  sched.measurement_noise = 0.1;
  CHECK_THROWS_AS(rf_explore_exploit(s, sched), ContractViolation);
  Rng rng(3);
  CHECK(rf_explore_exploit(s, sched, &rng).selected < 4);
}

TEST_CASE("random scenes stay inside the disk", "[rf]") {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const RfScene s = random_scene(RfScene{}, 15.0, rng);
    CHECK(s.distance >= 1.0);
    CHECK(s.distance <= 15.0);
  }
  CHECK(argmax({1.0, 3.0, 3.0, 2.0}) == 1);
}
