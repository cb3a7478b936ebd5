#include <catch_amalgamated.hpp>

#include <cmath>

#include "zed/ei.hpp"
#include "zed/error.hpp"
#include "zed/rng.hpp"

using namespace zed;
using namespace zed::ei;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("comparator power follows g(L) I_sb V_dd", "[ei]") {
  ComparatorSpec one{{2.0}, 100e-9, 3.0, {}};
  CHECK_THAT(comparator_power(one), WithinRel(300e-9, 1e-12));

  ComparatorSpec four{{1.0, 2.0, 3.0, 4.0}, 100e-9, 3.0, {}};
  CHECK_THAT(comparator_power(four), WithinRel(1.2e-6, 1e-12));

  four.scaling = {1.0, 1.5, 1.8, 2.0};
  CHECK_THAT(comparator_power(four), WithinRel(600e-9, 1e-12));

  four.scaling = {2.0, 2.0, 2.0, 2.0};
  CHECK_THROWS_AS(comparator_power(four), ContractViolation);
}

TEST_CASE("comparator flags use a closed boundary and charge elapsed time", "[ei]") {
  const ComparatorSpec spec{{2.0, 4.0}, 100e-9, 3.0, {}};
  CHECK(comparator_observe(3.0, spec, 0.0).flags == std::vector<bool>{true, false});
  CHECK(comparator_observe(1.0, spec, 0.0).flags == std::vector<bool>{false, false});
  CHECK(comparator_observe(4.0, spec, 0.0).flags == std::vector<bool>{true, true});
  CHECK_THAT(comparator_observe(3.0, spec, 10.0).cost, WithinRel(comparator_power(spec) * 10.0, 1e-12));
}

TEST_CASE("sample cost and sampling capacitance", "[ei]") {
  SamplerSpec s;
  s.p_analog = 1e-6;
  s.t_measure = 10e-3;
  s.c_sample = 1e-12;
  s.v_dd = 3.0;
  CHECK_THAT(sample_cost(s), WithinRel(1.0009e-8, 1e-12));

  s.t_measure = 0.0;
  CHECK_THAT(sample_cost(s), WithinRel(9e-12, 1e-12));

  SamplerSpec sar;
  sar.c_unit = 1e-15;
  sar.bits = 8;
  const double c8 = sampling_capacitance(sar);
  sar.bits = 9;
  CHECK_THAT(sampling_capacitance(sar), WithinRel(2.0 * c8, 1e-12));

  SamplerSpec flash = sar;
  flash.architecture = AdcArchitecture::flash;
  flash.bits = 3;
  CHECK_THAT(sampling_capacitance(flash), WithinRel(7e-15, 1e-12));
}

TEST_CASE("quantizer is mid-rise over [0, V_r]", "[ei]") {
  const double lsb = quantization_lsb(1.0, 8);
  CHECK(lsb == 1.0 / 256.0);
  auto [level, sat] = quantize(0.0, 1.0, 8);
  CHECK(level == lsb / 2.0);
  CHECK_FALSE(sat);
  std::tie(level, sat) = quantize(1.2, 1.0, 8);
  CHECK(sat);
  CHECK(level == 1.0 - lsb / 2.0);
  std::tie(level, sat) = quantize(-0.1, 1.0, 8);
  CHECK(sat);
  CHECK(level == lsb / 2.0);
  CHECK_THROWS_AS(quantize(0.5, 1.0, 0), ContractViolation);
}

TEST_CASE("noise-free reading is within one LSB", "[ei]") {
  SamplerSpec s;
  s.bits = 24;
  s.v_ref = 3.0;
  Rng rng(1);
  const auto r = sample_read(1.5, s, 0.0, 300.0, rng);
  CHECK_THAT(r.value, WithinAbs(1.5, quantization_lsb(3.0, 24)));
  CHECK_FALSE(r.saturated);
  CHECK(r.cost == sample_cost(s));
}

TEST_CASE("quantization variance matches the closed form", "[ei]") {
  Rng rng(2);
  double sum = 0.0, sum2 = 0.0;
  constexpr int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform();
    const double e = quantize(x, 1.0, 8).first - x;
    sum += e;
    sum2 += e * e;
  }
  const double var = sum2 / n - (sum / n) * (sum / n);
  CHECK_THAT(quantization_variance(1.0, 8), WithinRel(1.0 / (3.0 * 262144.0), 1e-12));
  CHECK_THAT(var, WithinRel(quantization_variance(1.0, 8), 0.02));
}

TEST_CASE("thermal noise variance is A / t_m", "[ei]") {
  SamplerSpec s;
  s.bits = 24;
  s.v_ref = 1.0;
  s.noise_a = 1e-12;
  s.t_measure = 1e-3;
  Rng rng(3);
  double sum = 0.0, sum2 = 0.0;
  constexpr int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double e = sample_read(0.5, s, 0.0, 300.0, rng).value - 0.5;
    sum += e;
    sum2 += e * e;
  }
  const double var = sum2 / n - (sum / n) * (sum / n);
  CHECK_THAT(var, WithinRel(1e-9, 0.02));
}

TEST_CASE("offset drifts with temperature and time", "[ei]") {
  SamplerSpec s;
  s.offset = 1e-3;
  s.offset_temp_coeff = 1e-4;
  s.offset_drift = 1e-6;
  s.temp_ref = 300.0;
  s.time_ref = 0.0;
  CHECK_THAT(offset_at(s, 100.0, 310.0), WithinRel(1e-3 + 1e-3 + 1e-4, 1e-12));
  CHECK(offset_at(s, 5.0, 305.0) == offset_at(s, 5.0, 305.0));
}

TEST_CASE("quantized readings obey the half-LSB bound", "[ei]") {
  SamplerSpec s;
  s.bits = 6;
  s.v_ref = 2.0;
  s.offset = 0.02;
  Rng rng(4);
  const double half = quantization_lsb(2.0, 6) / 2.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = rng.uniform() * 1.9;
    const auto r = sample_read(x, s, 0.0, 300.0, rng);
    REQUIRE(std::abs(r.value - (x + 0.02)) <= half * (1.0 + 1e-12));
    const double code = r.value / (2.0 * half) - 0.5;
    REQUIRE(std::abs(code - std::round(code)) < 1e-9);
  }
}

TEST_CASE("coulomb counter floors and carries the remainder", "[ei]") {
  CoulombCounter c({1e-3, 1e-6, 1e-6, CounterPlacement::post_storage, 0.0});
  const auto s = c.step(2.5e-3, 0.0, 10.0);
  CHECK(s.events == 2);
  CHECK_THAT(s.estimate, WithinRel(2e-3, 1e-12));
  CHECK_THAT(s.cost, WithinRel(12e-6, 1e-12));
  CHECK_THAT(c.residual(), WithinAbs(0.5e-3, 1e-15));

  const auto more = c.step(0.6e-3, 10.0, 10.0);
  CHECK(more.events == 1);
  CHECK_THAT(c.estimate(), WithinRel(3e-3, 1e-12));

  const auto down = c.step(-2.0e-3, 10.0, 10.0);
  CHECK(down.events == -2);
  CHECK_THAT(c.estimate(), WithinRel(1e-3, 1e-12));
}

TEST_CASE("pre-storage counters reject negative flow", "[ei]") {
  CoulombCounter c({1e-3, 0.0, 0.0, CounterPlacement::pre_storage, 0.0});
  CHECK_THROWS_AS(c.step(-1e-3, 0.0, 1.0), ContractViolation);
  CHECK_THROWS_AS(CoulombCounter({0.0, 0.0, 0.0, CounterPlacement::pre_storage, 0.0}), ContractViolation);
}

TEST_CASE("coulomb estimate never exceeds the true flow", "[ei]") {
  CoulombCounter c({1e-3, 0.0, 0.0, CounterPlacement::pre_storage, 0.0});
  Rng rng(5);
  double total = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double flow = rng.uniform() * 3e-3;
    total += flow;
    c.step(flow, 0.0, 0.0);
    REQUIRE(c.estimate() <= total + 1e-15);
    REQUIRE(total - c.estimate() < 1e-3 + 1e-12);
  }
}

TEST_CASE("coulomb error moments", "[ei]") {
  Rng rng(6);
  const double q = 1e-3;
  double sum = 0.0, sum2 = 0.0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    CoulombCounter c({q, 0.0, 0.0, CounterPlacement::pre_storage, 0.0});
    const double flow = rng.uniform() * 50.0 * q;
    c.step(flow, 0.0, 0.0);
    const double e = flow - c.estimate();
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / n;
  CHECK_THAT(mean, WithinRel(q / 2.0, 0.02));
  CHECK_THAT(sum2 / n - mean * mean, WithinRel(q * q / 12.0, 0.05));
}

TEST_CASE("missed events reduce the count", "[ei]") {
  CoulombCounter c({1e-3, 0.0, 0.0, CounterPlacement::pre_storage, 0.5});
  Rng rng(7);
  c.step(10.0, 0.0, 0.0, &rng);
  CHECK(c.count() > 4000);
  CHECK(c.count() < 6000);
  CoulombCounter needs_rng({1e-3, 0.0, 0.0, CounterPlacement::pre_storage, 0.5});
  CHECK_THROWS_AS(needs_rng.step(1.0, 0.0, 0.0), ContractViolation);
}

TEST_CASE("time-to-event estimate", "[ei]") {
  CHECK_THAT(*time_to_event_estimate({0.0, 5.0, 10.0, 15.0}, 1.0), WithinRel(0.2, 1e-12));
  CHECK_FALSE(time_to_event_estimate({3.0}, 1.0).has_value());
  CHECK_THAT(*time_to_event_estimate({0.0, 4.0, 9.0, 15.0}, 1.0), WithinRel(0.2, 1e-12));
}

TEST_CASE("indirect estimation maps ambient readings", "[ei]") {
  IndirectSpec spec;
  spec.mapping = {{0.0, 0.0}, {1.0, 2e-3}, {2.0, 3e-3}};
  spec.sensor.bits = 24;
  spec.sensor.v_ref = 3.0;
  CHECK_THAT(map_ambient(spec, 0.5), WithinRel(1e-3, 1e-12));
  CHECK(map_ambient(spec, 5.0) == 3e-3);
  Rng rng(8);
  CHECK_THAT(indirect_estimate(1.5, spec, 0.0, 300.0, rng).harvest_power, WithinRel(2.5e-3, 1e-5));
  spec.mapping_bias = 0.1;
  CHECK_THAT(indirect_estimate(1.5, spec, 0.0, 300.0, rng).harvest_power, WithinRel(2.75e-3, 1e-5));
  spec.mapping = {{0.0, 1.0}, {1.0, 0.5}};
  CHECK_THROWS_AS(map_ambient(spec, 0.5), ContractViolation);
}
