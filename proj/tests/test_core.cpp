#include "tasep/core.hpp"
#include "tasep/scaling.hpp"

#include <doctest.h>

#include <cmath>

using namespace tasep;

TEST_CASE("step initial condition") {
  CHECK(make_step_initial(uniform_spec(1, 0.1, 0)).positions == std::vector<long>{0});
  CHECK(make_step_initial(uniform_spec(4, 0.1, 0)).positions == std::vector<long>{3, 2, 1, 0});
  const auto c = make_step_initial(uniform_spec(100, 0.1, 0));
  CHECK(c.positions.front() == 99);
  CHECK(c.positions.back() == 0);
}

TEST_CASE("deterministic rates") {
  SystemSpec spec{2, {0.0, 0.0}, 3};
  const StayStream rng(1, 0);
  Configuration c{{1, 0}, 0};
  step(c, spec, rng);
  CHECK(c.positions == std::vector<long>{2, 0});  // particle 2 blocked at the first step
  step(c, spec, rng);
  CHECK(c.positions == std::vector<long>{3, 1});

  CHECK(tagged_path(SystemSpec{1, {0.0}, 5}, 7).back() == 5);
  CHECK(tagged_path(spec, 7).back() == 2);
}

TEST_CASE("tagged particle is still before time M") {
  const SystemSpec spec = uniform_spec(5, 0.3, 10);
  for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(simulate_tagged(spec, {4}, seed).front() == 0);
}

TEST_CASE("path regularity and exclusion") {
  const SystemSpec spec = defect_spec(12, 0.3, 0.6, {1, 5}, 60);
  for (std::uint64_t k = 0; k < 30; ++k) {
    const auto L = tagged_path(spec, 11, k);
    CHECK(L.front() == 0);
    for (std::size_t t = 1; t < L.size(); ++t) {
      const long d = L[t] - L[t - 1];
      CHECK((d == 0 || d == 1));
      if (static_cast<int>(t) < spec.M) CHECK(L[t] == 0);
      else CHECK(L[t] <= static_cast<long>(t) - spec.M + 1);
    }
    for (const auto& row : trajectory(spec, 11, k))
      for (std::size_t j = 1; j < row.size(); ++j) CHECK(row[j - 1] > row[j]);
  }
}

TEST_CASE("monotone coupling in the stay rates") {
  const SystemSpec hi = uniform_spec(8, 0.4, 40);
  for (int i = 0; i < 8; ++i) {
    SystemSpec lo = hi;
    lo.rates[static_cast<std::size_t>(i)] = 0.15;
    for (std::uint64_t k = 0; k < 25; ++k) {
      const auto a = tagged_path(hi, 3, k), b = tagged_path(lo, 3, k);
      for (std::size_t t = 0; t < a.size(); ++t) CHECK(b[t] >= a[t]);
    }
  }
}

TEST_CASE("particles behind the tagged one do not affect it") {
  for (int M = 1; M <= 4; ++M)
    for (int extra = 1; extra <= 3; ++extra) {
      SystemSpec small = uniform_spec(M, 0.35, 20);
      SystemSpec big = uniform_spec(M + extra, 0.35, 20);
      for (std::uint64_t k = 0; k < 20; ++k) {
        const auto a = trajectory(small, 9, k), b = trajectory(big, 9, k);
        for (std::size_t t = 0; t < a.size(); ++t)
          CHECK(a[t][static_cast<std::size_t>(M - 1)] == b[t][static_cast<std::size_t>(M - 1)] - extra);
      }
    }
}

TEST_CASE("two-step law of the tagged particle") {
  // Prob(L(2,2) = 1) = (1-q1)(1-q2); Monte Carlo within four standard errors.
  const SystemSpec spec{2, {0.3, 0.6}, 2};
  const std::size_t n = 100000;
  const SampleSet s = sample_ensemble(spec, {2}, n, 44);
  double hits = 0;
  for (long v : s.values) hits += v == 1;
  const double p = 0.7 * 0.4, se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(hits / n - p) < 4 * se);
}

TEST_CASE("ensembles are reproducible") {
  const SystemSpec spec = uniform_spec(10, 0.2, 30);
  const SampleSet a = sample_ensemble(spec, {15, 30}, 50, 123), b = sample_ensemble(spec, {15, 30}, 50, 123);
  CHECK(a.values == b.values);
  const SampleSet one = sample_ensemble(spec, {15, 30}, 1, 123);
  CHECK(one.values == simulate_tagged(spec, {15, 30}, 123, 0));
}

TEST_CASE("mean position at u = 2") {
  // The leading term is A2 M = 40; the M^{1/3} correction is the GUE Tracy-Widom mean -1.7711 on the s scale.
  CHECK(A2(2.0, 0.1) == doctest::Approx(0.4).epsilon(1e-14));
  const std::size_t n = 10000;
  const SampleSet s = sample_ensemble(uniform_spec(100, 0.1, 200), {200}, n, 2);
  double m = 0, m2 = 0;
  for (long v : s.values) {
    m += static_cast<double>(v);
    m2 += static_cast<double>(v) * static_cast<double>(v);
  }
  m /= n;
  const double se = std::sqrt((m2 / n - m * m) / n);
  const double scale = D_of_u(2.0, 0.1) * std::cbrt(100.0);
  CHECK(std::abs(m - 40.0) < 0.15 * m);
  CHECK(std::abs((40.0 - m) / scale + 1.7711) < 0.15 + 3 * se / scale);
}

TEST_CASE("deterministic mean law") {
  CHECK(u_critical(0.1, 0.2) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(A2(10.0, 0.1) == doctest::Approx(6.4).epsilon(1e-13));
  CHECK(AG(10.0, 0.1, 0.2) == doctest::Approx(6.4).epsilon(1e-13));
  for (double q : {0.05, 0.1, 0.3, 0.7}) CHECK(std::abs(A2(1.0 / (1.0 - q), q)) < 1e-12);
  CHECK(mean_position(0.5, 0.1) == 0.0);
  CHECK(mean_position(20.0, 0.1, 0.2) == doctest::Approx(AG(20.0, 0.1, 0.2)));
}

TEST_CASE("mean convergence improves with M") {
  double prev = 1e9;
  for (int M : {100, 200, 400}) {
    const SampleSet s = sample_ensemble(uniform_spec(M, 0.1, 5 * M), {5 * M}, 400, 77);
    double m = 0;
    for (long v : s.values) m += static_cast<double>(v);
    const double gap = std::abs(m / 400 / M - A2(5.0, 0.1));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS(uniform_spec(0, 0.1, 1));
  CHECK_THROWS(uniform_spec(3, 1.0, 1));
  CHECK_THROWS(defect_spec(3, 0.1, 0.2, {4}, 1));
  CHECK_THROWS(simulate_tagged(uniform_spec(3, 0.1, 5), {6}, 1));
}
