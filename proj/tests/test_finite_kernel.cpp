#include "tasep/combinatorics.hpp"
#include "tasep/finite_kernel.hpp"
#include "tasep/fredholm.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace tasep;

namespace {

SystemSpec spec_of(const std::vector<double>& rates, int horizon) {
  SystemSpec s;
  s.M = static_cast<int>(rates.size());
  s.rates = rates;
  s.horizon = horizon;
  return s;
}

// z^0 coefficient of (1+1/z)^T z^j by trapezoid on |z| = 1.
double phi_quadrature(int T, long j) {
  const int n = 256;
  double acc = 0;
  for (int k = 0; k < n; ++k) {
    const std::complex<double> z = std::polar(1.0, 2 * std::numbers::pi * k / n);
    acc += (std::pow(1.0 + 1.0 / z, T) * std::pow(z, static_cast<double>(j))).real();
  }
  return acc / n;
}

// Psi_1 as minus the residues at z = 1/p_i (simple poles, x > -M).
double psi1_residues(const std::vector<double>& rates, long x, int t) {
  const long k = t - static_cast<long>(rates.size()) + 1;
  std::vector<double> p;
  for (double q : rates) p.push_back(q / (1 - q));
  double r = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double z = 1 / p[i];
    double v = z * std::pow(z, static_cast<double>(k - x - 1)) * std::pow(z + 1, -static_cast<double>(k));
    for (std::size_t j = 0; j < p.size(); ++j)
      if (j != i) v /= 1 - p[j] * z;
    r += v;
  }
  return r;
}

// Windowed determinant with an optional conjugation c^{x2 - x1} and optional omission of phi.
double windowed_det(const FiniteKernel& K, const std::vector<int>& ts, const std::vector<long>& ells, double c,
                    bool drop_phi) {
  const int M = K.spec().M;
  std::vector<std::vector<long>> xs(ts.size());
  for (std::size_t n = 0; n < ts.size(); ++n)
    for (long x = ts[n] - M + 2 - ells[n]; x <= ts[n] - M + 1; ++x) xs[n].push_back(x);
  Eigen::Index total = 0;
  for (const auto& v : xs) total += static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXd A(total, total);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      Eigen::MatrixXd b = K.block_series(ts[i], xs[i], ts[j], xs[j]);
      for (Eigen::Index a = 0; a < b.rows(); ++a)
        for (Eigen::Index d = 0; d < b.cols(); ++d) {
          const long x1 = xs[i][static_cast<std::size_t>(a)], x2 = xs[j][static_cast<std::size_t>(d)];
          if (drop_phi) b(a, d) += phi(ts[i], ts[j], x1, x2);
          b(a, d) *= std::pow(c, static_cast<double>(x2 - x1));
        }
      A.block(r, col, b.rows(), b.cols()) = b;
      col += b.cols();
    }
    r += static_cast<Eigen::Index>(xs[i].size());
  }
  return det_identity_minus(A);
}

}  // namespace

TEST_CASE("phi") {
  CHECK(phi(3, 3, 0, 0) == 0);
  CHECK(phi(4, 2, 0, 1) == 0);
  CHECK(phi(0, 3, 0, 1) == 3);
  CHECK(phi(0, 3, 1, 0) == 0);
  for (int T = 1; T <= 6; ++T)
    for (long j = -3; j <= T + 3; ++j) CHECK(phi(0, T, 0, j) == doctest::Approx(phi_quadrature(T, j)).epsilon(1e-12));
}

TEST_CASE("phi semigroup in integers") {
  for (long t1 = 0; t1 <= 6; ++t1)
    for (long t2 = t1 + 1; t2 <= 7; ++t2)
      for (long t3 = t2 + 1; t3 <= 8; ++t3)
        for (long x3 = -2; x3 <= 10; ++x3) {
          boost::multiprecision::cpp_int s = 0;
          for (long x2 = -20; x2 <= 20; ++x2) s += phi_exact(t1, t2, 0, x2) * phi_exact(t2, t3, x2, x3);
          CHECK(s == phi_exact(t1, t3, 0, x3));
        }
}

TEST_CASE("Psi2 against a Laurent polynomial product") {
  // Psi2(x, t) = coefficient of w^x in (1+w)^k prod_i (1 - p_i / w), with p = 1/2 (q = 1/3).
  const int M = 3, t = 6;
  const long k = t - M + 1;
  const FiniteKernel K(spec_of({1.0 / 3, 1.0 / 3, 1.0 / 3}, t));
  std::map<long, Rational> poly{{0, 1}};
  for (long i = 0; i < k; ++i) {
    std::map<long, Rational> next;
    for (auto [e, c] : poly) {
      next[e] += c;
      next[e + 1] += c;
    }
    poly = next;
  }
  for (int i = 0; i < M; ++i) {
    std::map<long, Rational> next;
    for (auto [e, c] : poly) {
      next[e] += c;
      next[e - 1] -= c * Rational(1, 2);
    }
    poly = next;
  }
  for (long x = -M - 3; x <= k + 3; ++x) {
    const double want = poly.count(x) ? poly[x].convert_to<double>() : 0.0;
    CHECK(K.psi2(x, t) == doctest::Approx(want).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("Psi1 routes") {
  const FiniteKernel K(spec_of({0.3, 0.5}, 6));
  for (long x = -1; x <= 30; ++x) CHECK(K.psi1(x, 4) == doctest::Approx(psi1_residues({0.3, 0.5}, x, 4)).epsilon(1e-10));
  CHECK(K.psi1(1, 4) == doctest::Approx(psi1_residues({0.3, 0.5}, 1, 4)).epsilon(1e-10));

  const FiniteKernel L(spec_of({0.1, 0.2}, 6));
  for (long x = -6; x <= 12; ++x) {
    CHECK(L.psi1(x, 4) == doctest::Approx(L.psi1_series(x, 4)).epsilon(1e-10).scale(1e-3));
    if (x > -2) CHECK(L.psi1(x, 4) == doctest::Approx(psi1_residues({0.1, 0.2}, x, 4)).epsilon(1e-10));
  }
}

TEST_CASE("kernel routes and support") {
  const FiniteKernel K(spec_of({0.1, 0.2, 0.25}, 8));
  for (int t1 : {3, 5})
    for (int t2 : {3, 6})
      for (long x1 = -3; x1 <= 4; ++x1)
        for (long x2 = -3; x2 <= 4; ++x2)
          CHECK(K.kernel_series(t1, x1, t2, x2) == doctest::Approx(K.kernel_contour(t1, x1, t2, x2)).epsilon(1e-9).scale(1.0));
  // Psi2 support ends at k: columns past it vanish.
  for (long x2 = 5; x2 <= 12; ++x2) CHECK(K.kernel_series(5, 0, 5, x2) == 0.0);
  // For t1 < t2 the swapped circles carry phi implicitly.
  CHECK(K.kernel_contour(3, 0, 6, 1) == doctest::Approx(K.kernel_contour_swapped(3, 0, 6, 1)).epsilon(1e-10));
}

TEST_CASE("stay rates above 1/2 are rejected") {
  CHECK_THROWS_AS(FiniteKernel(spec_of({0.3, 0.6}, 4)), std::invalid_argument);
  CHECK_NOTHROW(FiniteKernel(spec_of({0.5, 0.5}, 4)));
}

TEST_CASE("probabilities: trivial values and laws") {
  CHECK(joint_probability(spec_of({0.3}, 1), {1}, {1}) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(std::abs(joint_probability(spec_of({0.3, 0.5}, 2), {2}, {2})) < 1e-12);
  CHECK(joint_probability(spec_of({0.3, 0.5}, 4), {4}, {0}) == 1.0);
  CHECK(joint_probability(spec_of({0.3, 0.5}, 4), {4}, {-3}) == 1.0);

  const SystemSpec s = spec_of({0.2, 0.35, 0.1}, 9);
  const FiniteKernel K(s);
  double prev = 1.0;
  for (long ell = 0; ell <= 8; ++ell) {
    const double p = joint_probability_detail(K, {9}, {ell}).value;
    CHECK(p >= -1e-12);
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
  for (long l1 = 1; l1 <= 4; ++l1)
    CHECK(joint_probability_detail(K, {5, 9}, {l1, 0}).value ==
          doctest::Approx(joint_probability_detail(K, {5}, {l1}).value).epsilon(1e-9).scale(1.0));
}

TEST_CASE("joint probability at the documented point") {
  const std::vector<Rational> rr{Rational(3, 10), Rational(1, 2)};
  const ExactDistribution ex = enumerate_exact_distribution(3, 2, rr);
  const double want = ex.joint_at_least({2, 4}, {1, 2}).convert_to<double>();
  CHECK(std::abs(joint_probability(spec_of({0.3, 0.5}, 4), {2, 4}, {1, 2}) - want) < 1e-8);
}

TEST_CASE("conjugation invariance and the role of phi") {
  const FiniteKernel K(spec_of({0.2, 0.4}, 6));
  const double base = windowed_det(K, {3, 6}, {2, 3}, 1.0, false);
  for (double c : {0.5, 2.0, 3.7}) CHECK(windowed_det(K, {3, 6}, {2, 3}, c, false) == doctest::Approx(base).epsilon(1e-10));
  const std::vector<Rational> rr{Rational(1, 5), Rational(2, 5)};
  const double exact = enumerate_exact_distribution(5, 2, rr).joint_at_least({3, 6}, {2, 3}).convert_to<double>();
  CHECK(std::abs(base - exact) < 1e-10);
  CHECK(std::abs(windowed_det(K, {3, 6}, {2, 3}, 1.0, true) - exact) > 1e-3);
}

TEST_CASE("enumeration oracle for every M*N <= 12") {
  const std::vector<Rational> pool{Rational(1, 5), Rational(1, 3), Rational(1, 4), Rational(1, 10)};
  for (int M = 1; M <= 4; ++M)
    for (int N = 1; M * N <= 12; ++N) {
      const std::vector<Rational> rr(pool.begin(), pool.begin() + M);
      std::vector<double> rd;
      for (const Rational& r : rr) rd.push_back(r.convert_to<double>());
      const int tmax = N + M - 1;
      const ExactDistribution ex = enumerate_exact_distribution(N, M, rr);
      const FiniteKernel K(spec_of(rd, tmax));
      // The contour reconciliation is exercised above; here the series route alone keeps the sweep fast.
      JointOptions opts;
      opts.reconcile = false;
      double worst = 0;
      for (int t = M; t <= tmax; ++t)
        for (long ell = 0; ell <= t - M + 2; ++ell)
          worst = std::max(worst, std::abs(joint_probability_detail(K, {t}, {ell}, opts).value -
                                           ex.prob_at_least(t, ell).convert_to<double>()));
      for (int t1 = M; t1 <= tmax; ++t1)
        for (int t2 = t1 + 1; t2 <= tmax; ++t2)
          for (long l1 = 1; l1 <= t1 - M + 1; ++l1)
            for (long l2 = 1; l2 <= t2 - M + 1; ++l2)
              worst = std::max(worst, std::abs(joint_probability_detail(K, {t1, t2}, {l1, l2}, opts).value -
                                               ex.joint_at_least({t1, t2}, {l1, l2}).convert_to<double>()));
      INFO("M=" << M << " N=" << N);
      CHECK(worst < 1e-8);
    }
}
