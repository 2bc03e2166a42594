#include "tasep/core.hpp"
#include "tasep/limit_kernels.hpp"
#include "tasep/scaling.hpp"
#include "tasep/special.hpp"

#include <doctest.h>

#include <boost/math/special_functions/airy.hpp>

#include <cmath>
#include <numbers>

using namespace tasep;

namespace {

// Maclaurin series of Ai, usable for |x| <= 3.
double ai_series(double x) {
  const double c1 = 0.355028053887817239, c2 = 0.258819403792806798;
  double f = 1, g = x, tf = 1, tg = x;
  for (int k = 0; k < 60; ++k) {
    tf *= x * x * x / ((3 * k + 2) * (3 * k + 3));
    tg *= x * x * x / ((3 * k + 3) * (3 * k + 4));
    f += tf;
    g += tg;
  }
  return c1 * f - c2 * g;
}

// Integral over [0, inf) of exp(-d lam) Ai(x + lam) Ai(y + lam) by the midpoint rule.
double airy_lambda_integral(double d, double x, double y) {
  const double h = 1e-3;
  double s = 0;
  for (double lam = h / 2; lam < 30.0; lam += h)
    s += std::exp(-d * lam) * boost::math::airy_ai(x + lam) * boost::math::airy_ai(y + lam);
  return s * h;
}

double weber_residual(long n, double tau) {
  const double h = 1e-3;
  const double d2 = (parabolic_D(n, tau + h) - 2 * parabolic_D(n, tau) + parabolic_D(n, tau - h)) / (h * h);
  return d2 + (n + 0.5 - tau * tau / 4) * parabolic_D(n, tau);
}

}  // namespace

TEST_CASE("Airy function") {
  for (double x : {-3.0, -1.5, 0.0, 0.7, 2.0, 3.0}) {
    CHECK(airy_ai(x) == doctest::Approx(ai_series(x)).epsilon(1e-12).scale(1e-3));
    CHECK(airy_ai_contour(x) == doctest::Approx(ai_series(x)).epsilon(1e-10).scale(1e-3));
  }
  CHECK(airy_ai(0.0) == doctest::Approx(0.3550280539).epsilon(1e-10));
  // Ai'' = x Ai
  const double h = 1e-3;
  for (double x : {-2.0, 0.5, 1.5}) {
    const double d2 = (airy_ai(x + h) - 2 * airy_ai(x) + airy_ai(x - h)) / (h * h);
    CHECK(std::abs(d2 - x * airy_ai(x)) < 1e-6);
  }
  CHECK(airy_ai_tail(0.0) == doctest::Approx(1.0 / 3).epsilon(1e-10));
  double tail = 0;
  for (double x = -40.0 + 5e-4; x < 30.0; x += 1e-3) tail += boost::math::airy_ai(x) * 1e-3;
  CHECK(airy_ai_tail(-40.0) == doctest::Approx(tail).epsilon(1e-6));
}

TEST_CASE("Hermite polynomials") {
  for (double x : {-1.3, 0.0, 0.4, 2.1}) {
    CHECK(hermite_H(3, x) == doctest::Approx(8 * x * x * x - 12 * x));
    CHECK(hermite_He(3, x) == doctest::Approx(x * x * x - 3 * x));
    for (int n = 0; n <= 8; ++n)
      CHECK(hermite_H_contour(n, x) == doctest::Approx(hermite_H(n, x)).epsilon(1e-10).scale(1.0));
  }
  CHECK(psi2_limit(2, 1.7) == doctest::Approx((1.7 * 1.7 - 1) / 2));
  CHECK(psi2_limit(-1, 0.3) == 0.0);
}

TEST_CASE("psi1: quadrature and closed form") {
  for (double tau : {-1.5, 0.0, 0.7, 2.0})
    for (long x = -5; x <= 6; ++x) {
      CHECK(psi1_quadrature(x, tau) == doctest::Approx(psi1_closed(x, tau)).epsilon(1e-10).scale(1.0));
      CHECK(psi1_quadrature(x, tau, 2.5) == doctest::Approx(psi1_closed(x, tau)).epsilon(1e-9).scale(1.0));
    }
  CHECK(psi1_closed(0, 0.0) == doctest::Approx(0.5));
  CHECK_THROWS(psi1_quadrature(1, 0.0, -1.0));
}

TEST_CASE("parabolic cylinder functions") {
  for (long n = -1; n <= 6; ++n) CHECK(parabolic_D(n, 0.0) == doctest::Approx(parabolic_D0(n)).epsilon(1e-10).scale(1.0));
  for (double tau : {-1.0, 0.3, 1.8}) {
    CHECK(parabolic_D(0, tau) == doctest::Approx(std::exp(-tau * tau / 4)).epsilon(1e-10));
    CHECK(parabolic_D(1, tau) == doctest::Approx(tau * std::exp(-tau * tau / 4)).epsilon(1e-10).scale(1.0));
    CHECK(parabolic_D(-1, tau) ==
          doctest::Approx(std::exp(tau * tau / 4) * std::sqrt(std::numbers::pi / 2) * std::erfc(tau / std::sqrt(2.0)))
              .epsilon(1e-10));
    for (long n : {-1L, 0L, 2L, 3L}) CHECK(std::abs(weber_residual(n, tau)) < 1e-5);
  }
}

TEST_CASE("region 1 kernel") {
  for (double tau : {-1.0, 0.0, 0.8})
    for (long x1 = -2; x1 <= 4; ++x1)
      for (long x2 = -2; x2 <= 4; ++x2) {
        CHECK(kernel_region1(tau, x1, tau, x2) ==
              doctest::Approx(kernel_region1(tau, x1, tau, x2, true)).epsilon(1e-10).scale(1.0));
        CHECK(kernel_region1(tau, x1, tau + 0.5, x2) ==
              doctest::Approx(kernel_region1(tau, x1, tau + 0.5, x2, true)).epsilon(1e-10).scale(1.0));
      }
  for (double tau : {-1.0, 0.0, 1.3}) {
    // With one site the determinant is 1 - psi1(0) psi2(0).
    CHECK(region1_prob_onetime(1, tau) == doctest::Approx(1 - 0.5 * std::erfc(tau / std::sqrt(2.0))).epsilon(1e-10));
    double prev = 1.0;
    for (long ell = 0; ell <= 8; ++ell) {
      const double p = region1_prob_onetime(ell, tau);
      CHECK(p <= prev + 1e-12);
      CHECK(p >= -1e-12);
      prev = p;
    }
  }
  CHECK(region1_prob_onetime(3, 1.0) >= region1_prob_onetime(3, 0.0));
  CHECK_THROWS(region1_prob_onetime(21, 0.0));
}

TEST_CASE("extended Airy kernel") {
  for (double x : {-2.0, 0.0, 1.5})
    for (double y : {-1.0, 0.0, 2.0}) {
      CHECK(airy_kernel(x, y) == doctest::Approx(airy_lambda_integral(0.0, x, y)).epsilon(1e-6).scale(1.0));
      CHECK(extended_airy(0.3, x, 0.3, y) == doctest::Approx(airy_kernel(x, y)).epsilon(1e-12));
      CHECK(extended_airy(0.5, x, -0.2, y) == doctest::Approx(airy_lambda_integral(0.7, x, y)).epsilon(1e-6).scale(1.0));
      for (double d : {0.2, 0.45, 0.9})
        CHECK(extended_airy(0.0, x, d, y) == doctest::Approx(extended_airy_direct(0.0, x, d, y)).epsilon(1e-8).scale(1.0));
    }
  // Christoffel-Darboux on the diagonal
  CHECK(airy_kernel(0.4, 0.4) == doctest::Approx(airy_kernel(0.4, 0.4 + 1e-5)).epsilon(1e-4));
}

TEST_CASE("region 3 kernels") {
  for (double tau : {-0.5, 0.2})
    for (double xi : {-1.0, 0.5}) {
      const std::vector<double> eta{0.3, 1.1, 1.1};
      const auto a = k3_right_factors(tau, xi, eta), b = k3_right_factors_contour(tau, xi, eta);
      REQUIRE(a.size() == b.size());
      for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-9).scale(1.0));
      CHECK(a.front() == doctest::Approx(airy_ai(xi)));
    }
  // The value does not depend on where the w1 contour vertex sits below the poles.
  for (double xi1 : {-1.0, 0.5})
    CHECK(kernel_K3prime(0.1, xi1, -0.2, 0.3, {0.6, 1.2}) ==
          doctest::Approx(kernel_K3prime(0.1, xi1, -0.2, 0.3, {0.6, 1.2}, -0.8)).epsilon(1e-9).scale(1.0));
  CHECK_THROWS(kernel_K3prime(0.0, 0.0, 0.0, 0.0, {-0.1}));
  CHECK_THROWS(kernel_K3prime(0.0, 0.0, 0.0, 0.0, {0.5}, 0.7));
  // Equal-time K3 is a rank-one perturbation of the Airy kernel.
  CHECK(kernel_K3(0.0, 0.2, 0.0, 0.2) != doctest::Approx(airy_kernel(0.2, 0.2)));
}

TEST_CASE("Gaussian kernel of region 4") {
  const double f = std::exp(-0.49) / std::sqrt(std::numbers::pi);
  CHECK(kernel_KG(0.5, 3.0, 0.1, 0.7) == doctest::Approx(f));
  CHECK(kernel_KG(0.5, -2.0, 0.1, 0.7) == doctest::Approx(f));
  CHECK(kernel_KG(0.1, -2.0, 0.5, 0.7) == doctest::Approx(f - ou_transition(0.1, -2.0, 0.5, 0.7)));
  // Transition density: unit mass and Chapman-Kolmogorov.
  const double h = 1e-3;
  double mass = 0, ck = 0;
  for (double z = -10; z <= 10; z += h) {
    mass += ou_transition(0.0, 0.4, 0.3, z) * h;
    ck += ou_transition(0.0, 0.4, 0.3, z) * ou_transition(0.3, z, 0.9, -0.2) * h;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ck == doctest::Approx(ou_transition(0.0, 0.4, 0.9, -0.2)).epsilon(1e-9));

  const RankNKernel k1({0.0});
  for (double x : {-1.0, 0.0, 1.2})
    CHECK(k1(0.0, x, 0.4, 0.3) == doctest::Approx(kernel_KG(0.0, x, 0.4, 0.3)).epsilon(1e-9).scale(1.0));
  CHECK_THROWS(RankNKernel({}));
  CHECK_THROWS(RankNKernel({-0.1}));
}

TEST_CASE("kernel handles") {
  for (KernelKind k : {KernelKind::DiscreteHermite, KernelKind::ExtendedAiry, KernelKind::PerturbedAiry,
                       KernelKind::OUGaussian, KernelKind::RankN})
    CHECK(kernel_kind_from_name(kernel_kind_name(k)) == k);
  CHECK_THROWS(kernel_kind_from_name("nope"));
  const LimitKernelHandle h{KernelKind::ExtendedAiry, {}};
  Eigen::VectorXd xs(2);
  xs << -0.5, 0.8;
  const Eigen::MatrixXd b = h.block()(0.0, xs, 0.3, xs);
  CHECK(b(1, 0) == doctest::Approx(extended_airy(0.0, 0.8, 0.3, -0.5)).epsilon(1e-12));
}

TEST_CASE("scaling maps") {
  CHECK(D_G(u_from_region4_tau(0.7, 0.1, 0.2), 0.1, 0.2) == doctest::Approx(std::exp(0.7)).epsilon(1e-10));
  CHECK(u_from_region4_tau(-5.0, 0.1, 0.2) > u_critical(0.1, 0.2));
  for (int M : {200, 1000}) {
    ScaledExperiment e;
    e.region = Region::R2;
    e.M = M;
    e.u = 2.0;
    e.taus = {0.0, 0.5};
    e.ss = {-1.0, 0.5};
    const LatticeSetup ls = scaling_map(e);
    REQUIRE(ls.times.size() == 2);
    CHECK(ls.times[0] == 2 * M);
    CHECK(ls.times[1] > ls.times[0]);
    for (std::size_t i = 0; i < 2; ++i) {
      // ell is the nearest integer to the unscaled threshold.
      const double half = 0.5 / (D_of_u(2.0, 0.1) * std::cbrt(M));
      CHECK(std::abs(inverse_map(e, ls.times[i], static_cast<double>(ls.ells[i])) - e.ss[i]) <= half + 1e-12);
      CHECK(std::abs(ls.effective_taus[i] - e.taus[i]) < 2.0 / std::pow(M, 2.0 / 3));
    }
  }
  ScaledExperiment bad;
  bad.region = Region::R2;
  bad.u = 0.5;
  CHECK_THROWS_WITH_AS(bad.check_admissible(), "R2 not admissible: requires u > 1/(1-q)", std::invalid_argument);
  ScaledExperiment r3;
  r3.region = Region::R3;
  r3.u = 10.0;
  CHECK_THROWS_WITH_AS(r3.check_admissible(), "R3 not admissible: requires qbar > q", std::invalid_argument);
  r3.qbar = 0.2;
  CHECK_NOTHROW(r3.check_admissible());
  for (Region r : {Region::R1, Region::R2, Region::R3, Region::R3Degenerate, Region::R4, Region::R4Degenerate,
                   Region::FixedM, Region::ContinuousR2})
    CHECK(region_from_name(region_name(r)) == r);
}
