#include "tasep/special.hpp"

#include "tasep/fredholm.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tasep {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

struct UnitRule {
  Eigen::VectorXd x, w;
  UnitRule() { gauss_legendre(20, 0.0, 1.0, x, w); }
};

const UnitRule& unit_rule() {
  static const UnitRule rule;
  return rule;
}

template <class F>
auto panel(const F& f, double a, double b) {
  const UnitRule& r = unit_rule();
  const double h = b - a;
  decltype(f(a)) sum{};
  for (Eigen::Index k = 0; k < r.x.size(); ++k) sum += r.w[k] * f(a + h * r.x[k]);
  return sum * h;
}

template <class F>
double integrate(const F& f, double a, double b, double width) {
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / width)));
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += panel(f, a + k * h, a + (k + 1) * h);
  return sum;
}

}  // namespace

double airy_ai(double x) { return boost::math::airy_ai(x); }
double airy_ai_prime(double x) { return boost::math::airy_ai_prime(x); }

cplx airy_contour_integral(double xi, const std::function<cplx(cplx)>& g, double y0) {
  const cplx I(0.0, 1.0);
  const cplx right = std::polar(1.0, kPi / 6), left = std::polar(1.0, 5 * kPi / 6);
  auto integrand = [&](double s) {
    const cplx wr = I * y0 + s * right, wl = I * y0 + s * left;
    const cplx fr = std::exp(I * xi * wr + I * wr * wr * wr / 3.0) * g(wr) * right;
    const cplx fl = std::exp(I * xi * wl + I * wl * wl * wl / 3.0) * g(wl) * left;
    return fr - fl;
  };
  const double width = 0.25;
  const double s_min = 3.0 + std::sqrt(std::abs(xi)) + std::abs(y0);
  cplx total = 0.0;
  double peak = 0.0;
  for (double s = 0.0; s < 80.0; s += width) {
    total += panel(integrand, s, s + width);
    const double m = std::abs(integrand(s + width));
    peak = std::max(peak, std::abs(integrand(s)));
    if (s > s_min && m < 1e-18 * std::max(peak, 1e-300)) break;
  }
  return total / (2 * kPi);
}

double airy_ai_contour(double x) {
  return airy_contour_integral(x, [](cplx) { return cplx(1.0); }).real();
}

double airy_ai_tail(double x) {
  auto ai = [](double t) { return airy_ai(t); };
  if (x >= 0.0) return integrate(ai, x, x + 30.0, 0.5);
  return 1.0 / 3.0 + integrate(ai, x, 0.0, 0.25);
}

double hermite_H(int n, double x) {
  if (n < 0) throw std::invalid_argument("negative Hermite degree");
  double prev = 1.0, cur = 2.0 * x;
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_He(int n, double x) {
  if (n < 0) throw std::invalid_argument("negative Hermite degree");
  double prev = 1.0, cur = x;
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_H_contour(int n, double x) {
  const int nodes = 128 + 2 * n;
  cplx sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double th = 2 * kPi * k / nodes;
    const cplx z = std::polar(1.0, th);
    sum += std::exp(2.0 * x * z - z * z) * std::polar(1.0, -n * th);
  }
  return boost::math::factorial<double>(static_cast<unsigned>(n)) * sum.real() / nodes;
}

double psi1_quadrature(long x, double tau, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("the vertical line must sit at Re z > 0");
  const double h = std::min(0.05, eps / 20.0);
  auto f = [&](double y) {
    const cplx z(eps, y);
    return std::exp(z * z / 2.0 - tau * z + static_cast<double>(x - 1) * std::log(z)).real();
  };
  double peak = std::abs(f(0.0));
  double sum = f(0.0);
  const double y_min = 6.0 + std::sqrt(static_cast<double>(std::abs(x)));
  for (long k = 1;; ++k) {
    const double v = f(k * h);
    sum += 2.0 * v;
    peak = std::max(peak, std::abs(v));
    if (k * h > y_min && std::abs(v) < 1e-19 * peak) break;
    if (k * h > 200.0) throw std::runtime_error("psi1 quadrature did not decay");
  }
  return sum * h / (2 * kPi);
}

double psi1_closed(long x, double tau) {
  const double gauss = std::exp(-tau * tau / 2) / std::sqrt(2 * kPi);
  if (x >= 1) return gauss * hermite_He(static_cast<int>(x - 1), tau);
  double before = gauss;                               // psi_1(1)
  double cur = 0.5 * std::erfc(tau / std::sqrt(2.0));  // psi_1(0)
  for (long j = 1; j <= -x; ++j) {
    const double next = (before - tau * cur) / static_cast<double>(j);
    before = cur;
    cur = next;
  }
  return cur;
}

double psi2_limit(long x, double tau) {
  if (x < 0) return 0.0;
  const int n = static_cast<int>(x);
  return std::pow(2.0, -0.5 * n) * hermite_H(n, tau / std::sqrt(2.0)) /
         boost::math::factorial<double>(static_cast<unsigned>(n));
}

double parabolic_D(long n, double tau) {
  return std::sqrt(2 * kPi) * std::exp(tau * tau / 4) * psi1_quadrature(n + 1, tau);
}

double parabolic_D0(long n) {
  if (n < -1) throw std::invalid_argument("initial values are tabulated for n >= -1");
  if (n == -1) return std::sqrt(kPi / 2);
  static const double sines[4] = {0.0, 1.0, 0.0, -1.0};
  const double s = sines[(n + 1) % 4];
  if (s == 0.0) return 0.0;
  return std::pow(2.0, (n + 1) / 2.0) / std::sqrt(2 * kPi) * s * boost::math::tgamma((n + 1) / 2.0);
}

}  // namespace tasep
