#include "tasep/limit_kernels.hpp"

#include "tasep/special.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace tasep {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

// Composite Gauss-Legendre nodes on [lo, hi] with panels of the given width.
void composite_rule(double lo, double hi, double width, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
  const double h = (hi - lo) / panels;
  Eigen::VectorXd px, pw;
  gauss_legendre(20, 0.0, 1.0, px, pw);
  x.resize(panels * 20);
  w.resize(panels * 20);
  for (int p = 0; p < panels; ++p)
    for (int k = 0; k < 20; ++k) {
      x[p * 20 + k] = lo + h * (p + px[k]);
      w[p * 20 + k] = h * pw[k];
    }
}

Eigen::MatrixXd airy_table(const Eigen::VectorXd& xs, const Eigen::VectorXd& lam, double sign) {
  Eigen::MatrixXd A(xs.size(), lam.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    for (Eigen::Index k = 0; k < lam.size(); ++k) A(i, k) = airy_ai(xs[i] + sign * lam[k]);
  return A;
}

// sum_k w_k exp(-decay * lam_k) Ai(xi1 + lam_k) Ai(xi2 + lam_k) over lam in [lo, hi].
Eigen::MatrixXd lambda_block(double decay, const Eigen::VectorXd& xs1, const Eigen::VectorXd& xs2, double lo,
                             double hi, double width) {
  Eigen::VectorXd lam, w;
  composite_rule(lo, hi, width, lam, w);
  for (Eigen::Index k = 0; k < lam.size(); ++k) w[k] *= std::exp(-decay * lam[k]);
  const Eigen::MatrixXd A1 = airy_table(xs1, lam, 1.0), A2 = airy_table(xs2, lam, 1.0);
  return A1 * w.asDiagonal() * A2.transpose();
}

double lowest(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return std::min(a.minCoeff(), b.minCoeff()); }
double highest(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return std::max(a.maxCoeff(), b.maxCoeff()); }

// Integral over the whole line of exp(s lam) Ai(a + lam) Ai(b + lam), s > 0.
double airy_gaussian(double s, double a, double b) {
  return std::exp(s * s * s / 12 - s * (a + b) / 2 - (a - b) * (a - b) / (4 * s)) / std::sqrt(4 * kPi * s);
}

Eigen::MatrixXd airy_kernel_block(const Eigen::VectorXd& xs1, const Eigen::VectorXd& xs2) {
  Eigen::MatrixXd K(xs1.size(), xs2.size());
  for (Eigen::Index i = 0; i < xs1.size(); ++i)
    for (Eigen::Index j = 0; j < xs2.size(); ++j) K(i, j) = airy_kernel(xs1[i], xs2[j]);
  return K;
}

Eigen::MatrixXd extended_airy_block(double tau1, const Eigen::VectorXd& xs1, double tau2,
                                    const Eigen::VectorXd& xs2) {
  const double d = tau1 - tau2;
  if (d == 0.0) return airy_kernel_block(xs1, xs2);
  const double low = lowest(xs1, xs2);
  if (d > 0.0) return lambda_block(d, xs1, xs2, 0.0, std::max(14.0 - low, 8.0), 0.25);
  const double s = -d;
  if (s >= 0.5) {
    const double reach = 45.0 / s + std::max(0.0, highest(xs1, xs2));
    return -lambda_block(d, xs1, xs2, -reach, 0.0, 0.2);
  }
  Eigen::MatrixXd K = lambda_block(d, xs1, xs2, 0.0, std::max(16.0 - low, 10.0) + 4.0, 0.25);
  for (Eigen::Index i = 0; i < xs1.size(); ++i)
    for (Eigen::Index j = 0; j < xs2.size(); ++j) K(i, j) -= airy_gaussian(s, xs1[i], xs2[j]);
  return K;
}

// Row factor of the K3 correction: integral over the negative half-line of
// exp(-tau lam) Ai(xi + lam).
double k3_row_factor(double tau, double xi) {
  Eigen::VectorXd lam, w;
  double sum = 0.0;
  if (tau <= -0.5) {
    composite_rule(0.0, 45.0 / -tau, 0.2, lam, w);
    for (Eigen::Index k = 0; k < lam.size(); ++k) sum += w[k] * std::exp(tau * lam[k]) * airy_ai(xi - lam[k]);
    return sum;
  }
  composite_rule(0.0, std::max(14.0 - xi, 8.0) + (tau < 0.0 ? 10.0 : 0.0), 0.25, lam, w);
  for (Eigen::Index k = 0; k < lam.size(); ++k) sum += w[k] * std::exp(-tau * lam[k]) * airy_ai(xi + lam[k]);
  return std::exp(tau * xi - tau * tau * tau / 3) - sum;
}

Eigen::MatrixXd k3_block(double tau1, const Eigen::VectorXd& xs1, double tau2, const Eigen::VectorXd& xs2) {
  Eigen::MatrixXd K = extended_airy_block(tau1, xs1, tau2, xs2);
  Eigen::VectorXd row(xs1.size()), col(xs2.size());
  for (Eigen::Index i = 0; i < xs1.size(); ++i) row[i] = k3_row_factor(tau1, xs1[i]);
  for (Eigen::Index j = 0; j < xs2.size(); ++j) col[j] = airy_ai(xs2[j]);
  return K + row * col.transpose();
}

double k3_vertex(double tau1, double xi1, const std::vector<double>& eta) {
  double a = std::numeric_limits<double>::infinity();
  for (double e : eta) a = std::min(a, e - tau1);
  return std::min(a - 1.0, std::sqrt(std::max(xi1, 0.0)));
}

std::vector<double> k3_left_factors(double tau1, double xi1, const std::vector<double>& eta, double vertex) {
  const cplx I(0.0, 1.0);
  std::vector<double> out;
  for (std::size_t j = 1; j <= eta.size(); ++j) {
    auto g = [&](cplx w) {
      cplx prod = 1.0;
      for (std::size_t k = 0; k < j; ++k) prod /= (eta[k] - tau1 + I * w);
      return prod;
    };
    out.push_back(airy_contour_integral(xi1, g, vertex).real());
  }
  return out;
}

Eigen::MatrixXd k3prime_block(double tau1, const Eigen::VectorXd& xs1, double tau2, const Eigen::VectorXd& xs2,
                              const std::vector<double>& eta, std::optional<double> vertex) {
  Eigen::MatrixXd K = extended_airy_block(tau1, xs1, tau2, xs2);
  const Eigen::Index n = static_cast<Eigen::Index>(eta.size());
  Eigen::MatrixXd A(xs1.size(), n), B(xs2.size(), n);
  for (Eigen::Index i = 0; i < xs1.size(); ++i) {
    const auto a = k3_left_factors(tau1, xs1[i], eta, vertex.value_or(k3_vertex(tau1, xs1[i], eta)));
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = a[static_cast<std::size_t>(j)];
  }
  for (Eigen::Index i = 0; i < xs2.size(); ++i) {
    const auto b = k3_right_factors(tau2, xs2[i], eta);
    for (Eigen::Index j = 0; j < n; ++j) B(i, j) = b[static_cast<std::size_t>(j)];
  }
  return K + A * B.transpose();
}

Eigen::VectorXd single(double x) { return Eigen::VectorXd::Constant(1, x); }

}  // namespace

double kernel_region1(double tau1, long x1, double tau2, long x2, bool closed_form) {
  auto p1 = [&](long x) { return closed_form ? psi1_closed(x, tau1) : psi1_quadrature(x, tau1); };
  double sum = 0.0;
  for (long m = 0; m <= x2; ++m) sum += p1(x1 - m) * psi2_limit(x2 - m, tau2);
  // For tau1 < tau2 the infinite series folds into the same finite sum minus a
  // Poisson-type transition term.
  if (tau1 < tau2 && x2 >= x1) {
    const long k = x2 - x1;
    sum -= std::pow(tau2 - tau1, static_cast<double>(k)) / boost::math::factorial<double>(static_cast<unsigned>(k));
  }
  return sum;
}

double region1_prob_onetime(long ell, double tau) {
  if (ell <= 0) return 1.0;
  if (ell > 20) throw std::invalid_argument("the subset expansion is limited to ell <= 20");
  const int n = static_cast<int>(ell);
  Eigen::MatrixXd K(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) K(a, b) = kernel_region1(tau, a, tau, b);
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int a = 0; a < n; ++a)
      if (mask & (1u << a)) idx.push_back(a);
    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd sub(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) sub(a, b) = K(idx[a], idx[b]);
    const double minor = k == 0 ? 1.0 : sub.determinant();
    total += (k % 2 ? -1.0 : 1.0) * minor;
  }
  return total;
}

double airy_kernel(double x, double y) {
  if (std::abs(x - y) < 1e-7) {
    const double m = 0.5 * (x + y);
    const double a = airy_ai(m), ap = airy_ai_prime(m);
    return ap * ap - m * a * a;
  }
  return (airy_ai(x) * airy_ai_prime(y) - airy_ai_prime(x) * airy_ai(y)) / (x - y);
}

double extended_airy(double tau1, double xi1, double tau2, double xi2) {
  return extended_airy_block(tau1, single(xi1), tau2, single(xi2))(0, 0);
}

double extended_airy_direct(double tau1, double xi1, double tau2, double xi2) {
  const double d = tau1 - tau2;
  const Eigen::VectorXd a = single(xi1), b = single(xi2);
  if (d >= 0.0) return lambda_block(d, a, b, 0.0, std::max(20.0 - std::min(xi1, xi2), 10.0), 0.1)(0, 0);
  const double reach = 60.0 / -d + std::max({0.0, xi1, xi2});
  return -lambda_block(d, a, b, -reach, 0.0, 0.1)(0, 0);
}

double kernel_K3(double tau1, double xi1, double tau2, double xi2) {
  return k3_block(tau1, single(xi1), tau2, single(xi2))(0, 0);
}

double kernel_K3prime(double tau1, double xi1, double tau2, double xi2, const std::vector<double>& eta,
                      std::optional<double> vertex) {
  for (double e : eta)
    if (e < 0.0) throw std::invalid_argument("eta parameters must be nonnegative");
  if (vertex) {
    for (double e : eta)
      if (*vertex >= e - tau1) throw std::invalid_argument("contour vertex must lie below every pole");
  }
  return k3prime_block(tau1, single(xi1), tau2, single(xi2), eta, vertex)(0, 0);
}

std::vector<double> k3_right_factors(double tau, double xi, const std::vector<double>& eta) {
  // Current factor is a(xi) Ai(xi) + b(xi) Ai'(xi); coefficients in powers of xi.
  std::vector<double> a{1.0}, b{0.0};
  auto eval = [xi](const std::vector<double>& p) {
    double v = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * xi + *it;
    return v;
  };
  auto derivative = [](const std::vector<double>& p) {
    std::vector<double> d(std::max<std::size_t>(p.size(), 2) - 1, 0.0);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
    return d;
  };
  const double ai = airy_ai(xi), aip = airy_ai_prime(xi);
  std::vector<double> out;
  for (std::size_t j = 0; j < eta.size(); ++j) {
    out.push_back(eval(a) * ai + eval(b) * aip);
    if (j + 1 == eta.size()) break;
    const double c = eta[j] - tau;
    // (c + d/dxi)(a Ai + b Ai') = (c a + a' + xi b) Ai + (c b + a + b') Ai'.
    const std::size_t len = std::max(a.size(), b.size()) + 1;
    std::vector<double> na(len, 0.0), nb(len, 0.0);
    const auto da = derivative(a), db = derivative(b);
    for (std::size_t k = 0; k < a.size(); ++k) {
      na[k] += c * a[k];
      nb[k] += a[k];
    }
    for (std::size_t k = 0; k < b.size(); ++k) {
      na[k + 1] += b[k];
      nb[k] += c * b[k];
    }
    for (std::size_t k = 0; k < da.size(); ++k) na[k] += da[k];
    for (std::size_t k = 0; k < db.size(); ++k) nb[k] += db[k];
    a = std::move(na);
    b = std::move(nb);
  }
  return out;
}

std::vector<double> k3_right_factors_contour(double tau, double xi, const std::vector<double>& eta) {
  const cplx I(0.0, 1.0);
  std::vector<double> out;
  for (std::size_t j = 0; j < eta.size(); ++j) {
    auto g = [&](cplx w) {
      cplx prod = 1.0;
      for (std::size_t k = 0; k < j; ++k) prod *= (eta[k] - tau + I * w);
      return prod;
    };
    out.push_back(airy_contour_integral(xi, g).real());
  }
  return out;
}

double ou_transition(double tau1, double xi1, double tau2, double xi2) {
  const double e = std::exp(tau1 - tau2), v = 1.0 - e * e;
  const double z = xi2 - e * xi1;
  return std::exp(-z * z / v) / std::sqrt(kPi * v);
}

double kernel_KG(double tau1, double xi1, double tau2, double xi2) {
  const double f = std::exp(-xi2 * xi2) / std::sqrt(kPi);
  return tau1 < tau2 ? f - ou_transition(tau1, xi1, tau2, xi2) : f;
}

RankNKernel::RankNKernel(std::vector<double> eps) : eps_(std::move(eps)) {
  if (eps_.empty()) throw std::invalid_argument("rank-n kernel needs at least one parameter");
  for (double e : eps_)
    if (e < 0.0 || !std::isfinite(e)) throw std::invalid_argument("epsilon parameters must be finite and >= 0");
}

namespace {

using Series = std::vector<double>;

Series series_mul(const Series& a, const Series& b, std::size_t order) {
  Series c(order, 0.0);
  for (std::size_t i = 0; i < std::min(a.size(), order); ++i)
    for (std::size_t j = 0; j + i < order && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// exp(u(d)) for u(d) = u1 d + u2 d^2, truncated.
Series series_exp(double u1, double u2, std::size_t order) {
  Series f(order, 0.0);
  f[0] = 1.0;
  for (std::size_t n = 1; n < order; ++n) {
    double acc = u1 * f[n - 1];
    if (n >= 2) acc += 2.0 * u2 * f[n - 2];
    f[n] = acc / static_cast<double>(n);
  }
  return f;
}

// (d0 + d)^{-m}, truncated.
Series series_inverse_power(double d0, int m, std::size_t order) {
  Series f(order, 0.0);
  double coef = std::pow(d0, -m);
  for (std::size_t k = 0; k < order; ++k) {
    f[k] = coef;
    coef *= -(m + static_cast<double>(k)) / ((static_cast<double>(k) + 1.0) * d0);
  }
  return f;
}

struct Pole {
  double at;
  int mult;
};

}  // namespace

Eigen::MatrixXd RankNKernel::block(double tau1, const Eigen::VectorXd& xs1, double tau2,
                                   const Eigen::VectorXd& xs2) const {
  const double n = static_cast<double>(eps_.size());
  const double delta = tau1 - tau2;
  std::map<double, int> grouped;
  for (double e : eps_) ++grouped[-std::exp(tau1) * e];
  std::vector<Pole> poles;
  for (const auto& [at, m] : grouped) poles.push_back({at, m});

  // Residue at w1 = a of a multiplicity-m pole, written as
  // sum_k alpha_{a,k}(xi1) / (c - a)^{k+1} with c = e^{delta} w2.
  std::vector<std::pair<std::size_t, int>> terms;
  for (std::size_t p = 0; p < poles.size(); ++p)
    for (int k = 0; k < poles[p].mult; ++k) terms.emplace_back(p, k);
  const Eigen::Index T = static_cast<Eigen::Index>(terms.size());

  Eigen::MatrixXd alpha(xs1.size(), T);
  for (Eigen::Index i = 0; i < xs1.size(); ++i) {
    const double xi1 = xs1[i];
    Eigen::Index col = 0;
    for (const Pole& pole : poles) {
      const std::size_t order = static_cast<std::size_t>(pole.mult);
      Series rest(order, 0.0);
      rest[0] = 1.0;
      for (const Pole& other : poles)
        if (other.at != pole.at)
          rest = series_mul(rest, series_inverse_power(pole.at - other.at, other.mult, order), order);
      const double a = pole.at;
      const Series ex = series_exp(2 * xi1 - 2 * a, -1.0, order);
      const Series er = series_mul(ex, rest, order);
      const double scale = std::exp(n * tau1 - a * a + 2 * a * xi1);
      for (int k = 0; k < pole.mult; ++k) alpha(i, col++) = scale * er[order - 1 - static_cast<std::size_t>(k)];
    }
  }

  // beta_{a,k}(xi2) = (1/pi) * integral dy of exp(w^2 - 2 w xi2) prod_j (e^{-tau2} w + eps_j) / (e^{delta} w - a)^{k+1}
  // on w = c0 + i y.
  const double h = 0.02, ymax = 9.0;
  const long nodes = static_cast<long>(std::ceil(ymax / h));
  Eigen::MatrixXd beta(xs2.size(), T);
  const double ed = std::exp(delta), et2 = std::exp(-tau2);
  for (Eigen::Index j = 0; j < xs2.size(); ++j) {
    const double xi2 = xs2[j];
    const double c0 = std::max(xi2, 0.3);
    std::vector<cplx> acc(static_cast<std::size_t>(T), 0.0);
    for (long k = -nodes; k <= nodes; ++k) {
      const cplx w(c0, k * h);
      cplx base = std::exp(w * w - 2.0 * w * xi2);
      for (double e : eps_) base *= (et2 * w + e);
      for (Eigen::Index t = 0; t < T; ++t) {
        const auto [p, m] = terms[static_cast<std::size_t>(t)];
        acc[static_cast<std::size_t>(t)] += base * std::pow(ed * w - poles[p].at, -(m + 1));
      }
    }
    for (Eigen::Index t = 0; t < T; ++t) beta(j, t) = acc[static_cast<std::size_t>(t)].real() * h / kPi;
  }

  Eigen::MatrixXd K = alpha * beta.transpose();
  if (tau1 < tau2)
    for (Eigen::Index i = 0; i < xs1.size(); ++i)
      for (Eigen::Index j = 0; j < xs2.size(); ++j) K(i, j) -= ou_transition(tau1, xs1[i], tau2, xs2[j]);
  return K;
}

double RankNKernel::operator()(double tau1, double xi1, double tau2, double xi2) const {
  return block(tau1, single(xi1), tau2, single(xi2))(0, 0);
}

double kernel_Kn(double tau1, double xi1, double tau2, double xi2, const std::vector<double>& eps) {
  return RankNKernel(eps)(tau1, xi1, tau2, xi2);
}

double kernel_fixedM(double tau1, double xi1, double tau2, double xi2, const std::vector<double>& eps) {
  return kernel_Kn(tau1, xi1, tau2, xi2, eps);
}

std::string kernel_kind_name(KernelKind k) {
  switch (k) {
    case KernelKind::DiscreteHermite: return "discrete-hermite";
    case KernelKind::ExtendedAiry: return "extended-airy";
    case KernelKind::PerturbedAiry: return "perturbed-airy";
    case KernelKind::OUGaussian: return "ou-gaussian";
    case KernelKind::RankN: return "rank-n";
  }
  return "unknown";
}

KernelKind kernel_kind_from_name(const std::string& name) {
  for (KernelKind k : {KernelKind::DiscreteHermite, KernelKind::ExtendedAiry, KernelKind::PerturbedAiry,
                       KernelKind::OUGaussian, KernelKind::RankN})
    if (kernel_kind_name(k) == name) return k;
  throw std::invalid_argument("unknown kernel kind: " + name);
}

double LimitKernelHandle::operator()(double tau1, double x1, double tau2, double x2) const {
  switch (kind) {
    case KernelKind::DiscreteHermite:
      return kernel_region1(tau1, std::lround(x1), tau2, std::lround(x2));
    case KernelKind::ExtendedAiry: return extended_airy(tau1, x1, tau2, x2);
    case KernelKind::PerturbedAiry:
      return params.empty() ? kernel_K3(tau1, x1, tau2, x2) : kernel_K3prime(tau1, x1, tau2, x2, params);
    case KernelKind::OUGaussian: return kernel_KG(tau1, x1, tau2, x2);
    case KernelKind::RankN: return kernel_Kn(tau1, x1, tau2, x2, params);
  }
  throw std::logic_error("unhandled kernel kind");
}

KernelBlock LimitKernelHandle::block() const {
  switch (kind) {
    case KernelKind::ExtendedAiry: return extended_airy_block;
    case KernelKind::PerturbedAiry:
      if (params.empty()) return k3_block;
      return [eta = params](double t1, const Eigen::VectorXd& a, double t2, const Eigen::VectorXd& b) {
        return k3prime_block(t1, a, t2, b, eta, std::nullopt);
      };
    case KernelKind::RankN: {
      const RankNKernel k(params);
      return [k](double t1, const Eigen::VectorXd& a, double t2, const Eigen::VectorXd& b) {
        return k.block(t1, a, t2, b);
      };
    }
    default: {
      const LimitKernelHandle self = *this;
      return pointwise([self](double t1, double a, double t2, double b) { return self(t1, a, t2, b); });
    }
  }
}

}  // namespace tasep
