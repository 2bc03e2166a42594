#include "tasep/fredholm.hpp"

#include "tasep/limit_kernels.hpp"

#include <cmath>
using std::isnan;  // pchip.hpp in Boost 1.74 calls unqualified isnan
#include <boost/math/interpolators/pchip.hpp>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace tasep {

double det_identity_minus(const Eigen::MatrixXd& K) {
  if (K.size() == 0) return 1.0;
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(K.rows(), K.cols()) - K;
  return A.partialPivLu().determinant();
}

double det_discrete(const std::vector<DiscreteWindow>& windows, const DiscreteKernel& K) {
  std::vector<std::pair<int, long>> points;
  for (const DiscreteWindow& w : windows)
    for (long x = w.lo + 1; x <= w.hi; ++x) points.emplace_back(w.time, x);
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& [t1, x1] = points[static_cast<std::size_t>(i)];
      const auto& [t2, x2] = points[static_cast<std::size_t>(j)];
      M(i, j) = K(t1, x1, t2, x2);
    }
  return det_identity_minus(M);
}

KernelBlock pointwise(PointKernel k) {
  return [k = std::move(k)](double t1, const Eigen::VectorXd& xs1, double t2, const Eigen::VectorXd& xs2) {
    Eigen::MatrixXd B(xs1.size(), xs2.size());
    for (Eigen::Index i = 0; i < xs1.size(); ++i)
      for (Eigen::Index j = 0; j < xs2.size(); ++j) B(i, j) = k(t1, xs1[i], t2, xs2[j]);
    return B;
  };
}

void gauss_legendre(int order, double a, double b, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order)), &gsl_integration_glfixed_table_free);
  if (!table) throw std::runtime_error("Gauss-Legendre table allocation failed");
  x.resize(order);
  w.resize(order);
  for (int k = 0; k < order; ++k) {
    double xi = 0, wi = 0;
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(k), &xi, &wi, table.get());
    x[k] = xi;
    w[k] = wi;
  }
}

double det_nystrom(const KernelBlock& K, const std::vector<ContinuousWindow>& windows, int order, double cutoff) {
  if (windows.empty()) return 1.0;
  const std::size_t m = windows.size();
  std::vector<Eigen::VectorXd> xs(m), ws(m);
  for (std::size_t j = 0; j < m; ++j) gauss_legendre(order, windows[j].s, windows[j].s + cutoff, xs[j], ws[j]);
  const Eigen::Index n = static_cast<Eigen::Index>(m) * order;
  Eigen::MatrixXd A(n, n);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const Eigen::MatrixXd blk = K(windows[a].tau, xs[a], windows[b].tau, xs[b]);
      const Eigen::VectorXd ra = ws[a].cwiseSqrt(), rb = ws[b].cwiseSqrt();
      A.block(static_cast<Eigen::Index>(a) * order, static_cast<Eigen::Index>(b) * order, order, order) =
          ra.asDiagonal() * blk * rb.asDiagonal();
    }
  return det_identity_minus(A);
}

NystromResult det_continuous(const KernelBlock& K, const std::vector<ContinuousWindow>& windows,
                             const NystromOptions& opts) {
  NystromResult r;
  int n = opts.order;
  double L = opts.cutoff;
  double base = det_nystrom(K, windows, n, L);
  for (int round = 0; round <= opts.max_refinements; ++round) {
    const double finer = det_nystrom(K, windows, 2 * n, L);
    const double longer = det_nystrom(K, windows, 2 * n, 2 * L);
    r.coarse = base;
    r.value = longer;
    r.order = 2 * n;
    r.cutoff = 2 * L;
    const bool order_ok = std::abs(finer - base) < opts.tol;
    const bool cutoff_ok = std::abs(longer - finer) < opts.tol;
    if (order_ok && cutoff_ok) {
      r.stable = true;
      return r;
    }
    if (!order_ok) n *= 2;
    if (!cutoff_ok) L *= 2;
    base = det_nystrom(K, windows, n, L);
  }
  return r;
}

double det_continuous_value(const KernelBlock& K, const std::vector<ContinuousWindow>& windows,
                            const NystromOptions& opts) {
  const NystromResult r = det_continuous(K, windows, opts);
  if (!r.stable) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "Nystrom determinant not stable: " << r.coarse << " vs " << r.value;
    throw std::runtime_error(msg.str());
  }
  return r.value;
}

NystromResult tw_gue_cdf_detail(double s, const NystromOptions& opts) {
  return det_continuous(LimitKernelHandle{KernelKind::ExtendedAiry, {}}.block(), {{0.0, s}}, opts);
}

NystromResult goe2_cdf_detail(double s, const NystromOptions& opts) {
  return det_continuous(LimitKernelHandle{KernelKind::PerturbedAiry, {}}.block(), {{0.0, s}}, opts);
}

namespace {

double stable_value(const NystromResult& r) {
  if (!r.stable) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "Nystrom determinant not stable: " << r.coarse << " vs " << r.value;
    throw std::runtime_error(msg.str());
  }
  return std::clamp(r.value, 0.0, 1.0);
}

}  // namespace

double tw_gue_cdf(double s) { return stable_value(tw_gue_cdf_detail(s)); }
double goe2_cdf(double s) { return stable_value(goe2_cdf_detail(s)); }
double gaussian_r4_cdf(double s) { return 0.5 * (1.0 + std::erf(s)); }

std::string law_name(LawKind k) {
  switch (k) {
    case LawKind::TwGue: return "tw_gue";
    case LawKind::Goe2: return "goe2";
    case LawKind::GaussianR4: return "gaussian_r4";
  }
  return "unknown";
}

LawKind law_from_name(const std::string& name) {
  for (LawKind k : {LawKind::TwGue, LawKind::Goe2, LawKind::GaussianR4})
    if (law_name(k) == name) return k;
  throw std::invalid_argument("unknown reference law: " + name);
}

double law_cdf(LawKind k, double s) {
  switch (k) {
    case LawKind::TwGue: return tw_gue_cdf(s);
    case LawKind::Goe2: return goe2_cdf(s);
    case LawKind::GaussianR4: return gaussian_r4_cdf(s);
  }
  throw std::logic_error("unhandled law");
}

ReferenceLaw::ReferenceLaw(LawKind kind, double lo, double hi, int points)
    : ReferenceLaw(law_name(kind), [kind](double s) { return law_cdf(kind, s); }, lo, hi, points) {}

ReferenceLaw::ReferenceLaw(std::string name, const std::function<double(double)>& cdf, double lo, double hi,
                           int points)
    : name_(std::move(name)) {
  if (points < 4 || !(hi > lo)) throw std::invalid_argument("reference grid needs hi > lo and at least 4 points");
  for (int k = 0; k < points; ++k) {
    const double s = lo + (hi - lo) * k / (points - 1);
    s_.push_back(s);
    F_.push_back(std::clamp(cdf(s), 0.0, 1.0));
  }
  for (std::size_t k = 1; k < F_.size(); ++k) F_[k] = std::max(F_[k], F_[k - 1]);
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
      std::vector<double>(s_), std::vector<double>(F_));
  interp_ = [spline](double s) { return (*spline)(s); };
}

double ReferenceLaw::cdf(double s) const {
  if (s <= s_.front()) return F_.front();
  if (s >= s_.back()) return F_.back();
  return std::clamp(interp_(s), 0.0, 1.0);
}

void ReferenceLaw::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(12);
  out << "s,cdf\n";
  for (std::size_t k = 0; k < s_.size(); ++k) out << s_[k] << ',' << F_[k] << '\n';
}

}  // namespace tasep
