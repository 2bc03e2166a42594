#include "tasep/finite_kernel.hpp"

#include "tasep/fredholm.hpp"

#include <boost/math/special_functions/binomial.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tasep {

using cd = std::complex<double>;

boost::multiprecision::cpp_int phi_exact(long t1, long t2, long x1, long x2) {
  using boost::multiprecision::cpp_int;
  if (t1 >= t2) return 0;
  const long T = t2 - t1, j = x2 - x1;
  if (j < 0 || j > T) return 0;
  cpp_int c = 1;
  for (long r = 1; r <= j; ++r) c = c * (T - j + r) / r;
  return c;
}

namespace {

double binom(long n, long k) {
  if (k < 0 || k > n || n < 0) return 0.0;
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(k));
}

// binomial(k + a - 1, a) for k >= 1, a >= 0 (multiset coefficient).
double multichoose(long k, long a) { return binom(k + a - 1, a); }

cd ipow(cd z, long x) { return std::polar(std::pow(std::abs(z), static_cast<double>(x)), static_cast<double>(x) * std::arg(z)); }

}  // namespace

double phi(long t1, long t2, long x1, long x2) {
  if (t1 >= t2) return 0.0;
  return binom(t2 - t1, x2 - x1);
}

FiniteKernel::FiniteKernel(const SystemSpec& spec, ContourOptions opts) : spec_(spec), opts_(opts) {
  spec_.validate();
  double pmax = 0.0;
  for (double q : spec_.rates) {
    p_.push_back(q / (1.0 - q));
    pmax = std::max(pmax, p_.back());
  }
  // e_[b] = coefficient of w^b in prod_i (1 - p_i w).
  e_.assign(p_.size() + 1, 0.0);
  e_[0] = 1.0;
  for (std::size_t i = 0; i < p_.size(); ++i)
    for (std::size_t b = i + 1; b >= 1; --b) e_[b] -= p_[i] * e_[b - 1];
  if (pmax > 1.0)
    throw std::invalid_argument("finite kernel needs every stay rate <= 1/2: Psi1 grows geometrically otherwise");
  if (pmax < 1.0) {
    const double upper = pmax > 0.0 ? 1.0 / pmax : 16.0;
    R1_ = std::sqrt(upper);
    R2_ = 0.5 * (1.0 + R1_);
  } else {
    // Some 1/p_i = 1, so no centred circle separates it from -1. The z1 contour
    // becomes the circle through -3/2 and 0.8: it encloses 0 and -1 only.
    const double right = 0.8 / pmax, left = -1.5;
    c1_ = 0.5 * (right + left);
    R1_ = 0.5 * (right - left);
    R2_ = 0.5 * right;
    outer_ = 2.0;
  }
  if (outer_ == 0.0) outer_ = R1_ + 1.0;
}

int FiniteKernel::k_of(int t) const {
  if (t < spec_.M)
    throw std::invalid_argument("time " + std::to_string(t) + " below M = " + std::to_string(spec_.M) +
                                ": the tagged particle has not started");
  return t - spec_.M + 1;
}

double FiniteKernel::psi2(long x, int t) const {
  const long k = k_of(t);
  double s = 0.0;
  for (std::size_t b = 0; b < e_.size(); ++b) s += binom(k, static_cast<long>(b) + x) * e_[b];
  return s;
}

double FiniteKernel::psi1(long x, int t) const {
  const auto key = std::make_pair(t, x);
  if (auto it = psi1_cache_.find(key); it != psi1_cache_.end()) return it->second;
  const long k = k_of(t);
  double peak = 0.0;  // largest integrand modulus seen; sets the rounding floor
  auto trap = [&](int n) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const cd e = std::polar(R1_, 2.0 * std::numbers::pi * (j + 0.5) / n);
      const cd z = c1_ + e;
      cd g = ipow(1.0 + 1.0 / z, k);
      for (double p : p_) g *= 1.0 - p * z;
      const cd term = ipow(z, -x) / g * (e / z);
      peak = std::max(peak, std::abs(term));
      acc += term.real();
    }
    return acc / n;
  };
  int n = opts_.min_nodes;
  double prev = trap(n);
  for (;;) {
    n *= 2;
    const double cur = trap(n);
    if (std::abs(cur - prev) <= opts_.rtol * std::abs(cur) + 256 * DBL_EPSILON * peak) {
      psi1_cache_[key] = cur;
      return cur;
    }
    if (n >= opts_.max_nodes)
      throw std::runtime_error("psi1 contour quadrature did not converge at x = " + std::to_string(x));
    prev = cur;
  }
}

double FiniteKernel::psi1_series(long x, int t) const {
  const long k = k_of(t);
  if (c1_ != 0.0) throw std::invalid_argument("no Laurent annulus: some stay rate is >= 1/2");
  // Laurent coefficient of z^x of (1+1/z)^{-k} * prod (1 - p_i z)^{-1} on 1 < |z| < 1/p.
  std::vector<double> hh;  // complete homogeneous h_b(p), grown lazily
  auto grow = [&](long bmax) {
    if (bmax < static_cast<long>(hh.size())) return;
    std::vector<double> cur(static_cast<std::size_t>(bmax + 1), 0.0);
    cur[0] = 1.0;
    for (double p : p_)
      for (long b = 1; b <= bmax; ++b) cur[static_cast<std::size_t>(b)] += p * cur[static_cast<std::size_t>(b - 1)];
    hh = std::move(cur);
  };
  double sum = 0.0;
  int quiet = 0;
  const long a0 = std::max(0L, -x);
  for (long a = a0;; ++a) {
    const long b = a + x;
    if (b >= static_cast<long>(hh.size())) grow(std::max(2 * b, 64L));
    const double term = ((a % 2) ? -1.0 : 1.0) * multichoose(k, a) * hh[static_cast<std::size_t>(b)];
    sum += term;
    if (a > a0 + 2 * (k + spec_.M) + 10 && std::abs(term) <= 1e-17 * std::max(std::abs(sum), 1e-300)) {
      if (++quiet >= 5) break;
    } else {
      quiet = 0;
    }
    if (a - a0 > 200000) throw std::runtime_error("psi1 series failed to decay");
  }
  return sum;
}

double FiniteKernel::kernel_series(int t1, long x1, int t2, long x2) const {
  const long k2 = k_of(t2);
  k_of(t1);
  const long M = spec_.M;
  double s = 0.0;
  if (t1 >= t2) {
    for (long m = std::max(0L, -M - x2); x2 + m <= k2; ++m) s += psi1(x1 + m, t1) * psi2(x2 + m, t2);
  } else {
    for (long m = std::max(0L, x2 - 1 - k2); x2 - m - 1 >= -M; ++m) s -= psi1(x1 - m - 1, t1) * psi2(x2 - m - 1, t2);
  }
  return s;
}

Eigen::MatrixXd FiniteKernel::block_series(int t1, const std::vector<long>& xs1, int t2,
                                           const std::vector<long>& xs2) const {
  Eigen::MatrixXd K(xs1.size(), xs2.size());
  for (std::size_t a = 0; a < xs1.size(); ++a)
    for (std::size_t b = 0; b < xs2.size(); ++b)
      K(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = kernel_series(t1, xs1[a], t2, xs2[b]);
  return K;
}

Eigen::MatrixXd FiniteKernel::block_contour_n(int t1, const std::vector<long>& xs1, int t2,
                                              const std::vector<long>& xs2, int n, bool subtract_phi,
                                              bool swap_radii, Eigen::MatrixXd* magnitude) const {
  const long k1 = k_of(t1), k2 = k_of(t2);
  // Swapping puts the z2 circle outside the z1 contour.
  const double r2 = swap_radii ? outer_ : R2_;
  Eigen::MatrixXcd A(n, xs1.size()), B(n, xs2.size()), C(n, n);
  std::vector<cd> z1(static_cast<std::size_t>(n)), z2(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    z1[static_cast<std::size_t>(j)] = c1_ + std::polar(R1_, 2.0 * std::numbers::pi * (j + 0.5) / n);
    z2[static_cast<std::size_t>(j)] = std::polar(r2, 2.0 * std::numbers::pi * j / n);
  }
  for (int j = 0; j < n; ++j) {
    const cd z = z1[static_cast<std::size_t>(j)], w = z2[static_cast<std::size_t>(j)];
    cd g1 = ipow(1.0 + 1.0 / z, k1), g2 = ipow(1.0 + 1.0 / w, k2);
    for (double p : p_) {
      g1 *= 1.0 - p * z;
      g2 *= 1.0 - p * w;
    }
    for (std::size_t a = 0; a < xs1.size(); ++a) A(j, static_cast<Eigen::Index>(a)) = (z - c1_) / z / (g1 * ipow(z, xs1[a])) / double(n);
    for (std::size_t b = 0; b < xs2.size(); ++b) B(j, static_cast<Eigen::Index>(b)) = g2 * ipow(w, xs2[b]) / double(n);
    for (int i = 0; i < n; ++i) C(j, i) = z / (z - z2[static_cast<std::size_t>(i)]);
  }
  Eigen::MatrixXd K = (A.transpose() * C * B).real();
  // Sum of term moduli, the scale of the rounding error in K.
  if (magnitude) *magnitude = A.cwiseAbs().transpose() * C.cwiseAbs() * B.cwiseAbs();
  if (subtract_phi)
    for (std::size_t a = 0; a < xs1.size(); ++a)
      for (std::size_t b = 0; b < xs2.size(); ++b)
        K(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) -= phi(t1, t2, xs1[a], xs2[b]);
  return K;
}

Eigen::MatrixXd FiniteKernel::block_contour(int t1, const std::vector<long>& xs1, int t2, const std::vector<long>& xs2,
                                            bool subtract_phi, bool swap_radii, Eigen::MatrixXd* magnitude) const {
  int n = opts_.min_nodes;
  Eigen::MatrixXd prev = block_contour_n(t1, xs1, t2, xs2, n, subtract_phi, swap_radii);
  Eigen::MatrixXd mag;
  for (;;) {
    n *= 2;
    Eigen::MatrixXd cur = block_contour_n(t1, xs1, t2, xs2, n, subtract_phi, swap_radii, &mag);
    const double scale = std::max(1.0, cur.cwiseAbs().maxCoeff());
    const Eigen::ArrayXXd allowed = opts_.rtol * scale + 4 * DBL_EPSILON * mag.array();
    if (((cur - prev).array().abs() <= allowed).all()) {
      if (magnitude) *magnitude = std::move(mag);
      return cur;
    }
    if (n >= opts_.max_nodes) throw std::runtime_error("double contour quadrature did not converge");
    prev = std::move(cur);
  }
}

double FiniteKernel::kernel_contour(int t1, long x1, int t2, long x2) const {
  return block_contour(t1, {x1}, t2, {x2}, true, false)(0, 0);
}

double FiniteKernel::kernel_contour_swapped(int t1, long x1, int t2, long x2) const {
  if (t1 >= t2) throw std::invalid_argument("swapped radii apply to t1 < t2 only");
  return block_contour(t1, {x1}, t2, {x2}, false, true)(0, 0);
}

double FiniteKernel::kernel(int t1, long x1, int t2, long x2) const {
  const double a = kernel_series(t1, x1, t2, x2);
  const double b = kernel_contour(t1, x1, t2, x2);
  if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
    throw std::runtime_error("internal error: kernel routes disagree (series " + std::to_string(a) + ", contour " +
                             std::to_string(b) + ")");
  return a;
}

JointResult joint_probability_detail(const FiniteKernel& K, const std::vector<int>& times,
                                     const std::vector<long>& ells, JointOptions opts) {
  if (times.size() != ells.size()) throw std::invalid_argument("times and thresholds differ in length");
  const int M = K.spec().M;
  std::vector<int> ts;
  std::vector<long> theta, cap;
  for (std::size_t n = 0; n < times.size(); ++n) {
    if (times[n] < M) throw std::invalid_argument("observation time below M is not admissible");
    if (ells[n] <= 0) continue;  // L >= 0 always holds
    ts.push_back(times[n]);
    theta.push_back(times[n] - M + 1 - ells[n]);
    cap.push_back(times[n] - M + 1);
  }
  JointResult res;
  if (ts.empty()) return res;

  auto windows_for = [&](long pad) {
    std::vector<std::vector<long>> xs(ts.size());
    for (std::size_t n = 0; n < ts.size(); ++n)
      for (long x = theta[n] + 1; x <= cap[n] + pad; ++x) xs[n].push_back(x);
    return xs;
  };
  Eigen::MatrixXd mag;  // contour term moduli, filled by contour assembly
  auto assemble = [&](const std::vector<std::vector<long>>& xs, bool contour) {
    Eigen::Index total = 0;
    for (const auto& v : xs) total += static_cast<Eigen::Index>(v.size());
    Eigen::MatrixXd A(total, total);
    if (contour) mag.resize(total, total);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      Eigen::Index c = 0;
      for (std::size_t j = 0; j < ts.size(); ++j) {
        if (xs[i].empty() || xs[j].empty()) continue;
        Eigen::MatrixXd m;
        const auto blk = contour ? K.block_contour(ts[i], xs[i], ts[j], xs[j], true, false, &m)
                                 : K.block_series(ts[i], xs[i], ts[j], xs[j]);
        A.block(r, c, blk.rows(), blk.cols()) = blk;
        if (contour) mag.block(r, c, m.rows(), m.cols()) = m;
        c += blk.cols();
      }
      r += static_cast<Eigen::Index>(xs[i].size());
    }
    return A;
  };

  const auto xs = windows_for(0);
  const Eigen::MatrixXd A = assemble(xs, false);
  res.value = det_identity_minus(A);
  res.x_max = *std::max_element(cap.begin(), cap.end());
  if (opts.extension > 0) {
    res.extension_gap = std::abs(det_identity_minus(assemble(windows_for(opts.extension), false)) - res.value);
    if (res.extension_gap > opts.truncation_tol)
      throw std::runtime_error("Fredholm determinant changed by " + std::to_string(res.extension_gap) +
                               " when windows were extended past k_n");
  }
  if (opts.reconcile && A.size() > 0) {
    const Eigen::MatrixXd B = assemble(xs, true);
    const Eigen::ArrayXXd gap = (A - B).array().abs();
    res.max_route_gap = gap.maxCoeff();
    // Far entries are sums of large cancelling terms; their rounding scales with mag.
    const Eigen::ArrayXXd allowed =
        opts.reconcile_tol * std::max(1.0, A.cwiseAbs().maxCoeff()) + 64 * DBL_EPSILON * mag.array();
    if (!(gap <= allowed).all())
      throw std::runtime_error("internal error: series and contour kernels disagree by " +
                               std::to_string(res.max_route_gap));
  }
  return res;
}

double joint_probability(const SystemSpec& spec, const std::vector<int>& times, const std::vector<long>& ells) {
  return joint_probability_detail(FiniteKernel(spec), times, ells).value;
}

}  // namespace tasep
