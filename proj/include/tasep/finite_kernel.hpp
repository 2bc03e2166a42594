#pragma once

#include "tasep/core.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <utility>
#include <vector>

namespace tasep {

// phi_{t1,t2}(x1,x2): zero unless t1 < t2, then the z^0 coefficient of
// (1+1/z)^{t2-t1} z^{x2-x1}, i.e. binomial(t2-t1, x2-x1).
boost::multiprecision::cpp_int phi_exact(long t1, long t2, long x1, long x2);
double phi(long t1, long t2, long x1, long x2);

struct ContourOptions {
  double rtol = 1e-12;
  int min_nodes = 64;
  int max_nodes = 1 << 13;
};

// Exact finite-M kernel for the multi-time law of L(t, M).
class FiniteKernel {
 public:
  explicit FiniteKernel(const SystemSpec& spec, ContourOptions opts = {});

  const SystemSpec& spec() const { return spec_; }
  double R1() const { return R1_; }
  double center1() const { return c1_; }
  double R2() const { return R2_; }

  double psi2(long x, int t) const;         // finite Laurent coefficient
  double psi1(long x, int t) const;         // trapezoid on the z1 circle with node doubling
  double psi1_series(long x, int t) const;  // annulus Laurent expansion (all q_i < 1/2)

  double kernel_series(int t1, long x1, int t2, long x2) const;
  // Double contour with the z2 circle inside the z1 contour, minus phi.
  double kernel_contour(int t1, long x1, int t2, long x2) const;
  // For t1 < t2: z2 circle outside the z1 contour and no phi term.
  double kernel_contour_swapped(int t1, long x1, int t2, long x2) const;
  // Series value, checked against the contour value (throws beyond 1e-9).
  double kernel(int t1, long x1, int t2, long x2) const;

  Eigen::MatrixXd block_series(int t1, const std::vector<long>& xs1, int t2, const std::vector<long>& xs2) const;
  Eigen::MatrixXd block_contour(int t1, const std::vector<long>& xs1, int t2, const std::vector<long>& xs2,
                                bool subtract_phi = true, bool swap_radii = false,
                                Eigen::MatrixXd* magnitude = nullptr) const;  // sum of term moduli per entry

 private:
  int k_of(int t) const;
  Eigen::MatrixXd block_contour_n(int t1, const std::vector<long>& xs1, int t2, const std::vector<long>& xs2,
                                  int n, bool subtract_phi, bool swap_radii,
                                  Eigen::MatrixXd* magnitude = nullptr) const;

  SystemSpec spec_;
  ContourOptions opts_;
  std::vector<double> p_;  // p_i = q_i / (1 - q_i)
  std::vector<double> e_;  // elementary symmetric e_b(-p) with signs folded in
  double c1_ = 0.0;     // centre of the z1 circle
  double R1_ = 0, R2_ = 0;
  double outer_ = 0.0;  // z2 radius when the circles are swapped
  mutable std::map<std::pair<int, long>, double> psi1_cache_;
};

struct JointOptions {
  double truncation_tol = 1e-10;
  long extension = 8;  // sites past k_n used to confirm the cap
  double reconcile_tol = 1e-9;
  bool reconcile = true;
};

struct JointResult {
  double value = 1.0;
  long x_max = 0;
  double extension_gap = 0.0;  // |det over capped windows - det over extended ones|
  double max_route_gap = 0.0;  // series vs contour, over the final matrix
};

// Prob(L(t_n, M) >= l_n for all n) as det(I - K) over windows t_n - M + 1 - l_n < x <= k_n,
// k_n = t_n - M + 1. Sites past k_n add nothing; the extended determinant confirms it.
JointResult joint_probability_detail(const FiniteKernel& K, const std::vector<int>& times,
                                     const std::vector<long>& ells, JointOptions opts = {});
double joint_probability(const SystemSpec& spec, const std::vector<int>& times, const std::vector<long>& ells);

}  // namespace tasep
