#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace tasep {

double det_identity_minus(const Eigen::MatrixXd& K);

// Discrete windows: positions x in (lo, hi] observed at time index `time`.
struct DiscreteWindow {
  int time = 0;
  long lo = 0;
  long hi = 0;
};
using DiscreteKernel = std::function<double(int, long, int, long)>;
// det(I + K G) with G = -1 on the windows.
double det_discrete(const std::vector<DiscreteWindow>& windows, const DiscreteKernel& K);

// Continuous kernels are evaluated block-wise: rows xs1 at tau1, columns xs2 at tau2.
using KernelBlock = std::function<Eigen::MatrixXd(double tau1, const Eigen::VectorXd& xs1, double tau2,
                                                  const Eigen::VectorXd& xs2)>;
using PointKernel = std::function<double(double, double, double, double)>;
KernelBlock pointwise(PointKernel k);

struct ContinuousWindow {
  double tau = 0.0;
  double s = 0.0;  // window (s, infinity), truncated to (s, s + cutoff]
};

struct NystromOptions {
  int order = 40;
  double cutoff = 10.0;
  double tol = 1e-8;
  int max_refinements = 3;
};

struct NystromResult {
  double value = 1.0;
  double coarse = 1.0;  // value before the last doubling
  int order = 0;
  double cutoff = 0.0;
  bool stable = false;
};

// Single Nystrom evaluation of det(I - sqrt(w) K sqrt(w)) over the block windows.
double det_nystrom(const KernelBlock& K, const std::vector<ContinuousWindow>& windows, int order, double cutoff);
// Adaptive: doubles the order, then the cutoff, until both moves are below tol.
NystromResult det_continuous(const KernelBlock& K, const std::vector<ContinuousWindow>& windows,
                             const NystromOptions& opts = {});
// Throws std::runtime_error naming both values when not stable.
double det_continuous_value(const KernelBlock& K, const std::vector<ContinuousWindow>& windows,
                            const NystromOptions& opts = {});

void gauss_legendre(int order, double a, double b, Eigen::VectorXd& x, Eigen::VectorXd& w);

double tw_gue_cdf(double s);
double goe2_cdf(double s);
double gaussian_r4_cdf(double s);
NystromResult tw_gue_cdf_detail(double s, const NystromOptions& opts = {});
NystromResult goe2_cdf_detail(double s, const NystromOptions& opts = {});

enum class LawKind { TwGue, Goe2, GaussianR4 };
std::string law_name(LawKind k);
LawKind law_from_name(const std::string& name);
double law_cdf(LawKind k, double s);

// Tabulated CDF with monotone cubic interpolation.
class ReferenceLaw {
 public:
  ReferenceLaw(LawKind kind, double lo, double hi, int points);
  // Any CDF, e.g. a Fredholm determinant of a kernel with no named law.
  ReferenceLaw(std::string name, const std::function<double(double)>& cdf, double lo, double hi, int points);
  const std::string& name() const { return name_; }
  double cdf(double s) const;
  const std::vector<double>& grid() const { return s_; }
  const std::vector<double>& values() const { return F_; }
  void write_csv(const std::string& path) const;

 private:
  std::string name_;
  std::vector<double> s_, F_;
  std::function<double(double)> interp_;
};

}  // namespace tasep
