#pragma once

#include "tasep/fredholm.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tasep {

// Region 1: discrete Hermite kernel on integer positions.
// psi_1 is taken from the vertical-line quadrature unless closed_form is set.
double kernel_region1(double tau1, long x1, double tau2, long x2, bool closed_form = false);
// Prob(L >= ell) in the limit, as the finite expansion over subsets of {0, ..., ell-1}.
double region1_prob_onetime(long ell, double tau);

// Region 2.
double airy_kernel(double x, double y);  // Christoffel-Darboux form
double extended_airy(double tau1, double xi1, double tau2, double xi2);
// Same kernel from the lambda integrals without the Gaussian closed form or the
// Christoffel-Darboux shortcut; slower, used as a cross-check.
double extended_airy_direct(double tau1, double xi1, double tau2, double xi2);

// Region 3.
double kernel_K3(double tau1, double xi1, double tau2, double xi2);
// Optional vertex height overrides the default placement of the w1 contour.
double kernel_K3prime(double tau1, double xi1, double tau2, double xi2, const std::vector<double>& eta,
                      std::optional<double> vertex = std::nullopt);
// prod_{k<j} (eta_k - tau + d/dxi) Ai(xi) for j = 1..n, via Ai and Ai' with polynomial coefficients.
std::vector<double> k3_right_factors(double tau, double xi, const std::vector<double>& eta);
std::vector<double> k3_right_factors_contour(double tau, double xi, const std::vector<double>& eta);

// Region 4.
double kernel_KG(double tau1, double xi1, double tau2, double xi2);
double ou_transition(double tau1, double xi1, double tau2, double xi2);  // Gaussian propagator, tau1 < tau2

// Rank-n kernel: residues in w1 (confluent poles merged), trapezoid on Re w2 = c in w2.
class RankNKernel {
 public:
  explicit RankNKernel(std::vector<double> eps);
  std::size_t rank() const { return eps_.size(); }
  double operator()(double tau1, double xi1, double tau2, double xi2) const;
  Eigen::MatrixXd block(double tau1, const Eigen::VectorXd& xs1, double tau2, const Eigen::VectorXd& xs2) const;

 private:
  std::vector<double> eps_;
};
double kernel_Kn(double tau1, double xi1, double tau2, double xi2, const std::vector<double>& eps);
// Fixed-M limit: the rank-n kernel with n = M.
double kernel_fixedM(double tau1, double xi1, double tau2, double xi2, const std::vector<double>& eps);

enum class KernelKind { DiscreteHermite, ExtendedAiry, PerturbedAiry, OUGaussian, RankN };
std::string kernel_kind_name(KernelKind k);
KernelKind kernel_kind_from_name(const std::string& name);

struct LimitKernelHandle {
  KernelKind kind = KernelKind::ExtendedAiry;
  std::vector<double> params;  // eta for PerturbedAiry (empty means K3), eps for RankN

  double operator()(double tau1, double x1, double tau2, double x2) const;
  KernelBlock block() const;
};

}  // namespace tasep
