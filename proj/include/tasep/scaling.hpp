#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tasep {

enum class Region { R1, R2, R3, R3Degenerate, R4, R4Degenerate, FixedM, ContinuousR2 };
std::string region_name(Region r);
Region region_from_name(const std::string& name);

double D1(double q);
double C_of_u(double u, double q);
double D_of_u(double u, double q);
double D_G(double u, double q, double qbar);
// Saddle-point constants of the region 2/3 analysis, with p = q/(1-q).
double mu_of_u(double u, double q);
double z_c(double u, double q);
// Continuous-time counterparts, u > 1.
double A2_continuous(double u);
double C_continuous(double u);
double D_continuous(double u);
// u with D_G(u) = e^tau.
double u_from_region4_tau(double tau, double q, double qbar);

struct ScaledExperiment {
  Region region = Region::R2;
  double q = 0.1;
  std::optional<double> qbar;
  std::vector<double> params;  // eta (R3Degenerate) or epsilon (R4Degenerate, FixedM)
  int M = 100;
  double T = 0.0;  // FixedM only
  double u = 2.0;  // unused by R1, R4 and FixedM
  std::vector<double> taus{0.0};
  std::vector<double> ss{0.0};  // R1 reads these as integer thresholds

  void check_admissible() const;
};

struct LatticeSetup {
  std::vector<int> times;
  std::vector<double> real_times;  // continuous-time limit only
  std::vector<long> ells;
  std::vector<double> rates;  // stay rate of particle 1..M
  std::vector<double> effective_taus;  // scaled times recomputed from the rounded lattice times
};

LatticeSetup scaling_map(const ScaledExperiment& e);
// Scaled value s of a raw tagged position L observed at lattice time t.
double inverse_map(const ScaledExperiment& e, double t, double L);
double effective_tau(const ScaledExperiment& e, double t);

}  // namespace tasep
