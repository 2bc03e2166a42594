#pragma once

#include "tasep/core.hpp"
#include "tasep/fredholm.hpp"
#include "tasep/scaling.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tasep {

struct ExperimentConfig {
  std::string mode = "simulate";
  int M = 100;
  double q = 0.1;
  std::optional<double> q_bar;
  std::vector<int> defect_positions;  // 1-based labels; defaults to {1} when q_bar is set
  int horizon = 0;                    // 0: derived from the observation times
  std::vector<int> times;             // explicit lattice times when no region is given
  std::string region;                 // empty: unscaled simulation
  double u = 2.0;
  double T = 0.0;
  std::vector<double> tau{0.0};
  std::vector<double> s{0.0};
  std::vector<double> eta, epsilon;
  std::vector<std::string> rates;  // exact rational rates for exact-dist, e.g. "3/10"
  std::size_t n_samples = 1000;
  std::uint64_t master_seed = 20240601;
  std::string output = "out";
  std::optional<double> tolerance;
  std::string case_name = "a";  // fig8: a, b or c
  std::string variant = "defect";  // fig8: defect or no-defect
  std::string kernel;              // kernel-eval: kernel kind name
  std::vector<std::string> levels;  // verify suites

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);  // rejects unknown keys
  static ExperimentConfig load(const std::string& path);
  std::string digest() const;  // crc32 of the canonical JSON dump, hex
};

// Region-scaled experiment implied by the config (region must be set).
ScaledExperiment scaled_experiment(const ExperimentConfig& c);
// Target law of a region: tw_gue, goe2, gaussian_r4 or discrete_hermite.
std::string target_law_for(const ExperimentConfig& c);

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);
// Supremum over integer ell of |Prob_emp(L >= ell) - F(s_of_ell(ell))|; s_of_ell gives
// the scaled value at which the event L >= ell is read (run_experiment uses ell - 1/2).
double ks_distance_lattice(const std::vector<long>& L, const std::function<double(long)>& s_of_ell,
                           const std::function<double(double)>& cdf);

struct ComparisonReport {
  std::size_t n = 0;
  double mean = 0.0, variance = 0.0;
  double ks_distance = 0.0;
  std::string target_law;
  bool pass = false;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::string config_digest;

  nlohmann::json to_json() const;
};

// Simulate, scale, compare and write samples.csv, distribution.csv, report.json into out_dir.
ComparisonReport run_experiment(const ExperimentConfig& c, const std::string& out_dir);
// Config for one fig8 panel.
ExperimentConfig fig8_config(const std::string& case_name, const std::string& variant, std::size_t n_samples,
                             std::uint64_t seed);

void write_fig2(const ExperimentConfig& c, const std::string& path);
void write_fig3(double q, double qbar, const std::string& path);
// Exact enumeration vs finite-kernel determinant for every threshold; returns max abs error.
double write_exact_dist(const ExperimentConfig& c, const std::string& path);
void write_kernel_eval(const ExperimentConfig& c, const std::string& path);

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

CheckResult check_combinatorial_exhaustive(int max_n = 4, int max_m = 4);
CheckResult check_schur_measure(int max_n = 3, int max_m = 3);
CheckResult check_oracle_vs_fredholm();
CheckResult check_critical_time();
CheckResult check_mean_position(std::size_t n_samples = 2000, std::uint64_t seed = 5);
CheckResult check_fig8(const std::string& case_name, const std::string& variant, std::size_t n_samples = 10000,
                       std::uint64_t seed = 8);
CheckResult check_region4_two_time();
CheckResult check_kernel_reductions();
CheckResult check_quadrature_stability();
CheckResult check_region1_monte_carlo(std::size_t n_samples = 10000, std::uint64_t seed = 12);

// Double Gaussian integral for the two-time region-4 law.
double region4_two_time_integral(double s1, double s2, double tau1, double tau2);

// Suites: combinatorial-exhaustive, oracle-vs-fredholm, kernel-crosschecks, mc-vs-theory.
std::vector<CheckResult> verify(const std::vector<std::string>& levels);
nlohmann::json to_json(const std::vector<CheckResult>& results);

}  // namespace tasep
