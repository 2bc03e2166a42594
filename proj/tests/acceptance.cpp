// Runs the twelve acceptance criteria and prints one line per criterion.
#include "tasep/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace {

using tasep::CheckResult;

// Joins checks that together make one criterion: value is the worst ratio to tolerance.
CheckResult all_of(const std::string& name, const std::vector<CheckResult>& parts) {
  CheckResult r{name, true, 0.0, 0.0, ""};
  for (const CheckResult& p : parts) {
    r.pass = r.pass && p.pass;
    if (p.value >= r.value) {
      r.value = p.value;
      r.tolerance = p.tolerance;
    }
    r.detail += (r.detail.empty() ? "" : "; ") + p.name + ": " + std::to_string(p.value) + (p.pass ? " ok" : " FAIL");
  }
  return r;
}

}  // namespace

int main() {
  using namespace tasep;
  const std::vector<std::function<CheckResult()>> criteria{
      [] { return check_combinatorial_exhaustive(4, 4); },
      [] { return check_schur_measure(3, 3); },
      [] { return check_oracle_vs_fredholm(); },
      [] { return check_critical_time(); },
      [] { return check_mean_position(2000, 5); },
      [] {
        return all_of("fig8(a), both variants vs TW-GUE",
                      {check_fig8("a", "defect"), check_fig8("a", "no-defect")});
      },
      [] {
        return all_of("fig8(b), defect vs GOE^2 and no-defect vs TW-GUE",
                      {check_fig8("b", "defect"), check_fig8("b", "no-defect")});
      },
      [] { return check_fig8("c", "defect"); },
      [] { return check_region4_two_time(); },
      [] { return check_kernel_reductions(); },
      [] { return check_quadrature_stability(); },
      [] { return check_region1_monte_carlo(10000, 12); },
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = criteria[k]();
    } catch (const std::exception& e) {
      r = {"criterion threw", false, 0.0, 0.0, e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !r.pass;
    std::printf("criterion %2zu: %s  %s  value=%.3g tol=%.3g  (%.1f s)  %s\n", k + 1, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.value, r.tolerance, secs, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
