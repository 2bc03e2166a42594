#include "tasep/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> samples;
  std::optional<double> tolerance;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "experiment config (flat JSON)")->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--samples", f.samples, "number of samples");
  sub->add_option("--tolerance", f.tolerance, "pass threshold for the KS distance");
}

tasep::ExperimentConfig resolve(const std::string& mode, const Flags& f) {
  tasep::ExperimentConfig c;
  if (!f.config.empty()) {
    c = tasep::ExperimentConfig::load(f.config);
    if (c.mode != mode) std::cerr << "note: config mode '" << c.mode << "' overridden by subcommand " << mode << '\n';
  }
  c.mode = mode;
  if (f.seed) c.master_seed = *f.seed;
  if (f.out) c.output = *f.out;
  if (f.samples) c.n_samples = *f.samples;
  if (f.tolerance) c.tolerance = *f.tolerance;
  return c;
}

std::string in_dir(const tasep::ExperimentConfig& c, const std::string& file) {
  std::filesystem::create_directories(c.output);
  return c.output + "/" + file;
}

int print_report(const tasep::ComparisonReport& r) {
  std::cout << r.to_json().dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time TASEP: simulation, exact laws and limiting kernels"};
  app.require_subcommand(1);
  Flags f;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "simulate the tagged particle and compare with its limit law"},
      {"exact-dist", "exact enumeration vs the finite-M Fredholm determinant"},
      {"kernel-eval", "tabulate a limiting kernel"},
      {"verify", "run verification suites"},
      {"fig2", "particle trajectories with defects"},
      {"fig3", "mean position A(u) with region boundaries"},
      {"fig8", "scaled tagged-particle laws, M=100"}};
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), f);
  CLI11_PARSE(app, argc, argv);
  const std::string mode = app.get_subcommands().front()->get_name();

  try {
    tasep::ExperimentConfig c = resolve(mode, f);
    if (mode == "simulate") return print_report(tasep::run_experiment(c, c.output));

    if (mode == "exact-dist") {
      const double err = tasep::write_exact_dist(c, in_dir(c, "exact_dist.csv"));
      std::cout << "max abs error " << err << '\n';
      return 0;
    }
    if (mode == "kernel-eval") {
      tasep::write_kernel_eval(c, in_dir(c, "kernel_eval.csv"));
      return 0;
    }
    if (mode == "verify") {
      const auto results = tasep::verify(c.levels);
      bool ok = true;
      for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  value=" << r.value << " tol=" << r.tolerance << "  "
                  << r.detail << '\n';
        ok = ok && r.pass;
      }
      std::ofstream(in_dir(c, "verify.json")) << tasep::to_json(results).dump(2) << '\n';
      return ok ? 0 : 1;
    }
    if (mode == "fig2") {
      if (f.config.empty()) {
        c.M = 100;
        c.q = 0.1;
        c.q_bar = 0.2;
        c.defect_positions = {1, 25, 50, 75};
      }
      if (c.horizon == 0) c.horizon = 3000;
      tasep::write_fig2(c, in_dir(c, "fig2.csv"));
      return 0;
    }
    if (mode == "fig3") {
      tasep::write_fig3(c.q, c.q_bar.value_or(0.2), in_dir(c, "fig3.csv"));
      return 0;
    }
    if (mode == "fig8") {
      const std::size_t n = f.samples ? *f.samples : (f.config.empty() ? 10000 : c.n_samples);
      std::vector<std::pair<std::string, std::string>> panels;
      if (f.config.empty()) {
        for (const char* cs : {"a", "b", "c"})
          for (const char* v : {"defect", "no-defect"}) panels.emplace_back(cs, v);
      } else {
        panels.emplace_back(c.case_name, c.variant);
      }
      for (const auto& [cs, v] : panels) {
        tasep::ExperimentConfig p = tasep::fig8_config(cs, v, n, c.master_seed);
        p.tolerance = c.tolerance;
        const auto r = tasep::run_experiment(p, c.output + "/fig8_" + cs + "_" + v);
        std::cout << "fig8(" << cs << ") " << v << ": ks=" << r.ks_distance << " vs " << r.target_law
                  << (r.pass ? " PASS" : " FAIL") << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
