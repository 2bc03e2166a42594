#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace tasep {

// Particle labels are 1-based in the physics and 0-based in storage:
// rates[i] is the stay probability of particle i+1.
struct SystemSpec {
  int M = 1;
  std::vector<double> rates;
  int horizon = 0;

  void validate() const;
  double rate(int label) const { return rates[static_cast<std::size_t>(label - 1)]; }
};

SystemSpec uniform_spec(int M, double q, int horizon);
// defects holds 1-based particle labels that get stay rate qbar.
SystemSpec defect_spec(int M, double q, double qbar, const std::vector<int>& defects, int horizon);

struct Configuration {
  std::vector<long> positions;  // positions[j] = site of particle j+1
  int time = 0;
};

// Counter-based stream: every (sample, step, particle) triple owns a fixed
// 64-bit word, so draws never depend on evaluation order.
class StayStream {
 public:
  StayStream(std::uint64_t master_seed, std::uint64_t sample);
  std::uint64_t step_key(std::uint64_t step) const;
  static std::uint64_t draw(std::uint64_t step_key, std::uint64_t particle);
  std::uint64_t bits(std::uint64_t step, std::uint64_t particle) const {
    return draw(step_key(step), particle);
  }
  double uniform(std::uint64_t step, std::uint64_t particle) const;

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);
// Threshold such that bits < threshold happens with probability q.
std::uint64_t stay_threshold(double q);

Configuration make_step_initial(const SystemSpec& spec);
void step(Configuration& config, const SystemSpec& spec, const StayStream& rng);
Configuration stepped(Configuration config, const SystemSpec& spec, const StayStream& rng);

// L(t,M) for t = 0..horizon.
std::vector<long> tagged_path(const SystemSpec& spec, std::uint64_t seed, std::uint64_t sample = 0);
std::vector<long> simulate_tagged(const SystemSpec& spec, const std::vector<int>& times,
                                  std::uint64_t seed, std::uint64_t sample = 0);
// Full configuration history, rows t = 0..horizon.
std::vector<std::vector<long>> trajectory(const SystemSpec& spec, std::uint64_t seed,
                                          std::uint64_t sample = 0);

struct SampleSet {
  std::vector<int> times;
  std::size_t n_samples = 0;
  std::vector<long> values;  // row-major, n_samples x times.size()

  long at(std::size_t sample, std::size_t time_index) const {
    return values[sample * times.size() + time_index];
  }
  std::vector<long> column(std::size_t time_index) const;
};

SampleSet sample_ensemble(const SystemSpec& spec, const std::vector<int>& times,
                          std::size_t n_samples, std::uint64_t master_seed);

// Deterministic law of L(uM, M)/M.
double A2(double u, double q);
double AG(double u, double q, double qbar);
double u_critical(double q, double qbar);
// qbar absent or qbar <= q: the A_G branch does not exist.
double mean_position(double u, double q, std::optional<double> qbar = std::nullopt);

}  // namespace tasep
