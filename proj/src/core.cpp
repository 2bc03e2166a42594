#include "tasep/core.hpp"

#include <tbb/parallel_for.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tasep {

void SystemSpec::validate() const {
  if (M < 1) throw std::invalid_argument("M must be positive");
  if (static_cast<int>(rates.size()) != M)
    throw std::invalid_argument("rates must have length M = " + std::to_string(M));
  for (double q : rates)
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("stay rates must lie in [0,1)");
  if (horizon < 0) throw std::invalid_argument("horizon must be non-negative");
}

SystemSpec uniform_spec(int M, double q, int horizon) {
  SystemSpec s{M, std::vector<double>(static_cast<std::size_t>(std::max(M, 0)), q), horizon};
  s.validate();
  return s;
}

SystemSpec defect_spec(int M, double q, double qbar, const std::vector<int>& defects, int horizon) {
  SystemSpec s = uniform_spec(M, q, horizon);
  for (int label : defects) {
    if (label < 1 || label > M) throw std::invalid_argument("defect label out of range");
    s.rates[static_cast<std::size_t>(label - 1)] = qbar;
  }
  s.validate();
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

StayStream::StayStream(std::uint64_t master_seed, std::uint64_t sample)
    : key_(splitmix64(splitmix64(master_seed) ^ (sample * 0xD1B54A32D192ED03ULL))) {}

std::uint64_t StayStream::step_key(std::uint64_t step) const {
  return splitmix64(key_ ^ (step * 0xA0761D6478BD642FULL));
}

std::uint64_t StayStream::draw(std::uint64_t step_key, std::uint64_t particle) {
  return splitmix64(step_key ^ (particle * 0xE7037ED1A0B428DBULL));
}

double StayStream::uniform(std::uint64_t step, std::uint64_t particle) const {
  return static_cast<double>(bits(step, particle) >> 11) * 0x1.0p-53;
}

std::uint64_t stay_threshold(double q) {
  if (q <= 0.0) return 0;
  if (q >= 1.0) return ~std::uint64_t{0};
  return static_cast<std::uint64_t>(std::ldexp(q, 64));
}

Configuration make_step_initial(const SystemSpec& spec) {
  spec.validate();
  Configuration c;
  c.positions.resize(static_cast<std::size_t>(spec.M));
  for (int j = 1; j <= spec.M; ++j) c.positions[static_cast<std::size_t>(j - 1)] = spec.M - j;
  return c;
}

namespace {

// One synchronous sweep. Blocking is read from the configuration at the start
// of the step; a blocked particle's indicator is never consulted, which is the
// same as drawing it and ignoring it because draws are keyed, not sequential.
inline void sweep(std::vector<long>& pos, const std::vector<std::uint64_t>& thr, std::uint64_t key) {
  long ahead_old = 0;
  const std::size_t n = pos.size();
  for (std::size_t i = 0; i < n; ++i) {
    const long cur = pos[i];
    const bool free = (i == 0) || (ahead_old != cur + 1);
    ahead_old = cur;
    if (free && StayStream::draw(key, i + 1) >= thr[i]) pos[i] = cur + 1;
  }
}

std::vector<std::uint64_t> thresholds(const SystemSpec& spec) {
  std::vector<std::uint64_t> t(spec.rates.size());
  std::transform(spec.rates.begin(), spec.rates.end(), t.begin(), stay_threshold);
  return t;
}

}  // namespace

void step(Configuration& config, const SystemSpec& spec, const StayStream& rng) {
  sweep(config.positions, thresholds(spec), rng.step_key(static_cast<std::uint64_t>(config.time)));
  ++config.time;
}

Configuration stepped(Configuration config, const SystemSpec& spec, const StayStream& rng) {
  step(config, spec, rng);
  return config;
}

std::vector<long> tagged_path(const SystemSpec& spec, std::uint64_t seed, std::uint64_t sample) {
  Configuration c = make_step_initial(spec);
  const auto thr = thresholds(spec);
  const StayStream rng(seed, sample);
  std::vector<long> path(static_cast<std::size_t>(spec.horizon) + 1);
  path[0] = 0;
  for (int t = 0; t < spec.horizon; ++t) {
    sweep(c.positions, thr, rng.step_key(static_cast<std::uint64_t>(t)));
    path[static_cast<std::size_t>(t) + 1] = c.positions.back();
  }
  return path;
}

namespace {

void check_times(const SystemSpec& spec, const std::vector<int>& times) {
  for (int t : times)
    if (t < 0 || t > spec.horizon)
      throw std::invalid_argument("observation time " + std::to_string(t) + " outside [0, horizon=" +
                                  std::to_string(spec.horizon) + "]");
}

std::vector<long> observe(const SystemSpec& spec, const std::vector<int>& times,
                          const std::vector<std::uint64_t>& thr, int last, const StayStream& rng) {
  std::vector<long> pos(static_cast<std::size_t>(spec.M));
  for (int j = 1; j <= spec.M; ++j) pos[static_cast<std::size_t>(j - 1)] = spec.M - j;
  std::vector<long> L(static_cast<std::size_t>(last) + 1);
  L[0] = 0;
  for (int t = 0; t < last; ++t) {
    sweep(pos, thr, rng.step_key(static_cast<std::uint64_t>(t)));
    L[static_cast<std::size_t>(t) + 1] = pos.back();
  }
  std::vector<long> out(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) out[k] = L[static_cast<std::size_t>(times[k])];
  return out;
}

}  // namespace

std::vector<long> simulate_tagged(const SystemSpec& spec, const std::vector<int>& times,
                                  std::uint64_t seed, std::uint64_t sample) {
  spec.validate();
  check_times(spec, times);
  const int last = times.empty() ? 0 : *std::max_element(times.begin(), times.end());
  return observe(spec, times, thresholds(spec), last, StayStream(seed, sample));
}

std::vector<std::vector<long>> trajectory(const SystemSpec& spec, std::uint64_t seed,
                                          std::uint64_t sample) {
  Configuration c = make_step_initial(spec);
  const auto thr = thresholds(spec);
  const StayStream rng(seed, sample);
  std::vector<std::vector<long>> rows;
  rows.reserve(static_cast<std::size_t>(spec.horizon) + 1);
  rows.push_back(c.positions);
  for (int t = 0; t < spec.horizon; ++t) {
    sweep(c.positions, thr, rng.step_key(static_cast<std::uint64_t>(t)));
    rows.push_back(c.positions);
  }
  return rows;
}

std::vector<long> SampleSet::column(std::size_t time_index) const {
  std::vector<long> out(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) out[k] = at(k, time_index);
  return out;
}

SampleSet sample_ensemble(const SystemSpec& spec, const std::vector<int>& times,
                          std::size_t n_samples, std::uint64_t master_seed) {
  spec.validate();
  check_times(spec, times);
  if (n_samples < 1) throw std::invalid_argument("n_samples must be at least 1");
  SampleSet s{times, n_samples, std::vector<long>(n_samples * times.size())};
  const auto thr = thresholds(spec);
  const int last = times.empty() ? 0 : *std::max_element(times.begin(), times.end());
  tbb::parallel_for(std::size_t{0}, n_samples, [&](std::size_t k) {
    const auto row = observe(spec, times, thr, last, StayStream(master_seed, k));
    std::copy(row.begin(), row.end(), s.values.begin() + static_cast<std::ptrdiff_t>(k * times.size()));
  });
  return s;
}

double A2(double u, double q) {
  return (1.0 - q) * u - (1.0 - 2.0 * q) - 2.0 * std::sqrt(q * (1.0 - q) * (u - 1.0));
}

double AG(double u, double q, double qbar) {
  if (qbar == q) throw std::invalid_argument("A_G undefined for qbar == q");
  return (1.0 - qbar) * u - (1.0 - qbar) * qbar / (qbar - q);
}

double u_critical(double q, double qbar) {
  if (qbar == q) throw std::invalid_argument("u_c undefined for qbar == q");
  return (qbar * qbar - 2.0 * q * qbar + q) / ((qbar - q) * (qbar - q));
}

double mean_position(double u, double q, std::optional<double> qbar) {
  if (!(q >= 0.0 && q < 1.0) || u < 0.0) throw std::invalid_argument("mean_position: bad arguments");
  if (u <= 1.0 / (1.0 - q)) return 0.0;
  if (qbar && *qbar > q) {
    if (u >= u_critical(q, *qbar)) return AG(u, q, *qbar);
  }
  return A2(u, q);
}

}  // namespace tasep
