#include "tasep/harness.hpp"

#include "tasep/combinatorics.hpp"
#include "tasep/finite_kernel.hpp"
#include "tasep/limit_kernels.hpp"

#include <boost/crc.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tasep {

using nlohmann::json;

// ---------------------------------------------------------------- config

namespace {

const std::set<std::string> kModes{"simulate", "exact-dist", "kernel-eval", "verify", "fig2", "fig3", "fig8"};

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(12);
  return out;
}

}  // namespace

json ExperimentConfig::to_json() const {
  json j;
  j["mode"] = mode;
  j["M"] = M;
  j["q"] = q;
  j["q_bar"] = q_bar ? json(*q_bar) : json(nullptr);
  j["defect_positions"] = defect_positions;
  j["horizon"] = horizon;
  j["times"] = times;
  j["region"] = region;
  j["u"] = u;
  j["T"] = T;
  j["tau"] = tau;
  j["s"] = s;
  j["eta"] = eta;
  j["epsilon"] = epsilon;
  j["rates"] = rates;
  j["n_samples"] = n_samples;
  j["master_seed"] = master_seed;
  j["output"] = output;
  j["tolerance"] = tolerance ? json(*tolerance) : json(nullptr);
  j["case_name"] = case_name;
  j["variant"] = variant;
  j["kernel"] = kernel;
  j["levels"] = levels;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  const json known = ExperimentConfig{}.to_json();
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw std::invalid_argument("unknown config key: " + key);
  ExperimentConfig c;
  read(j, "mode", c.mode);
  read(j, "M", c.M);
  read(j, "q", c.q);
  if (j.contains("q_bar") && !j.at("q_bar").is_null()) c.q_bar = j.at("q_bar").get<double>();
  read(j, "defect_positions", c.defect_positions);
  read(j, "horizon", c.horizon);
  read(j, "times", c.times);
  read(j, "region", c.region);
  read(j, "u", c.u);
  read(j, "T", c.T);
  read(j, "tau", c.tau);
  read(j, "s", c.s);
  read(j, "eta", c.eta);
  read(j, "epsilon", c.epsilon);
  read(j, "rates", c.rates);
  read(j, "n_samples", c.n_samples);
  read(j, "master_seed", c.master_seed);
  read(j, "output", c.output);
  if (j.contains("tolerance") && !j.at("tolerance").is_null()) c.tolerance = j.at("tolerance").get<double>();
  read(j, "case_name", c.case_name);
  read(j, "variant", c.variant);
  read(j, "kernel", c.kernel);
  read(j, "levels", c.levels);

  if (!kModes.count(c.mode)) throw std::invalid_argument("unknown mode: " + c.mode);
  if (c.mode == "simulate" && c.region.empty() && c.times.empty())
    throw std::invalid_argument("simulate needs a region or explicit times");
  if (c.mode == "exact-dist" && c.rates.empty()) throw std::invalid_argument("exact-dist needs rates");
  if (c.mode == "kernel-eval" && c.kernel.empty()) throw std::invalid_argument("kernel-eval needs a kernel name");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  return from_json(json::parse(in));
}

std::string ExperimentConfig::digest() const {
  const std::string text = to_json().dump();
  boost::crc_32_type crc;
  crc.process_bytes(text.data(), text.size());
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(crc.checksum()));
  return buf;
}

// ---------------------------------------------------------------- scaling and targets

ScaledExperiment scaled_experiment(const ExperimentConfig& c) {
  if (c.region.empty()) throw std::invalid_argument("config has no region");
  ScaledExperiment e;
  e.region = region_from_name(c.region);
  e.q = c.q;
  e.qbar = c.q_bar;
  e.M = c.M;
  e.T = c.T;
  e.u = c.u;
  e.taus = c.tau;
  e.ss = c.s;
  if (e.ss.size() < e.taus.size()) e.ss.resize(e.taus.size(), e.ss.empty() ? 0.0 : e.ss.back());
  if (e.region == Region::R3Degenerate) e.params = c.eta;
  if (e.region == Region::R4Degenerate || e.region == Region::FixedM) e.params = c.epsilon;
  if (e.region == Region::FixedM && e.params.empty()) e.params.assign(static_cast<std::size_t>(c.M), 0.0);
  return e;
}

std::string target_law_for(const ExperimentConfig& c) {
  switch (region_from_name(c.region)) {
    case Region::R1: return "discrete_hermite";
    case Region::R2:
    case Region::ContinuousR2: return "tw_gue";
    case Region::R3: return "goe2";
    case Region::R3Degenerate: return "perturbed_airy";
    case Region::R4: return "gaussian_r4";
    case Region::R4Degenerate:
    case Region::FixedM: return "rank_n";
  }
  throw std::logic_error("unhandled region");
}

namespace {

constexpr double kGridLo = -8.0, kGridHi = 6.0;

std::string key_of(const std::string& name, double tau, const std::vector<double>& params) {
  std::ostringstream k;
  k.precision(17);
  k << name << '|' << tau;
  for (double p : params) k << ',' << p;
  return k.str();
}

// One tabulated law per (name, tau, params) for the life of the process.
const ReferenceLaw& reference_table(const std::string& name, double tau, const std::vector<double>& params) {
  static std::map<std::string, std::unique_ptr<ReferenceLaw>> cache;
  const std::string key = key_of(name, tau, params);
  if (auto it = cache.find(key); it != cache.end()) return *it->second;
  std::unique_ptr<ReferenceLaw> law;
  if (name == "tw_gue" || name == "goe2" || name == "gaussian_r4") {
    law = std::make_unique<ReferenceLaw>(law_from_name(name), kGridLo, kGridHi, 113);
  } else {
    const KernelKind kind = name == "perturbed_airy" ? KernelKind::PerturbedAiry : KernelKind::RankN;
    const KernelBlock blk = LimitKernelHandle{kind, params}.block();
    law = std::make_unique<ReferenceLaw>(
        name, [&](double s) { return det_continuous_value(blk, {{tau, s}}); }, kGridLo, kGridHi, 57);
  }
  return *cache.emplace(key, std::move(law)).first->second;
}

// Prob(L >= ell) predicted at one observation time, and the CDF in the scaled coordinate.
struct Target {
  std::string name;
  std::function<double(long)> prob_at_least;
  std::function<double(double)> cdf;
};

Target target_at(const ExperimentConfig& c, const ScaledExperiment& e, int t, double tau) {
  Target out;
  out.name = target_law_for(c);
  if (e.region == Region::R1) {
    auto p = [tau](long ell) {
      if (ell <= 0) return 1.0;
      if (ell > 20) return 0.0;  // below 1e-12 at any moderate tau
      return region1_prob_onetime(ell, tau);
    };
    out.prob_at_least = p;
    out.cdf = [p](double s) { return 1.0 - p(static_cast<long>(std::floor(s)) + 1); };
    return out;
  }
  std::vector<double> params = e.params;
  double law_tau = 0.0;
  if (out.name == "goe2" && std::abs(tau) > 1e-12) {
    out.name = "perturbed_airy";  // K3 away from tau = 0
    params.clear();
  }
  if (out.name == "perturbed_airy" || out.name == "rank_n") law_tau = tau;
  const ReferenceLaw* law = &reference_table(out.name, law_tau, params);
  out.cdf = [law](double s) { return law->cdf(s); };
  // L >= ell is read as S <= s(ell - 1/2): the midpoint of the lattice step.
  out.prob_at_least = [law, e, t](long ell) { return law->cdf(inverse_map(e, t, static_cast<double>(ell) - 0.5)); };
  return out;
}

double lattice_gap(const std::vector<long>& L, const std::function<double(long)>& prob_at_least) {
  if (L.empty()) throw std::invalid_argument("no samples");
  std::vector<long> v(L);
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (long ell = v.front(); ell <= v.back() + 1; ++ell) {
    const auto first = std::lower_bound(v.begin(), v.end(), ell);
    const double emp = static_cast<double>(v.end() - first) / n;
    d = std::max(d, std::abs(emp - prob_at_least(ell)));
  }
  return d;
}

double default_tolerance(const std::string& law) { return law == "gaussian_r4" ? 0.05 : 0.08; }

}  // namespace

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size();) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double F = cdf(samples[i]);
    d = std::max({d, std::abs(static_cast<double>(i) / n - F), std::abs(static_cast<double>(j) / n - F)});
    i = j;
  }
  return d;
}

double ks_distance_lattice(const std::vector<long>& L, const std::function<double(long)>& s_of_ell,
                           const std::function<double(double)>& cdf) {
  return lattice_gap(L, [&](long ell) { return cdf(s_of_ell(ell)); });
}

// ---------------------------------------------------------------- runs

json ComparisonReport::to_json() const {
  return json{{"ks_distance", ks_distance}, {"n", n},       {"target_law", target_law},
              {"pass", pass},               {"tolerance", tolerance}, {"seed", seed},
              {"config_digest", config_digest}, {"mean", mean}, {"variance", variance}};
}

namespace {

SystemSpec unscaled_spec(const ExperimentConfig& c) {
  if (c.q_bar) {
    const std::vector<int> defects = c.defect_positions.empty() ? std::vector<int>{1} : c.defect_positions;
    return defect_spec(c.M, c.q, *c.q_bar, defects, c.horizon);
  }
  return uniform_spec(c.M, c.q, c.horizon);
}

}  // namespace

ComparisonReport run_experiment(const ExperimentConfig& c, const std::string& out_dir) {
  ComparisonReport rep;
  rep.seed = c.master_seed;
  rep.config_digest = c.digest();
  rep.n = c.n_samples;

  std::optional<ScaledExperiment> e;
  SystemSpec spec;
  std::vector<int> times;
  std::vector<double> taus;
  if (c.region.empty()) {
    spec = unscaled_spec(c);
    times = c.times;
  } else {
    e = scaled_experiment(c);
    if (e->region == Region::ContinuousR2)
      throw std::invalid_argument("continuousR2 is a continuous-time limit with no lattice simulation");
    const LatticeSetup ls = scaling_map(*e);
    spec.M = c.M;
    spec.rates = ls.rates;
    times = ls.times;
    taus = ls.effective_taus;
  }
  if (times.empty()) throw std::invalid_argument("no observation times");
  spec.horizon = std::max(c.horizon, *std::max_element(times.begin(), times.end()));
  const SampleSet samples = sample_ensemble(spec, times, c.n_samples, c.master_seed);

  std::vector<std::vector<double>> scaled(times.size());
  std::vector<Target> targets;
  if (e) {
    rep.target_law = target_law_for(c);
    for (std::size_t j = 0; j < times.size(); ++j) {
      const std::vector<long> col = samples.column(j);
      for (long L : col) scaled[j].push_back(inverse_map(*e, times[j], static_cast<double>(L)));
      targets.push_back(target_at(c, *e, times[j], taus[j]));
      rep.ks_distance = std::max(rep.ks_distance, lattice_gap(col, targets.back().prob_at_least));
    }
    rep.tolerance = c.tolerance.value_or(default_tolerance(rep.target_law));
    rep.pass = rep.ks_distance <= rep.tolerance;
  } else {
    rep.target_law = "none";
    for (std::size_t j = 0; j < times.size(); ++j)
      for (long L : samples.column(j)) scaled[j].push_back(static_cast<double>(L));
    rep.pass = true;
  }
  const std::vector<double>& s0 = scaled.front();
  rep.mean = std::accumulate(s0.begin(), s0.end(), 0.0) / static_cast<double>(s0.size());
  double ss = 0.0;
  for (double v : s0) ss += (v - rep.mean) * (v - rep.mean);
  rep.variance = s0.size() > 1 ? ss / static_cast<double>(s0.size() - 1) : 0.0;

  if (out_dir.empty()) return rep;
  std::filesystem::create_directories(out_dir);
  {
    auto out = open_out(out_dir + "/samples.csv");
    out << "sample_index,time,L,scaled_s\n";
    for (std::size_t k = 0; k < samples.n_samples; ++k)
      for (std::size_t j = 0; j < times.size(); ++j) {
        out << k << ',' << times[j] << ',' << samples.at(k, j) << ',';
        if (e) out << scaled[j][k];
        out << '\n';
      }
  }
  {
    auto out = open_out(out_dir + "/distribution.csv");
    out << "s,cdf_empirical,cdf_reference\n";
    std::vector<double> v(s0);
    std::sort(v.begin(), v.end());
    const double lo = v.front() - 0.5, hi = v.back() + 0.5;
    for (int k = 0; k < 200; ++k) {
      const double s = lo + (hi - lo) * k / 199.0;
      const double emp =
          static_cast<double>(std::upper_bound(v.begin(), v.end(), s) - v.begin()) / static_cast<double>(v.size());
      out << s << ',' << emp << ',';
      if (e) out << targets.front().cdf(s);
      out << '\n';
    }
  }
  {
    auto out = open_out(out_dir + "/report.json");
    out << rep.to_json().dump(2) << '\n';
  }
  return rep;
}

ExperimentConfig fig8_config(const std::string& case_name, const std::string& variant, std::size_t n_samples,
                             std::uint64_t seed) {
  if (variant != "defect" && variant != "no-defect") throw std::invalid_argument("fig8 variant: defect or no-defect");
  const bool defect = variant == "defect";
  ExperimentConfig c;
  c.mode = "fig8";
  c.M = 100;
  c.q = 0.1;
  if (defect) {
    c.q_bar = 0.2;
    c.defect_positions = {1};
  }
  c.n_samples = n_samples;
  c.master_seed = seed;
  c.case_name = case_name;
  c.variant = variant;
  c.tau = {0.0};
  c.s = {0.0};
  if (case_name == "a") {
    c.region = "R2";
    c.u = 2.0;
  } else if (case_name == "b") {
    c.region = defect ? "R3" : "R2";
    c.u = 10.0;
  } else if (case_name == "c") {
    c.u = 30.0;
    if (defect) {
      c.region = "R4";
      c.tau = {std::log(D_G(30.0, c.q, *c.q_bar))};
    } else {
      c.region = "R2";
    }
  } else {
    throw std::invalid_argument("fig8 case: a, b or c");
  }
  return c;
}

void write_fig2(const ExperimentConfig& c, const std::string& path) {
  SystemSpec spec = unscaled_spec(c);
  if (spec.horizon < 1) throw std::invalid_argument("fig2 needs a positive horizon");
  const auto rows = trajectory(spec, c.master_seed);
  auto out = open_out(path);
  out << 't';
  for (int j = 1; j <= spec.M; ++j) out << ",x" << j;
  out << '\n';
  for (std::size_t t = 0; t < rows.size(); ++t) {
    out << t;
    for (long x : rows[t]) out << ',' << x;
    out << '\n';
  }
}

void write_fig3(double q, double qbar, const std::string& path) {
  if (!(qbar > q)) throw std::invalid_argument("fig3 needs qbar > q");
  const double u1 = 1.0 / (1.0 - q), uc = u_critical(q, qbar);
  const double hi = std::max(40.0, 3.0 * uc);
  std::vector<std::pair<double, std::string>> pts;
  for (int k = 0; k <= 2000; ++k) pts.emplace_back(hi * k / 2000.0, "");
  pts.emplace_back(u1, "u=1/(1-q)");
  pts.emplace_back(uc, "u=u_c");
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  auto out = open_out(path);
  out << "u,A,marker\n";
  for (const auto& [u, tag] : pts) out << u << ',' << mean_position(u, q, qbar) << ',' << tag << '\n';
}

double write_exact_dist(const ExperimentConfig& c, const std::string& path) {
  std::vector<Rational> rr;
  SystemSpec spec;
  for (const std::string& r : c.rates) {
    rr.push_back(parse_rational(r));
    spec.rates.push_back(rr.back().convert_to<double>());
  }
  spec.M = static_cast<int>(rr.size());
  std::vector<int> times = c.times;
  const int tmax = times.empty() ? std::max(c.horizon, spec.M) : *std::max_element(times.begin(), times.end());
  if (times.empty())
    for (int t = spec.M; t <= tmax; ++t) times.push_back(t);
  spec.horizon = tmax;
  const int N = tmax - spec.M + 1;
  const ExactDistribution ex = enumerate_exact_distribution(N, spec.M, rr);
  const FiniteKernel K(spec);

  auto out = open_out(path);
  out.precision(15);
  out << "t1,ell1,t2,ell2,exact,fredholm,abs_error\n";
  double worst = 0.0;
  for (int t : times)
    for (long ell = 0; ell <= t - spec.M + 2; ++ell) {
      const double a = ex.prob_at_least(t, ell).convert_to<double>();
      const double b = joint_probability_detail(K, {t}, {ell}).value;
      worst = std::max(worst, std::abs(a - b));
      out << t << ',' << ell << ",,," << a << ',' << b << ',' << std::abs(a - b) << '\n';
    }
  if (times.size() == 2) {
    const int t1 = times[0], t2 = times[1];
    for (long l1 = 0; l1 <= t1 - spec.M + 2; ++l1)
      for (long l2 = 0; l2 <= t2 - spec.M + 2; ++l2) {
        const double a = ex.joint_at_least({t1, t2}, {l1, l2}).convert_to<double>();
        const double b = joint_probability_detail(K, {t1, t2}, {l1, l2}).value;
        worst = std::max(worst, std::abs(a - b));
        out << t1 << ',' << l1 << ',' << t2 << ',' << l2 << ',' << a << ',' << b << ',' << std::abs(a - b) << '\n';
      }
  }
  return worst;
}

void write_kernel_eval(const ExperimentConfig& c, const std::string& path) {
  const KernelKind kind = kernel_kind_from_name(c.kernel);
  std::vector<double> params;
  if (kind == KernelKind::PerturbedAiry) params = c.eta;
  if (kind == KernelKind::RankN) params = c.epsilon;
  const LimitKernelHandle K{kind, params};
  auto out = open_out(path);
  out.precision(15);
  out << "tau1,xi1,tau2,xi2,value\n";
  for (double t1 : c.tau)
    for (double x1 : c.s)
      for (double t2 : c.tau)
        for (double x2 : c.s) out << t1 << ',' << x1 << ',' << t2 << ',' << x2 << ',' << K(t1, x1, t2, x2) << '\n';
}

// ---------------------------------------------------------------- checks

CheckResult check_combinatorial_exhaustive(int max_n, int max_m) {
  CheckResult r{"combinatorial identities, exhaustive", false, 0.0, 0.0, ""};
  long cases = 0, bad = 0;
  for (int N = 1; N <= max_n; ++N)
    for (int M = 1; M <= max_m; ++M)
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (N * M)); ++bits) {
        const Matrix01 m = Matrix01::from_bits(N, M, bits);
        const int G = longest_left_down_path(m);
        const MatrixTrajectory tr = matrix_to_trajectory(m);
        const FirstColumnCheck fc = first_column_equals_G(m);
        ++cases;
        if (G != tr.d || !fc.equal() || fc.G != G) ++bad;
      }
  r.value = static_cast<double>(bad);
  r.pass = bad == 0;
  r.detail = std::to_string(cases) + " matrices, " + std::to_string(bad) + " failures";
  return r;
}

CheckResult check_schur_measure(int max_n, int max_m) {
  CheckResult r{"Schur measure, exact", false, 0.0, 0.0, ""};
  const std::vector<Rational> pool{Rational(1, 3), Rational(1, 2), Rational(1, 4)};
  long bad = 0, laws = 0;
  for (int N = 1; N <= max_n; ++N)
    for (int M = 1; M <= max_m; ++M) {
      const std::vector<Rational> rates(pool.begin(), pool.begin() + M);
      Rational total = 0, schur_total = 0;
      for (const auto& [seq, p] : growth_law(N, M, rates)) {
        const Rational w = schur_weight(seq, rates);
        if (w != p) ++bad;
        total += p;
        schur_total += w;
      }
      if (total != 1 || schur_total != 1) ++bad;
      ++laws;
    }
  r.value = static_cast<double>(bad);
  r.pass = bad == 0;
  r.detail = std::to_string(laws) + " (N, M) pairs, " + std::to_string(bad) + " mismatches";
  return r;
}

CheckResult check_oracle_vs_fredholm() {
  CheckResult r{"finite kernel vs enumeration, M=2 rates (0.3, 0.5)", false, 0.0, 1e-8, ""};
  const std::vector<Rational> rr{Rational(3, 10), Rational(1, 2)};
  SystemSpec spec;
  spec.M = 2;
  spec.rates = {0.3, 0.5};
  spec.horizon = 4;
  const ExactDistribution ex = enumerate_exact_distribution(3, 2, rr);
  const FiniteKernel K(spec);
  double worst = 0.0;
  int n = 0;
  for (int t = 2; t <= 4; ++t)
    for (long ell = 0; ell <= t; ++ell, ++n)
      worst = std::max(worst, std::abs(joint_probability_detail(K, {t}, {ell}).value -
                                       ex.prob_at_least(t, ell).convert_to<double>()));
  for (long l1 = 0; l1 <= 2; ++l1)
    for (long l2 = 0; l2 <= 4; ++l2, ++n)
      worst = std::max(worst, std::abs(joint_probability_detail(K, {2, 4}, {l1, l2}).value -
                                       ex.joint_at_least({2, 4}, {l1, l2}).convert_to<double>()));
  r.value = worst;
  r.pass = worst <= r.tolerance;
  r.detail = std::to_string(n) + " probabilities";
  return r;
}

CheckResult check_critical_time() {
  CheckResult r{"u_c = 10 and A2(u_c) = A_G(u_c) = 6.4 at q=0.1, qbar=0.2", false, 0.0, 1e-12, ""};
  const double uc = u_critical(0.1, 0.2);
  r.value = std::max({std::abs(uc - 10.0), std::abs(A2(uc, 0.1) - 6.4), std::abs(AG(uc, 0.1, 0.2) - 6.4)});
  r.pass = r.value <= r.tolerance;
  std::ostringstream d;
  d.precision(15);
  d << "u_c=" << uc << " A2=" << A2(uc, 0.1) << " AG=" << AG(uc, 0.1, 0.2);
  r.detail = d.str();
  return r;
}

CheckResult check_mean_position(std::size_t n_samples, std::uint64_t seed) {
  CheckResult r{"mean position, q=0.1, M=400, u=5", false, 0.0, 0.05, ""};
  const int M = 400, t = 2000;
  const SampleSet s = sample_ensemble(uniform_spec(M, 0.1, t), {t}, n_samples, seed);
  double mean = 0.0;
  for (long v : s.values) mean += static_cast<double>(v);
  mean /= static_cast<double>(n_samples) * M;
  const double target = A2(5.0, 0.1);
  r.value = std::abs(mean - target);
  r.pass = r.value <= r.tolerance && std::abs(target - 2.5) < 1e-12;
  std::ostringstream d;
  d << "mean(L)/M=" << mean << " A2(5)=" << target;
  r.detail = d.str();
  return r;
}

CheckResult check_fig8(const std::string& case_name, const std::string& variant, std::size_t n_samples,
                       std::uint64_t seed) {
  const ExperimentConfig c = fig8_config(case_name, variant, n_samples, seed);
  const ComparisonReport rep = run_experiment(c, "");
  CheckResult r{"fig8(" + case_name + ") " + variant + " vs " + rep.target_law, rep.pass, rep.ks_distance,
                rep.tolerance, ""};
  std::ostringstream d;
  d << "n=" << rep.n << " mean_s=" << rep.mean << " var_s=" << rep.variance;
  r.detail = d.str();
  return r;
}

double region4_two_time_integral(double s1, double s2, double tau1, double tau2) {
  if (!(tau1 < tau2)) throw std::invalid_argument("two-time integral needs tau1 < tau2");
  const double e = std::exp(tau1 - tau2), v = 1.0 - e * e;
  const double pi = std::acos(-1.0);
  Eigen::VectorXd x, w;
  gauss_legendre(200, -12.0, s1, x, w);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double inner = 0.5 * (1.0 + std::erf((s2 - e * x[k]) / std::sqrt(v)));
    sum += w[k] * std::exp(-x[k] * x[k]) / std::sqrt(pi) * inner;
  }
  return sum;
}

CheckResult check_region4_two_time() {
  CheckResult r{"region 4 two-time determinant vs double Gaussian integral", false, 0.0, 1e-6, ""};
  const std::vector<std::array<double, 4>> probes{
      {0.3, -0.2, 0.0, 0.7}, {0.0, 0.0, 0.0, 0.5}, {-0.5, 0.4, -0.2, 0.3}, {1.0, 0.5, 0.0, 1.5}, {0.2, 0.2, 0.1, 0.2}};
  const KernelBlock K = LimitKernelHandle{KernelKind::OUGaussian, {}}.block();
  for (const auto& [s1, s2, t1, t2] : probes) {
    const double det = det_continuous_value(K, {{t1, s1}, {t2, s2}});
    r.value = std::max(r.value, std::abs(det - region4_two_time_integral(s1, s2, t1, t2)));
  }
  r.pass = r.value <= r.tolerance;
  r.detail = "5 probe points";
  return r;
}

namespace {

// Largest-eigenvalue CDF of the 2x2 GUE with weight exp(-tr H^2): the eigenvalue
// density is (x-y)^2 exp(-x^2-y^2) / pi, so the CDF is (2 I2 I0 - 2 I1^2) / pi
// with I_k the integral of x^k exp(-x^2) over (-inf, s].
double gue2_max_cdf(double s) {
  Eigen::VectorXd x, w;
  gauss_legendre(200, -12.0, s, x, w);
  double I[3] = {0, 0, 0};
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double g = w[k] * std::exp(-x[k] * x[k]);
    I[0] += g;
    I[1] += g * x[k];
    I[2] += g * x[k] * x[k];
  }
  return (2 * I[2] * I[0] - 2 * I[1] * I[1]) / std::acos(-1.0);
}

}  // namespace

CheckResult check_kernel_reductions() {
  CheckResult r{"kernel reductions on a 5x5 probe grid", false, 0.0, 1e-8, ""};
  const double grid[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const double ta = -0.3, tb = 0.4;
  double g_k3 = 0, g_k3inf = 0, g_ext = 0, g_kg = 0, g_kg2 = 0, g_cd = 0, g_fixed = 0;
  const RankNKernel k1({0.0}), k2({0.0, 1e8});
  for (double x1 : grid)
    for (double x2 : grid) {
      for (auto [t1, t2] : {std::pair{ta, tb}, std::pair{tb, ta}}) {
        const double k3 = kernel_K3(t1, x1, t2, x2);
        g_k3 = std::max(g_k3, std::abs(kernel_K3prime(t1, x1, t2, x2, {0.0}) - k3));
        g_k3inf = std::max(g_k3inf, std::abs(kernel_K3prime(t1, x1, t2, x2, {0.0, 1e10}) - k3));
        g_ext = std::max(g_ext, std::abs(kernel_K3prime(t1, x1, t2, x2, {1e10}) - extended_airy(t1, x1, t2, x2)));
        const double kg = kernel_KG(t1, x1, t2, x2);
        g_kg = std::max(g_kg, std::abs(k1(t1, x1, t2, x2) - kg));
        g_kg2 = std::max(g_kg2, std::abs(k2(t1, x1, t2, x2) - kg));
        g_fixed = std::max(g_fixed, std::abs(kernel_fixedM(t1, x1, t2, x2, {0.3, 0.0}) -
                                             kernel_Kn(t1, x1, t2, x2, {0.3, 0.0})));
      }
      g_cd = std::max(g_cd, std::abs(extended_airy_direct(0.2, x1, 0.2, x2) - airy_kernel(x1, x2)));
    }
  const KernelBlock kn = LimitKernelHandle{KernelKind::RankN, {0.0, 0.0}}.block();
  double g_gue = 0.0;
  for (double s : {0.0, 1.2}) g_gue = std::max(g_gue, std::abs(det_continuous_value(kn, {{0.0, s}}) - gue2_max_cdf(s)));
  r.value = std::max({g_k3, g_k3inf, g_ext, g_kg, g_kg2, g_cd, g_fixed, g_gue});
  r.pass = r.value <= r.tolerance;
  std::ostringstream d;
  d.precision(3);
  d << "K3'(0)-K3=" << g_k3 << " K3'(0,inf)-K3=" << g_k3inf << " K3'(inf)-K2=" << g_ext << " K1(0)-KG=" << g_kg
    << " K2(0,inf)-KG=" << g_kg2 << " ext(tau,tau)-CD=" << g_cd << " fixedM-Kn=" << g_fixed
    << " det K2(0,0)-GUE2=" << g_gue;
  r.detail = d.str();
  return r;
}

CheckResult check_quadrature_stability() {
  CheckResult r{"TW-GUE quadrature stability and phi semigroup", false, 0.0, 1e-8, ""};
  bool stable = true;
  for (int k = 0; k <= 14; ++k) {
    const NystromResult n = tw_gue_cdf_detail(-5.0 + 0.5 * k);
    stable = stable && n.stable;
    r.value = std::max(r.value, std::abs(n.value - n.coarse));
  }
  long bad = 0, cases = 0;
  for (long t1 = 0; t1 <= 12; ++t1)
    for (long t2 = t1 + 1; t2 <= 12; ++t2)
      for (long t3 = t2 + 1; t3 <= 12; ++t3)
        for (long x1 = -12; x1 <= 12; ++x1)
          for (long x3 = -12; x3 <= 12; ++x3) {
            boost::multiprecision::cpp_int sum = 0;
            for (long x2 = x1; x2 <= x1 + (t2 - t1); ++x2) sum += phi_exact(t1, t2, x1, x2) * phi_exact(t2, t3, x2, x3);
            ++cases;
            if (sum != phi_exact(t1, t3, x1, x3)) ++bad;
          }
  r.pass = stable && r.value <= r.tolerance && bad == 0;
  r.detail = "15 s-values, " + std::to_string(cases) + " semigroup cases, " + std::to_string(bad) + " failures";
  return r;
}

CheckResult check_region1_monte_carlo(std::size_t n_samples, std::uint64_t seed) {
  CheckResult r{"region 1 determinant vs Monte Carlo, M=400, tau=0", false, 0.0, 3.0, ""};
  ScaledExperiment e;
  e.region = Region::R1;
  e.q = 0.1;
  e.M = 400;
  e.taus = {0.0};
  e.ss = {1.0};
  const LatticeSetup ls = scaling_map(e);
  const int t = ls.times.front();
  const double tau = ls.effective_taus.front();
  const SampleSet s = sample_ensemble(uniform_spec(e.M, e.q, t), {t}, n_samples, seed);
  std::ostringstream d;
  d.precision(4);
  d << "t=" << t << " tau_eff=" << tau;
  for (long ell = 1; ell <= 3; ++ell) {
    const double p = region1_prob_onetime(ell, tau);
    const double emp = static_cast<double>(std::count_if(s.values.begin(), s.values.end(),
                                                         [ell](long v) { return v >= ell; })) /
                       static_cast<double>(n_samples);
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(n_samples));
    const double z = std::abs(emp - p) / se;
    r.value = std::max(r.value, z);
    d << " | l=" << ell << " det=" << p << " mc=" << emp << " z=" << z;
  }
  r.pass = r.value <= r.tolerance;
  r.detail = d.str();
  return r;
}

std::vector<CheckResult> verify(const std::vector<std::string>& levels) {
  const std::set<std::string> known{"combinatorial-exhaustive", "oracle-vs-fredholm", "kernel-crosschecks",
                                    "mc-vs-theory"};
  std::set<std::string> want(levels.begin(), levels.end());
  if (want.empty()) want = known;
  for (const std::string& l : want)
    if (!known.count(l)) throw std::invalid_argument("unknown verify level: " + l);
  std::vector<CheckResult> out;
  if (want.count("combinatorial-exhaustive")) {
    out.push_back(check_combinatorial_exhaustive());
    out.push_back(check_schur_measure());
  }
  if (want.count("oracle-vs-fredholm")) out.push_back(check_oracle_vs_fredholm());
  if (want.count("kernel-crosschecks")) {
    out.push_back(check_critical_time());
    out.push_back(check_region4_two_time());
    out.push_back(check_kernel_reductions());
    out.push_back(check_quadrature_stability());
  }
  if (want.count("mc-vs-theory")) {
    out.push_back(check_mean_position());
    for (const char* cs : {"a", "b"})
      for (const char* v : {"defect", "no-defect"}) out.push_back(check_fig8(cs, v));
    out.push_back(check_fig8("c", "defect"));
    out.push_back(check_region1_monte_carlo());
  }
  return out;
}

json to_json(const std::vector<CheckResult>& results) {
  json arr = json::array();
  for (const CheckResult& r : results)
    arr.push_back({{"name", r.name}, {"pass", r.pass}, {"value", r.value}, {"tolerance", r.tolerance},
                   {"detail", r.detail}});
  return arr;
}

}  // namespace tasep
