#include "tasep/scaling.hpp"

#include "tasep/core.hpp"

#include <cmath>
#include <stdexcept>

namespace tasep {

std::string region_name(Region r) {
  switch (r) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::R3Degenerate: return "R3-degenerate";
    case Region::R4: return "R4";
    case Region::R4Degenerate: return "R4-degenerate";
    case Region::FixedM: return "fixedM";
    case Region::ContinuousR2: return "continuousR2";
  }
  return "unknown";
}

Region region_from_name(const std::string& name) {
  for (Region r : {Region::R1, Region::R2, Region::R3, Region::R3Degenerate, Region::R4, Region::R4Degenerate,
                   Region::FixedM, Region::ContinuousR2})
    if (region_name(r) == name) return r;
  throw std::invalid_argument("unknown region: " + name);
}

double D1(double q) { return std::sqrt(q) / (1 - q); }

double C_of_u(double u, double q) {
  const double a = 1 + std::sqrt((1 - q) / (q * (u - 1)));
  const double b = std::sqrt(u - 1) - std::sqrt(q / (1 - q));
  return 2 * std::pow(u - 1, 5.0 / 6) * std::cbrt(a) * std::cbrt(b);
}

double D_of_u(double u, double q) {
  const double a = 1 + std::sqrt((1 - q) / (q * (u - 1)));
  const double b = std::sqrt(u - 1) - std::sqrt(q / (1 - q));
  return std::pow(u - 1, 1.0 / 6) * std::sqrt(q * (1 - q)) * std::pow(a * b, 2.0 / 3);
}

double D_G(double u, double q, double qbar) {
  const double c3 = 2 * qbar * qbar * qbar;
  const double inner = c3 / (1 - qbar) * (u - 1) - c3 * q * (1 - q) / ((qbar - q) * (qbar - q) * (1 - qbar));
  return (1 - qbar) / qbar * std::sqrt(inner);
}

double mu_of_u(double u, double q) {
  const double p = q / (1 - q);
  return (p * (u - 2) + 2 * std::sqrt(p * (u - 1))) / (1 + p);
}

double z_c(double u, double q) {
  const double p = q / (1 - q);
  return (std::sqrt(u - 1) - std::sqrt(p)) / (std::sqrt(p * p * (u - 1)) + std::sqrt(p));
}

double A2_continuous(double u) { return (std::sqrt(u) - 1) * (std::sqrt(u) - 1); }
double C_continuous(double u) { return 2 * std::pow(u, 5.0 / 6) * std::cbrt(std::sqrt(u) - 1); }
double D_continuous(double u) { return std::pow(u, 1.0 / 6) * std::pow(std::sqrt(u) - 1, 2.0 / 3); }

double u_from_region4_tau(double tau, double q, double qbar) {
  const double c3 = 2 * qbar * qbar * qbar;
  const double lead = (1 - qbar) / qbar;
  return 1 + q * (1 - q) / ((qbar - q) * (qbar - q)) + std::exp(2 * tau) / (lead * lead * c3 / (1 - qbar));
}

namespace {

[[noreturn]] void reject(const ScaledExperiment& e, const std::string& why) {
  throw std::invalid_argument(region_name(e.region) + " not admissible: " + why);
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

std::vector<double> region4_us(const ScaledExperiment& e) {
  std::vector<double> us;
  for (double tau : e.taus) us.push_back(u_from_region4_tau(tau, e.q, *e.qbar));
  return us;
}

}  // namespace

void ScaledExperiment::check_admissible() const {
  if (!(q > 0 && q < 1)) reject(*this, "requires 0 < q < 1");
  if (M < 1) reject(*this, "requires M >= 1");
  if (taus.empty() || taus.size() != ss.size()) reject(*this, "needs matching, nonempty tau and s lists");
  const bool defect = qbar && *qbar > q;
  switch (region) {
    case Region::R1: break;
    case Region::R2:
      if (!(u > 1 / (1 - q))) reject(*this, "requires u > 1/(1-q)");
      if (defect && !(u < u_critical(q, *qbar))) reject(*this, "requires u < u_c");
      break;
    case Region::R3:
    case Region::R3Degenerate:
      if (!defect) reject(*this, "requires qbar > q");
      if (!near(u, u_critical(q, *qbar))) reject(*this, "requires u = u_c");
      break;
    case Region::R4:
    case Region::R4Degenerate:
      if (!defect) reject(*this, "requires qbar > q");
      for (double uj : region4_us(*this))
        if (!(uj > u_critical(q, *qbar))) reject(*this, "requires u > u_c");
      break;
    case Region::FixedM:
      if (!(T > 0)) reject(*this, "requires T > 0");
      if (!params.empty() && params.size() != static_cast<std::size_t>(M))
        reject(*this, "requires one epsilon per particle");
      break;
    case Region::ContinuousR2:
      if (!(u > 1)) reject(*this, "requires u > 1");
      break;
  }
  if (region == Region::R3Degenerate || region == Region::R4Degenerate) {
    if (params.empty()) reject(*this, "requires at least one defect parameter");
    if (params.size() > static_cast<std::size_t>(M)) reject(*this, "has more defects than particles");
  }
  for (double v : params)
    if (v < 0) reject(*this, "requires eta_i >= 0 and epsilon_i >= 0");
}

LatticeSetup scaling_map(const ScaledExperiment& e) {
  e.check_admissible();
  LatticeSetup out;
  const double M = e.M;
  out.rates.assign(static_cast<std::size_t>(e.M), e.q);
  const bool defect = e.qbar && *e.qbar > e.q;

  for (std::size_t j = 0; j < e.taus.size(); ++j) {
    const double tau = e.taus[j], s = e.ss[j];
    double t = 0.0, ell = 0.0;
    switch (e.region) {
      case Region::R1:
        t = std::round(M / (1 - e.q) + D1(e.q) * std::sqrt(M) * tau);
        ell = s;
        break;
      case Region::R2:
      case Region::R3:
      case Region::R3Degenerate:
        t = std::round(e.u * M + C_of_u(e.u, e.q) * std::pow(M, 2.0 / 3) * tau);
        ell = A2(t / M, e.q) * M - D_of_u(e.u, e.q) * std::cbrt(M) * s;
        break;
      case Region::R4:
      case Region::R4Degenerate: {
        t = std::round(u_from_region4_tau(tau, e.q, *e.qbar) * M);
        ell = AG(t / M, e.q, *e.qbar) * M - D_G(t / M, e.q, *e.qbar) * std::sqrt(M) * s;
        break;
      }
      case Region::FixedM:
        t = std::round(std::exp(2 * tau) * e.T);
        ell = (1 - e.q) * t - s * std::sqrt(2 * e.q * (1 - e.q) * t);
        break;
      case Region::ContinuousR2:
        t = e.u * M + C_continuous(e.u) * std::pow(M, 2.0 / 3) * tau;
        ell = A2_continuous(t / M) * M - D_continuous(e.u) * std::cbrt(M) * s;
        break;
    }
    if (e.region == Region::ContinuousR2) {
      out.real_times.push_back(t);
    } else {
      if (t < M) reject(e, "maps to a lattice time below M");
      out.times.push_back(static_cast<int>(t));
    }
    out.ells.push_back(std::lround(ell));
    out.effective_taus.push_back(effective_tau(e, t));
  }

  if (e.region == Region::R3Degenerate || e.region == Region::R4Degenerate) {
    const double qb = *e.qbar;
    for (std::size_t i = 0; i < e.params.size(); ++i) {
      const double shift = e.region == Region::R3Degenerate ? e.params[i] / (D_of_u(e.u, e.q) * std::cbrt(M))
                                                            : 2 * e.params[i] / std::sqrt(M);
      out.rates[i] = qb - qb * (1 - qb) * shift;
    }
  } else if (e.region == Region::FixedM) {
    for (std::size_t i = 0; i < e.params.size(); ++i)
      out.rates[i] = e.q - std::sqrt(2 * e.q * (1 - e.q) / e.T) * e.params[i];
  } else if (defect) {
    out.rates[0] = *e.qbar;
  }
  for (double r : out.rates)
    if (!(r >= 0 && r < 1)) reject(e, "maps a stay rate outside [0, 1)");
  return out;
}

double inverse_map(const ScaledExperiment& e, double t, double L) {
  const double M = e.M;
  switch (e.region) {
    case Region::R1: return L;
    case Region::R2:
    case Region::R3:
    case Region::R3Degenerate:
      return (A2(t / M, e.q) * M - L) / (D_of_u(e.u, e.q) * std::cbrt(M));
    case Region::R4:
    case Region::R4Degenerate:
      return (AG(t / M, e.q, *e.qbar) * M - L) / (D_G(t / M, e.q, *e.qbar) * std::sqrt(M));
    case Region::FixedM: return ((1 - e.q) * t - L) / std::sqrt(2 * e.q * (1 - e.q) * t);
    case Region::ContinuousR2: return (A2_continuous(t / M) * M - L) / (D_continuous(e.u) * std::cbrt(M));
  }
  throw std::logic_error("unhandled region");
}

double effective_tau(const ScaledExperiment& e, double t) {
  const double M = e.M;
  switch (e.region) {
    case Region::R1: return (t - M / (1 - e.q)) / (D1(e.q) * std::sqrt(M));
    case Region::R2:
    case Region::R3:
    case Region::R3Degenerate: return (t - e.u * M) / (C_of_u(e.u, e.q) * std::pow(M, 2.0 / 3));
    case Region::R4:
    case Region::R4Degenerate: return std::log(D_G(t / M, e.q, *e.qbar));
    case Region::FixedM: return 0.5 * std::log(t / e.T);
    case Region::ContinuousR2: return (t - e.u * M) / (C_continuous(e.u) * std::pow(M, 2.0 / 3));
  }
  throw std::logic_error("unhandled region");
}

}  // namespace tasep
