#include "tasep/combinatorics.hpp"

#include "tasep/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tasep {

Rational parse_rational(const std::string& text) {
  using boost::multiprecision::cpp_int;
  const auto slash = text.find('/');
  if (slash != std::string::npos)
    return Rational(cpp_int(text.substr(0, slash)), cpp_int(text.substr(slash + 1)));
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(cpp_int(text));
  const std::string frac = text.substr(dot + 1);
  const std::string whole = text.substr(0, dot);
  cpp_int den = 1;
  for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
  const bool negative = !whole.empty() && whole[0] == '-';
  cpp_int num(whole.empty() || whole == "-" ? std::string("0") : whole);
  cpp_int f(frac.empty() ? std::string("0") : frac);
  num = num * den + (negative ? -f : f);
  return Rational(num, den);
}

Rational rational_pow(Rational base, unsigned exponent) {
  Rational out = 1;
  while (exponent) {
    if (exponent & 1U) out *= base;
    base *= base;
    exponent >>= 1U;
  }
  return out;
}

Matrix01::Matrix01(int N, int M) : N_(N), M_(M) {
  if (N < 0 || M < 1) throw std::invalid_argument("Matrix01 needs N >= 0 and M >= 1");
  data_.assign(static_cast<std::size_t>(N * M), 0);
}

Matrix01 Matrix01::from_bits(int N, int M, std::uint64_t bits) {
  Matrix01 m(N, M);
  for (int k = 0; k < N * M; ++k) m.data_[static_cast<std::size_t>(k)] = (bits >> k) & 1U;
  return m;
}

Matrix01 Matrix01::from_pairs(int N, int M, const std::vector<std::pair<int, int>>& ones) {
  Matrix01 m(N, M);
  for (auto [i, j] : ones) m.set(i, j, 1);
  return m;
}

Matrix01 Matrix01::top_rows(int n) const {
  Matrix01 m(n, M_);
  std::copy_n(data_.begin(), static_cast<std::size_t>(n * M_), m.data_.begin());
  return m;
}

int Matrix01::count_ones() const {
  return static_cast<int>(std::count(data_.begin(), data_.end(), 1));
}

Matrix01 sample_matrix01(int N, int M, const std::vector<double>& rates, std::uint64_t seed,
                         std::uint64_t sample) {
  if (static_cast<int>(rates.size()) != M) throw std::invalid_argument("rates must have length M");
  Matrix01 m(N, M);
  const StayStream rng(seed, sample);
  for (int j = 1; j <= M; ++j) {
    const double q = rates[static_cast<std::size_t>(j - 1)];
    const std::uint64_t thr = stay_threshold(q);
    for (int i = 1; i <= N; ++i) {
      const bool one = q >= 1.0 || rng.bits(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)) < thr;
      m.set(i, M + 1 - j, one);
    }
  }
  return m;
}

MatrixTrajectory matrix_to_trajectory(const Matrix01& m) {
  const int N = m.rows(), M = m.cols();
  std::vector<long> pos(static_cast<std::size_t>(M));
  for (int j = 1; j <= M; ++j) pos[static_cast<std::size_t>(j - 1)] = M - j;
  MatrixTrajectory out;
  out.L.assign(static_cast<std::size_t>(N + M), 0);
  for (int s = 0; s + 1 < N + M; ++s) {
    long ahead_old = 0;
    for (int j = 1; j <= M; ++j) {
      const long cur = pos[static_cast<std::size_t>(j - 1)];
      const bool free = (j == 1) || (ahead_old != cur + 1);
      ahead_old = cur;
      const int i = s - j + 2;
      const bool stay = (i < 1 || i > N) ? true : m(i, M + 1 - j) == 1;
      if (free && !stay) pos[static_cast<std::size_t>(j - 1)] = cur + 1;
    }
    out.L[static_cast<std::size_t>(s + 1)] = pos.back();
  }
  out.d = N - static_cast<int>(out.L.back());
  return out;
}

int longest_left_down_path(const Matrix01& m) {
  const int N = m.rows(), M = m.cols();
  // F[j] after row i: best chain within rows 1..i and columns j..M.
  std::vector<int> F(static_cast<std::size_t>(M + 2), 0);
  for (int i = 1; i <= N; ++i) {
    std::vector<int> next(F.size(), 0);
    for (int j = M; j >= 1; --j)
      next[static_cast<std::size_t>(j)] =
          std::max(next[static_cast<std::size_t>(j + 1)], F[static_cast<std::size_t>(j)] + m(i, j));
    F.swap(next);
  }
  return F[1];
}

Partition trimmed(Partition p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

Partition transpose(const Partition& p) {
  Partition t;
  if (p.empty()) return t;
  t.assign(static_cast<std::size_t>(p.front()), 0);
  for (int row : p)
    for (int c = 0; c < row; ++c) ++t[static_cast<std::size_t>(c)];
  return t;
}

int size_of(const Partition& p) {
  int s = 0;
  for (int v : p) s += v;
  return s;
}

Partition shape_of(const Tableau& t) {
  Partition p;
  for (const auto& row : t) p.push_back(static_cast<int>(row.size()));
  return trimmed(p);
}

Tableau transpose(const Tableau& t) {
  Tableau out;
  for (std::size_t r = 0; r < t.size(); ++r)
    for (std::size_t c = 0; c < t[r].size(); ++c) {
      if (out.size() <= c) out.resize(c + 1);
      out[c].push_back(t[r][c]);
    }
  return out;
}

bool is_semistandard(const Tableau& t) {
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (r > 0 && t[r].size() > t[r - 1].size()) return false;
    for (std::size_t c = 0; c < t[r].size(); ++c) {
      if (c > 0 && t[r][c] < t[r][c - 1]) return false;
      if (r > 0 && t[r][c] <= t[r - 1][c]) return false;
    }
  }
  return true;
}

namespace {

// Row insertion; `strict` bumps the leftmost entry > x (normal RSK), otherwise
// the leftmost entry >= x (dual RSK). Returns the row that grew.
std::size_t insert(Tableau& P, int x, bool strict) {
  for (std::size_t r = 0;; ++r) {
    if (r == P.size()) {
      P.push_back({x});
      return r;
    }
    auto& row = P[r];
    auto it = strict ? std::upper_bound(row.begin(), row.end(), x) : std::lower_bound(row.begin(), row.end(), x);
    if (it == row.end()) {
      row.push_back(x);
      return r;
    }
    std::swap(*it, x);
  }
}

void record(Tableau& Q, std::size_t row, int label) {
  if (Q.size() <= row) Q.resize(row + 1);
  Q[row].push_back(label);
}

std::vector<int> second_row(const Matrix01& m) {
  std::vector<int> w;
  for (int i = 1; i <= m.rows(); ++i)
    for (int j = 1; j <= m.cols(); ++j)
      if (m(i, j)) w.push_back(j);
  return w;
}

}  // namespace

TableauPair dual_rsk(const Matrix01& m) {
  TableauPair out;
  for (int i = 1; i <= m.rows(); ++i)
    for (int j = 1; j <= m.cols(); ++j)
      if (m(i, j)) record(out.Q, insert(out.P, j, false), i);
  out.shape = shape_of(out.P);
  return out;
}

Tableau rsk_insertion(const std::vector<int>& word) {
  Tableau P;
  for (int x : word) insert(P, x, true);
  return P;
}

TableauPair rsk_matrix(const std::vector<std::vector<int>>& w) {
  TableauPair out;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w[i].size(); ++j)
      for (int k = 0; k < w[i][j]; ++k)
        record(out.Q, insert(out.P, static_cast<int>(j) + 1, true), static_cast<int>(i) + 1);
  out.shape = shape_of(out.P);
  return out;
}

FirstColumnCheck first_column_equals_G(const Matrix01& m) {
  FirstColumnCheck c;
  const TableauPair pq = dual_rsk(m);
  c.lambda_prime_1 = static_cast<int>(pq.shape.size());
  c.G = longest_left_down_path(m);
  auto word = second_row(m);
  std::reverse(word.begin(), word.end());
  c.transpose_matches = transpose(pq.P) == rsk_insertion(word);
  return c;
}

DiagramSequence growth_sequence(const Matrix01& m) {
  DiagramSequence seq;
  Tableau P;
  for (int i = 1; i <= m.rows(); ++i) {
    for (int j = 1; j <= m.cols(); ++j)
      if (m(i, j)) insert(P, j, false);
    seq.push_back(shape_of(P));
  }
  return seq;
}

bool is_horizontal_strip(const Partition& outer, const Partition& inner) {
  // outer / inner is a horizontal strip iff inner interlaces: outer_{k+1} <= inner_k <= outer_k.
  if (inner.size() > outer.size()) return false;
  for (std::size_t k = 0; k < outer.size(); ++k) {
    const int in = k < inner.size() ? inner[k] : 0;
    if (in > outer[k]) return false;
    if (k + 1 < outer.size() && outer[k + 1] > in) return false;
  }
  return true;
}

Rational matrix_probability(const Matrix01& m, const std::vector<Rational>& rates) {
  const int M = m.cols();
  Rational p = 1;
  for (int j = 1; j <= M; ++j) {
    const Rational& q = rates[static_cast<std::size_t>(j - 1)];
    for (int i = 1; i <= m.rows(); ++i) p *= m(i, M + 1 - j) ? q : Rational(1) - q;
  }
  return p;
}

namespace {

void check_enumerable(int N, int M, const std::vector<Rational>& rates) {
  if (N < 1 || M < 1) throw std::invalid_argument("N and M must be positive");
  if (N * M > 22) throw std::invalid_argument("2^(N*M) enumeration guard exceeded (N*M > 22)");
  if (static_cast<int>(rates.size()) != M) throw std::invalid_argument("rates must have length M");
}

// Probability tables by column: weight of a column holding k ones.
std::vector<std::vector<Rational>> column_tables(int N, int M, const std::vector<Rational>& rates) {
  std::vector<std::vector<Rational>> tab(static_cast<std::size_t>(M + 1));
  for (int c = 1; c <= M; ++c) {
    const Rational& q = rates[static_cast<std::size_t>(M - c)];  // column c <-> particle M+1-c
    auto& t = tab[static_cast<std::size_t>(c)];
    for (int k = 0; k <= N; ++k) t.push_back(rational_pow(q, static_cast<unsigned>(k)) *
                                             rational_pow(Rational(1) - q, static_cast<unsigned>(N - k)));
  }
  return tab;
}

template <class F>
void for_each_matrix(int N, int M, const std::vector<Rational>& rates, F&& f) {
  const auto tab = column_tables(N, M, rates);
  const std::uint64_t count = std::uint64_t{1} << (N * M);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    const Matrix01 m = Matrix01::from_bits(N, M, bits);
    Rational p = 1;
    for (int c = 1; c <= M; ++c) {
      int k = 0;
      for (int i = 1; i <= N; ++i) k += m(i, c);
      p *= tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
    }
    f(m, p);
  }
}

}  // namespace

ExactDistribution enumerate_exact_distribution(int N, int M, const std::vector<Rational>& rates) {
  check_enumerable(N, M, rates);
  ExactDistribution d;
  d.N = N;
  d.M = M;
  for_each_matrix(N, M, rates, [&](const Matrix01& m, const Rational& p) { d.paths[matrix_to_trajectory(m).L] += p; });
  return d;
}

Rational ExactDistribution::prob_at_least(int t, long ell) const { return joint_at_least({t}, {ell}); }

Rational ExactDistribution::joint_at_least(const std::vector<int>& times, const std::vector<long>& ells) const {
  for (int t : times)
    if (t < 0 || t > N + M - 1) throw std::invalid_argument("time outside the enumerated range");
  Rational s = 0;
  for (const auto& [path, p] : paths) {
    bool ok = true;
    for (std::size_t k = 0; k < times.size() && ok; ++k) ok = path[static_cast<std::size_t>(times[k])] >= ells[k];
    if (ok) s += p;
  }
  return s;
}

std::map<DiagramSequence, Rational> growth_law(int N, int M, const std::vector<Rational>& rates) {
  check_enumerable(N, M, rates);
  std::map<DiagramSequence, Rational> law;
  for_each_matrix(N, M, rates, [&](const Matrix01& m, const Rational& p) { law[growth_sequence(m)] += p; });
  return law;
}

std::vector<std::vector<int>> sample_geometric_matrix(int N, int M, const std::vector<double>& rates,
                                                      std::uint64_t seed, std::uint64_t sample) {
  if (static_cast<int>(rates.size()) != M) throw std::invalid_argument("rates must have length M");
  const StayStream rng(seed, sample);
  std::vector<std::vector<int>> w(static_cast<std::size_t>(N), std::vector<int>(static_cast<std::size_t>(M), 0));
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= M; ++j) {
      const double q = rates[static_cast<std::size_t>(j - 1)];
      if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("geometric parameter must lie in [0,1)");
      if (q == 0.0) continue;
      const double u = 1.0 - rng.uniform(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));  // (0,1]
      w[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
          static_cast<int>(std::floor(std::log(u) / std::log(q)));
    }
  return w;
}

long geometric_last_passage(const std::vector<std::vector<int>>& w) {
  const std::size_t N = w.size();
  if (N == 0) throw std::invalid_argument("empty matrix");
  const std::size_t M = w[0].size();
  std::vector<long> G(M, 0);
  for (std::size_t i = 0; i < N; ++i) {
    long left = 0;
    for (std::size_t j = 0; j < M; ++j) {
      const long up = G[j];
      G[j] = std::max(up, left) + w[i][j];
      left = G[j];
    }
  }
  return static_cast<long>(N + M) - 1 + G[M - 1];
}

}  // namespace tasep
