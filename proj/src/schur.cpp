#include "tasep/combinatorics.hpp"

#include <stdexcept>

namespace tasep {

namespace {

struct SsytSum {
  const Partition& shape;
  const std::vector<Rational>& x;
  std::vector<std::vector<int>> fill;
  Rational total = 0;

  void run(std::size_t r, std::size_t c, const Rational& acc) {
    if (r == shape.size()) {
      total += acc;
      return;
    }
    if (c == static_cast<std::size_t>(shape[r])) {
      run(r + 1, 0, acc);
      return;
    }
    int lo = 1;
    if (c > 0) lo = std::max(lo, fill[r][c - 1]);
    if (r > 0) lo = std::max(lo, fill[r - 1][c] + 1);
    for (int v = lo; v <= static_cast<int>(x.size()); ++v) {
      fill[r][c] = v;
      run(r, c + 1, acc * x[static_cast<std::size_t>(v - 1)]);
    }
  }
};

Rational determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      const Rational f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

bool is_partition(const Partition& p) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] < 0) return false;
    if (k > 0 && p[k] > p[k - 1]) return false;
  }
  return true;
}

}  // namespace

Rational schur_ssyt(const Partition& shape, const std::vector<Rational>& x) {
  const Partition s = trimmed(shape);
  if (!is_partition(s)) throw std::invalid_argument("shape is not a partition");
  SsytSum e{s, x, {}, 0};
  for (int len : s) e.fill.emplace_back(static_cast<std::size_t>(len), 0);
  e.run(0, 0, Rational(1));
  return e.total;
}

Rational schur_jacobi_trudi(const Partition& shape, const std::vector<Rational>& x) {
  const Partition s = trimmed(shape);
  if (!is_partition(s)) throw std::invalid_argument("shape is not a partition");
  if (s.empty()) return 1;
  const int top = s.front() + static_cast<int>(s.size());
  // h[k] = complete homogeneous symmetric polynomial of degree k.
  std::vector<Rational> h(static_cast<std::size_t>(top + 1), 0);
  h[0] = 1;
  for (const Rational& xi : x)
    for (int k = 1; k <= top; ++k) h[static_cast<std::size_t>(k)] += xi * h[static_cast<std::size_t>(k - 1)];
  const std::size_t n = s.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const int k = s[i] - static_cast<int>(i) + static_cast<int>(j);
      if (k >= 0 && k <= top) a[i][j] = h[static_cast<std::size_t>(k)];
    }
  return determinant(std::move(a));
}

Rational schur_poly(const Partition& shape, const std::vector<Rational>& x) {
  return size_of(shape) <= 12 ? schur_ssyt(shape, x) : schur_jacobi_trudi(shape, x);
}

Rational schur_weight(const DiagramSequence& seq, const std::vector<Rational>& rates) {
  const std::size_t N = seq.size();
  Partition prev;
  for (const Partition& raw : seq) {
    const Partition lam = trimmed(raw);
    if (!is_partition(lam) || !is_horizontal_strip(lam, prev)) return 0;
    prev = lam;
  }
  Rational w = 1;
  std::vector<Rational> p;
  for (auto it = rates.rbegin(); it != rates.rend(); ++it) {  // (p_M, ..., p_1)
    const Rational one_minus = Rational(1) - *it;
    if (one_minus <= 0) throw std::invalid_argument("stay rates must be below 1");
    p.push_back(*it / one_minus);
    w *= rational_pow(one_minus, static_cast<unsigned>(N));
  }
  return w * schur_poly(transpose(prev), p);
}

}  // namespace tasep
