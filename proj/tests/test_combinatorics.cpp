#include "tasep/combinatorics.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace tasep;

namespace {

Matrix01 fig6a() {
  return Matrix01::from_pairs(
      6, 4, {{1, 1}, {1, 3}, {1, 4}, {2, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 4}, {4, 1}, {4, 4}, {5, 3}, {6, 1}, {6, 2}});
}

}  // namespace

TEST_CASE("worked 6x4 example") {
  const Matrix01 m = fig6a();
  const MatrixTrajectory tr = matrix_to_trajectory(m);
  CHECK(tr.L[9] == 1);
  CHECK(tr.d == 5);
  CHECK(longest_left_down_path(m) == 5);
  const TableauPair pq = dual_rsk(m);
  CHECK(pq.shape == Partition{4, 3, 2, 2, 2});
  CHECK(first_column_equals_G(m).lambda_prime_1 == 5);
  CHECK(growth_sequence(m).back() == Partition{4, 3, 2, 2, 2});
}

TEST_CASE("trivial matrices") {
  const Matrix01 zero(3, 4);
  CHECK(matrix_to_trajectory(zero).L.back() == 3);
  CHECK(matrix_to_trajectory(zero).d == 0);
  CHECK(longest_left_down_path(zero) == 0);
  CHECK(dual_rsk(zero).P.empty());
  CHECK(first_column_equals_G(zero).equal());
  for (const Partition& p : growth_sequence(zero)) CHECK(trimmed(p).empty());

  Matrix01 ones(3, 4);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 4; ++j) ones.set(i, j, 1);
  CHECK(matrix_to_trajectory(ones).d == 3);
  CHECK(matrix_to_trajectory(ones).L.back() == 0);

  CHECK(longest_left_down_path(Matrix01::from_pairs(3, 1, {{1, 1}, {3, 1}})) == 2);

  const TableauPair one = dual_rsk(Matrix01::from_bits(1, 1, 1));
  CHECK(one.P == Tableau{{1}});
  CHECK(one.Q == Tableau{{1}});
}

TEST_CASE("tableau shapes and semistandardness") {
  for (std::uint64_t bits = 0; bits < (1u << 12); ++bits) {
    const TableauPair pq = dual_rsk(Matrix01::from_bits(4, 3, bits));
    CHECK(shape_of(pq.P) == shape_of(pq.Q));
    CHECK(is_semistandard(transpose(pq.P)));
    CHECK(is_semistandard(pq.Q));
    CHECK(first_column_equals_G(Matrix01::from_bits(4, 3, bits)).equal());
  }
}

TEST_CASE("growth sequence restricts to submatrices") {
  for (std::uint64_t bits = 0; bits < (1u << 9); ++bits) {
    const Matrix01 m = Matrix01::from_bits(3, 3, bits);
    const DiagramSequence seq = growth_sequence(m);
    for (int i = 1; i <= 3; ++i) CHECK(seq[static_cast<std::size_t>(i - 1)] == dual_rsk(m.top_rows(i)).shape);
  }
}

TEST_CASE("Schur weights") {
  const std::vector<Rational> r{Rational(1, 3), Rational(1, 2)};
  CHECK(schur_weight({{}, {}}, r) == rational_pow(Rational(2, 3), 2) * rational_pow(Rational(1, 2), 2));
  CHECK(schur_weight({{1}}, {Rational(2, 7)}) == Rational(2, 7));
  Rational total = 0;
  for (const auto& [seq, p] : growth_law(2, 2, r)) total += schur_weight(seq, r);
  CHECK(total == 1);
}

TEST_CASE("Schur polynomial evaluations agree") {
  const std::vector<Rational> x{Rational(1, 2), Rational(2, 3), Rational(3)};
  for (const Partition& p : std::vector<Partition>{{1}, {2}, {1, 1}, {2, 1}, {3, 1}, {2, 2}, {3, 2, 1}, {4, 2}})
    CHECK(schur_ssyt(p, x) == schur_jacobi_trudi(p, x));
  // s_(1)(x) = x1 + x2 + x3
  CHECK(schur_poly({1}, x) == Rational(1, 2) + Rational(2, 3) + 3);
}

TEST_CASE("exact law of the tagged particle") {
  const ExactDistribution one = enumerate_exact_distribution(1, 1, {Rational(1, 4)});
  CHECK(one.prob_at_least(1, 1) == Rational(3, 4));
  const std::vector<Rational> r{Rational(3, 10), Rational(1, 2)};
  const ExactDistribution two = enumerate_exact_distribution(3, 2, r);
  CHECK(two.prob_at_least(2, 2) == 0);
  CHECK(two.prob_at_least(2, 1) == Rational(7, 10) * Rational(1, 2));
  CHECK(two.prob_at_least(4, 0) == 1);
  Rational total = 0;
  for (const auto& [path, p] : two.paths) total += p;
  CHECK(total == 1);
}

TEST_CASE("sampled 01 matrices") {
  const std::vector<double> rates{0.2, 0.7, 0.45};
  const int n = 100000;
  std::vector<double> mean(3, 0.0);
  for (int k = 0; k < n; ++k) {
    const Matrix01 m = sample_matrix01(1, 3, rates, 5, static_cast<std::uint64_t>(k));
    for (int j = 1; j <= 3; ++j) mean[static_cast<std::size_t>(j - 1)] += m(1, 4 - j);
  }
  for (int j = 0; j < 3; ++j) {
    const double q = rates[static_cast<std::size_t>(j)];
    CHECK(std::abs(mean[static_cast<std::size_t>(j)] / n - q) < 3 * std::sqrt(q * (1 - q) / n));
  }
  CHECK(sample_matrix01(2, 2, {0.0, 0.0}, 1).count_ones() == 0);
}

TEST_CASE("sampled growth sequences follow the Schur weights") {
  const std::vector<Rational> r{Rational(1, 3), Rational(1, 2)};
  const std::vector<double> rd{1.0 / 3, 0.5};
  const int n = 100000;
  std::map<DiagramSequence, int> freq;
  for (int k = 0; k < n; ++k) {
    DiagramSequence seq = growth_sequence(sample_matrix01(2, 2, rd, 17, static_cast<std::uint64_t>(k)));
    for (Partition& p : seq) p = trimmed(p);
    ++freq[seq];
  }
  for (const auto& [seq, p] : growth_law(2, 2, r)) {
    DiagramSequence key = seq;
    for (Partition& q : key) q = trimmed(q);
    const double w = schur_weight(seq, r).convert_to<double>();
    CHECK(std::abs(freq[key] / double(n) - w) < 4 * std::sqrt(w * (1 - w) / n) + 1e-12);
  }
}

TEST_CASE("geometric last passage") {
  CHECK(geometric_last_passage({{0, 0}, {0, 0}, {0, 0}}) == 4);
  CHECK(geometric_last_passage({{5}}) == 6);
  // RSK first row = maximal up-right path sum, exhaustively for entries <= 2.
  for (int N = 1; N <= 3; ++N)
    for (int M = 1; M <= 3; ++M) {
      int cells = N * M, count = 1;
      for (int k = 0; k < cells; ++k) count *= 3;
      for (int code = 0; code < count; ++code) {
        std::vector<std::vector<int>> w(static_cast<std::size_t>(N), std::vector<int>(static_cast<std::size_t>(M)));
        int c = code;
        for (int k = 0; k < cells; ++k, c /= 3) w[static_cast<std::size_t>(k / M)][static_cast<std::size_t>(k % M)] = c % 3;
        const Partition sh = rsk_matrix(w).shape;
        CHECK((sh.empty() ? 0 : sh.front()) == geometric_last_passage(w) - (N + M - 1));
      }
    }
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/10") == Rational(3, 10));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("1") == 1);
  CHECK_THROWS(parse_rational("x"));
}
