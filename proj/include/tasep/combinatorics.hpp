#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tasep {

using Rational = boost::multiprecision::cpp_rational;

Rational parse_rational(const std::string& text);  // "3/10", "1", "0.25"
Rational rational_pow(Rational base, unsigned exponent);

// N x M binary matrix, 1-based accessors a(i, j).
class Matrix01 {
 public:
  Matrix01(int N, int M);
  static Matrix01 from_bits(int N, int M, std::uint64_t bits);  // bit (i-1)*M+(j-1)
  static Matrix01 from_pairs(int N, int M, const std::vector<std::pair<int, int>>& ones);

  int rows() const { return N_; }
  int cols() const { return M_; }
  int operator()(int i, int j) const { return data_[idx(i, j)]; }
  void set(int i, int j, int v) { data_[idx(i, j)] = static_cast<unsigned char>(v != 0); }
  Matrix01 top_rows(int n) const;
  int count_ones() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>((i - 1) * M_ + (j - 1));
  }
  int N_, M_;
  std::vector<unsigned char> data_;
};

// Column M+1-j carries particle j's stay rate.
Matrix01 sample_matrix01(int N, int M, const std::vector<double>& rates, std::uint64_t seed,
                         std::uint64_t sample = 0);

struct MatrixTrajectory {
  std::vector<long> L;  // tagged position for t = 0..N+M-1
  int d = 0;            // N - L(N+M-1)
};
MatrixTrajectory matrix_to_trajectory(const Matrix01& m);

// Longest chain of ones with strictly increasing rows, weakly decreasing columns.
int longest_left_down_path(const Matrix01& m);

using Partition = std::vector<int>;
Partition transpose(const Partition& p);
Partition trimmed(Partition p);
int size_of(const Partition& p);

using Tableau = std::vector<std::vector<int>>;
Partition shape_of(const Tableau& t);
Tableau transpose(const Tableau& t);
bool is_semistandard(const Tableau& t);  // rows weak, columns strict

struct TableauPair {
  Tableau P, Q;
  Partition shape;
};

TableauPair dual_rsk(const Matrix01& m);
// Normal RSK row insertion of a word (bump the leftmost entry strictly larger).
Tableau rsk_insertion(const std::vector<int>& word);
// Normal RSK of a non-negative integer matrix, two-line array in lexicographic order.
TableauPair rsk_matrix(const std::vector<std::vector<int>>& w);

struct FirstColumnCheck {
  int lambda_prime_1 = 0;
  int G = 0;
  bool transpose_matches = false;  // P^t equals normal RSK of the reversed word
  bool equal() const { return lambda_prime_1 == G && transpose_matches; }
};
FirstColumnCheck first_column_equals_G(const Matrix01& m);

using DiagramSequence = std::vector<Partition>;
DiagramSequence growth_sequence(const Matrix01& m);
bool is_horizontal_strip(const Partition& outer, const Partition& inner);

// Schur polynomials in exact arithmetic.
Rational schur_ssyt(const Partition& shape, const std::vector<Rational>& x);
Rational schur_jacobi_trudi(const Partition& shape, const std::vector<Rational>& x);
Rational schur_poly(const Partition& shape, const std::vector<Rational>& x);

Rational schur_weight(const DiagramSequence& seq, const std::vector<Rational>& rates);
Rational matrix_probability(const Matrix01& m, const std::vector<Rational>& rates);

// Exact law of the tagged path up to time N+M-1, keyed by the path.
struct ExactDistribution {
  int N = 0, M = 0;
  std::map<std::vector<long>, Rational> paths;

  Rational prob_at_least(int t, long ell) const;
  Rational joint_at_least(const std::vector<int>& times, const std::vector<long>& ells) const;
};
ExactDistribution enumerate_exact_distribution(int N, int M, const std::vector<Rational>& rates);

// Law of growth sequences pushed forward from all 2^{NM} matrices.
std::map<DiagramSequence, Rational> growth_law(int N, int M, const std::vector<Rational>& rates);

// Geometric entries, P(a(i,j)=k) = (1-q_j) q_j^k.
std::vector<std::vector<int>> sample_geometric_matrix(int N, int M, const std::vector<double>& rates,
                                                      std::uint64_t seed, std::uint64_t sample = 0);
long geometric_last_passage(const std::vector<std::vector<int>>& w);  // N+M-1 + max path sum

}  // namespace tasep
