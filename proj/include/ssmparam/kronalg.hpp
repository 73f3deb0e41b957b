#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ssmparam {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Exact binomial coefficient in 64-bit integer arithmetic.
std::uint64_t binomial(int n, int k);

/// Number of distinct permutations of an index tuple: p! / prod_j count_j!.
/// Computed as a product of binomials, so it stays exact in 64 bits for the
/// tuple lengths this library handles (p <= 20).
std::uint64_t tuple_multiplicity(std::span<const int> tuple);

/// A monomial z_{nu_1} * ... * z_{nu_p} over variables {1, ..., m}, stored as
/// the canonical (non-decreasing) 1-based index tuple. Permuted tuples denote
/// the same monomial; constructing a Monomial sorts the indices.
class Monomial {
public:
  Monomial() = default;
  explicit Monomial(std::vector<int> indices);

  /// Canonical representative plus the number of distinct permutations of the
  /// input tuple.
  static std::pair<Monomial, std::uint64_t> canonicalize(std::vector<int> indices);

  const std::vector<int>& tuple() const { return idx_; }
  int order() const { return static_cast<int>(idx_.size()); }
  std::uint64_t multiplicity() const;
  int max_index() const;

  /// Exponent counts over variables 1..m (size m).
  std::vector<int> exponents(int m) const;
  static Monomial from_exponents(const std::vector<int>& counts);

  /// Contiguous slice [a, b) of the tuple, 0-based bounds. Slices of a
  /// canonical tuple are themselves canonical.
  Monomial slice(int a, int b) const;

  /// Rendered as "1,1,2"; the inverse of parse_key.
  std::string key() const;
  static Monomial parse_key(const std::string& text);

  bool operator==(const Monomial& o) const { return idx_ == o.idx_; }
  /// Orders first by tuple length, then lexicographically.
  bool operator<(const Monomial& o) const;

private:
  std::vector<int> idx_;  // non-decreasing, entries >= 1
};

/// Kronecker product of dense complex matrices.
/// Entry ((i*b.rows + k), (j*b.cols + l)) = a(i,j) * b(k,l).
CMat kron(const CMat& a, const CMat& b);

/// Repeated Kronecker product v (x) ... (x) v, kappa factors; kappa = 0 gives
/// the length-1 vector [1]. Results longer than `cap` entries are refused
/// (throws std::length_error) since the per-monomial code path never needs
/// large dense powers.
CVec kron_power(const CVec& v, int kappa, std::size_t cap = 1000000);

/// Flat position of e_{nu_1} (x) ... (x) e_{nu_p} in the m^p Kronecker basis:
/// the mixed-radix value of (nu_1 - 1, ..., nu_p - 1) in base m with the first
/// digit most significant. Every module uses this column ordering.
std::size_t hot_index(std::span<const int> tuple, int m);

/// e_{nu_1} (x) ... (x) e_{nu_p} as a dense vector of length m^p.
CVec unit_vector(const Monomial& nu, int m);
CVec unit_vector(std::span<const int> tuple, int m);

/// All canonical monomials of order p over m variables in non-decreasing
/// lexicographic order; exactly binomial(m + p - 1, p) of them.
std::vector<Monomial> canonical_monomials(int m, int p);

/// Enumerates ordered splits of the exponent vector c into `kappa` nonempty
/// exponent vectors summing to c, invoking fn once per split.
void for_each_ordered_partition(
    const std::vector<int>& c, int kappa,
    const std::function<void(const std::vector<std::vector<int>>&)>& fn);

}  // namespace ssmparam
