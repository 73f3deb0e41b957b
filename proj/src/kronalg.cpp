#include "ssmparam/kronalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ssmparam {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // Exact at every step: result * (n-k+i) is divisible by i.
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::uint64_t tuple_multiplicity(std::span<const int> tuple) {
  std::vector<int> sorted(tuple.begin(), tuple.end());
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t mult = 1;
  int consumed = 0;
  int i = 0;
  const int p = static_cast<int>(sorted.size());
  while (i < p) {
    int j = i;
    while (j < p && sorted[j] == sorted[i]) ++j;
    const int run = j - i;
    consumed += run;
    mult *= binomial(consumed, run);
    i = j;
  }
  return mult;
}

Monomial::Monomial(std::vector<int> indices) : idx_(std::move(indices)) {
  for (int v : idx_) {
    if (v < 1) throw std::invalid_argument("Monomial indices are 1-based and must be >= 1");
  }
  std::sort(idx_.begin(), idx_.end());
}

std::pair<Monomial, std::uint64_t> Monomial::canonicalize(std::vector<int> indices) {
  if (indices.empty()) throw std::invalid_argument("cannot canonicalize an empty tuple");
  Monomial mono(std::move(indices));
  return {mono, mono.multiplicity()};
}

std::uint64_t Monomial::multiplicity() const { return tuple_multiplicity(idx_); }

int Monomial::max_index() const { return idx_.empty() ? 0 : idx_.back(); }

std::vector<int> Monomial::exponents(int m) const {
  std::vector<int> counts(m, 0);
  for (int v : idx_) {
    if (v > m) throw std::out_of_range("monomial index exceeds variable count");
    ++counts[v - 1];
  }
  return counts;
}

Monomial Monomial::from_exponents(const std::vector<int>& counts) {
  std::vector<int> idx;
  for (int j = 0; j < static_cast<int>(counts.size()); ++j) {
    idx.insert(idx.end(), counts[j], j + 1);
  }
  return Monomial(std::move(idx));
}

Monomial Monomial::slice(int a, int b) const {
  if (a < 0 || b > order() || a >= b) throw std::out_of_range("bad monomial slice");
  return Monomial(std::vector<int>(idx_.begin() + a, idx_.begin() + b));
}

std::string Monomial::key() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (i) os << ',';
    os << idx_[i];
  }
  return os.str();
}

Monomial Monomial::parse_key(const std::string& text) {
  std::vector<int> idx;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) idx.push_back(std::stoi(part));
  if (idx.empty()) throw std::invalid_argument("empty monomial key");
  return Monomial(std::move(idx));
}

bool Monomial::operator<(const Monomial& o) const {
  if (idx_.size() != o.idx_.size()) return idx_.size() < o.idx_.size();
  return idx_ < o.idx_;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVec kron_power(const CVec& v, int kappa, std::size_t cap) {
  if (kappa < 0) throw std::invalid_argument("kron_power: kappa must be >= 0");
  const std::size_t m = static_cast<std::size_t>(v.size());
  std::size_t len = 1;
  for (int i = 0; i < kappa; ++i) {
    if (m == 0 || len > cap / m) throw std::length_error("kron_power: result exceeds entry cap");
    len *= m;
  }
  CVec out = CVec::Ones(1);
  for (int i = 0; i < kappa; ++i) {
    CVec next(out.size() * v.size());
    for (Eigen::Index a = 0; a < out.size(); ++a)
      next.segment(a * v.size(), v.size()) = out(a) * v;
    out.swap(next);
  }
  return out;
}

std::size_t hot_index(std::span<const int> tuple, int m) {
  std::size_t pos = 0;
  for (int v : tuple) {
    if (v < 1 || v > m) throw std::out_of_range("unit_vector: index outside [1, m]");
    pos = pos * static_cast<std::size_t>(m) + static_cast<std::size_t>(v - 1);
  }
  return pos;
}

CVec unit_vector(std::span<const int> tuple, int m) {
  std::size_t len = 1;
  for (std::size_t i = 0; i < tuple.size(); ++i) len *= static_cast<std::size_t>(m);
  CVec out = CVec::Zero(static_cast<Eigen::Index>(len));
  out(static_cast<Eigen::Index>(hot_index(tuple, m))) = Cplx(1.0, 0.0);
  return out;
}

CVec unit_vector(const Monomial& nu, int m) { return unit_vector(std::span(nu.tuple()), m); }

std::vector<Monomial> canonical_monomials(int m, int p) {
  std::vector<Monomial> out;
  if (m < 1 || p < 1) return out;
  std::vector<int> tuple(p, 1);
  while (true) {
    out.emplace_back(tuple);
    int i = p - 1;
    while (i >= 0 && tuple[i] == m) --i;
    if (i < 0) break;
    const int next = tuple[i] + 1;
    for (int j = i; j < p; ++j) tuple[j] = next;  // keep non-decreasing
  }
  return out;
}

namespace {

void partition_rec(std::vector<int>& remaining, int remaining_total, int parts_left,
                   std::vector<std::vector<int>>& acc,
                   const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  if (parts_left == 1) {
    if (remaining_total == 0) return;  // parts must be nonempty
    acc.push_back(remaining);
    fn(acc);
    acc.pop_back();
    return;
  }
  const int m = static_cast<int>(remaining.size());
  // Enumerate the first part: any nonzero sub-exponent vector that leaves at
  // least parts_left - 1 entries for the rest.
  std::vector<int> part(m, 0);
  std::function<void(int, int)> pick = [&](int var, int taken) {
    if (var == m) {
      if (taken == 0) return;
      if (remaining_total - taken < parts_left - 1) return;
      for (int j = 0; j < m; ++j) remaining[j] -= part[j];
      acc.push_back(part);
      partition_rec(remaining, remaining_total - taken, parts_left - 1, acc, fn);
      acc.pop_back();
      for (int j = 0; j < m; ++j) remaining[j] += part[j];
      return;
    }
    for (int take = 0; take <= remaining[var]; ++take) {
      part[var] = take;
      pick(var + 1, taken + take);
    }
    part[var] = 0;
  };
  pick(0, 0);
}

}  // namespace

void for_each_ordered_partition(
    const std::vector<int>& c, int kappa,
    const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  int total = 0;
  for (int v : c) total += v;
  if (kappa < 1 || total < kappa) return;
  std::vector<int> remaining = c;
  std::vector<std::vector<int>> acc;
  partition_rec(remaining, total, kappa, acc, fn);
}

}  // namespace ssmparam
