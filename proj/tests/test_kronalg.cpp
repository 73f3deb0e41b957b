#include "ssmparam/kronalg.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace ssmparam;
using namespace ssmparam::testing;

TEST_CASE("kron definition on small matrices") {
  CMat a(1, 2);
  a << Cplx(1, 0), Cplx(2, 0);
  CMat b(2, 1);
  b << Cplx(3, 0), Cplx(4, 0);
  const CMat ab = kron(a, b);
  REQUIRE(ab.rows() == 2);
  REQUIRE(ab.cols() == 2);
  CHECK(ab(0, 0) == Cplx(3, 0));
  CHECK(ab(0, 1) == Cplx(6, 0));
  CHECK(ab(1, 0) == Cplx(4, 0));
  CHECK(ab(1, 1) == Cplx(8, 0));
}

TEST_CASE("kron with the identity is block diagonal") {
  const CMat b = random_cmatrix(3, 2);
  const CMat out = kron(CMat::Identity(2, 2), b);
  CHECK((out.block(0, 0, 3, 2) - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((out.block(3, 2, 3, 2) - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.block(0, 2, 3, 2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.block(3, 0, 3, 2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mixed-product property on random instances") {
  for (int trial = 0; trial < 50; ++trial) {
    const CMat a = random_cmatrix(2, 3);
    const CMat c = random_cmatrix(3, 2);
    const CMat b = random_cmatrix(3, 2);
    const CMat d = random_cmatrix(2, 3);
    const CMat lhs = kron(a * c, b * d);
    const CMat rhs = kron(a, b) * kron(c, d);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("kron_power base cases") {
  CVec v(2);
  v << Cplx(1, 0), Cplx(2, 0);
  const CVec p0 = kron_power(v, 0);
  REQUIRE(p0.size() == 1);
  CHECK(p0(0) == Cplx(1, 0));

  const CVec p2 = kron_power(v, 2);
  REQUIRE(p2.size() == 4);
  CHECK(p2(0) == Cplx(1, 0));
  CHECK(p2(1) == Cplx(2, 0));
  CHECK(p2(2) == Cplx(2, 0));
  CHECK(p2(3) == Cplx(4, 0));

  CVec e2(2);
  e2 << Cplx(0, 0), Cplx(1, 0);
  const CVec p3 = kron_power(e2, 3);
  REQUIRE(p3.size() == 8);
  for (int i = 0; i < 7; ++i) CHECK(p3(i) == Cplx(0, 0));
  CHECK(p3(7) == Cplx(1, 0));
}

TEST_CASE("kron_power refuses requests beyond the cap") {
  const CVec v = CVec::Ones(10);
  CHECK_THROWS_AS(kron_power(v, 7, 1000000), std::length_error);
  CHECK_NOTHROW(kron_power(v, 6, 1000000));
}

TEST_CASE("unit_vector hot index") {
  const CVec a = unit_vector(Monomial({1, 2}), 2);
  REQUIRE(a.size() == 4);
  CHECK(a(1) == Cplx(1, 0));
  CHECK(a.cwiseAbs().sum() == 1.0);

  const CVec b = unit_vector(Monomial({1}), 3);
  REQUIRE(b.size() == 3);
  CHECK(b(0) == Cplx(1, 0));

  const CVec c = unit_vector(Monomial({2, 2}), 2);
  CHECK(c(3) == Cplx(1, 0));
}

TEST_CASE("unit_vector of a permuted tuple moves the hot index only") {
  const std::vector<int> tuple{2, 1, 3};
  std::vector<int> sorted = tuple;
  std::sort(sorted.begin(), sorted.end());
  const CVec a = unit_vector(std::span<const int>(tuple), 3);
  const CVec b = unit_vector(std::span<const int>(sorted), 3);
  CHECK(a.cwiseAbs().sum() == 1.0);
  CHECK(b.cwiseAbs().sum() == 1.0);
  CHECK(hot_index(tuple, 3) != hot_index(sorted, 3));
}

TEST_CASE("canonicalize sorts and counts permutations") {
  auto [m1, c1] = Monomial::canonicalize({2, 1});
  CHECK(m1.tuple() == std::vector<int>{1, 2});
  CHECK(c1 == 2);

  auto [m2, c2] = Monomial::canonicalize({1, 1, 2});
  CHECK(m2.tuple() == std::vector<int>{1, 1, 2});
  CHECK(c2 == 3);

  auto [m3, c3] = Monomial::canonicalize({3, 3, 3});
  CHECK(m3.tuple() == std::vector<int>{3, 3, 3});
  CHECK(c3 == 1);

  // Idempotent: canonicalizing a canonical tuple changes nothing.
  auto [m4, c4] = Monomial::canonicalize(m2.tuple());
  CHECK(m4 == m2);
  CHECK(c4 == 3);
}

TEST_CASE("multiplicity equals the distinct-permutation count") {
  std::uniform_int_distribution<int> len(1, 6);
  std::uniform_int_distribution<int> sym(1, 3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> tuple(static_cast<std::size_t>(len(rng())));
    for (auto& v : tuple) v = sym(rng());
    const std::uint64_t mult = tuple_multiplicity(tuple);
    std::sort(tuple.begin(), tuple.end());
    std::set<std::vector<int>> distinct;
    do {
      distinct.insert(tuple);
    } while (std::next_permutation(tuple.begin(), tuple.end()));
    CHECK(mult == distinct.size());
  }
}

TEST_CASE("canonical monomial enumeration counts and ordering") {
  for (int m = 1; m <= 5; ++m) {
    for (int p = 1; p <= 6; ++p) {
      const auto monos = canonical_monomials(m, p);
      CHECK(monos.size() == binomial(m + p - 1, p));
      for (std::size_t i = 0; i < monos.size(); ++i) {
        const auto& t = monos[i].tuple();
        CHECK(std::is_sorted(t.begin(), t.end()));
        if (i > 0) CHECK(monos[i - 1].tuple() < t);
      }
    }
  }
}

TEST_CASE("monomial keys round-trip") {
  const Monomial nu({1, 1, 2});
  CHECK(nu.key() == "1,1,2");
  CHECK(Monomial::parse_key("1,1,2") == nu);
}

TEST_CASE("ordered partitions enumerate every split exactly once") {
  // c = z1^2 z2 split into 2 nonempty parts.
  std::set<std::vector<std::vector<int>>> seen;
  for_each_ordered_partition({2, 1}, 2, [&](const std::vector<std::vector<int>>& parts) {
    REQUIRE(parts.size() == 2);
    std::vector<int> sum(2, 0);
    for (const auto& part : parts) {
      int total = 0;
      for (std::size_t j = 0; j < part.size(); ++j) {
        sum[j] += part[j];
        total += part[j];
      }
      CHECK(total >= 1);
    }
    CHECK(sum == std::vector<int>{2, 1});
    CHECK(seen.insert(parts).second);
  });
  CHECK(seen.size() == 4);  // (1,0)+(1,1), (2,0)+(0,1), (0,1)+(2,0), (1,1)+(1,0)

  // Brute-force comparison on a larger case: assign labeled items to bins.
  const std::vector<int> c{2, 1, 1};
  const int kappa = 3;
  std::set<std::vector<std::vector<int>>> brute;
  std::vector<int> items{1, 1, 2, 3};
  std::vector<int> bin(items.size(), 0);
  std::function<void(std::size_t)> assign = [&](std::size_t i) {
    if (i == items.size()) {
      std::vector<std::vector<int>> parts(kappa, std::vector<int>(c.size(), 0));
      for (std::size_t l = 0; l < items.size(); ++l)
        parts[static_cast<std::size_t>(bin[l])][static_cast<std::size_t>(items[l] - 1)] += 1;
      for (const auto& part : parts) {
        int total = 0;
        for (int v : part) total += v;
        if (total == 0) return;
      }
      brute.insert(parts);
      return;
    }
    for (int b = 0; b < kappa; ++b) {
      bin[i] = b;
      assign(i + 1);
    }
  };
  assign(0);
  std::set<std::vector<std::vector<int>>> direct;
  for_each_ordered_partition(c, kappa, [&](const std::vector<std::vector<int>>& parts) {
    CHECK(direct.insert(parts).second);
  });
  CHECK(direct == brute);
}
