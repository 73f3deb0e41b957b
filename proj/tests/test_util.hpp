// Shared oracle machinery for the unit and acceptance suites. Everything in
// here is deliberately independent of the library's fast paths: dense
// Kronecker algebra, brute-force enumeration, and a tiny multivariate
// polynomial class for symbolic Taylor collection.
#pragma once

#include "ssmparam/kronalg.hpp"
#include "ssmparam/manifold.hpp"
#include "ssmparam/polyode.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <vector>

namespace ssmparam::testing {

inline std::mt19937& rng() {
  static std::mt19937 engine(0x5eed1234);
  return engine;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng());
}

inline Cplx random_complex(double scale = 1.0) {
  return Cplx(uniform(-scale, scale), uniform(-scale, scale));
}

inline CMat random_cmatrix(int rows, int cols, double scale = 1.0) {
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_complex(scale);
  return m;
}

inline Eigen::Matrix3d random_mat3(double scale = 1.0) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = uniform(-scale, scale);
  return m;
}

// Dense symmetric-representative A_kappa: column at a tuple carries the
// stored (permutation-summed) coefficient divided by the tuple multiplicity,
// so that summing the class reproduces the stored value.
inline CMat dense_system_matrix(const PolySystem& sys, int kappa) {
  const int n = sys.dim();
  std::size_t cols = 1;
  for (int i = 0; i < kappa; ++i) cols *= static_cast<std::size_t>(n);
  CMat out = CMat::Zero(n, static_cast<Eigen::Index>(cols));
  std::vector<int> tuple(static_cast<std::size_t>(kappa), 1);
  for (std::size_t flat = 0; flat < cols; ++flat) {
    std::size_t rem = flat;
    for (int i = kappa - 1; i >= 0; --i) {
      tuple[static_cast<std::size_t>(i)] = static_cast<int>(rem % static_cast<std::size_t>(n)) + 1;
      rem /= static_cast<std::size_t>(n);
    }
    auto [canon, mult] = Monomial::canonicalize(tuple);
    auto it = sys.order_terms(kappa).find(canon);
    if (it != sys.order_terms(kappa).end())
      out.col(static_cast<Eigen::Index>(flat)) = it->second / static_cast<double>(mult);
  }
  return out;
}

// Dense W_p / f_p with the per-permutation storage convention: every
// permuted column holds the canonical stored value unchanged.
inline CMat dense_coefficient_matrix(const std::map<Monomial, CVec>& columns, int rows, int m,
                                     int p) {
  std::size_t cols = 1;
  for (int i = 0; i < p; ++i) cols *= static_cast<std::size_t>(m);
  CMat out = CMat::Zero(rows, static_cast<Eigen::Index>(cols));
  std::vector<int> tuple(static_cast<std::size_t>(p), 1);
  for (std::size_t flat = 0; flat < cols; ++flat) {
    std::size_t rem = flat;
    for (int i = p - 1; i >= 0; --i) {
      tuple[static_cast<std::size_t>(i)] = static_cast<int>(rem % static_cast<std::size_t>(m)) + 1;
      rem /= static_cast<std::size_t>(m);
    }
    auto it = columns.find(Monomial(tuple));
    if (it != columns.end()) out.col(static_cast<Eigen::Index>(flat)) = it->second;
  }
  return out;
}

inline CVec xi_terms_to_dense(const XiTerms& terms, int n, int kappa) {
  std::size_t len = 1;
  for (int i = 0; i < kappa; ++i) len *= static_cast<std::size_t>(n);
  CVec out = CVec::Zero(static_cast<Eigen::Index>(len));
  for (const auto& term : terms) {
    CVec acc = CVec::Ones(1);
    for (const CVec& factor : term) {
      CVec next(acc.size() * factor.size());
      for (Eigen::Index a = 0; a < acc.size(); ++a)
        next.segment(a * factor.size(), factor.size()) = acc(a) * factor;
      acc.swap(next);
    }
    out += acc;
  }
  return out;
}

// Per-monomial slice quantities for an explicit (possibly non-canonical)
// tuple: the library's recurrences rebuilt over raw slices with canonical
// lookups, since Monomial itself always canonicalizes.
inline CVec gamma_column_raw(std::span<const int> tuple, int kappa, const ReducedDynamics& f) {
  const int p = static_cast<int>(tuple.size());
  const int m = f.m;
  if (kappa == 1) {
    const CVec* col = f.find(Monomial(std::vector<int>(tuple.begin(), tuple.end())));
    return col ? *col : CVec::Zero(m);
  }
  std::size_t tail_len = 1;
  for (int i = 1; i < kappa; ++i) tail_len *= static_cast<std::size_t>(m);
  CVec out = CVec::Zero(static_cast<Eigen::Index>(tail_len * static_cast<std::size_t>(m)));
  const CVec rec = gamma_column_raw(tuple.subspan(1), kappa - 1, f);
  out.segment(static_cast<Eigen::Index>(static_cast<std::size_t>(tuple[0] - 1) * tail_len),
              static_cast<Eigen::Index>(tail_len)) = rec;
  const CVec* fcol =
      f.find(Monomial(std::vector<int>(tuple.begin(), tuple.begin() + (p - kappa + 1))));
  if (fcol) {
    const std::size_t hot = hot_index(tuple.subspan(static_cast<std::size_t>(p - kappa + 1)), m);
    for (int j = 0; j < m; ++j)
      out(static_cast<Eigen::Index>(static_cast<std::size_t>(j) * tail_len + hot)) += (*fcol)(j);
  }
  return out;
}

inline std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  std::function<void(int)> build = [&](int remaining) {
    if (static_cast<int>(current.size()) == parts) {
      if (remaining == 0) out.push_back(current);
      return;
    }
    const int slack = parts - 1 - static_cast<int>(current.size());
    for (int take = 1; take <= remaining - slack; ++take) {
      current.push_back(take);
      build(remaining - take);
      current.pop_back();
    }
  };
  build(total);
  return out;
}

// Permutation-class average of the per-monomial slice columns; an independent
// route to assemble_rhs. Each distinct permutation contributes its prefix-cut
// composition sum and its Gamma cross terms; only the class total is a
// meaningful quantity under the symmetrized coefficient storage.
inline CVec assemble_rhs_reference(const Monomial& nu, const PolySystem& sys,
                                   const ManifoldExpansion& w, const ReducedDynamics& f) {
  const int p = nu.order();
  const int n = w.n;
  const int m = w.m;
  CVec rhs = CVec::Zero(n);

  std::vector<CMat> w_dense(static_cast<std::size_t>(p), CMat());
  for (int kappa = 2; kappa <= p - 1; ++kappa)
    w_dense[static_cast<std::size_t>(kappa)] = dense_coefficient_matrix(w.columns, n, m, kappa);

  std::vector<int> tuple = nu.tuple();
  do {
    for (int kappa = 2; kappa <= std::min(p, sys.max_order()); ++kappa) {
      for (const auto& comp : compositions(p, kappa)) {
        std::vector<const CVec*> factors;
        int offset = 0;
        bool ok = true;
        for (int part : comp) {
          const Monomial beta(
              std::vector<int>(tuple.begin() + offset, tuple.begin() + offset + part));
          const CVec* col = w.find(beta);
          if (!col) {
            ok = false;
            break;
          }
          factors.push_back(col);
          offset += part;
        }
        if (!ok) continue;
        for (const auto& [eta, column] : sys.order_terms(kappa)) {
          Cplx prod(1.0, 0.0);
          for (int l = 0; l < kappa; ++l)
            prod *= (*factors[static_cast<std::size_t>(l)])(
                eta.tuple()[static_cast<std::size_t>(l)] - 1);
          rhs += column * prod;
        }
      }
    }
    for (int kappa = 2; kappa <= p - 1; ++kappa) {
      rhs -= w_dense[static_cast<std::size_t>(kappa)] *
             gamma_column_raw(std::span<const int>(tuple), kappa, f);
    }
  } while (std::next_permutation(tuple.begin(), tuple.end()));

  return rhs / static_cast<double>(nu.multiplicity());
}

// Minimal multivariate polynomial over complex coefficients, keyed by
// exponent vector; enough to Taylor-expand the invariance equation.
struct Poly {
  int m = 0;
  std::map<std::vector<int>, Cplx> coeffs;

  static Poly zero(int m) { return Poly{m, {}}; }
  static Poly constant(int m, Cplx value) {
    Poly p{m, {}};
    p.coeffs[std::vector<int>(static_cast<std::size_t>(m), 0)] = value;
    return p;
  }
  static Poly variable(int m, int j) {  // 1-based variable index
    Poly p{m, {}};
    std::vector<int> e(static_cast<std::size_t>(m), 0);
    e[static_cast<std::size_t>(j - 1)] = 1;
    p.coeffs[e] = Cplx(1.0, 0.0);
    return p;
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [e, v] : o.coeffs) coeffs[e] += v;
    return *this;
  }
  Poly operator*(const Poly& o) const {
    Poly out{m, {}};
    for (const auto& [ea, va] : coeffs) {
      for (const auto& [eb, vb] : o.coeffs) {
        std::vector<int> e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.coeffs[e] += va * vb;
      }
    }
    return out;
  }
  Poly scaled(Cplx s) const {
    Poly out{m, {}};
    for (const auto& [e, v] : coeffs) out.coeffs[e] = v * s;
    return out;
  }
  Poly derivative(int j) const {  // 1-based variable index
    Poly out{m, {}};
    for (const auto& [e, v] : coeffs) {
      const int power = e[static_cast<std::size_t>(j - 1)];
      if (power == 0) continue;
      std::vector<int> d = e;
      d[static_cast<std::size_t>(j - 1)] -= 1;
      out.coeffs[d] += v * static_cast<double>(power);
    }
    return out;
  }
  Poly truncated(int max_order) const {
    Poly out{m, {}};
    for (const auto& [e, v] : coeffs) {
      int total = 0;
      for (int x : e) total += x;
      if (total <= max_order) out.coeffs[e] = v;
    }
    return out;
  }
  Cplx coeff(const std::vector<int>& e) const {
    auto it = coeffs.find(e);
    return it == coeffs.end() ? Cplx(0.0, 0.0) : it->second;
  }
};

// Components of y = W(z) as polynomials in the reduced variables.
inline std::vector<Poly> manifold_as_polys(const ManifoldExpansion& w, int truncate_order) {
  std::vector<Poly> out(static_cast<std::size_t>(w.n), Poly::zero(w.m));
  for (const auto& [nu, column] : w.columns) {
    if (nu.order() > truncate_order) continue;
    Poly mono = Poly::constant(w.m, Cplx(static_cast<double>(nu.multiplicity()), 0.0));
    for (int v : nu.tuple()) mono = mono * Poly::variable(w.m, v);
    for (int i = 0; i < w.n; ++i) out[static_cast<std::size_t>(i)] += mono.scaled(column(i));
  }
  return out;
}

inline std::vector<Poly> dynamics_as_polys(const ReducedDynamics& f, int truncate_order) {
  std::vector<Poly> out(static_cast<std::size_t>(f.m), Poly::zero(f.m));
  for (const auto& [nu, column] : f.columns) {
    if (nu.order() > truncate_order) continue;
    Poly mono = Poly::constant(f.m, Cplx(static_cast<double>(nu.multiplicity()), 0.0));
    for (int v : nu.tuple()) mono = mono * Poly::variable(f.m, v);
    for (int k = 0; k < f.m; ++k) out[static_cast<std::size_t>(k)] += mono.scaled(column(k));
  }
  return out;
}

// A(y(z)) componentwise with every product truncated at `order`.
inline std::vector<Poly> compose_system(const PolySystem& sys, const std::vector<Poly>& y,
                                        int order) {
  const int m = y.empty() ? 0 : y[0].m;
  std::vector<Poly> out(static_cast<std::size_t>(sys.dim()), Poly::zero(m));
  for (int kappa = 1; kappa <= sys.max_order(); ++kappa) {
    for (const auto& [eta, column] : sys.order_terms(kappa)) {
      Poly prod = Poly::constant(m, Cplx(1.0, 0.0));
      for (int v : eta.tuple()) prod = (prod * y[static_cast<std::size_t>(v - 1)]).truncated(order);
      for (int i = 0; i < sys.dim(); ++i) out[static_cast<std::size_t>(i)] += prod.scaled(column(i));
    }
  }
  return out;
}

// Frequently used desk systems -----------------------------------------------

inline MechSystem make_duffing(double omega, double gamma, double zeta = 0.0) {
  MechSystem mech;
  mech.n2 = 1;
  mech.mass = Eigen::MatrixXd::Constant(1, 1, 1.0);
  mech.stiffness = Eigen::MatrixXd::Constant(1, 1, omega * omega);
  if (zeta != 0.0) {
    // C = 2 zeta omega M realized through the proportional pair.
    mech.damping_alpha = 2.0 * zeta * omega;
    mech.damping_beta = 0.0;
  }
  mech.cubic.push_back({1, {1, 1, 1}, gamma});
  return mech;
}

inline MechSystem make_chain2(double k_couple = 1.0) {
  MechSystem mech;
  mech.n2 = 2;
  mech.mass = Eigen::MatrixXd::Identity(2, 2);
  mech.stiffness = Eigen::MatrixXd::Zero(2, 2);
  mech.stiffness << 2.0, -k_couple, -k_couple, 3.0;
  return mech;
}

inline double hb_duffing_backbone(double omega, double gamma, double amplitude) {
  return omega + 3.0 * gamma * amplitude * amplitude / (8.0 * omega);
}

// Physical displacement amplitude `a` of DOF 1 mapped to the modal radius of
// the leading master pair: x(t) tracks 2 |W1[0, master]| rho at leading order.
inline double modal_radius_for_amplitude(const ManifoldExpansion& w, double amplitude) {
  const CVec* col = w.find(Monomial(std::vector<int>{1}));
  return amplitude / (2.0 * std::abs((*col)(0)));
}

inline double rom_backbone_frequency(const ManifoldExpansion& w, const ReducedDynamics& f,
                                     double amplitude) {
  const double rho = modal_radius_for_amplitude(w, amplitude);
  CVec z = CVec::Zero(f.m);
  z(0) = Cplx(rho, 0.0);
  z(1) = Cplx(rho, 0.0);
  const CVec rate = rom_evaluate(f, z);
  return (rate(0) / z(0)).imag();
}

}  // namespace ssmparam::testing
