#include "ssmparam/manifold.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <stdexcept>

namespace ssmparam {

int Spectrum::master_pos(int j) const {
  for (std::size_t k = 0; k < master_indices.size(); ++k) {
    if (master_indices[k] == j) return static_cast<int>(k);
  }
  return -1;
}

const CVec* ManifoldExpansion::find(const Monomial& nu) const {
  auto it = columns.find(nu);
  return it == columns.end() ? nullptr : &it->second;
}

const CVec* ReducedDynamics::find(const Monomial& nu) const {
  auto it = columns.find(nu);
  return it == columns.end() ? nullptr : &it->second;
}

bool ResonanceTolerance::matches(Cplx sigma, Cplx lambda) const {
  return std::abs(sigma - lambda) <= r_tol * std::max(std::abs(sigma), std::abs(lambda)) + a_tol;
}

Spectrum compute_spectrum(const PolySystem& sys, std::vector<int> master_indices) {
  const int n = sys.dim();
  const CMat a1 = sys.linear_matrix();
  const double scale = std::max(1.0, a1.cwiseAbs().maxCoeff());

  Spectrum spec;
  spec.real_linear_part = a1.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale;

  Eigen::ComplexEigenSolver<CMat> solver(a1);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("compute_spectrum: eigensolver failed to converge");

  // Sort: |lambda| ascending, Im descending (positive first), Re ascending.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const CVec raw = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Cplx la = raw(a), lb = raw(b);
    if (std::abs(la) != std::abs(lb)) return std::abs(la) < std::abs(lb);
    if (la.imag() != lb.imag()) return la.imag() > lb.imag();
    return la.real() < lb.real();
  });

  spec.eigenvalues = CVec(n);
  spec.right = CMat(n, n);
  for (int j = 0; j < n; ++j) {
    spec.eigenvalues(j) = raw(order[static_cast<std::size_t>(j)]);
    spec.right.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
  }

  // Unit norm with the largest-modulus entry rotated real positive; this
  // pins the phase so repeated runs agree.
  for (int j = 0; j < n; ++j) {
    CVec v = spec.right.col(j);
    v /= v.norm();
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Cplx pivot = v(imax);
    v *= std::abs(pivot) / pivot;
    spec.right.col(j) = v;
  }

  const double im_floor = 1e-12 * scale;
  if (spec.real_linear_part) {
    // Snap real eigenpairs, then overwrite each negative-frequency partner
    // with the exact conjugate of its positive-frequency mate.
    for (int j = 0; j < n; ++j) {
      if (std::abs(spec.eigenvalues(j).imag()) <= im_floor &&
          spec.right.col(j).imag().cwiseAbs().maxCoeff() <= 1e-8) {
        spec.eigenvalues(j) = Cplx(spec.eigenvalues(j).real(), 0.0);
        CVec v = spec.right.col(j).real().cast<Cplx>();
        spec.right.col(j) = v / v.norm();
      }
    }
    std::vector<bool> paired(static_cast<std::size_t>(n), false);
    for (int j = 0; j < n; ++j) {
      if (paired[static_cast<std::size_t>(j)] || spec.eigenvalues(j).imag() <= im_floor) continue;
      int best = -1;
      double best_gap = std::numeric_limits<double>::max();
      for (int k = 0; k < n; ++k) {
        if (k == j || paired[static_cast<std::size_t>(k)]) continue;
        const double gap = std::abs(spec.eigenvalues(k) - std::conj(spec.eigenvalues(j)));
        if (gap < best_gap) {
          best_gap = gap;
          best = k;
        }
      }
      if (best >= 0 && best_gap <= 1e-8 * scale) {
        spec.eigenvalues(best) = std::conj(spec.eigenvalues(j));
        spec.right.col(best) = spec.right.col(j).conjugate();
        paired[static_cast<std::size_t>(j)] = paired[static_cast<std::size_t>(best)] = true;
      }
    }
  }

  Eigen::JacobiSVD<CMat> svd(spec.right);
  const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
  if (!(cond < 1e8))
    throw std::runtime_error("compute_spectrum: A_1 is near-defective (eigenvector condition " +
                             std::to_string(cond) + ")");

  // Left vectors from the inverse: l_j^H is row j of right^(-1).
  const CMat inv = spec.right.partialPivLu().solve(CMat::Identity(n, n));
  spec.left = inv.adjoint();

  std::sort(master_indices.begin(), master_indices.end());
  master_indices.erase(std::unique(master_indices.begin(), master_indices.end()),
                       master_indices.end());
  for (int j : master_indices) {
    if (j < 0 || j >= n) throw std::invalid_argument("compute_spectrum: master index out of range");
  }
  if (master_indices.empty()) throw std::invalid_argument("compute_spectrum: empty master set");
  spec.master_indices = std::move(master_indices);

  if (spec.real_linear_part) {
    for (int j : spec.master_indices) {
      if (std::abs(spec.eigenvalues(j).imag()) <= im_floor) continue;
      bool closed = false;
      for (int k : spec.master_indices) {
        if (std::abs(spec.eigenvalues(k) - std::conj(spec.eigenvalues(j))) <= 1e-8 * scale) {
          closed = true;
          break;
        }
      }
      if (!closed)
        throw std::invalid_argument("compute_spectrum: masters not closed under conjugation");
    }
  }
  return spec;
}

Cplx sigma_of(const Monomial& nu, const Spectrum& spec) {
  Cplx sum(0.0, 0.0);
  for (int v : nu.tuple()) {
    if (v < 1 || v > spec.m()) throw std::out_of_range("sigma_of: tuple entry outside [1, m]");
    sum += spec.master_eigenvalue(v - 1);
  }
  return sum;
}

CVec gamma_column(const Monomial& nu, int kappa, const ReducedDynamics& f) {
  const int p = nu.order();
  const int m = f.m;
  if (kappa < 1 || kappa > p) throw std::invalid_argument("gamma_column: need 1 <= kappa <= p");
  if (kappa == 1) {
    const CVec* col = f.find(nu);
    return col ? *col : CVec::Zero(m);
  }
  std::size_t tail_len = 1;
  for (int i = 1; i < kappa; ++i) tail_len *= static_cast<std::size_t>(m);
  CVec out = CVec::Zero(static_cast<Eigen::Index>(tail_len * static_cast<std::size_t>(m)));

  // e_{nu_1} (x) Gamma_{nu[1:p], kappa-1}
  const CVec rec = gamma_column(nu.slice(1, p), kappa - 1, f);
  const int head = nu.tuple()[0];
  out.segment(static_cast<Eigen::Index>((head - 1) * tail_len), static_cast<Eigen::Index>(tail_len)) = rec;

  // f_{nu[0:p-kappa+1]} (x) e_{nu[p-kappa+1:p]}
  const CVec* fcol = f.find(nu.slice(0, p - kappa + 1));
  if (fcol) {
    const std::span<const int> tail(nu.tuple().data() + (p - kappa + 1), static_cast<std::size_t>(kappa - 1));
    const std::size_t hot = hot_index(tail, m);
    for (int j = 0; j < m; ++j) {
      out(static_cast<Eigen::Index>(static_cast<std::size_t>(j) * tail_len + hot)) += (*fcol)(j);
    }
  }
  return out;
}

XiTerms xi_column(const Monomial& nu, int kappa, const ManifoldExpansion& w) {
  const int p = nu.order();
  if (kappa < 1 || kappa > p) throw std::invalid_argument("xi_column: need 1 <= kappa <= p");
  XiTerms terms;
  if (kappa == 1) {
    const CVec* col = w.find(nu);
    if (col) terms.push_back({*col});
    return terms;
  }
  for (int sigma = 1; sigma <= p - kappa + 1; ++sigma) {
    const CVec* head = w.find(nu.slice(0, sigma));
    if (!head) continue;
    for (auto& tail : xi_column(nu.slice(sigma, p), kappa - 1, w)) {
      std::vector<CVec> term;
      term.reserve(static_cast<std::size_t>(kappa));
      term.push_back(*head);
      for (auto& v : tail) term.push_back(std::move(v));
      terms.push_back(std::move(term));
    }
  }
  return terms;
}

CVec assemble_rhs(const Monomial& nu, const PolySystem& sys, const ManifoldExpansion& w,
                  const ReducedDynamics& f) {
  const int p = nu.order();
  const int m = w.m;
  const int n = w.n;
  const std::vector<int> c = nu.exponents(m);
  CVec rhs = CVec::Zero(n);

  // Nonlinear image terms: for each coefficient column A(eta) of order kappa,
  // sum over ordered splits of nu into kappa lower-order monomials. The split
  // weights carry the permutation multiplicities of the parts, which makes
  // the sum equal to the full permutation-class value of the composition.
  struct Part {
    std::vector<const CVec*> cols;
    double weight = 1.0;
  };
  for (int kappa = 2; kappa <= std::min(p, sys.max_order()); ++kappa) {
    const auto& a_terms = sys.order_terms(kappa);
    if (a_terms.empty()) continue;
    std::vector<Part> parts;
    for_each_ordered_partition(c, kappa, [&](const std::vector<std::vector<int>>& split) {
      Part part;
      part.cols.reserve(static_cast<std::size_t>(kappa));
      for (const auto& exponents : split) {
        const Monomial beta = Monomial::from_exponents(exponents);
        const CVec* col = w.find(beta);
        if (!col) return;  // missing column means zero
        part.weight *= static_cast<double>(beta.multiplicity());
        part.cols.push_back(col);
      }
      parts.push_back(std::move(part));
    });
    if (parts.empty()) continue;
    for (const auto& [eta, column] : a_terms) {
      Cplx x(0.0, 0.0);
      for (const Part& part : parts) {
        Cplx prod(part.weight, 0.0);
        for (int l = 0; l < kappa; ++l) prod *= (*part.cols[l])(eta.tuple()[static_cast<std::size_t>(l)] - 1);
        x += prod;
      }
      if (x != Cplx(0.0, 0.0)) rhs += column * x;
    }
  }

  // Cross terms from the chain rule: every stored f_delta of intermediate
  // order pairs with the manifold column W_beta, beta = nu + e_k - delta.
  for (const auto& [delta, fcol] : f.columns) {
    const int q = delta.order();
    if (q < 2 || q > p - 1) continue;
    const std::vector<int> d = delta.exponents(m);
    bool contained = true;
    for (int t = 0; t < m; ++t) {
      if (d[static_cast<std::size_t>(t)] > c[static_cast<std::size_t>(t)]) {
        contained = false;
        break;
      }
    }
    if (!contained) continue;
    for (int k = 0; k < m; ++k) {
      if (fcol(k) == Cplx(0.0, 0.0)) continue;
      std::vector<int> beta_exp(static_cast<std::size_t>(m));
      for (int t = 0; t < m; ++t)
        beta_exp[static_cast<std::size_t>(t)] = c[static_cast<std::size_t>(t)] - d[static_cast<std::size_t>(t)];
      beta_exp[static_cast<std::size_t>(k)] += 1;
      const Monomial beta = Monomial::from_exponents(beta_exp);
      const CVec* wcol = w.find(beta);
      if (!wcol) continue;
      const double weight = static_cast<double>(beta_exp[static_cast<std::size_t>(k)]) *
                            static_cast<double>(beta.multiplicity()) *
                            static_cast<double>(delta.multiplicity());
      rhs -= weight * fcol(k) * (*wcol);
    }
  }

  rhs /= static_cast<double>(nu.multiplicity());
  return rhs;
}

MonomialSolution solve_monomial(const Monomial& nu, const CVec& rhs, const Spectrum& spec,
                                const ResonanceTolerance& tol) {
  const int n = spec.n();
  const int m = spec.m();
  const Cplx sigma = sigma_of(nu, spec);

  MonomialSolution out;
  out.f = CVec::Zero(m);
  CVec modal = CVec::Zero(n);

  for (int j = 0; j < n; ++j) {
    const Cplx lambda = spec.eigenvalues(j);
    const Cplx proj = spec.left.col(j).adjoint() * rhs;
    const int k = spec.master_pos(j);
    const bool resonant = tol.matches(sigma, lambda);
    if (k >= 0) {
      if (resonant) {
        out.f(k) = proj;
        out.reports.push_back({nu, sigma, lambda, j, ResonanceReport::Kind::inner});
      } else {
        modal(j) = proj / (sigma - lambda);
      }
    } else {
      // Slaves: a gap inside the tolerance is an outer resonance; a gap at
      // the numerical floor is one the tolerance failed to catch.
      const double floor = 1e-13 * std::max({1.0, std::abs(sigma), std::abs(lambda)});
      if (resonant || std::abs(sigma - lambda) < floor) {
        out.outer = true;
        out.reports.push_back({nu, sigma, lambda, j, ResonanceReport::Kind::outer});
      } else {
        modal(j) = proj / (sigma - lambda);
      }
    }
  }
  if (out.outer) return out;
  out.w = spec.right * modal;
  return out;
}

namespace {

int resolve_thread_count(int threads) {
#ifdef _OPENMP
  if (threads <= 0) {
    if (const char* env = std::getenv("SSMPARAM_THREADS")) {
      const int parsed = std::atoi(env);
      if (parsed > 0) threads = parsed;
    }
  }
  if (threads <= 0) threads = omp_get_max_threads();
  return std::max(1, threads);
#else
  (void)threads;
  return 1;
#endif
}

void seed_order_one(const Spectrum& spec, ManifoldExpansion& w, ReducedDynamics& f) {
  const int m = spec.m();
  w.m = m;
  w.n = spec.n();
  f.m = m;
  for (int k = 0; k < m; ++k) {
    const Monomial nu(std::vector<int>{k + 1});
    w.columns[nu] = spec.right.col(spec.master_indices[static_cast<std::size_t>(k)]);
    CVec fk = CVec::Zero(m);
    fk(k) = spec.master_eigenvalue(k);
    f.columns[nu] = fk;
  }
}

ReduceResult reduce_impl(const PolySystem& sys, const std::vector<int>& master_indices,
                         int p_max, const ResonanceTolerance& tol, int threads, bool parallel) {
  if (p_max < 1) throw std::invalid_argument("reduce: p_max must be >= 1");
  ReduceResult result;
  result.spectrum = compute_spectrum(sys, master_indices);
  seed_order_one(result.spectrum, result.w, result.f);
  result.completed_order = 1;

  const int m = result.spectrum.m();
  for (int p = 2; p <= p_max; ++p) {
    const std::vector<Monomial> monomials = canonical_monomials(m, p);
    std::vector<MonomialSolution> solutions(monomials.size());
    std::exception_ptr failure = nullptr;

    const auto solve_one = [&](std::size_t i) {
      const CVec rhs = assemble_rhs(monomials[i], sys, result.w, result.f);
      solutions[i] = solve_monomial(monomials[i], rhs, result.spectrum, tol);
    };

    if (parallel) {
      const int team = resolve_thread_count(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(team)
#endif
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(monomials.size()); ++i) {
        try {
          solve_one(static_cast<std::size_t>(i));
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
          {
            if (!failure) failure = std::current_exception();
          }
        }
      }
      (void)team;
    } else {
      for (std::size_t i = 0; i < monomials.size(); ++i) solve_one(i);
    }
    if (failure) std::rethrow_exception(failure);

    bool outer = false;
    for (const auto& solution : solutions) outer = outer || solution.outer;
    for (auto& solution : solutions) {
      for (auto& report : solution.reports) result.reports.push_back(report);
    }
    if (outer) {
      result.outer_resonance = true;
      return result;  // orders below p stay valid
    }
    for (std::size_t i = 0; i < monomials.size(); ++i) {
      result.w.columns[monomials[i]] = std::move(solutions[i].w);
      result.f.columns[monomials[i]] = std::move(solutions[i].f);
    }
    result.completed_order = p;
  }
  return result;
}

}  // namespace

ReduceResult reduce(const PolySystem& sys, const std::vector<int>& master_indices, int p_max,
                    const ResonanceTolerance& tol, int threads) {
  return reduce_impl(sys, master_indices, p_max, tol, threads, true);
}

ReduceResult reduce_serial(const PolySystem& sys, const std::vector<int>& master_indices,
                           int p_max, const ResonanceTolerance& tol) {
  return reduce_impl(sys, master_indices, p_max, tol, 1, false);
}

CVec rom_map(const ManifoldExpansion& w, const CVec& z) {
  if (z.size() != w.m) throw std::invalid_argument("rom_map: reduced state size mismatch");
  CVec out = CVec::Zero(w.n);
  for (const auto& [nu, column] : w.columns) {
    Cplx value(static_cast<double>(nu.multiplicity()), 0.0);
    for (int v : nu.tuple()) value *= z(v - 1);
    out += column * value;
  }
  return out;
}

CVec rom_evaluate(const ReducedDynamics& f, const CVec& z) {
  if (z.size() != f.m) throw std::invalid_argument("rom_evaluate: reduced state size mismatch");
  CVec out = CVec::Zero(f.m);
  for (const auto& [nu, column] : f.columns) {
    Cplx value(static_cast<double>(nu.multiplicity()), 0.0);
    for (int v : nu.tuple()) value *= z(v - 1);
    out += column * value;
  }
  return out;
}

double invariance_residual(const PolySystem& sys, const ManifoldExpansion& w,
                           const ReducedDynamics& f, const CVec& z) {
  const int m = w.m;
  CMat jacobian = CMat::Zero(w.n, m);
  for (const auto& [nu, column] : w.columns) {
    const auto& tuple = nu.tuple();
    const double mult = static_cast<double>(nu.multiplicity());
    int previous = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      const int v = tuple[i];
      if (v == previous) continue;  // one derivative per distinct variable
      previous = v;
      int count = 0;
      Cplx partial(1.0, 0.0);
      for (std::size_t l = 0; l < tuple.size(); ++l) {
        if (tuple[l] == v) ++count;
      }
      bool skipped = false;
      for (std::size_t l = 0; l < tuple.size(); ++l) {
        if (!skipped && tuple[l] == v) {
          skipped = true;
          continue;
        }
        partial *= z(tuple[l] - 1);
      }
      jacobian.col(v - 1) += column * (mult * static_cast<double>(count) * partial);
    }
  }
  const CVec lhs = jacobian * rom_evaluate(f, z);
  const CVec rhs = sys.evaluate(rom_map(w, z));
  return (lhs - rhs).norm();
}

std::vector<int> required_master_indices(const Spectrum& spec, const AugmentationInfo& aug) {
  std::vector<int> required;
  const int n = spec.n();
  if (aug.has_forcing()) {
    for (int j = 0; j < n; ++j) {
      const double support = std::abs(spec.right(aug.forcing_indices[0], j)) +
                             std::abs(spec.right(aug.forcing_indices[1], j));
      if (support > 1e-9) required.push_back(j);
    }
  }
  if (aug.has_parameter()) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(spec.right(aug.parameter_index, j)) > 0.5 &&
          std::abs(spec.eigenvalues(j)) < 1e-8) {
        required.push_back(j);
      }
    }
  }
  std::sort(required.begin(), required.end());
  required.erase(std::unique(required.begin(), required.end()), required.end());
  return required;
}

}  // namespace ssmparam
