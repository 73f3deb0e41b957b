#pragma once

#include "ssmparam/polyode.hpp"

#include <map>
#include <vector>

namespace ssmparam {

/// Eigenstructure of A_1 with biorthonormal left/right pairs. Eigenvalues are
/// sorted by |lambda| ascending, then Im descending, then Re ascending;
/// conjugate pairs of a real A_1 are stored as exact conjugates.
struct Spectrum {
  CVec eigenvalues;
  CMat right;  // columns r_j, unit norm, largest-modulus entry real positive
  CMat left;   // columns l_j with l_i^H r_j = delta_ij
  std::vector<int> master_indices;  // 0-based positions, ascending
  bool real_linear_part = true;

  int n() const { return static_cast<int>(eigenvalues.size()); }
  int m() const { return static_cast<int>(master_indices.size()); }
  /// Position of eigen index j inside the master list, or -1 for slaves.
  int master_pos(int j) const;
  bool is_master(int j) const { return master_pos(j) >= 0; }
  Cplx master_eigenvalue(int k) const { return eigenvalues(master_indices[static_cast<std::size_t>(k)]); }
};

/// Manifold coefficients W_nu keyed by canonical monomial over the reduced
/// variables. Stored values are the symmetric per-permutation coefficients:
/// the full map is  y = sum over canonical nu of multiplicity(nu) W_nu z^nu,
/// and a permuted tuple denotes the same stored column. Missing monomials are
/// implicitly zero.
struct ManifoldExpansion {
  int m = 0;
  int n = 0;
  std::map<Monomial, CVec> columns;
  const CVec* find(const Monomial& nu) const;
};

/// Reduced dynamics f_nu with the same storage convention on m-vectors:
/// z' = sum over canonical nu of multiplicity(nu) f_nu z^nu.
struct ReducedDynamics {
  int m = 0;
  std::map<Monomial, CVec> columns;
  const CVec* find(const Monomial& nu) const;
};

/// |sigma - lambda| <= r_tol * max(|sigma|, |lambda|) + a_tol.
struct ResonanceTolerance {
  double r_tol = 1e-3;
  double a_tol = 1e-8;
  bool matches(Cplx sigma, Cplx lambda) const;
};

struct ResonanceReport {
  enum class Kind { inner, outer };
  Monomial monomial;
  Cplx sigma;
  Cplx eigenvalue;
  int eigen_index = -1;  // 0-based position in the sorted spectrum
  Kind kind = Kind::inner;
};

/// Full eigendecomposition of A_1 with masters recorded.
/// Throws std::runtime_error when the eigenvector matrix is near-defective
/// (condition number above 1e8) and std::invalid_argument when the master set
/// of a real A_1 is not closed under conjugation.
Spectrum compute_spectrum(const PolySystem& sys, std::vector<int> master_indices);

/// Resonance indicator: sum of the master eigenvalues selected by the tuple
/// entries of nu.
Cplx sigma_of(const Monomial& nu, const Spectrum& spec);

/// Per-monomial column of the order-p reduced-dynamics coupling tensor,
/// computed by the slice recurrence
///   Gamma_{nu,kappa} = e_{nu_1} (x) Gamma_{nu[1:p],kappa-1}
///                    + f_{nu[0:p-kappa+1]} (x) e_{nu[p-kappa+1:p]}
/// with base Gamma_{nu,1} = f_nu. Length m^kappa.
CVec gamma_column(const Monomial& nu, int kappa, const ReducedDynamics& f);

/// Per-monomial column of the order-p composition tensor in factored form:
/// a sum of Kronecker products of kappa n-vectors, never materialized, from
///   Xi_{nu,kappa} = sum_sigma W_{nu[0:sigma]} (x) Xi_{nu[sigma:p],kappa-1}
/// with base Xi_{nu,1} = W_nu.
using XiTerms = std::vector<std::vector<CVec>>;
XiTerms xi_column(const Monomial& nu, int kappa, const ManifoldExpansion& w);

/// Right-hand side of the order-p homological equation for canonical nu,
/// averaged over the permutation class so that
///   (sigma_nu I - A_1) W_nu + W_1 f_nu = rhs
/// is the equation to solve under the per-permutation storage convention.
/// All W, f data of orders below |nu| must be present.
CVec assemble_rhs(const Monomial& nu, const PolySystem& sys,
                  const ManifoldExpansion& w, const ReducedDynamics& f);

struct MonomialSolution {
  CVec w;  // empty on outer resonance
  CVec f;
  std::vector<ResonanceReport> reports;
  bool outer = false;
};

/// Normal-form solve in the eigenbasis: inner-resonant master components are
/// absorbed into f via left projection (with the constraint l_j^H W_nu = 0);
/// every other modal component of W_nu is the projected rhs divided by
/// (sigma_nu - lambda_j). A slave within tolerance of sigma_nu flags outer
/// resonance, as does a slave gap below the numerical floor.
MonomialSolution solve_monomial(const Monomial& nu, const CVec& rhs, const Spectrum& spec,
                                const ResonanceTolerance& tol);

struct ReduceResult {
  Spectrum spectrum;
  ManifoldExpansion w;
  ReducedDynamics f;
  std::vector<ResonanceReport> reports;
  bool outer_resonance = false;
  int completed_order = 0;  // highest fully solved order
};

/// Order-by-order reduction. Monomials within one order are independent and
/// solved in parallel (OpenMP); results are deterministic regardless of
/// scheduling. `threads` caps the team size; 0 defers to SSMPARAM_THREADS or
/// the OpenMP default. On outer resonance the result carries every completed
/// order below the failing one plus the reports.
ReduceResult reduce(const PolySystem& sys, const std::vector<int>& master_indices, int p_max,
                    const ResonanceTolerance& tol = {}, int threads = 0);

/// Sequential reference kernel; identical results to reduce().
ReduceResult reduce_serial(const PolySystem& sys, const std::vector<int>& master_indices,
                           int p_max, const ResonanceTolerance& tol = {});

/// y = sum over canonical nu of multiplicity(nu) W_nu z^nu.
CVec rom_map(const ManifoldExpansion& w, const CVec& z);

/// z' = sum over canonical nu of multiplicity(nu) f_nu z^nu.
CVec rom_evaluate(const ReducedDynamics& f, const CVec& z);

/// || grad_z W(z) f(z) - A(W(z)) ||_2 with the truncated series evaluated
/// monomial-wise.
double invariance_residual(const PolySystem& sys, const ManifoldExpansion& w,
                           const ReducedDynamics& f, const CVec& z);

/// Eigen positions that the augmented states force into the master set: the
/// zero mode carried by the parameter state and the +-i omega pair carried by
/// the forcing states.
std::vector<int> required_master_indices(const Spectrum& spec, const AugmentationInfo& aug);

}  // namespace ssmparam
