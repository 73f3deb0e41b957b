#pragma once

#include "ssmparam/kronalg.hpp"

#include <array>
#include <map>
#include <optional>
#include <vector>

namespace ssmparam {

/// First-order polynomial vector field  y' = sum_kappa A_kappa y^(x)kappa,
/// with an equilibrium at the origin (no order-0 terms).
///
/// Storage convention: one coefficient column per canonical monomial, holding
/// the permutation-summed (function-level) value, so
///   y'_i = sum over canonical eta of column(eta)[i] * y^eta
/// with no extra multiplicity factor.
class PolySystem {
public:
  PolySystem(int dim, int max_order);

  int dim() const { return n_; }
  int max_order() const { return max_order_; }

  /// Accumulates `value` into the canonical column of the (possibly permuted)
  /// index tuple. Row and indices are 1-based.
  void add_term(int row, std::vector<int> indices, Cplx value);

  /// Coefficient columns of order kappa, keyed by canonical monomial.
  const std::map<Monomial, CVec>& order_terms(int kappa) const;

  /// Dense A_1.
  CMat linear_matrix() const;

  /// Monomial-wise evaluation; never materializes Kronecker powers.
  CVec evaluate(const CVec& y) const;

  std::size_t term_count() const;

private:
  int n_;
  int max_order_;
  std::vector<std::map<Monomial, CVec>> by_order_;  // index = kappa
};

struct MechTerm {
  int row = 0;                // 1-based mechanical DOF
  std::vector<int> indices;   // 1-based mechanical DOFs
  double value = 0;
};

/// Second-order mechanical system
///   M x'' + (alpha M + beta K) x' + K x + g2(x) + g3(x)
///     + mu * [K1 x + g2_mu(x) + g3_mu(x)] = forcing_vector * cos(omega t).
/// Nonlinear terms are internal forces on the left-hand side.
struct MechSystem {
  int n2 = 0;
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
  double damping_alpha = 0;
  double damping_beta = 0;
  std::vector<MechTerm> quadratic;
  std::vector<MechTerm> cubic;
  Eigen::VectorXd forcing_vector;       // size 0 when unforced
  double forcing_omega = 0;
  Eigen::MatrixXd parameter_stiffness;  // size 0 when non-parametric
  std::vector<MechTerm> parameter_quadratic;
  std::vector<MechTerm> parameter_cubic;

  Eigen::MatrixXd damping() const { return damping_alpha * mass + damping_beta * stiffness; }
  bool has_forcing() const { return forcing_vector.size() > 0 && forcing_vector.cwiseAbs().maxCoeff() > 0; }
  bool has_parameter() const {
    return parameter_stiffness.size() > 0 || !parameter_quadratic.empty() || !parameter_cubic.empty();
  }
  /// Throws std::invalid_argument on non-SPD mass, asymmetric stiffness, or
  /// out-of-range term indices.
  void validate() const;
};

/// Bookkeeping for states appended by the augmentation steps (0-based).
struct AugmentationInfo {
  std::array<int, 2> forcing_indices{-1, -1};
  int parameter_index = -1;
  double forcing_frequency = 0;
  bool has_forcing() const { return forcing_indices[0] >= 0; }
  bool has_parameter() const { return parameter_index >= 0; }
};

/// One term of a parametric sensitivity: row and indices over the current
/// first-order state (1-based).
struct PolyTerm {
  int row = 0;
  std::vector<int> indices;
  Cplx value;
};

/// Casts the mechanical system to first order with y = (x, x'). Rows 1..n2
/// encode y_i' = y_{i+n2}; rows n2+1..2n2 carry -M^(-1) (C x' + K x + g(x)).
/// Throws std::invalid_argument when the mass matrix is not SPD.
PolySystem second_to_first_order(const MechSystem& mech);

/// Appends a cosine/sine pair (c, s) with c' = -omega s, s' = omega c and
/// couples amplitude * c into the existing rows. The forcing block receives
/// no feedback, so A_1 stays block-triangular.
std::pair<PolySystem, AugmentationInfo> augment_forcing(const PolySystem& sys,
                                                        const CVec& amplitude,
                                                        double omega);

/// Appends the parameter state mu with trivial dynamics mu' = 0. Every
/// sensitivity term (row, nu) enters as the monomial nu with one extra mu
/// factor.
std::pair<PolySystem, AugmentationInfo> augment_parameter(const PolySystem& sys,
                                                          const std::vector<PolyTerm>& sensitivity);

/// Composition used by the CLI: first-order cast, then forcing augmentation
/// (when a forcing vector and frequency are present), then parameter
/// augmentation (when parametric terms are present). State order: x, x',
/// forcing pair, parameter.
std::pair<PolySystem, AugmentationInfo> mech_to_parametric_system(const MechSystem& mech,
                                                                  std::optional<double> omega);

}  // namespace ssmparam
