#pragma once

#include <Eigen/Dense>

namespace ssmparam {

using Mat3 = Eigen::Matrix3d;

/// Kinematic state at one material point. All gradients are taken w.r.t. the
/// reference configuration; the test field w must vanish on the Dirichlet
/// boundary (caller's responsibility).
struct PointState {
  Mat3 grad_u = Mat3::Zero();      // displacement gradient, dimensionless
  Mat3 grad_w = Mat3::Zero();      // test-field gradient, dimensionless
  Mat3 grad_morph = Mat3::Zero();  // geometry-morph gradient, dimensionless
  double accel_dot_w = 0;          // u_tt . w, m^2/s^2
  double density = 1;              // kg/m^3
};

/// Isotropic St. Venant-Kirchhoff material (Lame pair, Pa).
struct Elasticity {
  double lame_lambda = 0;
  double lame_mu = 0;
};

/// Scalar integrand contributions at one point, split by displacement order.
struct IntegrandBreakdown {
  double inertia = 0;
  double linear = 0;
  double quadratic = 0;
  double cubic = 0;
  double total() const { return inertia + linear + quadratic + cubic; }
};

/// Symmetric part (m + m^T) / 2.
Mat3 sym(const Mat3& m);

/// Isotropic elasticity tensor applied to a (symmetric) strain:
/// lambda * tr(strain) * I + 2 * mu * strain.
/// Throws std::invalid_argument when the input is asymmetric beyond 1e-12.
Mat3 elasticity_apply(const Elasticity& e, const Mat3& strain);

/// Weak-form integrand at one point on the unmorphed reference geometry.
IntegrandBreakdown integrand_mu0(const PointState& s, const Elasticity& e);

/// First-order sensitivity of the integrand w.r.t. the geometry parameter,
/// i.e. the coefficient of mu^1 in the expansion of mapped_integrand.
IntegrandBreakdown integrand_mu1(const PointState& s, const Elasticity& e);

/// Full integrand on the morphed geometry, pulled back to the reference
/// domain: gradients are composed with (I + grad_morph * mu)^(-1) and the
/// volume element contributes det(I + grad_morph * mu). This is the exact
/// change-of-variables expression the mu-expansions approximate.
/// Throws std::domain_error when the map is orientation-violating (det <= 0).
double mapped_integrand(const PointState& s, const Elasticity& e, double mu);

}  // namespace ssmparam
