#pragma once

#include <Eigen/Dense>

#include <vector>

namespace ssmparam {

using Mat3 = Eigen::Matrix3d;

/// Coefficients of det(I + g*mu) = 1 + h1*mu + h2*mu^2 + h3*mu^3 for a 3x3
/// morph gradient g.
struct DetCoeffs {
  double h1 = 0;  // tr(g)
  double h2 = 0;  // tr(adj(g))
  double h3 = 0;  // det(g)
};

/// adj(I + g*mu) = c0 + c1*mu + c2*mu^2 as an exact polynomial identity.
struct AdjSeries {
  Mat3 c0;  // identity
  Mat3 c1;  // tr(g) I - g
  Mat3 c2;  // adj(g)
};

/// Truncated power series of 1 / det(I + g*mu); coeffs[0] = 1.
struct InvDetSeries {
  std::vector<double> coeffs;
  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct ValidityCheck {
  bool valid = true;
  double violating_mu = 0;      // first sampled mu with det outside (0, 2)
  double det_at_violation = 0;
  explicit operator bool() const { return valid; }
};

/// Transpose of the cofactor matrix; g * adjugate3(g) = det(g) * I.
Mat3 adjugate3(const Mat3& g);

DetCoeffs det_poly_coeffs(const Mat3& g);

AdjSeries adj_series_coeffs(const Mat3& g);

/// Coefficients a_0..a_K of the inverse-determinant expansion. a_kappa sums
/// multinomial(s1+s2+s3; s1,s2,s3) * (-h1)^s1 (-h2)^s2 (-h3)^s3 over all
/// nonnegative (s1, s2, s3) with s1 + 2 s2 + 3 s3 = kappa.
InvDetSeries inv_det_series(const DetCoeffs& h, int order);

/// Samples det(I + g*mu) at `samples` uniform points in [mu_lo, mu_hi] and
/// reports whether it stays inside the series' convergence band (0, 2).
ValidityCheck validity_check(const Mat3& g, double mu_lo, double mu_hi, int samples = 101);

}  // namespace ssmparam
