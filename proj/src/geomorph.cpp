#include "ssmparam/geomorph.hpp"

#include "ssmparam/kronalg.hpp"

#include <stdexcept>

namespace ssmparam {

Mat3 adjugate3(const Mat3& g) {
  Mat3 adj;
  adj(0, 0) = g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1);
  adj(0, 1) = g(0, 2) * g(2, 1) - g(0, 1) * g(2, 2);
  adj(0, 2) = g(0, 1) * g(1, 2) - g(0, 2) * g(1, 1);
  adj(1, 0) = g(1, 2) * g(2, 0) - g(1, 0) * g(2, 2);
  adj(1, 1) = g(0, 0) * g(2, 2) - g(0, 2) * g(2, 0);
  adj(1, 2) = g(0, 2) * g(1, 0) - g(0, 0) * g(1, 2);
  adj(2, 0) = g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0);
  adj(2, 1) = g(0, 1) * g(2, 0) - g(0, 0) * g(2, 1);
  adj(2, 2) = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  return adj;
}

DetCoeffs det_poly_coeffs(const Mat3& g) {
  return {g.trace(), adjugate3(g).trace(), g.determinant()};
}

AdjSeries adj_series_coeffs(const Mat3& g) {
  AdjSeries s;
  s.c0 = Mat3::Identity();
  s.c1 = g.trace() * Mat3::Identity() - g;
  s.c2 = adjugate3(g);
  return s;
}

InvDetSeries inv_det_series(const DetCoeffs& h, int order) {
  if (order < 0) throw std::invalid_argument("inv_det_series: order must be >= 0");
  InvDetSeries series;
  series.coeffs.assign(static_cast<std::size_t>(order) + 1, 0.0);
  for (int kappa = 0; kappa <= order; ++kappa) {
    double a = 0.0;
    for (int s3 = 0; 3 * s3 <= kappa; ++s3) {
      for (int s2 = 0; 2 * s2 + 3 * s3 <= kappa; ++s2) {
        const int s1 = kappa - 2 * s2 - 3 * s3;
        // multinomial (s1+s2+s3)! / (s1! s2! s3!) in exact integer arithmetic
        const std::uint64_t multinomial =
            binomial(s1 + s2 + s3, s1) * binomial(s2 + s3, s2);
        double term = static_cast<double>(multinomial);
        for (int i = 0; i < s1; ++i) term *= -h.h1;
        for (int i = 0; i < s2; ++i) term *= -h.h2;
        for (int i = 0; i < s3; ++i) term *= -h.h3;
        a += term;
      }
    }
    series.coeffs[static_cast<std::size_t>(kappa)] = a;
  }
  return series;
}

ValidityCheck validity_check(const Mat3& g, double mu_lo, double mu_hi, int samples) {
  if (samples < 2) throw std::invalid_argument("validity_check: need at least 2 samples");
  if (mu_hi < mu_lo) throw std::invalid_argument("validity_check: empty mu interval");
  ValidityCheck result;
  for (int i = 0; i < samples; ++i) {
    const double mu = mu_lo + (mu_hi - mu_lo) * static_cast<double>(i) / (samples - 1);
    const double det = (Mat3::Identity() + g * mu).determinant();
    if (!(det > 0.0 && det < 2.0)) {
      result.valid = false;
      result.violating_mu = mu;
      result.det_at_violation = det;
      return result;
    }
  }
  return result;
}

}  // namespace ssmparam
