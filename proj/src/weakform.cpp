#include "ssmparam/weakform.hpp"

#include "ssmparam/geomorph.hpp"

#include <cmath>
#include <stdexcept>

namespace ssmparam {

namespace {

// a : A : b with both arguments symmetrized. The isotropic tensor has minor
// symmetry, so only the symmetric parts contribute.
double contract(const Elasticity& e, const Mat3& a, const Mat3& b) {
  const Mat3 sa = sym(a);
  const Mat3 sb = sym(b);
  return e.lame_lambda * sa.trace() * sb.trace() + 2.0 * e.lame_mu * (sa.array() * sb.array()).sum();
}

}  // namespace

Mat3 sym(const Mat3& m) { return 0.5 * (m + m.transpose()); }

Mat3 elasticity_apply(const Elasticity& e, const Mat3& strain) {
  if ((strain - strain.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("elasticity_apply: strain is not symmetric");
  }
  return e.lame_lambda * strain.trace() * Mat3::Identity() + 2.0 * e.lame_mu * strain;
}

IntegrandBreakdown integrand_mu0(const PointState& s, const Elasticity& e) {
  const Mat3& gu = s.grad_u;
  const Mat3& gw = s.grad_w;
  const Mat3 gugu = gu.transpose() * gu;   // grad^T u grad u, symmetric
  const Mat3 gugw = gu.transpose() * gw;   // grad^T u grad w

  IntegrandBreakdown out;
  out.inertia = s.density * s.accel_dot_w;
  out.linear = contract(e, gu, gw);
  out.quadratic = contract(e, gu, gugw) + 0.5 * contract(e, gugu, gw);
  out.cubic = 0.5 * contract(e, gugu, gugw);
  return out;
}

IntegrandBreakdown integrand_mu1(const PointState& s, const Elasticity& e) {
  const Mat3& gu = s.grad_u;
  const Mat3& gw = s.grad_w;
  const Mat3& g = s.grad_morph;
  const double trg = g.trace();
  const Mat3 gugu = gu.transpose() * gu;
  const Mat3 gugw = gu.transpose() * gw;

  IntegrandBreakdown out;
  out.inertia = s.density * s.accel_dot_w * trg;
  out.linear = trg * contract(e, gu, gw)
             - contract(e, gu * g, gw)
             - contract(e, gu, gw * g);
  out.quadratic = trg * (contract(e, gu, gugw) + 0.5 * contract(e, gugu, gw))
                - contract(e, gu * g, gugw)
                - contract(e, g.transpose() * gugu, gw)
                - contract(e, gu, g.transpose() * gugw)
                - 0.5 * contract(e, gugu, gw * g)
                - contract(e, gu, gugw * g);
  out.cubic = 0.5 * trg * contract(e, gugu, gugw)
            - contract(e, gugu * g, gugw)
            - 0.5 * contract(e, gugu, g.transpose() * gugw)
            - 0.5 * contract(e, gugu, gugw * g);
  return out;
}

double mapped_integrand(const PointState& s, const Elasticity& e, double mu) {
  const Mat3 map_grad = Mat3::Identity() + s.grad_morph * mu;
  const double det = map_grad.determinant();
  if (!(det > 0.0)) {
    throw std::domain_error("mapped_integrand: morph map is orientation-violating (det <= 0)");
  }
  const Mat3 inv = adjugate3(map_grad) / det;
  const Mat3 gu = s.grad_u * inv;
  const Mat3 gw = s.grad_w * inv;
  const Mat3 gugu = gu.transpose() * gu;
  const Mat3 gugw = gu.transpose() * gw;

  const double value = s.density * s.accel_dot_w
                     + contract(e, gu, gw)
                     + contract(e, gu, gugw) + 0.5 * contract(e, gugu, gw)
                     + 0.5 * contract(e, gugu, gugw);
  return value * det;
}

}  // namespace ssmparam
