#include "ssmparam/polyode.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <stdexcept>

namespace ssmparam {

PolySystem::PolySystem(int dim, int max_order) : n_(dim), max_order_(max_order) {
  if (dim < 1) throw std::invalid_argument("PolySystem: dimension must be >= 1");
  if (max_order < 1) throw std::invalid_argument("PolySystem: max order must be >= 1");
  by_order_.resize(static_cast<std::size_t>(max_order) + 1);
}

void PolySystem::add_term(int row, std::vector<int> indices, Cplx value) {
  if (row < 1 || row > n_) throw std::out_of_range("PolySystem::add_term: row outside [1, n]");
  if (indices.empty()) throw std::invalid_argument("PolySystem::add_term: order-0 terms are not allowed");
  const int kappa = static_cast<int>(indices.size());
  if (kappa > max_order_) throw std::out_of_range("PolySystem::add_term: order exceeds max_order");
  for (int v : indices) {
    if (v < 1 || v > n_) throw std::out_of_range("PolySystem::add_term: index outside [1, n]");
  }
  Monomial mono(std::move(indices));
  auto& column = by_order_[static_cast<std::size_t>(kappa)][mono];
  if (column.size() == 0) column = CVec::Zero(n_);
  column(row - 1) += value;
}

const std::map<Monomial, CVec>& PolySystem::order_terms(int kappa) const {
  static const std::map<Monomial, CVec> empty;
  if (kappa < 1 || kappa > max_order_) return empty;
  return by_order_[static_cast<std::size_t>(kappa)];
}

CMat PolySystem::linear_matrix() const {
  CMat a1 = CMat::Zero(n_, n_);
  for (const auto& [mono, column] : order_terms(1)) {
    a1.col(mono.tuple()[0] - 1) = column;
  }
  return a1;
}

CVec PolySystem::evaluate(const CVec& y) const {
  if (y.size() != n_) throw std::invalid_argument("PolySystem::evaluate: state size mismatch");
  CVec out = CVec::Zero(n_);
  for (int kappa = 1; kappa <= max_order_; ++kappa) {
    for (const auto& [mono, column] : by_order_[static_cast<std::size_t>(kappa)]) {
      Cplx value(1.0, 0.0);
      for (int v : mono.tuple()) value *= y(v - 1);
      out += column * value;
    }
  }
  return out;
}

std::size_t PolySystem::term_count() const {
  std::size_t count = 0;
  for (const auto& order : by_order_) count += order.size();
  return count;
}

void MechSystem::validate() const {
  if (n2 < 1) throw std::invalid_argument("MechSystem: n2 must be >= 1");
  auto check_square = [&](const Eigen::MatrixXd& m, const char* name) {
    if (m.rows() != n2 || m.cols() != n2)
      throw std::invalid_argument(std::string("MechSystem: ") + name + " must be n2 x n2");
  };
  check_square(mass, "mass");
  check_square(stiffness, "stiffness");
  if ((mass - mass.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1 + mass.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("MechSystem: mass matrix is not symmetric");
  if ((stiffness - stiffness.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * (1 + stiffness.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("MechSystem: stiffness matrix is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("MechSystem: mass matrix is not positive definite");
  if (parameter_stiffness.size() > 0) check_square(parameter_stiffness, "parameter_stiffness");
  if (forcing_vector.size() > 0 && forcing_vector.size() != n2)
    throw std::invalid_argument("MechSystem: forcing vector must have length n2");
  auto check_terms = [&](const std::vector<MechTerm>& terms, std::size_t order, const char* name) {
    for (const auto& t : terms) {
      if (t.row < 1 || t.row > n2 || t.indices.size() != order)
        throw std::invalid_argument(std::string("MechSystem: bad ") + name + " term");
      for (int v : t.indices)
        if (v < 1 || v > n2) throw std::invalid_argument(std::string("MechSystem: bad ") + name + " index");
    }
  };
  check_terms(quadratic, 2, "quadratic");
  check_terms(cubic, 3, "cubic");
  check_terms(parameter_quadratic, 2, "parameter quadratic");
  check_terms(parameter_cubic, 3, "parameter cubic");
}

namespace {

// Accumulates nonlinear mechanical terms into columns per canonical monomial,
// then applies -M^(-1) once per monomial.
void push_premultiplied(PolySystem& sys, const Eigen::LLT<Eigen::MatrixXd>& mass_llt,
                        const std::vector<MechTerm>& terms, int n2, int extra_index) {
  std::map<Monomial, Eigen::VectorXd> columns;
  for (const auto& t : terms) {
    std::vector<int> indices = t.indices;
    if (extra_index > 0) indices.push_back(extra_index);
    auto& col = columns[Monomial(std::move(indices))];
    if (col.size() == 0) col = Eigen::VectorXd::Zero(n2);
    col(t.row - 1) += t.value;
  }
  for (const auto& [mono, col] : columns) {
    const Eigen::VectorXd scaled = mass_llt.solve(col);
    for (int i = 0; i < n2; ++i) {
      if (scaled(i) != 0.0) sys.add_term(n2 + i + 1, mono.tuple(), Cplx(-scaled(i), 0.0));
    }
  }
}

}  // namespace

PolySystem second_to_first_order(const MechSystem& mech) {
  mech.validate();
  const int n2 = mech.n2;
  const int n = 2 * n2;
  Eigen::LLT<Eigen::MatrixXd> llt(mech.mass);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("second_to_first_order: singular mass matrix");

  int max_order = 1;
  if (!mech.quadratic.empty()) max_order = 2;
  if (!mech.cubic.empty()) max_order = 3;
  PolySystem sys(n, max_order);

  for (int i = 1; i <= n2; ++i) sys.add_term(i, {n2 + i}, Cplx(1.0, 0.0));

  const Eigen::MatrixXd minv_k = llt.solve(mech.stiffness);
  const Eigen::MatrixXd minv_c = llt.solve(mech.damping());
  for (int i = 0; i < n2; ++i) {
    for (int j = 0; j < n2; ++j) {
      if (minv_k(i, j) != 0.0) sys.add_term(n2 + i + 1, {j + 1}, Cplx(-minv_k(i, j), 0.0));
      if (minv_c(i, j) != 0.0) sys.add_term(n2 + i + 1, {n2 + j + 1}, Cplx(-minv_c(i, j), 0.0));
    }
  }
  push_premultiplied(sys, llt, mech.quadratic, n2, 0);
  push_premultiplied(sys, llt, mech.cubic, n2, 0);
  return sys;
}

namespace {

PolySystem copy_resized(const PolySystem& sys, int new_dim, int new_max_order) {
  PolySystem out(new_dim, new_max_order);
  for (int kappa = 1; kappa <= sys.max_order(); ++kappa) {
    for (const auto& [mono, column] : sys.order_terms(kappa)) {
      for (int i = 0; i < sys.dim(); ++i) {
        if (column(i) != Cplx(0.0, 0.0)) out.add_term(i + 1, mono.tuple(), column(i));
      }
    }
  }
  return out;
}

}  // namespace

std::pair<PolySystem, AugmentationInfo> augment_forcing(const PolySystem& sys,
                                                        const CVec& amplitude, double omega) {
  if (!(omega > 0)) throw std::invalid_argument("augment_forcing: omega must be positive");
  if (amplitude.size() != sys.dim())
    throw std::invalid_argument("augment_forcing: amplitude size mismatch");
  const int n = sys.dim();
  PolySystem out = copy_resized(sys, n + 2, sys.max_order());
  const int c_index = n + 1;  // 1-based
  const int s_index = n + 2;
  out.add_term(c_index, {s_index}, Cplx(-omega, 0.0));
  out.add_term(s_index, {c_index}, Cplx(omega, 0.0));
  for (int i = 0; i < n; ++i) {
    if (amplitude(i) != Cplx(0.0, 0.0)) out.add_term(i + 1, {c_index}, amplitude(i));
  }
  AugmentationInfo info;
  info.forcing_indices = {c_index - 1, s_index - 1};
  info.forcing_frequency = omega;
  return {std::move(out), info};
}

std::pair<PolySystem, AugmentationInfo> augment_parameter(const PolySystem& sys,
                                                          const std::vector<PolyTerm>& sensitivity) {
  int max_order = sys.max_order();
  for (const auto& t : sensitivity) {
    max_order = std::max(max_order, static_cast<int>(t.indices.size()) + 1);
  }
  const int n = sys.dim();
  PolySystem out = copy_resized(sys, n + 1, max_order);
  const int mu_index = n + 1;  // 1-based; its row stays empty (mu' = 0)
  for (const auto& t : sensitivity) {
    if (t.row < 1 || t.row > n)
      throw std::out_of_range("augment_parameter: sensitivity row outside the original system");
    std::vector<int> indices = t.indices;
    for (int v : indices) {
      if (v < 1 || v > n) throw std::out_of_range("augment_parameter: sensitivity index out of range");
    }
    indices.push_back(mu_index);
    out.add_term(t.row, std::move(indices), t.value);
  }
  AugmentationInfo info;
  info.parameter_index = mu_index - 1;
  return {std::move(out), info};
}

std::pair<PolySystem, AugmentationInfo> mech_to_parametric_system(const MechSystem& mech,
                                                                  std::optional<double> omega) {
  PolySystem sys = second_to_first_order(mech);
  AugmentationInfo info;

  const double drive_omega = omega.value_or(mech.forcing_omega);
  if (mech.has_forcing() && drive_omega > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(mech.mass);
    const Eigen::VectorXd accel = llt.solve(mech.forcing_vector);
    CVec amplitude = CVec::Zero(sys.dim());
    for (int i = 0; i < mech.n2; ++i) amplitude(mech.n2 + i) = Cplx(accel(i), 0.0);
    auto [forced, finfo] = augment_forcing(sys, amplitude, drive_omega);
    sys = std::move(forced);
    info.forcing_indices = finfo.forcing_indices;
    info.forcing_frequency = finfo.forcing_frequency;
  }

  if (mech.has_parameter()) {
    const int n2 = mech.n2;
    Eigen::LLT<Eigen::MatrixXd> llt(mech.mass);
    std::vector<PolyTerm> sensitivity;
    if (mech.parameter_stiffness.size() > 0) {
      const Eigen::MatrixXd minv_k1 = llt.solve(mech.parameter_stiffness);
      for (int i = 0; i < n2; ++i) {
        for (int j = 0; j < n2; ++j) {
          if (minv_k1(i, j) != 0.0)
            sensitivity.push_back({n2 + i + 1, {j + 1}, Cplx(-minv_k1(i, j), 0.0)});
        }
      }
    }
    auto premultiplied = [&](const std::vector<MechTerm>& terms) {
      std::map<Monomial, Eigen::VectorXd> columns;
      for (const auto& t : terms) {
        auto& col = columns[Monomial(t.indices)];
        if (col.size() == 0) col = Eigen::VectorXd::Zero(n2);
        col(t.row - 1) += t.value;
      }
      for (const auto& [mono, col] : columns) {
        const Eigen::VectorXd scaled = llt.solve(col);
        for (int i = 0; i < n2; ++i) {
          if (scaled(i) != 0.0) sensitivity.push_back({n2 + i + 1, mono.tuple(), Cplx(-scaled(i), 0.0)});
        }
      }
    };
    premultiplied(mech.parameter_quadratic);
    premultiplied(mech.parameter_cubic);

    auto [parametric, pinfo] = augment_parameter(sys, sensitivity);
    sys = std::move(parametric);
    info.parameter_index = pinfo.parameter_index;
  }

  return {std::move(sys), info};
}

}  // namespace ssmparam
