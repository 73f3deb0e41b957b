#include "ssmparam/runner.hpp"

#include "ssmparam/geomorph.hpp"
#include "ssmparam/manifold.hpp"
#include "ssmparam/polyode.hpp"
#include "ssmparam/system_io.hpp"
#include "ssmparam/weakform.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace ssmparam {

namespace {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string format_complex(Cplx value) {
  return format_double(value.real()) + (value.imag() < 0 ? "-" : "+") +
         format_double(std::abs(value.imag())) + "i";
}

/// System plus augmentation bookkeeping as the reducer consumes it.
struct PreparedSystem {
  PolySystem sys{1, 1};
  AugmentationInfo aug;
};

PreparedSystem prepare_system(const RunConfig& cfg) {
  const SystemInput input = parse_system_file(cfg.input_path);
  PreparedSystem prepared;
  if (input.mech) {
    auto [sys, aug] = mech_to_parametric_system(*input.mech, cfg.omega);
    prepared.sys = std::move(sys);
    prepared.aug = aug;
  } else {
    prepared.sys = *input.poly;
  }
  return prepared;
}

std::vector<int> masters_from_config(const RunConfig& cfg, int n) {
  if (cfg.masters.empty()) throw ParseError("--masters: at least one master index is required");
  std::vector<int> masters;
  for (int idx : cfg.masters) {
    if (idx < 1 || idx > n)
      throw ParseError("--masters: index " + std::to_string(idx) + " outside [1, " +
                       std::to_string(n) + "]");
    masters.push_back(idx - 1);
  }
  return masters;
}

void check_required_masters(const Spectrum& spec, const AugmentationInfo& aug,
                            const std::vector<int>& masters) {
  for (int required : required_master_indices(spec, aug)) {
    if (std::find(masters.begin(), masters.end(), required) == masters.end()) {
      throw ParseError("--masters: augmented state mode " + std::to_string(required + 1) +
                       " (eigenvalue " + format_complex(spec.eigenvalues(required)) +
                       ") must be a master");
    }
  }
}

/// Classical fourth-order explicit step.
template <typename Field>
CVec rk4_step(const Field& field, const CVec& y, double dt) {
  const CVec k1 = field(y);
  const CVec k2 = field(y + 0.5 * dt * k1);
  const CVec k3 = field(y + 0.5 * dt * k2);
  const CVec k4 = field(y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

int run_reduce(const RunConfig& cfg) {
  try {
    const PreparedSystem prepared = prepare_system(cfg);
    const std::vector<int> masters = masters_from_config(cfg, prepared.sys.dim());
    const ResonanceTolerance tol{cfg.r_tol, cfg.a_tol};
    const Spectrum spec = compute_spectrum(prepared.sys, masters);
    check_required_masters(spec, prepared.aug, masters);

    const ReduceResult result = reduce(prepared.sys, masters, cfg.order, tol, cfg.threads);
    write_json_file(cfg.output_path, reduce_result_to_json(result));
    if (result.outer_resonance) {
      for (const auto& report : result.reports) {
        if (report.kind != ResonanceReport::Kind::outer) continue;
        std::cerr << "outer resonance at monomial (" << report.monomial.key()
                  << "): sigma = " << format_complex(report.sigma) << " matches slave eigenvalue "
                  << format_complex(report.eigenvalue) << " (mode " << report.eigen_index + 1
                  << ")\n";
      }
      return kExitOuterResonance;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int run_expand(const RunConfig& cfg) {
  try {
    const ExpandInput input = parse_expand_file(cfg.input_path);
    const DetCoeffs h = det_poly_coeffs(input.morph_gradient);
    const AdjSeries adj = adj_series_coeffs(input.morph_gradient);
    const InvDetSeries series = inv_det_series(h, input.order);
    const ValidityCheck valid =
        validity_check(input.morph_gradient, input.mu_lo, input.mu_hi, input.samples);

    nlohmann::json out;
    out["h"] = {h.h1, h.h2, h.h3};
    auto mat_json = [](const Mat3& m) {
      nlohmann::json rows = nlohmann::json::array();
      for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
      return rows;
    };
    out["adj"] = {mat_json(adj.c0), mat_json(adj.c1), mat_json(adj.c2)};
    out["a"] = series.coeffs;
    out["valid_range_check"] = valid.valid;
    if (!valid.valid) {
      out["violating_mu"] = valid.violating_mu;
      out["det_at_violation"] = valid.det_at_violation;
    }
    write_json_file(cfg.output_path, out);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int run_integrand(const RunConfig& cfg) {
  try {
    const IntegrandInput input = parse_integrand_file(cfg.input_path);
    const std::size_t count = input.points.size();
    std::vector<IntegrandBreakdown> mu0(count), mu1(count);
    std::vector<double> fd_check(count);

    const double h = 1e-5;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      const PointState& point = input.points[static_cast<std::size_t>(i)];
      mu0[static_cast<std::size_t>(i)] = integrand_mu0(point, input.elasticity);
      mu1[static_cast<std::size_t>(i)] = integrand_mu1(point, input.elasticity);
      const double fd = (mapped_integrand(point, input.elasticity, h) -
                         mapped_integrand(point, input.elasticity, -h)) /
                        (2.0 * h);
      const double total = mu1[static_cast<std::size_t>(i)].total();
      fd_check[static_cast<std::size_t>(i)] = std::abs(fd - total) / std::max(1.0, std::abs(total));
    }

    std::ofstream out(cfg.output_path);
    if (!out) throw ParseError(cfg.output_path + ": cannot open file for writing");
    out << "point,inertia_mu0,linear_mu0,quadratic_mu0,cubic_mu0,"
           "inertia_mu1,linear_mu1,quadratic_mu1,cubic_mu1,fd_check\n";
    for (std::size_t i = 0; i < count; ++i) {
      out << i << ',' << format_double(mu0[i].inertia) << ',' << format_double(mu0[i].linear)
          << ',' << format_double(mu0[i].quadratic) << ',' << format_double(mu0[i].cubic) << ','
          << format_double(mu1[i].inertia) << ',' << format_double(mu1[i].linear) << ','
          << format_double(mu1[i].quadratic) << ',' << format_double(mu1[i].cubic) << ','
          << format_double(fd_check[i]) << '\n';
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int run_simulate(const RunConfig& cfg) {
  try {
    const PreparedSystem prepared = prepare_system(cfg);
    const PolySystem& sys = prepared.sys;

    RomData rom;
    if (!cfg.rom_path.empty()) {
      rom = rom_from_file(cfg.rom_path);
      if (rom.n != sys.dim())
        throw ParseError(cfg.rom_path + ": manifold dimension does not match the system");
    } else {
      const std::vector<int> masters = masters_from_config(cfg, sys.dim());
      const ResonanceTolerance tol{cfg.r_tol, cfg.a_tol};
      const Spectrum spec = compute_spectrum(sys, masters);
      check_required_masters(spec, prepared.aug, masters);
      const ReduceResult result = reduce(sys, masters, cfg.order, tol, cfg.threads);
      if (result.outer_resonance) {
        std::cerr << "error: reduction hit an outer resonance; cannot simulate\n";
        return kExitOuterResonance;
      }
      rom.n = result.spectrum.n();
      rom.m = result.spectrum.m();
      rom.w = result.w;
      rom.f = result.f;
    }

    if (!(cfg.dt > 0) || !(cfg.t_end > 0)) throw ParseError("simulate: dt and t-end must be positive");

    CVec z = CVec::Constant(rom.m, Cplx(cfg.amplitude, 0.0));
    CVec y = rom_map(rom.w, z);
    const double reference_norm = std::max(1.0, y.norm());

    std::ofstream out(cfg.output_path);
    if (!out) throw ParseError(cfg.output_path + ": cannot open file for writing");
    out << "t";
    for (int i = 1; i <= rom.n; ++i) out << ",y_fom_" << i;
    for (int i = 1; i <= rom.n; ++i) out << ",y_rom_" << i;
    out << ",err_2norm\n";

    const auto fom_field = [&sys](const CVec& state) { return sys.evaluate(state); };
    const auto rom_field = [&rom](const CVec& state) { return rom_evaluate(rom.f, state); };

    const auto steps = static_cast<std::int64_t>(std::llround(cfg.t_end / cfg.dt));
    double max_error = 0.0;
    double max_norm = 0.0;
    for (std::int64_t step = 0; step <= steps; ++step) {
      const double t = static_cast<double>(step) * cfg.dt;
      const CVec y_rom = rom_map(rom.w, z);
      const double err = (y - y_rom).norm();
      max_error = std::max(max_error, err);
      max_norm = std::max(max_norm, y.norm());

      out << format_double(t);
      for (int i = 0; i < rom.n; ++i) out << ',' << format_double(y(i).real());
      for (int i = 0; i < rom.n; ++i) out << ',' << format_double(y_rom(i).real());
      out << ',' << format_double(err) << '\n';

      if (y.norm() > 1e6 * reference_norm || !std::isfinite(y.norm())) {
        std::cerr << "error: trajectory norm blew up at t = " << t
                  << "; reduce dt or the initial amplitude\n";
        return kExitIntegrationFailure;
      }
      if (step == steps) break;
      y = rk4_step(fom_field, y, cfg.dt);
      z = rk4_step(rom_field, z, cfg.dt);
    }
    const double rel = max_error / std::max(max_norm, 1e-300);
    std::cout << "max relative error = " << format_double(rel) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace ssmparam
