// Compares the OpenMP reduce kernel against the serial reference on a chain
// of coupled oscillators with cubic springs, and checks that both produce the
// same coefficients.

#include "ssmparam/manifold.hpp"
#include "ssmparam/polyode.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace ssmparam;

namespace {

MechSystem make_chain(int n2, double gamma) {
  MechSystem mech;
  mech.n2 = n2;
  mech.mass = Eigen::MatrixXd::Identity(n2, n2);
  mech.stiffness = Eigen::MatrixXd::Zero(n2, n2);
  for (int i = 0; i < n2; ++i) {
    mech.stiffness(i, i) = 2.0 + 0.05 * i;  // detuned to avoid internal resonances
    if (i + 1 < n2) {
      mech.stiffness(i, i + 1) = -1.0;
      mech.stiffness(i + 1, i) = -1.0;
    }
  }
  mech.damping_alpha = 0.002;
  mech.damping_beta = 0.001;
  for (int i = 1; i <= n2; ++i) {
    mech.cubic.push_back({i, {i, i, i}, gamma});
    if (i + 1 <= n2) mech.cubic.push_back({i, {i, i, i + 1}, 0.3 * gamma});
  }
  return mech;
}

double run_once(const PolySystem& sys, const std::vector<int>& masters, int p_max, bool parallel,
                ReduceResult& out) {
  const auto start = std::chrono::steady_clock::now();
  out = parallel ? reduce(sys, masters, p_max) : reduce_serial(sys, masters, p_max);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int n2 = argc > 1 ? std::atoi(argv[1]) : 6;
  const int p_max = argc > 2 ? std::atoi(argv[2]) : 5;
  const int pairs = argc > 3 ? std::atoi(argv[3]) : 2;

  const MechSystem mech = make_chain(n2, 0.4);
  const PolySystem sys = second_to_first_order(mech);

  std::vector<int> masters;
  for (int k = 0; k < 2 * pairs; ++k) masters.push_back(k);

  std::printf("chain n2=%d (state dim %d), masters=%d, order=%d\n", n2, sys.dim(),
              static_cast<int>(masters.size()), p_max);

  ReduceResult warm;
  run_once(sys, masters, p_max, true, warm);  // warm caches before timing

  ReduceResult serial_result, parallel_result;
  const double t_serial = run_once(sys, masters, p_max, false, serial_result);
  const double t_parallel = run_once(sys, masters, p_max, true, parallel_result);

  double max_diff = 0.0;
  for (const auto& [nu, column] : serial_result.w.columns) {
    const CVec* other = parallel_result.w.find(nu);
    if (!other) {
      std::printf("FAIL: parallel result is missing monomial %s\n", nu.key().c_str());
      return 1;
    }
    max_diff = std::max(max_diff, (column - *other).cwiseAbs().maxCoeff());
  }

  std::printf("serial   : %8.3f s\n", t_serial);
  std::printf("parallel : %8.3f s  (speedup %.2fx)\n", t_parallel, t_serial / t_parallel);
  std::printf("max |serial - parallel| over W columns: %.3g\n", max_diff);
  return max_diff == 0.0 ? 0 : 1;
}
