#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ssmparam {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitOuterResonance = 3;
inline constexpr int kExitIntegrationFailure = 4;

/// Batch-run configuration shared by the subcommands. Master indices are
/// 1-based positions in the sorted eigenvalue list, as printed by `reduce`.
struct RunConfig {
  std::string input_path;
  std::string output_path;
  std::string rom_path;  // simulate only; empty reduces in-process
  int order = 3;
  std::vector<int> masters;
  double r_tol = 1e-3;
  double a_tol = 1e-8;
  std::optional<double> omega;
  double t_end = 100.0;
  double dt = 0.01;
  double amplitude = 0.01;
  int threads = 0;
};

int run_reduce(const RunConfig& cfg);
int run_expand(const RunConfig& cfg);
int run_integrand(const RunConfig& cfg);
int run_simulate(const RunConfig& cfg);

}  // namespace ssmparam
