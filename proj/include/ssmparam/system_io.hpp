#pragma once

#include "ssmparam/geomorph.hpp"
#include "ssmparam/manifold.hpp"
#include "ssmparam/polyode.hpp"
#include "ssmparam/weakform.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssmparam {

/// Input malformed at the named JSON path.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A parsed system file: exactly one of the two members is set, matching the
/// file's "kind" ("mechanical" or "polynomial").
struct SystemInput {
  std::optional<MechSystem> mech;
  std::optional<PolySystem> poly;
};

SystemInput parse_system_json(const nlohmann::json& j);
SystemInput parse_system_file(const std::string& path);

struct ExpandInput {
  Mat3 morph_gradient;
  int order = 3;
  double mu_lo = 0.0;
  double mu_hi = 1.0;
  int samples = 101;
};
ExpandInput parse_expand_file(const std::string& path);

struct IntegrandInput {
  Elasticity elasticity;
  std::vector<PointState> points;
};
IntegrandInput parse_integrand_file(const std::string& path);

/// Reduction artifact serialized for the CLI. Complex numbers are [re, im]
/// pairs; monomial keys render as "1,1,2"; master indices are 1-based.
nlohmann::json reduce_result_to_json(const ReduceResult& result);

/// Manifold and reduced dynamics read back from a reduce artifact.
struct RomData {
  int n = 0;
  int m = 0;
  CVec eigenvalues;
  std::vector<int> master_indices;  // 0-based
  ManifoldExpansion w;
  ReducedDynamics f;
};
RomData rom_from_json(const nlohmann::json& j);
RomData rom_from_file(const std::string& path);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace ssmparam
