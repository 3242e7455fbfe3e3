#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinframe/integrate.hpp"
#include "spinframe/scene.hpp"

namespace spinframe {

struct CheckResult {
  std::string name;
  double max_residual = 0.0;   // interior maximum for grid checks
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::optional<double> edge_residual;  // edge-band maximum, allowed twice the tolerance
  std::size_t excluded = 0;             // nodes where the quantity is undefined
  std::string error;
};

struct Report {
  std::string command;
  std::vector<CheckResult> checks;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  nlohmann::ordered_json grids = nlohmann::ordered_json::object();
  std::string scene_hash;
  Grid2 grid;
  bool emit_grids = false;

  bool pass() const;
  nlohmann::ordered_json to_json() const;
  std::string body() const;  // deterministic serialization
};

struct CommandOptions {
  bool emit_grids = false;
  std::optional<std::string> emit_abstract;  // inspect, check, reconstruct
  std::optional<std::string> mesh;           // reconstruct CSV output
  bool mesh_frames = false;
  std::optional<Vec3> base_point;            // reconstruct from the canonical frame here
  int samples = 100;                         // curvature-table
};

Report cmd_inspect(const Scene& scene, const CommandOptions& opts = {});
Report cmd_check(const Scene& scene, const CommandOptions& opts = {});
Report cmd_reconstruct(const Scene& scene, const CommandOptions& opts = {});
Report cmd_reconstruct(const AbstractFile& file, const Tolerances& tol, const CommandOptions& opts = {});
Report cmd_curvature_table(const ModelSpace& model, const Tolerances& tol, const CommandOptions& opts = {});

// u, v, x, y, z (and the frame in chart components when frames is set)
std::string mesh_csv(const ReconstructionResult& r, bool frames);

// 0 when every check passes, 1 otherwise.
int exit_code(const Report& r);

}  // namespace spinframe
