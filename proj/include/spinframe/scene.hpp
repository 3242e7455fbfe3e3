#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "spinframe/spinfield.hpp"
#include "spinframe/surface.hpp"

namespace spinframe {

inline constexpr const char* kAbstractSchema = "spinframe.abstract/1";
inline constexpr const char* kReportSchema = "spinframe.report/1";
inline constexpr const char* kVersion = "0.1.0";

// Named check tolerances; unknown names are rejected so typos do not silently pass.
class Tolerances {
 public:
  Tolerances();
  double get(const std::string& name) const;
  void set(const std::string& name, double value);
  const std::map<std::string, double>& all() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

struct SpinorSpec {
  SpinGeometry geometry = SpinGeometry::ProductEtaHalf;
  Spinor seed = Spinor(1.0, 0.0);
  std::optional<cplx> eta;
};

using Params = std::map<std::string, double>;

struct Scene {
  SurfaceScene surface;
  std::optional<SpinorSpec> spinor;
  Tolerances tol;
  // canonical JSON of the scene after overrides; input of the report hash
  std::string canonical;
};

struct SceneOverrides {
  Params params;
  std::optional<int> grid;  // square grid
  std::map<std::string, double> tolerances;
};

// Replaces every $name in an expression with the parameter value.
std::string substitute_params(const std::string& expr, const Params& params);

Scene parse_scene(const std::string& json_text, const SceneOverrides& ov = {});
Scene load_scene(const std::string& path, const SceneOverrides& ov = {});

// Abstract (g, A, T, f) data files. Nodes are listed in grid order i * nv + j.
struct AbstractFile {
  AbstractData data;
  std::optional<Field<Vec3>> reference;  // the immersion the data came from, if known
  std::string canonical;
};

AbstractFile parse_abstract(const std::string& json_text, const SceneOverrides& ov = {});
AbstractFile load_abstract(const std::string& path, const SceneOverrides& ov = {});
std::string dump_abstract(const AbstractData& data, const Field<Vec3>* reference = nullptr);

// The "model" block of any scene or abstract-data document.
ModelSpace load_model(const std::string& path);

// True when the document declares the abstract-data schema.
bool is_abstract_document(const std::string& json_text);

std::string read_file(const std::string& path);
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace spinframe
