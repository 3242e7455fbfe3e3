#pragma once

#include "spinframe/compat.hpp"
#include "spinframe/spinfield.hpp"

namespace spinframe {

struct GateOptions {
  double gate = 1e-3;
  bool enforce = true;  // fault studies integrate non-compatible data on purpose
};

struct TransportResult {
  SpinorField field;       // u-then-v path from node (0, 0)
  Field<Spinor> other_path;  // v-then-u path
  Spinor seed;
  double holonomy_defect = 0.0;
  double norm_drift = 0.0;  // max ||phi|^2 - |seed|^2|
  GateResult gate;
};

// Coefficients of d_a phi = L_a phi at node n; a = 0 for u, 1 for v.
SpinOp transport_generator(const KillingModel& km, const AbstractData& data, const IntrinsicGeometry& geo,
                           std::size_t n, int a);

TransportResult transport_spinor(const AbstractData& data, const IntrinsicGeometry& geo, const Spinor& seed,
                                 const KillingModel& km, const GateOptions& opts = {});

struct ReconstructionResult {
  Grid2 grid;
  Field<Vec3> F;
  Field<TangentFrame> frames;
  double max_drift = 0.0;     // orthonormality defect before each projection
  double path_defect = 0.0;   // max distance between the u-then-v and v-then-u immersions
  double xi_defect = 0.0;     // max |xi - (dF(T) + f nu)|
  GateResult gate;
};

inline constexpr double kFrameDriftLimit = 1e-3;

ReconstructionResult reconstruct_immersion(const AbstractData& data, const IntrinsicGeometry& geo,
                                           const BasePoint& base, const GateOptions& opts = {});

double compare_up_to_base_alignment(const Grid2& g1, const Field<Vec3>& F1, const Grid2& g2,
                                    const Field<Vec3>& F2);

}  // namespace spinframe
