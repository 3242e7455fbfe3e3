#pragma once

#include <array>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "spinframe/ambient.hpp"
#include "spinframe/clifford.hpp"
#include "spinframe/expr.hpp"
#include "spinframe/grid.hpp"

namespace spinframe {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline TangentVec2 tv(const Vec2& x) { return {x[0], x[1]}; }
inline Vec2 v2(const TangentVec2& x) { return {x.a1, x.a2}; }
// Matrix of J in an oriented orthonormal frame.
inline Mat2 J_matrix() { return (Mat2() << 0.0, -1.0, 1.0, 0.0).finished(); }

struct SurfaceScene {
  ModelSpace model{1.0, 0.0};
  std::array<Expr, 3> F;
  Grid2 grid;
  int orientation = 1;
  // Constant rotation applied to the Gram-Schmidt frame.
  double frame_angle = 0.0;
};

// Frame coefficients C(i, a) = E_i^a in coordinates (u, v), for the Gram-Schmidt
// frame starting at d/du and rotated by angle.
Mat2 frame_coefficients(const Mat2& g, double angle);

struct PointExtrinsic {
  Vec3 F, Fu, Fv;
  Vec3 E1, E2, nu;  // chart components
  Mat2 g;           // induced metric in (u, v)
  Mat2 A;           // A(j, i) = <A E_i, E_j>, symmetrized
  double asymmetry = 0.0;
  double H = 0.0;
  Vec2 T;
  double f = 0.0;
  Vec2 w_exact;  // omega12(d/du), omega12(d/dv) from exact derivatives of the frame
};

struct TangentFrame {
  Vec3 E1, E2, nu;
};

TangentFrame tangent_frame(const SurfaceScene& scene, double u, double v);
PointExtrinsic extract_point(const SurfaceScene& scene, double u, double v);
std::pair<Mat2, double> shape_operator(const SurfaceScene& scene, double u, double v);
std::pair<TangentVec2, double> vertical_split(const SurfaceScene& scene, double u, double v);
// <nabla_{d_a} d_b, nu>; an independent route to A.
Mat2 second_fundamental_form(const SurfaceScene& scene, double u, double v);

// Intrinsic geometry of (g_ab) on a grid, by finite differences.
struct IntrinsicGeometry {
  Field<Mat2> C;     // frame coefficients E_i^a
  Field<Mat2> Cinv;  // Cinv(a, i) = c_a^i with d_a = c_a^i E_i
  Field<double> sqrt_det;
  Field<Vec2> w;      // omega12(d/du), omega12(d/dv)
  Field<Vec2> omega;  // omega12(E1), omega12(E2)
  Field<double> K;
};

IntrinsicGeometry intrinsic_geometry(const Grid2& grid, const Field<Mat2>& g, double frame_angle);
// omega12 with a constant added to omega12(E1) after K is known; used for fault tests.
void perturb_connection(IntrinsicGeometry& geo, double delta);

struct ExtrinsicData {
  ModelSpace model{1.0, 0.0};
  Grid2 grid;
  int orientation = 1;
  double frame_angle = 0.0;
  Field<PointExtrinsic> points;
  IntrinsicGeometry intrinsic;
};

ExtrinsicData extract(const SurfaceScene& scene);

struct IntrinsicConnection {
  Vec2 omega;  // omega12(E1), omega12(E2)
  double K;
};
IntrinsicConnection intrinsic_connection(const ExtrinsicData& data, int i, int j);

struct BasePoint {
  Vec3 point;
  TangentFrame frame;
};

// (g, A, T, f) on a grid plus the model; the input of compat and integrate.
struct AbstractData {
  ModelSpace model{1.0, 0.0};
  Grid2 grid;
  double frame_angle = 0.0;
  Field<Mat2> g;
  Field<Mat2> A;
  Field<Vec2> T;
  Field<double> f;
  Field<double> H;  // 1/2 tr A unless overridden
  std::optional<BasePoint> base;
  int orientation = 1;

  void validate() const;
  void recompute_H();
};

AbstractData abstract_data(const ExtrinsicData& data);

}  // namespace spinframe
