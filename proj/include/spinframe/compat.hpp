#pragma once

#include "spinframe/surface.hpp"

namespace spinframe {

struct StructuralResiduals {
  double unit = 0.0, sym = 0.0, div = 0.0;
};

struct CondResiduals {
  double condT = 0.0, condF = 0.0;
};

struct CompatResiduals {
  Field<double> gauss, codazzi, unit, sym, div, condT, condF;
};

// Residuals of the Gauss, Codazzi, and (T, f) compatibility equations. Vector-valued
// defects are measured with frame-invariant norms (Frobenius over {E1, E2}).
class CompatEvaluator {
 public:
  explicit CompatEvaluator(const AbstractData& data);
  CompatEvaluator(const AbstractData& data, IntrinsicGeometry geometry);

  double gauss_residual(int i, int j) const;
  double codazzi_residual(int i, int j) const;
  StructuralResiduals structural_residuals(int i, int j) const;
  CondResiduals cond_residuals(int i, int j) const;
  CompatResiduals all() const;

  // Ambient curvature R(E1,E2,E1,E2) and the Codazzi target <R(E1,E2)E_k, nu>.
  double ambient_sectional(int i, int j) const;
  Vec2 codazzi_target(int i, int j) const;
  // Column k is nabla_{E_k} T.
  Mat2 nabla_T(int i, int j) const;
  // (E1 f, E2 f)
  Vec2 df(int i, int j) const;
  Mat2 nabla_A(int i, int j, int k) const;

  const AbstractData& data() const { return data_; }
  const IntrinsicGeometry& geometry() const { return geo_; }

 private:
  void prepare();
  template <class T>
  T frame_derivative(const Field<T>& du, const Field<T>& dv, std::size_t n, int k) const;

  AbstractData data_;
  IntrinsicGeometry geo_;
  Field<Vec2> Tu_, Tv_;
  Field<double> fu_, fv_;
  Field<Mat2> Au_, Av_;
};

// Worst compat residual over the grid, for gating integration.
struct GateResult {
  bool pass = true;
  double worst = 0.0;
  std::string name;
  int i = 0, j = 0;
};
GateResult compat_gate(const CompatEvaluator& eval, double gate);

}  // namespace spinframe
