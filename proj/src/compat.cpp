#include "spinframe/compat.hpp"

#include <cmath>

namespace spinframe {

CompatEvaluator::CompatEvaluator(const AbstractData& data)
    : data_(data), geo_(intrinsic_geometry(data.grid, data.g, data.frame_angle)) {
  prepare();
}

CompatEvaluator::CompatEvaluator(const AbstractData& data, IntrinsicGeometry geometry)
    : data_(data), geo_(std::move(geometry)) {
  prepare();
}

void CompatEvaluator::prepare() {
  data_.validate();
  const Grid2& g = data_.grid;
  Tu_ = diff_u(g, data_.T);
  Tv_ = diff_v(g, data_.T);
  fu_ = diff_u(g, data_.f);
  fv_ = diff_v(g, data_.f);
  Au_ = diff_u(g, data_.A);
  Av_ = diff_v(g, data_.A);
}

template <class T>
T CompatEvaluator::frame_derivative(const Field<T>& du, const Field<T>& dv, std::size_t n, int k) const {
  return du[n] * geo_.C[n](k, 0) + dv[n] * geo_.C[n](k, 1);
}

Mat2 CompatEvaluator::nabla_T(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  const Mat2 J = J_matrix();
  Mat2 out;
  for (int k = 0; k < 2; ++k)
    out.col(k) = frame_derivative(Tu_, Tv_, n, k) + geo_.omega[n][k] * (J * data_.T[n]);
  return out;
}

Vec2 CompatEvaluator::df(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  return {frame_derivative(fu_, fv_, n, 0), frame_derivative(fu_, fv_, n, 1)};
}

Mat2 CompatEvaluator::nabla_A(int i, int j, int k) const {
  const std::size_t n = data_.grid.index(i, j);
  const Mat2 J = J_matrix();
  const Mat2& A = data_.A[n];
  const Mat2 dA = frame_derivative(Au_, Av_, n, k);
  return dA + geo_.omega[n][k] * (J * A - A * J);
}

double CompatEvaluator::ambient_sectional(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  const Vec3 xi(data_.T[n][0], data_.T[n][1], data_.f[n]);
  const Vec3 e1(1, 0, 0), e2(0, 1, 0);
  return curvature_orthonormal(data_.model.kappa(), data_.model.tau(), e1, e2, e1, e2, xi);
}

Vec2 CompatEvaluator::codazzi_target(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  const Vec3 xi(data_.T[n][0], data_.T[n][1], data_.f[n]);
  const Vec3 e1(1, 0, 0), e2(0, 1, 0), nu(0, 0, 1);
  const double k = data_.model.kappa(), t = data_.model.tau();
  return {curvature_orthonormal(k, t, e1, e2, nu, e1, xi), curvature_orthonormal(k, t, e1, e2, nu, e2, xi)};
}

double CompatEvaluator::gauss_residual(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  return std::abs(geo_.K[n] - data_.A[n].determinant() - ambient_sectional(i, j));
}

double CompatEvaluator::codazzi_residual(int i, int j) const {
  const Vec2 dA = nabla_A(i, j, 0).col(1) - nabla_A(i, j, 1).col(0);
  return (dA - codazzi_target(i, j)).norm();
}

StructuralResiduals CompatEvaluator::structural_residuals(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  const Mat2 nT = nabla_T(i, j);
  const double f = data_.f[n], tau = data_.model.tau();
  StructuralResiduals r;
  r.unit = std::abs(f * f + data_.T[n].squaredNorm() - 1.0);
  // <E1, J E2> = -1
  r.sym = std::abs(nT(1, 0) - nT(0, 1) + 2.0 * tau * f);
  r.div = std::abs(2.0 * data_.H[n] * f - nT.trace());
  return r;
}

CondResiduals CompatEvaluator::cond_residuals(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  const Mat2 J = J_matrix();
  const double f = data_.f[n], tau = data_.model.tau();
  const Mat2 S = data_.A[n] - tau * J;  // X -> AX - tau JX
  const Mat2 nT = nabla_T(i, j);
  const Vec2 dfv = df(i, j);
  CondResiduals r;
  r.condT = (nT - f * S).norm();
  r.condF = (dfv + S.transpose() * data_.T[n]).norm();
  return r;
}

CompatResiduals CompatEvaluator::all() const {
  const Grid2& g = data_.grid;
  CompatResiduals r;
  for (auto* f : {&r.gauss, &r.codazzi, &r.unit, &r.sym, &r.div, &r.condT, &r.condF}) f->resize(g.size());
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t n = g.index(i, j);
      r.gauss[n] = gauss_residual(i, j);
      r.codazzi[n] = codazzi_residual(i, j);
      const StructuralResiduals s = structural_residuals(i, j);
      r.unit[n] = s.unit;
      r.sym[n] = s.sym;
      r.div[n] = s.div;
      const CondResiduals c = cond_residuals(i, j);
      r.condT[n] = c.condT;
      r.condF[n] = c.condF;
    }
  return r;
}

GateResult compat_gate(const CompatEvaluator& eval, double gate) {
  const CompatResiduals r = eval.all();
  const Grid2& g = eval.data().grid;
  GateResult out;
  const std::pair<const char*, const Field<double>*> named[] = {
      {"gauss", &r.gauss}, {"codazzi", &r.codazzi}, {"unit", &r.unit}, {"sym", &r.sym},
      {"div", &r.div},     {"condT", &r.condT},     {"condF", &r.condF}};
  for (const auto& [name, field] : named)
    for (int i = 0; i < g.nu; ++i)
      for (int j = 0; j < g.nv; ++j) {
        double x = (*field)[g.index(i, j)];
        if (std::isnan(x)) x = INFINITY;
        if (x > out.worst || out.name.empty()) {
          out.worst = x;
          out.name = name;
          out.i = i;
          out.j = j;
        }
      }
  out.pass = out.worst <= gate;
  return out;
}

}  // namespace spinframe
