#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace spinframe {

using cplx = std::complex<double>;
using Spinor = Eigen::Vector2cd;
// Linear operator on spinors, e.g. Clifford multiplication by a vector.
using SpinOp = Eigen::Matrix2cd;

// Components in the oriented orthonormal tangent frame {E1, E2} of a grid point.
struct TangentVec2 {
  double a1 = 0.0, a2 = 0.0;

  TangentVec2 operator+(const TangentVec2& o) const { return {a1 + o.a1, a2 + o.a2}; }
  TangentVec2 operator-(const TangentVec2& o) const { return {a1 - o.a1, a2 - o.a2}; }
  TangentVec2 operator*(double s) const { return {s * a1, s * a2}; }
  double norm2() const { return a1 * a1 + a2 * a2; }
};

inline double dot(const TangentVec2& x, const TangentVec2& y) { return x.a1 * y.a1 + x.a2 * y.a2; }
// Rotation by +pi/2 in the oriented frame.
inline TangentVec2 rotate_J(const TangentVec2& x) { return {-x.a2, x.a1}; }

// Reference representation: gamma(e1) = [[0,i],[i,0]], gamma(e2) = [[0,1],[-1,0]].
SpinOp gamma(const TangentVec2& x);
SpinOp omega_op();   // e1.e2 = diag(-i, i)
SpinOp omega2_op();  // i*omega = diag(1, -1)

Spinor clifford_mul(const TangentVec2& x, const Spinor& phi);
Spinor omega_mul(const Spinor& phi);
Spinor omega2_mul(const Spinor& phi);
std::pair<Spinor, Spinor> split(const Spinor& phi);
Spinor bar(const Spinor& phi);

// Linear in the first slot, conjugate-linear in the second.
cplx herm(const Spinor& phi, const Spinor& psi);
double re_herm(const Spinor& phi, const Spinor& psi);
double norm2(const Spinor& phi);

}  // namespace spinframe
