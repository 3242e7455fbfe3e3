#include "spinframe/clifford.hpp"

namespace spinframe {

namespace {
const cplx I(0.0, 1.0);
}

SpinOp gamma(const TangentVec2& x) {
  SpinOp m;
  m << 0.0, I * x.a1 + x.a2, I * x.a1 - x.a2, 0.0;
  return m;
}

SpinOp omega_op() {
  SpinOp m;
  m << -I, 0.0, 0.0, I;
  return m;
}

SpinOp omega2_op() {
  SpinOp m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Spinor clifford_mul(const TangentVec2& x, const Spinor& phi) {
  return Spinor((I * x.a1 + x.a2) * phi(1), (I * x.a1 - x.a2) * phi(0));
}

Spinor omega_mul(const Spinor& phi) { return Spinor(-I * phi(0), I * phi(1)); }

Spinor omega2_mul(const Spinor& phi) { return Spinor(phi(0), -phi(1)); }

std::pair<Spinor, Spinor> split(const Spinor& phi) {
  return {Spinor(phi(0), 0.0), Spinor(0.0, phi(1))};
}

Spinor bar(const Spinor& phi) { return omega2_mul(phi); }

cplx herm(const Spinor& phi, const Spinor& psi) {
  return phi(0) * std::conj(psi(0)) + phi(1) * std::conj(psi(1));
}

double re_herm(const Spinor& phi, const Spinor& psi) { return herm(phi, psi).real(); }

double norm2(const Spinor& phi) { return std::norm(phi(0)) + std::norm(phi(1)); }

}  // namespace spinframe
