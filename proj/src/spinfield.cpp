#include "spinframe/spinfield.hpp"

#include <algorithm>
#include <cmath>

#include "spinframe/error.hpp"

namespace spinframe {

namespace {

const cplx I(0.0, 1.0);

TangentVec2 basis(int k) { return k == 0 ? TangentVec2{1, 0} : TangentVec2{0, 1}; }

double ip(const TangentVec2& x, const Vec2& y) { return x.a1 * y[0] + x.a2 * y[1]; }

}  // namespace

SpinGeometry parse_geometry(const std::string& name) {
  if (name == "product-eta-half") return SpinGeometry::ProductEtaHalf;
  if (name == "product-eta-ihalf") return SpinGeometry::ProductEtaIHalf;
  if (name == "fibration") return SpinGeometry::Fibration;
  throw Error(ErrorKind::Input, "unknown spinor geometry \"" + name + "\"");
}

const char* geometry_name(SpinGeometry g) {
  switch (g) {
    case SpinGeometry::ProductEtaHalf: return "product-eta-half";
    case SpinGeometry::ProductEtaIHalf: return "product-eta-ihalf";
    case SpinGeometry::Fibration: return "fibration";
  }
  return "?";
}

KillingModel killing_model(const ModelSpace& m, SpinGeometry g, std::optional<cplx> eta) {
  KillingModel km;
  km.geometry = g;
  km.kappa = m.kappa();
  switch (g) {
    case SpinGeometry::Fibration:
      if (m.kind() != ModelKind::Fibration)
        throw Error(ErrorKind::InvalidModel, "fibration spinors need tau != 0");
      km.tau = m.tau();
      km.alpha = m.alpha();
      break;
    case SpinGeometry::ProductEtaHalf:
      if (m.kind() != ModelKind::Product || m.kappa() <= 0.0)
        throw Error(ErrorKind::InvalidModel, "product-eta-half needs tau = 0 and kappa > 0");
      km.eta = eta.value_or(cplx(0.5 * std::sqrt(m.kappa()), 0.0));
      break;
    case SpinGeometry::ProductEtaIHalf:
      if (m.kind() != ModelKind::Product || m.kappa() >= 0.0)
        throw Error(ErrorKind::InvalidModel, "product-eta-ihalf needs tau = 0 and kappa < 0");
      km.eta = eta.value_or(cplx(0.0, 0.5 * std::sqrt(-m.kappa())));
      break;
  }
  return km;
}

LocalData local_data(const AbstractData& d, std::size_t n) { return {d.A[n], d.T[n], d.f[n], d.H[n]}; }

SpinOp killing_operator0(const KillingModel& km, const LocalData& ld, const TangentVec2& x) {
  const SpinOp gx = gamma(x), gT = gamma(tv(ld.T));
  const double xt = ip(x, ld.T);
  if (km.geometry == SpinGeometry::Fibration) {
    const SpinOp w = omega_op();
    return -0.5 * km.tau * gx * w + 0.5 * km.alpha * xt * gT * w - 0.5 * km.alpha * ld.f * xt * w;
  }
  return km.eta * (gx * gT + ld.f * gx + xt * SpinOp::Identity());
}

SpinOp killing_operator(const KillingModel& km, const LocalData& ld, const TangentVec2& x) {
  return killing_operator0(km, ld, x) - 0.5 * gamma(tv(ld.A * v2(x)));
}

Spinor killing_rhs_bar_form(const KillingModel& km, const LocalData& ld, const TangentVec2& x, const Spinor& phi) {
  const Spinor pb = bar(phi);
  const double xt = ip(x, ld.T);
  return (I * km.tau / 2.0) * clifford_mul(x, pb) - (I * km.alpha / 2.0) * xt * clifford_mul(tv(ld.T), pb) +
         (I * km.alpha / 2.0) * ld.f * xt * pb - 0.5 * clifford_mul(tv(ld.A * v2(x)), phi);
}

Spinor dirac_rhs(const KillingModel& km, const LocalData& ld, const Spinor& phi) {
  if (km.geometry == SpinGeometry::Fibration) {
    const Spinor wphi = omega_mul(phi);
    return ld.H * phi + (km.tau - 0.5 * km.alpha * ld.T.squaredNorm()) * wphi -
           0.5 * km.alpha * ld.f * clifford_mul(tv(ld.T), wphi);
  }
  return (ld.H - 2.0 * km.eta * ld.f) * phi - km.eta * clifford_mul(tv(ld.T), phi);
}

Spinor dirac_from_nabla(const Spinor nabla[2]) {
  return clifford_mul(basis(0), nabla[0]) + clifford_mul(basis(1), nabla[1]);
}

Mat2 b_tensor(const KillingModel& km, const LocalData& ld, const Spinor& phi) {
  const double n2 = norm2(phi);
  if (!(n2 > 0.0)) throw Error(ErrorKind::SpinorVanishes, "B is undefined where the spinor vanishes");
  Spinor m0[2];
  for (int k = 0; k < 2; ++k) m0[k] = killing_operator0(km, ld, basis(k)) * phi;
  Mat2 B;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      B(a, b) = -re_herm(clifford_mul(basis(a), m0[b]) + clifford_mul(basis(b), m0[a]), phi) / n2;
  return B;
}

Mat2 energy_momentum_from(const Spinor nabla[2], const Spinor& phi) {
  const double n2 = norm2(phi);
  if (!(n2 > 0.0)) throw Error(ErrorKind::SpinorVanishes, "Q is undefined where the spinor vanishes");
  Mat2 Q;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      Q(a, b) = 0.5 * re_herm(clifford_mul(basis(a), nabla[b]) + clifford_mul(basis(b), nabla[a]), phi) / n2;
  return Q;
}

SplittingSuite splitting_from(const KillingModel& km, const LocalData& ld, const Spinor& phi,
                              const Spinor nabla[2], double eps_abs) {
  const auto [pp, pm] = split(phi);
  const double np = norm2(pp), nm = norm2(pm);
  if (std::sqrt(np) <= eps_abs) throw Error(ErrorKind::HalfSpinorVanishes, "positive half-spinor vanishes");
  if (std::sqrt(nm) <= eps_abs) throw Error(ErrorKind::HalfSpinorVanishes, "negative half-spinor vanishes");
  SplittingSuite s;
  for (int a = 0; a < 2; ++a) {
    const auto [np_a, nm_a] = split(nabla[a]);
    const auto [mp_a, mm_a] = split(Spinor(killing_operator0(km, ld, basis(a)) * phi));
    for (int b = 0; b < 2; ++b) {
      const Spinor yp = clifford_mul(basis(b), pp), ym = clifford_mul(basis(b), pm);
      s.Qp(a, b) = re_herm(np_a, ym);
      s.Qm(a, b) = re_herm(nm_a, yp);
      s.Bp(a, b) = -re_herm(mp_a, ym);
      s.Bm(a, b) = -re_herm(mm_a, yp);
    }
  }
  s.Ap = s.Qp + s.Bp;
  s.Am = s.Qm + s.Bm;
  s.W = s.Ap / nm - s.Am / np;
  s.A_recovered = -(s.Ap / nm + s.Am / np);
  s.trW = std::abs(s.W.trace());
  s.symW = std::abs(s.W(0, 1) - s.W(1, 0));
  for (int a = 0; a < 2; ++a) {
    const TangentVec2 wx{s.W(a, 0), s.W(a, 1)};
    s.rankW = std::max(s.rankW, std::abs(re_herm(clifford_mul(wx, pm), pp)));
  }
  s.trace_defect_p = s.Qp.trace() + s.Bp.trace() + ld.H * nm;
  s.trace_defect_m = s.Qm.trace() + s.Bm.trace() + ld.H * np;
  return s;
}

SpinEvaluator::SpinEvaluator(const AbstractData& data, const IntrinsicGeometry& geo, SpinorField field)
    : data_(data), geo_(geo), field_(std::move(field)) {
  const Grid2& g = data_.grid;
  if (!field_.grid.same_shape(g) || field_.phi.size() != g.size())
    throw Error(ErrorKind::GridMismatch, "spinor field and data live on different grids");
  du_ = diff_u(g, field_.phi);
  dv_ = diff_v(g, field_.phi);
  Field<double> n2(g.size());
  double mx = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    n2[k] = norm2(field_.phi[k]);
    mx = std::max(mx, std::sqrt(n2[k]));
  }
  eps_abs_ = kEpsZero * mx;
  n2u_ = diff_u(g, n2);
  n2v_ = diff_v(g, n2);
  // coordinate covariant derivatives, then their second covariant derivatives
  Field<Spinor> Nu(g.size()), Nv(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Spinor w = omega_mul(field_.phi[k]);
    Nu[k] = du_[k] + 0.5 * geo_.w[k][0] * w;
    Nv[k] = dv_[k] + 0.5 * geo_.w[k][1] * w;
  }
  const Field<Spinor> dNv_u = diff_u(g, Nv), dNu_v = diff_v(g, Nu);
  ricci_uv_.resize(g.size());
  ricci_vu_.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    ricci_uv_[k] = dNv_u[k] + 0.5 * geo_.w[k][0] * omega_mul(Nv[k]);
    ricci_vu_[k] = dNu_v[k] + 0.5 * geo_.w[k][1] * omega_mul(Nu[k]);
  }
}

Spinor SpinEvaluator::nabla(int i, int j, int k) const {
  const std::size_t n = data_.grid.index(i, j);
  const Mat2& C = geo_.C[n];
  return C(k, 0) * du_[n] + C(k, 1) * dv_[n] + 0.5 * geo_.omega[n][k] * omega_mul(field_.phi[n]);
}

Spinor SpinEvaluator::spin_cov_deriv(int i, int j, const TangentVec2& x) const {
  return x.a1 * nabla(i, j, 0) + x.a2 * nabla(i, j, 1);
}

double SpinEvaluator::killing_residual(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  const LocalData ld = local(i, j);
  double s = 0.0;
  for (int k = 0; k < 2; ++k)
    s += (nabla(i, j, k) - killing_operator(field_.km, ld, basis(k)) * field_.phi[n]).squaredNorm();
  return std::sqrt(s);
}

Spinor SpinEvaluator::dirac(int i, int j) const {
  const Spinor nab[2] = {nabla(i, j, 0), nabla(i, j, 1)};
  return dirac_from_nabla(nab);
}

double SpinEvaluator::dirac_residual(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  return (dirac(i, j) - dirac_rhs(field_.km, local(i, j), field_.phi[n])).norm();
}

bool SpinEvaluator::vanishes(int i, int j) const {
  return field_.phi[data_.grid.index(i, j)].norm() <= eps_abs_;
}

Mat2 SpinEvaluator::energy_momentum(int i, int j) const {
  if (vanishes(i, j)) throw Error(ErrorKind::SpinorVanishes, "spinor vanishes at node");
  const Spinor nab[2] = {nabla(i, j, 0), nabla(i, j, 1)};
  return energy_momentum_from(nab, field_.phi[data_.grid.index(i, j)]);
}

Mat2 SpinEvaluator::b_tensor_at(int i, int j) const {
  if (vanishes(i, j)) throw Error(ErrorKind::SpinorVanishes, "spinor vanishes at node");
  return b_tensor(field_.km, local(i, j), field_.phi[data_.grid.index(i, j)]);
}

Mat2 SpinEvaluator::recover_A(int i, int j) const { return 2.0 * energy_momentum(i, j) + b_tensor_at(i, j); }

double SpinEvaluator::recover_A_error(int i, int j) const {
  return (recover_A(i, j) - data_.A[data_.grid.index(i, j)]).norm();
}

double SpinEvaluator::norm_law_residual(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  const Mat2& C = geo_.C[n];
  const Spinor& phi = field_.phi[n];
  double s = 0.0;
  for (int k = 0; k < 2; ++k) {
    double d = C(k, 0) * n2u_[n] + C(k, 1) * n2v_[n];
    if (field_.km.geometry == SpinGeometry::ProductEtaIHalf) {
      const LocalData ld = local(i, j);
      const Spinor x = clifford_mul(basis(k), clifford_mul(tv(ld.T), phi)) + ld.f * clifford_mul(basis(k), phi);
      d -= 2.0 * std::abs(field_.km.eta) * re_herm(I * x, phi);
    }
    s += d * d;
  }
  return std::sqrt(s);
}

double SpinEvaluator::ricci_residual(int i, int j) const {
  const std::size_t n = data_.grid.index(i, j);
  const Spinor comm = (ricci_uv_[n] - ricci_vu_[n]) / geo_.sqrt_det[n];
  return (comm + 0.5 * geo_.K[n] * omega_mul(field_.phi[n])).norm();
}

SplittingSuite SpinEvaluator::splitting_suite(int i, int j) const {
  const Spinor nab[2] = {nabla(i, j, 0), nabla(i, j, 1)};
  return splitting_from(field_.km, local(i, j), field_.phi[data_.grid.index(i, j)], nab, eps_abs_);
}

}  // namespace spinframe
