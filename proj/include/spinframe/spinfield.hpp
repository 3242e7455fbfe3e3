#pragma once

#include <optional>
#include <string>

#include "spinframe/clifford.hpp"
#include "spinframe/surface.hpp"

namespace spinframe {

enum class SpinGeometry { ProductEtaHalf, ProductEtaIHalf, Fibration };

SpinGeometry parse_geometry(const std::string& name);
const char* geometry_name(SpinGeometry g);

// Constants of the generalized Killing equation for one geometry.
struct KillingModel {
  SpinGeometry geometry = SpinGeometry::ProductEtaHalf;
  cplx eta = 0.5;  // product geometries
  double tau = 0.0, alpha = 0.0;  // fibration
  double kappa = 1.0;
};

// eta = sqrt(kappa)/2 or i sqrt(-kappa)/2 unless overridden.
KillingModel killing_model(const ModelSpace& m, SpinGeometry g, std::optional<cplx> eta = std::nullopt);

struct LocalData {
  Mat2 A = Mat2::Zero();
  Vec2 T = Vec2::Zero();
  double f = 0.0;
  double H = 0.0;
};

LocalData local_data(const AbstractData& d, std::size_t n);

// nabla_X phi = M(X) phi on solutions. M0 omits the -1/2 A X term.
SpinOp killing_operator(const KillingModel& km, const LocalData& ld, const TangentVec2& x);
SpinOp killing_operator0(const KillingModel& km, const LocalData& ld, const TangentVec2& x);
// The fibration right-hand side written with bar(phi), evaluated literally.
Spinor killing_rhs_bar_form(const KillingModel& km, const LocalData& ld, const TangentVec2& x, const Spinor& phi);

Spinor dirac_rhs(const KillingModel& km, const LocalData& ld, const Spinor& phi);
// Contracts nabla_{E_k} phi with Clifford multiplication.
Spinor dirac_from_nabla(const Spinor nabla[2]);

// B(X,Y) = -Re<X.M0(Y)phi + Y.M0(X)phi, phi>/|phi|^2, so that A = 2Q + B.
Mat2 b_tensor(const KillingModel& km, const LocalData& ld, const Spinor& phi);
Mat2 energy_momentum_from(const Spinor nabla[2], const Spinor& phi);

struct SplittingSuite {
  Mat2 Qp, Qm, Bp, Bm, Ap, Am, W;
  Mat2 A_recovered;
  double trW = 0.0, symW = 0.0, rankW = 0.0;
  // tr Q+- + tr B+- + H |phi-+|^2
  double trace_defect_p = 0.0, trace_defect_m = 0.0;
};

SplittingSuite splitting_from(const KillingModel& km, const LocalData& ld, const Spinor& phi,
                              const Spinor nabla[2], double eps_abs);

struct SpinorField {
  Grid2 grid;
  Field<Spinor> phi;
  KillingModel km;
};

class SpinEvaluator {
 public:
  SpinEvaluator(const AbstractData& data, const IntrinsicGeometry& geo, SpinorField field);

  // nabla_{E_k} phi
  Spinor nabla(int i, int j, int k) const;
  Spinor spin_cov_deriv(int i, int j, const TangentVec2& x) const;
  double killing_residual(int i, int j) const;
  Spinor dirac(int i, int j) const;
  double dirac_residual(int i, int j) const;
  Mat2 energy_momentum(int i, int j) const;
  Mat2 b_tensor_at(int i, int j) const;
  Mat2 recover_A(int i, int j) const;
  double recover_A_error(int i, int j) const;
  double norm_law_residual(int i, int j) const;
  double ricci_residual(int i, int j) const;
  SplittingSuite splitting_suite(int i, int j) const;

  bool vanishes(int i, int j) const;
  double eps_abs() const { return eps_abs_; }
  const SpinorField& field() const { return field_; }
  LocalData local(int i, int j) const { return local_data(data_, data_.grid.index(i, j)); }

 private:
  const AbstractData& data_;
  const IntrinsicGeometry& geo_;
  SpinorField field_;
  Field<Spinor> du_, dv_;
  Field<double> n2u_, n2v_;
  Field<Spinor> ricci_uv_, ricci_vu_;
  double eps_abs_ = 0.0;
};

inline constexpr double kEpsZero = 1e-10;

}  // namespace spinframe
