#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "spinframe/dual.hpp"

namespace spinframe {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class ModelKind { Product, Fibration };

// E(kappa,tau) when tau != 0, M^2(kappa) x R when tau == 0.
class ModelSpace {
 public:
  ModelSpace(double kappa, double tau);

  double kappa() const { return kappa_; }
  double tau() const { return tau_; }
  ModelKind kind() const { return tau_ == 0.0 ? ModelKind::Product : ModelKind::Fibration; }
  double sigma() const;  // kappa / (2 tau)
  double alpha() const;  // 2 tau - kappa / (2 tau)

  bool in_chart(const Vec3& p) const;
  void require_chart(const Vec3& p) const;

 private:
  double kappa_, tau_;
};

inline constexpr double kLambdaMin = 1e-3;

enum class Basis { Chart, Frame };

struct AmbientVec {
  Vec3 c = Vec3::Zero();
  Basis basis = Basis::Chart;
};

template <class S>
using Arr3 = std::array<S, 3>;
template <class S>
using Arr33 = std::array<std::array<S, 3>, 3>;

template <class S>
S lambda_of(const ModelSpace& m, const S& x, const S& y) {
  return 1.0 / (1.0 + (m.kappa() / 4.0) * (x * x + y * y));
}

// g = lambda^2 (dx^2 + dy^2) + theta^2, theta = tau*lambda*(y dx - x dy) + dz.
template <class S>
Arr33<S> metric_t(const ModelSpace& m, const Arr3<S>& p) {
  const S lam = lambda_of(m, p[0], p[1]);
  const Arr3<S> theta{m.tau() * lam * p[1], -m.tau() * lam * p[0], S(1.0)};
  Arr33<S> g;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) g[a][b] = theta[a] * theta[b];
  g[0][0] += lam * lam;
  g[1][1] += lam * lam;
  return g;
}

// frame[i][c]: chart component c of the canonical e_{i+1}.
template <class S>
Arr33<S> frame_t(const ModelSpace& m, const Arr3<S>& p) {
  using std::cos;
  using std::sin;
  const S inv = 1.0 / lambda_of(m, p[0], p[1]);
  Arr33<S> e;
  if (m.kind() == ModelKind::Product) {
    e[0] = {inv, S(0.0), S(0.0)};
    e[1] = {S(0.0), inv, S(0.0)};
  } else {
    const double t = m.tau();
    const S c = cos(m.sigma() * p[2]);
    const S s = sin(m.sigma() * p[2]);
    e[0] = {inv * c, inv * s, t * (p[0] * s - p[1] * c)};
    e[1] = {-inv * s, inv * c, t * (p[0] * c + p[1] * s)};
  }
  e[2] = {S(0.0), S(0.0), S(1.0)};
  return e;
}

Mat3 metric_at(const ModelSpace& m, const Vec3& p);
// Columns are e1, e2, e3 in chart components.
Mat3 canonical_frame(const ModelSpace& m, const Vec3& p);
AmbientVec vertical_field(const ModelSpace& m, const Vec3& p);

AmbientVec to_chart(const ModelSpace& m, const Vec3& p, const AmbientVec& x);
AmbientVec to_frame(const ModelSpace& m, const Vec3& p, const AmbientVec& x);
double inner(const ModelSpace& m, const Vec3& p, const AmbientVec& x, const AmbientVec& y);
AmbientVec vector_product(const ModelSpace& m, const Vec3& p, const AmbientVec& x, const AmbientVec& y);

// Chart Christoffel symbols G[c][a][b] = Gamma^c_{ab}.
using ChartGamma = std::array<Arr33<double>, 3>;
ChartGamma chart_christoffel(const ModelSpace& m, const Vec3& p);             // exact, forward mode
ChartGamma chart_christoffel_numeric(const ModelSpace& m, const Vec3& p, double h = 1e-4);
// Gamma(x, y)^c = Gamma^c_{ab} x^a y^b.
Vec3 contract(const ChartGamma& g, const Vec3& x, const Vec3& y);

// Frame indices are 1-based: <nabla_{e_i} e_j, e_k>.
double christoffel_closed(const ModelSpace& m, int i, int j, int k);
double christoffel_numeric(const ModelSpace& m, const Vec3& p, int i, int j, int k, double h = 1e-4);

// [e_i, e_j] in chart components, from exact derivatives of the frame.
Vec3 frame_bracket(const ModelSpace& m, const Vec3& p, int i, int j);

// R(X,Y,Z,W) = <R(X,Y)W, Z>, so R(X,Y,X,Y) is sectional curvature. Arguments are
// components in an orthonormal basis in which the vertical field has components xi.
double curvature_orthonormal(double kappa, double tau, const Vec3& x, const Vec3& y, const Vec3& z,
                             const Vec3& w, const Vec3& xi);
double curvature_closed(const ModelSpace& m, const Vec3& p, const AmbientVec& x, const AmbientVec& y,
                        const AmbientVec& z, const AmbientVec& w);
double curvature_numeric(const ModelSpace& m, const Vec3& p, const AmbientVec& x, const AmbientVec& y,
                         const AmbientVec& z, const AmbientVec& w, double h_inner = 1e-4,
                         double h_outer = 2e-3);

}  // namespace spinframe
