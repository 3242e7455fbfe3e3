#include "spinframe/surface.hpp"

#include <cmath>
#include <sstream>

#include "spinframe/error.hpp"

namespace spinframe {

namespace {

using D = Dual<2>;

template <class S>
Arr33<S> inverse3(const Arr33<S>& m) {
  Arr33<S> c;
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) {
      const int r1 = (r + 1) % 3, r2 = (r + 2) % 3, k1 = (k + 1) % 3, k2 = (k + 2) % 3;
      c[k][r] = m[r1][k1] * m[r2][k2] - m[r1][k2] * m[r2][k1];  // transposed cofactor
    }
  const S det = m[0][0] * c[0][0] + m[0][1] * c[1][0] + m[0][2] * c[2][0];
  for (auto& row : c)
    for (auto& x : row) x = x / det;
  return c;
}

template <class S>
Arr3<S> mul(const Arr33<S>& m, const Arr3<S>& x) {
  Arr3<S> r{S(0.0), S(0.0), S(0.0)};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r[a] += m[a][b] * x[b];
  return r;
}

template <class S>
S ip(const Arr33<S>& g, const Arr3<S>& x, const Arr3<S>& y) {
  S s(0.0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s += x[a] * g[a][b] * y[b];
  return s;
}

template <class S>
Arr3<S> lin(const S& a, const Arr3<S>& x, const S& b, const Arr3<S>& y) {
  return {a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2]};
}

Vec3 val(const Arr3<D>& x) { return {x[0].v, x[1].v, x[2].v}; }
Vec3 der(const Arr3<D>& x, int k) { return {x[0].d[k], x[1].d[k], x[2].d[k]}; }

std::string where(double u, double v) {
  std::ostringstream os;
  os << " at (u, v) = (" << u << ", " << v << ")";
  return os.str();
}

struct JetFrame {
  Arr3<D> P, Pu, Pv, E1, E2, nu;
  Mat2 g;
};

JetFrame jet_frame(const SurfaceScene& scene, double u, double v) {
  JetFrame jf;
  for (int k = 0; k < 3; ++k) {
    const Jet2 j = eval_jet2(scene.F[k], u, v);
    jf.P[k] = D(j.value);
    jf.P[k].d = {j.du, j.dv};
    jf.Pu[k] = D(j.du);
    jf.Pu[k].d = {j.duu, j.duv};
    jf.Pv[k] = D(j.dv);
    jf.Pv[k].d = {j.duv, j.dvv};
  }
  const ModelSpace& m = scene.model;
  const Vec3 p = val(jf.P);
  if (!m.in_chart(p)) {
    std::ostringstream os;
    os << "surface point (" << p.x() << ", " << p.y() << ", " << p.z() << ") leaves the chart domain" << where(u, v);
    throw Error(ErrorKind::ChartDomain, os.str());
  }
  const auto G = metric_t(m, jf.P);
  const D g11 = ip(G, jf.Pu, jf.Pu), g12 = ip(G, jf.Pu, jf.Pv), g22 = ip(G, jf.Pv, jf.Pv);
  jf.g << g11.v, g12.v, g12.v, g22.v;
  if (!(g11.v * g22.v - g12.v * g12.v >= 1e-12))
    throw Error(ErrorKind::ImmersionDegenerate, "induced metric is degenerate" + where(u, v));
  const D one(1.0);
  Arr3<D> e1 = lin(one / sqrt(g11), jf.Pu, D(0.0), jf.Pu);
  Arr3<D> y = lin(one, jf.Pv, -ip(G, jf.Pv, e1), e1);
  Arr3<D> e2 = lin(one / sqrt(ip(G, y, y)), y, D(0.0), y);
  const double c = std::cos(scene.frame_angle), s = std::sin(scene.frame_angle);
  jf.E1 = lin(D(c), e1, D(s), e2);
  jf.E2 = lin(D(-s), e1, D(c), e2);

  // nu = orientation * E1 ^ E2, computed in the canonical frame.
  const auto fr = frame_t(m, jf.P);
  Arr33<D> M;
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) M[a][i] = fr[i][a];
  const auto Mi = inverse3(M);
  const Arr3<D> x1 = mul(Mi, jf.E1), x2 = mul(Mi, jf.E2);
  const double o = scene.orientation;
  const Arr3<D> n{o * (x1[1] * x2[2] - x1[2] * x2[1]), o * (x1[2] * x2[0] - x1[0] * x2[2]),
                  o * (x1[0] * x2[1] - x1[1] * x2[0])};
  jf.nu = mul(M, n);
  return jf;
}

}  // namespace

Mat2 frame_coefficients(const Mat2& g, double angle) {
  const double s11 = std::sqrt(g(0, 0));
  const double sd = std::sqrt(g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1));
  Mat2 c0;
  c0 << 1.0 / s11, 0.0, -g(0, 1) / (s11 * sd), g(0, 0) / (s11 * sd);
  Mat2 r;
  r << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
  return r * c0;
}

TangentFrame tangent_frame(const SurfaceScene& scene, double u, double v) {
  const JetFrame jf = jet_frame(scene, u, v);
  return {val(jf.E1), val(jf.E2), val(jf.nu)};
}

PointExtrinsic extract_point(const SurfaceScene& scene, double u, double v) {
  const JetFrame jf = jet_frame(scene, u, v);
  const ModelSpace& m = scene.model;
  PointExtrinsic pt;
  pt.F = val(jf.P);
  pt.Fu = val(jf.Pu);
  pt.Fv = val(jf.Pv);
  pt.E1 = val(jf.E1);
  pt.E2 = val(jf.E2);
  pt.nu = val(jf.nu);
  pt.g = jf.g;
  const Mat3 G = metric_at(m, pt.F);
  const ChartGamma gam = chart_christoffel(m, pt.F);
  const Vec3 Fa[2] = {pt.Fu, pt.Fv};
  const Mat2 C = frame_coefficients(pt.g, scene.frame_angle);
  Vec3 dnu[2], dE1[2];
  for (int a = 0; a < 2; ++a) {
    dnu[a] = der(jf.nu, a) + contract(gam, Fa[a], pt.nu);
    dE1[a] = der(jf.E1, a) + contract(gam, Fa[a], pt.E1);
    pt.w_exact[a] = dE1[a].dot(G * pt.E2);
  }
  const Vec3 E[2] = {pt.E1, pt.E2};
  Mat2 A;
  for (int i = 0; i < 2; ++i) {
    const Vec3 dn = C(i, 0) * dnu[0] + C(i, 1) * dnu[1];
    for (int j = 0; j < 2; ++j) A(j, i) = -dn.dot(G * E[j]);
  }
  pt.asymmetry = std::abs(A(0, 1) - A(1, 0));
  pt.A = 0.5 * (A + A.transpose());
  pt.H = 0.5 * pt.A.trace();
  const Vec3 xi(0.0, 0.0, 1.0);
  pt.T = Vec2(pt.E1.dot(G * xi), pt.E2.dot(G * xi));
  pt.f = pt.nu.dot(G * xi);
  return pt;
}

std::pair<Mat2, double> shape_operator(const SurfaceScene& scene, double u, double v) {
  const PointExtrinsic p = extract_point(scene, u, v);
  return {p.A, p.H};
}

std::pair<TangentVec2, double> vertical_split(const SurfaceScene& scene, double u, double v) {
  const PointExtrinsic p = extract_point(scene, u, v);
  return {tv(p.T), p.f};
}

Mat2 second_fundamental_form(const SurfaceScene& scene, double u, double v) {
  Vec3 P, Pa[2], Pab[2][2];
  for (int k = 0; k < 3; ++k) {
    const Jet2 j = eval_jet2(scene.F[k], u, v);
    P[k] = j.value;
    Pa[0][k] = j.du;
    Pa[1][k] = j.dv;
    Pab[0][0][k] = j.duu;
    Pab[0][1][k] = Pab[1][0][k] = j.duv;
    Pab[1][1][k] = j.dvv;
  }
  const TangentFrame fr = tangent_frame(scene, u, v);
  const Mat3 G = metric_at(scene.model, P);
  const ChartGamma gam = chart_christoffel(scene.model, P);
  Mat2 II;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) II(a, b) = (Pab[a][b] + contract(gam, Pa[a], Pa[b])).dot(G * fr.nu);
  return II;
}

IntrinsicGeometry intrinsic_geometry(const Grid2& grid, const Field<Mat2>& g, double frame_angle) {
  if (g.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "metric field does not match the grid");
  const std::size_t n = grid.size();
  IntrinsicGeometry geo;
  geo.C.resize(n);
  geo.Cinv.resize(n);
  geo.sqrt_det.resize(n);
  geo.w.resize(n);
  geo.omega.resize(n);
  geo.K.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double det = g[k].determinant();
    if (!(g[k](0, 0) > 0.0) || !(det >= 1e-12))
      throw Error(ErrorKind::ImmersionDegenerate, "metric is not positive definite at node " + std::to_string(k));
    geo.C[k] = frame_coefficients(g[k], frame_angle);
    geo.Cinv[k] = geo.C[k].inverse();
    geo.sqrt_det[k] = std::sqrt(det);
  }
  const Field<Mat2> gu = diff_u(grid, g), gv = diff_v(grid, g);
  const Field<Mat2> Cu = diff_u(grid, geo.C), Cv = diff_v(grid, geo.C);
  Field<double> wu(n), wv(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Mat2 gi = g[k].inverse();
    const Mat2* dg[2] = {&gu[k], &gv[k]};
    // Gamma^c_ab
    double gam[2][2][2];
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double s = 0.0;
          for (int d = 0; d < 2; ++d) s += gi(c, d) * ((*dg[a])(d, b) + (*dg[b])(d, a) - (*dg[d])(a, b));
          gam[c][a][b] = 0.5 * s;
        }
    const Mat2* dC[2] = {&Cu[k], &Cv[k]};
    const Mat2& C = geo.C[k];
    for (int a = 0; a < 2; ++a) {
      Vec2 nab;
      for (int c = 0; c < 2; ++c) {
        nab[c] = (*dC[a])(0, c);
        for (int b = 0; b < 2; ++b) nab[c] += gam[c][a][b] * C(0, b);
      }
      geo.w[k][a] = nab.dot(g[k] * C.row(1).transpose());
    }
    wu[k] = geo.w[k][0];
    wv[k] = geo.w[k][1];
    geo.omega[k] = C * geo.w[k];
  }
  const Field<double> dwv_du = diff_u(grid, wv), dwu_dv = diff_v(grid, wu);
  for (std::size_t k = 0; k < n; ++k) geo.K[k] = -(dwv_du[k] - dwu_dv[k]) / geo.sqrt_det[k];
  return geo;
}

void perturb_connection(IntrinsicGeometry& geo, double delta) {
  for (std::size_t k = 0; k < geo.w.size(); ++k) {
    geo.omega[k][0] += delta;
    geo.w[k] = geo.Cinv[k] * geo.omega[k];
  }
}

ExtrinsicData extract(const SurfaceScene& scene) {
  scene.grid.validate();
  if (scene.orientation != 1 && scene.orientation != -1)
    throw Error(ErrorKind::Input, "orientation must be +1 or -1");
  ExtrinsicData data;
  data.model = scene.model;
  data.grid = scene.grid;
  data.orientation = scene.orientation;
  data.frame_angle = scene.frame_angle;
  data.points.resize(scene.grid.size());
  Field<Mat2> g(scene.grid.size());
  for (int i = 0; i < scene.grid.nu; ++i)
    for (int j = 0; j < scene.grid.nv; ++j) {
      const std::size_t k = scene.grid.index(i, j);
      data.points[k] = extract_point(scene, scene.grid.u(i), scene.grid.v(j));
      g[k] = data.points[k].g;
    }
  data.intrinsic = intrinsic_geometry(scene.grid, g, scene.frame_angle);
  return data;
}

IntrinsicConnection intrinsic_connection(const ExtrinsicData& data, int i, int j) {
  const std::size_t k = data.grid.index(i, j);
  return {data.intrinsic.omega[k], data.intrinsic.K[k]};
}

void AbstractData::validate() const {
  grid.validate();
  const std::size_t n = grid.size();
  if (g.size() != n || A.size() != n || T.size() != n || f.size() != n || H.size() != n)
    throw Error(ErrorKind::GridMismatch, "abstract data fields do not match the grid");
  for (std::size_t k = 0; k < n; ++k) {
    if (!g[k].allFinite() || !A[k].allFinite() || !T[k].allFinite() || !std::isfinite(f[k]))
      throw Error(ErrorKind::Input, "non-finite abstract data at node " + std::to_string(k));
    if (!(g[k](0, 0) > 0.0) || !(g[k].determinant() > 0.0) || std::abs(g[k](0, 1) - g[k](1, 0)) > 1e-12)
      throw Error(ErrorKind::Input, "metric is not symmetric positive definite at node " + std::to_string(k));
  }
}

void AbstractData::recompute_H() {
  H.resize(A.size());
  for (std::size_t k = 0; k < A.size(); ++k) H[k] = 0.5 * A[k].trace();
}

AbstractData abstract_data(const ExtrinsicData& data) {
  AbstractData a;
  a.model = data.model;
  a.grid = data.grid;
  a.frame_angle = data.frame_angle;
  a.orientation = data.orientation;
  const std::size_t n = data.points.size();
  a.g.resize(n);
  a.A.resize(n);
  a.T.resize(n);
  a.f.resize(n);
  a.H.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const PointExtrinsic& p = data.points[k];
    a.g[k] = p.g;
    a.A[k] = p.A;
    a.T[k] = p.T;
    a.f[k] = p.f;
    a.H[k] = p.H;
  }
  const PointExtrinsic& b = data.points[0];
  a.base = BasePoint{b.F, {b.E1, b.E2, b.nu}};
  return a;
}

}  // namespace spinframe
