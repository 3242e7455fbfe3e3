#include "spinframe/ambient.hpp"

#include <sstream>

#include "spinframe/error.hpp"

namespace spinframe {

ModelSpace::ModelSpace(double kappa, double tau) : kappa_(kappa), tau_(tau) {
  if (!std::isfinite(kappa) || !std::isfinite(tau))
    throw Error(ErrorKind::InvalidModel, "kappa and tau must be finite");
  if (kappa == 0.0 && tau == 0.0)
    throw Error(ErrorKind::InvalidModel, "(kappa, tau) = (0, 0) is not a model with 4-dimensional isometry group");
}

double ModelSpace::sigma() const {
  if (kind() != ModelKind::Fibration) throw Error(ErrorKind::InvalidModel, "sigma needs tau != 0");
  return kappa_ / (2.0 * tau_);
}

double ModelSpace::alpha() const {
  if (kind() != ModelKind::Fibration) throw Error(ErrorKind::InvalidModel, "alpha needs tau != 0");
  return 2.0 * tau_ - kappa_ / (2.0 * tau_);
}

bool ModelSpace::in_chart(const Vec3& p) const {
  if (!p.allFinite()) return false;
  const double r2 = p.x() * p.x() + p.y() * p.y();
  if (kappa_ > 0.0) return 1.0 + 0.25 * kappa_ * r2 <= 1.0 / kLambdaMin;
  if (kappa_ < 0.0) return r2 < (4.0 / -kappa_) * (1.0 - kLambdaMin);
  return true;
}

void ModelSpace::require_chart(const Vec3& p) const {
  if (in_chart(p)) return;
  std::ostringstream os;
  os << "point (" << p.x() << ", " << p.y() << ", " << p.z() << ") is outside the chart domain";
  throw Error(ErrorKind::ChartDomain, os.str());
}

namespace {

Arr3<double> arr(const Vec3& p) { return {p.x(), p.y(), p.z()}; }

Mat3 to_mat(const Arr33<double>& a) {
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = a[r][c];
  return m;
}

// Gamma^c_{ab} from g and its partials dg[k][a][b] = d_k g_ab.
ChartGamma christoffel_from(const Mat3& g, const std::array<Arr33<double>, 3>& dg) {
  const Mat3 gi = g.inverse();
  ChartGamma G{};
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double s = 0.0;
        for (int d = 0; d < 3; ++d) s += gi(c, d) * (dg[a][d][b] + dg[b][d][a] - dg[d][a][b]);
        G[c][a][b] = 0.5 * s;
      }
  return G;
}

std::array<Mat3, 3> frame_partials(const ModelSpace& m, const Vec3& p) {
  Arr3<Dual<3>> q{Dual<3>::variable(p.x(), 0), Dual<3>::variable(p.y(), 1), Dual<3>::variable(p.z(), 2)};
  const auto e = frame_t(m, q);
  // out[k](c, i) = d_k e_i^c
  std::array<Mat3, 3> out;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 3; ++c) out[k](c, i) = e[i][c].d[k];
  return out;
}

void check_basis(const AmbientVec& a, const AmbientVec& b) {
  if (a.basis != b.basis) throw Error(ErrorKind::BasisMismatch, "vectors carry different basis tags");
}

}  // namespace

Mat3 metric_at(const ModelSpace& m, const Vec3& p) {
  m.require_chart(p);
  return to_mat(metric_t(m, arr(p)));
}

Mat3 canonical_frame(const ModelSpace& m, const Vec3& p) {
  m.require_chart(p);
  return to_mat(frame_t(m, arr(p))).transpose();
}

AmbientVec vertical_field(const ModelSpace&, const Vec3&) { return {Vec3(0.0, 0.0, 1.0), Basis::Chart}; }

AmbientVec to_chart(const ModelSpace& m, const Vec3& p, const AmbientVec& x) {
  if (x.basis == Basis::Chart) return x;
  return {canonical_frame(m, p) * x.c, Basis::Chart};
}

AmbientVec to_frame(const ModelSpace& m, const Vec3& p, const AmbientVec& x) {
  if (x.basis == Basis::Frame) return x;
  return {canonical_frame(m, p).lu().solve(x.c), Basis::Frame};
}

double inner(const ModelSpace& m, const Vec3& p, const AmbientVec& x, const AmbientVec& y) {
  check_basis(x, y);
  if (x.basis == Basis::Frame) return x.c.dot(y.c);
  return x.c.dot(metric_at(m, p) * y.c);
}

AmbientVec vector_product(const ModelSpace& m, const Vec3& p, const AmbientVec& x, const AmbientVec& y) {
  check_basis(x, y);
  if (x.basis == Basis::Frame) return {x.c.cross(y.c), Basis::Frame};
  const AmbientVec r{to_frame(m, p, x).c.cross(to_frame(m, p, y).c), Basis::Frame};
  return to_chart(m, p, r);
}

ChartGamma chart_christoffel(const ModelSpace& m, const Vec3& p) {
  m.require_chart(p);
  Arr3<Dual<3>> q{Dual<3>::variable(p.x(), 0), Dual<3>::variable(p.y(), 1), Dual<3>::variable(p.z(), 2)};
  const auto g = metric_t(m, q);
  Mat3 g0;
  std::array<Arr33<double>, 3> dg;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      g0(a, b) = g[a][b].v;
      for (int k = 0; k < 3; ++k) dg[k][a][b] = g[a][b].d[k];
    }
  return christoffel_from(g0, dg);
}

ChartGamma chart_christoffel_numeric(const ModelSpace& m, const Vec3& p, double h) {
  m.require_chart(p);
  std::array<Arr33<double>, 3> dg;
  for (int k = 0; k < 3; ++k) {
    Vec3 pp = p, pm = p;
    pp[k] += h;
    pm[k] -= h;
    m.require_chart(pp);
    m.require_chart(pm);
    const auto gp = metric_t(m, arr(pp));
    const auto gm = metric_t(m, arr(pm));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) dg[k][a][b] = (gp[a][b] - gm[a][b]) / (2.0 * h);
  }
  return christoffel_from(to_mat(metric_t(m, arr(p))), dg);
}

Vec3 contract(const ChartGamma& g, const Vec3& x, const Vec3& y) {
  Vec3 r = Vec3::Zero();
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) r[c] += g[c][a][b] * x[a] * y[b];
  return r;
}

double christoffel_closed(const ModelSpace& m, int i, int j, int k) {
  if (m.kind() != ModelKind::Fibration)
    throw Error(ErrorKind::InvalidModel, "closed-form Christoffel symbols need tau != 0");
  if (i < 1 || i > 3 || j < 1 || j > 3 || k < 1 || k > 3)
    throw Error(ErrorKind::Input, "frame indices run from 1 to 3");
  const double t = m.tau();
  const int key = 100 * i + 10 * j + k;
  switch (key) {
    case 123:
    case 231: return t;
    case 213:
    case 132: return -t;
    case 321: return t - m.sigma();
    case 312: return -(t - m.sigma());
    default: return 0.0;
  }
}

double christoffel_numeric(const ModelSpace& m, const Vec3& p, int i, int j, int k, double h) {
  if (i < 1 || i > 3 || j < 1 || j > 3 || k < 1 || k > 3)
    throw Error(ErrorKind::Input, "frame indices run from 1 to 3");
  const ChartGamma G = chart_christoffel_numeric(m, p, h);
  const Mat3 e = canonical_frame(m, p);
  // d_a e_j by central differences.
  Vec3 dir = Vec3::Zero();
  const Vec3 ei = e.col(i - 1);
  for (int a = 0; a < 3; ++a) {
    Vec3 pp = p, pm = p;
    pp[a] += h;
    pm[a] -= h;
    const Vec3 dj = (canonical_frame(m, pp).col(j - 1) - canonical_frame(m, pm).col(j - 1)) / (2.0 * h);
    dir += ei[a] * dj;
  }
  const Vec3 nabla = dir + contract(G, ei, e.col(j - 1));
  return nabla.dot(metric_at(m, p) * e.col(k - 1));
}

Vec3 frame_bracket(const ModelSpace& m, const Vec3& p, int i, int j) {
  const Mat3 e = canonical_frame(m, p);
  const auto de = frame_partials(m, p);
  Vec3 r = Vec3::Zero();
  for (int a = 0; a < 3; ++a) r += e(a, i - 1) * de[a].col(j - 1) - e(a, j - 1) * de[a].col(i - 1);
  return r;
}

double curvature_orthonormal(double kappa, double tau, const Vec3& x, const Vec3& y, const Vec3& z,
                             const Vec3& w, const Vec3& xi) {
  const double r0 = x.dot(z) * y.dot(w) - y.dot(z) * x.dot(w);
  const double yx = y.dot(xi), zx = z.dot(xi), xx = x.dot(xi), wx = w.dot(xi);
  const double r1 = yx * zx * x.dot(w) + y.dot(z) * xx * wx - x.dot(z) * yx * wx - xx * zx * y.dot(w);
  return (kappa - 3.0 * tau * tau) * r0 + (kappa - 4.0 * tau * tau) * r1;
}

double curvature_closed(const ModelSpace& m, const Vec3& p, const AmbientVec& x, const AmbientVec& y,
                        const AmbientVec& z, const AmbientVec& w) {
  check_basis(x, y);
  check_basis(x, z);
  check_basis(x, w);
  return curvature_orthonormal(m.kappa(), m.tau(), to_frame(m, p, x).c, to_frame(m, p, y).c,
                               to_frame(m, p, z).c, to_frame(m, p, w).c, Vec3(0.0, 0.0, 1.0));
}

double curvature_numeric(const ModelSpace& m, const Vec3& p, const AmbientVec& x, const AmbientVec& y,
                         const AmbientVec& z, const AmbientVec& w, double h_inner, double h_outer) {
  check_basis(x, y);
  check_basis(x, z);
  check_basis(x, w);
  const Vec3 X = to_chart(m, p, x).c, Y = to_chart(m, p, y).c, Z = to_chart(m, p, z).c,
             W = to_chart(m, p, w).c;
  const ChartGamma G = chart_christoffel_numeric(m, p, h_inner);
  // dG[k][d][a][b] = d_k Gamma^d_{ab}, fourth-order central stencil.
  std::array<ChartGamma, 3> dG;
  for (int k = 0; k < 3; ++k) {
    std::array<ChartGamma, 4> s;
    const double off[4] = {-2.0, -1.0, 1.0, 2.0};
    for (int q = 0; q < 4; ++q) {
      Vec3 pq = p;
      pq[k] += off[q] * h_outer;
      s[q] = chart_christoffel_numeric(m, pq, h_inner);
    }
    for (int d = 0; d < 3; ++d)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          dG[k][d][a][b] = (s[0][d][a][b] - 8.0 * s[1][d][a][b] + 8.0 * s[2][d][a][b] - s[3][d][a][b]) /
                           (12.0 * h_outer);
  }
  // R(d_a, d_b) d_c = R^d_{cab} d_d
  Vec3 rw = Vec3::Zero();
  for (int d = 0; d < 3; ++d)
    for (int c = 0; c < 3; ++c)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double r = dG[a][d][b][c] - dG[b][d][a][c];
          for (int e = 0; e < 3; ++e) r += G[d][a][e] * G[e][b][c] - G[d][b][e] * G[e][a][c];
          rw[d] += r * X[a] * Y[b] * W[c];
        }
  return Z.dot(metric_at(m, p) * rw);
}

}  // namespace spinframe
