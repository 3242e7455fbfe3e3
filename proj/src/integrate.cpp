#include "spinframe/integrate.hpp"

#include <cmath>
#include <sstream>

#include "spinframe/error.hpp"

namespace spinframe {

namespace {

void apply_gate(const AbstractData& data, const IntrinsicGeometry& geo, const GateOptions& opts, GateResult& out) {
  if (!opts.enforce) return;
  const CompatEvaluator eval(data, geo);
  out = compat_gate(eval, opts.gate);
  if (!out.pass) {
    std::ostringstream os;
    os << "compatibility gate failed: " << out.name << " residual " << out.worst << " at node (" << out.i << ", "
       << out.j << ") exceeds " << opts.gate;
    throw Error(ErrorKind::CompatGateFailed, os.str());
  }
}

Spinor rk4(const SpinOp& l0, const SpinOp& lm, const SpinOp& l1, double h, const Spinor& y) {
  const Spinor k1 = l0 * y;
  const Spinor k2 = lm * (y + 0.5 * h * k1);
  const Spinor k3 = lm * (y + 0.5 * h * k2);
  const Spinor k4 = l1 * (y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrates along one grid line; node(k) maps the line index to the grid index.
template <class NodeFn>
void transport_line(const Field<SpinOp>& L, int len, double h, NodeFn node, Field<Spinor>& phi, double seed_norm) {
  for (int k = 0; k + 1 < len; ++k) {
    const SpinOp lm = midpoint_line<SpinOp>(len, k, [&](int q) { return L[node(q)]; });
    const Spinor next = rk4(L[node(k)], lm, L[node(k + 1)], h, phi[node(k)]);
    const double ratio = next.norm() / seed_norm;
    if (!(ratio <= 10.0) || !(ratio >= 0.1)) {
      std::ostringstream os;
      os << "spinor norm changed by a factor " << ratio << " during transport";
      throw Error(ErrorKind::StepUnstable, os.str());
    }
    phi[node(k + 1)] = next;
  }
}

}  // namespace

SpinOp transport_generator(const KillingModel& km, const AbstractData& data, const IntrinsicGeometry& geo,
                           std::size_t n, int a) {
  const LocalData ld = local_data(data, n);
  SpinOp L = -0.5 * geo.w[n][a] * omega_op();
  for (int i = 0; i < 2; ++i) {
    const TangentVec2 e = i == 0 ? TangentVec2{1, 0} : TangentVec2{0, 1};
    L += geo.Cinv[n](a, i) * killing_operator(km, ld, e);
  }
  return L;
}

TransportResult transport_spinor(const AbstractData& data, const IntrinsicGeometry& geo, const Spinor& seed,
                                 const KillingModel& km, const GateOptions& opts) {
  if (!(seed.norm() > 0.0)) throw Error(ErrorKind::Input, "seed spinor must be non-zero");
  data.validate();
  TransportResult res;
  apply_gate(data, geo, opts, res.gate);
  const Grid2& g = data.grid;
  Field<SpinOp> Lu(g.size()), Lv(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    Lu[n] = transport_generator(km, data, geo, n, 0);
    Lv[n] = transport_generator(km, data, geo, n, 1);
  }
  const double s = seed.norm();
  Field<Spinor> p1(g.size(), Spinor::Zero()), p2(g.size(), Spinor::Zero());
  p1[0] = seed;
  p2[0] = seed;
  transport_line(Lu, g.nu, g.du(), [&](int k) { return g.index(k, 0); }, p1, s);
  for (int i = 0; i < g.nu; ++i) transport_line(Lv, g.nv, g.dv(), [&](int k) { return g.index(i, k); }, p1, s);
  transport_line(Lv, g.nv, g.dv(), [&](int k) { return g.index(0, k); }, p2, s);
  for (int j = 0; j < g.nv; ++j) transport_line(Lu, g.nu, g.du(), [&](int k) { return g.index(k, j); }, p2, s);

  res.seed = seed;
  res.field = SpinorField{g, p1, km};
  res.other_path = p2;
  const double s2 = seed.squaredNorm();
  for (std::size_t n = 0; n < g.size(); ++n) {
    res.holonomy_defect = std::max(res.holonomy_defect, (p1[n] - p2[n]).norm());
    res.norm_drift = std::max(res.norm_drift, std::abs(p1[n].squaredNorm() - s2));
  }
  return res;
}

namespace {

using State = Eigen::Matrix<double, 12, 1>;

struct Coeffs {
  Vec2 c;  // d_a = c^i E_i
  double w;
  Mat2 A;
};

Vec3 seg(const State& s, int k) { return s.segment<3>(3 * k); }

State derivative(const ModelSpace& m, const State& s, const Coeffs& k) {
  const Vec3 F = seg(s, 0), E1 = seg(s, 1), E2 = seg(s, 2), nu = seg(s, 3);
  if (!m.in_chart(F)) throw Error(ErrorKind::ChartExit, "reconstructed immersion leaves the chart domain");
  const ChartGamma gam = chart_christoffel(m, F);
  const Vec3 Fa = k.c[0] * E1 + k.c[1] * E2;
  const Vec2 al = k.A * k.c;  // <A d_a, E_j>
  State d;
  d.segment<3>(0) = Fa;
  d.segment<3>(3) = k.w * E2 + al[0] * nu - contract(gam, Fa, E1);
  d.segment<3>(6) = -k.w * E1 + al[1] * nu - contract(gam, Fa, E2);
  d.segment<3>(9) = -(al[0] * E1 + al[1] * E2) - contract(gam, Fa, nu);
  return d;
}

// Nearest g-orthonormal frame with the same handedness; returns the defect before projection.
double project_frame(const ModelSpace& m, State& s) {
  const Vec3 F = seg(s, 0);
  if (!m.in_chart(F)) throw Error(ErrorKind::ChartExit, "reconstructed immersion leaves the chart domain");
  const Mat3 fr = canonical_frame(m, F);
  Mat3 chart;
  chart << seg(s, 1), seg(s, 2), seg(s, 3);
  const Mat3 X = fr.lu().solve(chart);
  const double drift = (X.transpose() * X - Mat3::Identity()).norm();
  Eigen::JacobiSVD<Mat3> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 Q = fr * (svd.matrixU() * svd.matrixV().transpose());
  s.segment<3>(3) = Q.col(0);
  s.segment<3>(6) = Q.col(1);
  s.segment<3>(9) = Q.col(2);
  return drift;
}

struct Reconstructor {
  const ModelSpace& m;
  const AbstractData& data;
  const IntrinsicGeometry& geo;
  double max_drift = 0.0;

  Coeffs at(std::size_t n, int a) const { return {geo.Cinv[n].row(a).transpose(), geo.w[n][a], data.A[n]}; }

  template <class NodeFn>
  void line(int len, double h, int a, NodeFn node, Field<State>& st) {
    for (int k = 0; k + 1 < len; ++k) {
      const Coeffs c0 = at(node(k), a), c1 = at(node(k + 1), a);
      Coeffs cm;
      cm.c = midpoint_line<Vec2>(len, k, [&](int q) { return Vec2(geo.Cinv[node(q)].row(a).transpose()); });
      cm.w = midpoint_line<double>(len, k, [&](int q) { return geo.w[node(q)][a]; });
      cm.A = midpoint_line<Mat2>(len, k, [&](int q) { return data.A[node(q)]; });
      const State& y = st[node(k)];
      const State k1 = derivative(m, y, c0);
      const State k2 = derivative(m, y + 0.5 * h * k1, cm);
      const State k3 = derivative(m, y + 0.5 * h * k2, cm);
      const State k4 = derivative(m, y + h * k3, c1);
      State next = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double drift = project_frame(m, next);
      max_drift = std::max(max_drift, drift);
      if (drift > kFrameDriftLimit) {
        std::ostringstream os;
        os << "frame orthonormality drift " << drift << " exceeds " << kFrameDriftLimit;
        throw Error(ErrorKind::FrameDrift, os.str());
      }
      st[node(k + 1)] = next;
    }
  }
};

}  // namespace

ReconstructionResult reconstruct_immersion(const AbstractData& data, const IntrinsicGeometry& geo,
                                           const BasePoint& base, const GateOptions& opts) {
  data.validate();
  const ModelSpace& m = data.model;
  if (!m.in_chart(base.point)) throw Error(ErrorKind::ChartExit, "base point is outside the chart domain");
  ReconstructionResult res;
  {
    const Mat3 G = metric_at(m, base.point);
    Mat3 B;
    B << base.frame.E1, base.frame.E2, base.frame.nu;
    if ((B.transpose() * G * B - Mat3::Identity()).norm() > 1e-8)
      throw Error(ErrorKind::Input, "base frame is not orthonormal");
  }
  apply_gate(data, geo, opts, res.gate);
  const Grid2& g = data.grid;
  State s0;
  s0 << base.point, base.frame.E1, base.frame.E2, base.frame.nu;
  Field<State> p1(g.size(), State::Zero()), p2(g.size(), State::Zero());
  p1[0] = s0;
  p2[0] = s0;
  Reconstructor r{m, data, geo};
  r.line(g.nu, g.du(), 0, [&](int k) { return g.index(k, 0); }, p1);
  for (int i = 0; i < g.nu; ++i) r.line(g.nv, g.dv(), 1, [&](int k) { return g.index(i, k); }, p1);
  r.line(g.nv, g.dv(), 1, [&](int k) { return g.index(0, k); }, p2);
  for (int j = 0; j < g.nv; ++j) r.line(g.nu, g.du(), 0, [&](int k) { return g.index(k, j); }, p2);

  res.grid = g;
  res.max_drift = r.max_drift;
  res.F.resize(g.size());
  res.frames.resize(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    const State& s = p1[n];
    res.F[n] = seg(s, 0);
    res.frames[n] = {seg(s, 1), seg(s, 2), seg(s, 3)};
    res.path_defect = std::max(res.path_defect, (seg(s, 0) - seg(p2[n], 0)).norm());
    const Vec3 v = data.T[n][0] * seg(s, 1) + data.T[n][1] * seg(s, 2) + data.f[n] * seg(s, 3);
    const Vec3 d = canonical_frame(m, res.F[n]).lu().solve(v) - Vec3(0.0, 0.0, 1.0);
    res.xi_defect = std::max(res.xi_defect, d.norm());
  }
  return res;
}

double compare_up_to_base_alignment(const Grid2& g1, const Field<Vec3>& F1, const Grid2& g2,
                                    const Field<Vec3>& F2) {
  if (!g1.same_shape(g2) || F1.size() != F2.size() || F1.size() != g1.size())
    throw Error(ErrorKind::GridMismatch, "immersions live on different grids");
  double worst = 0.0;
  for (std::size_t n = 0; n < F1.size(); ++n) worst = std::max(worst, (F1[n] - F2[n]).norm());
  return worst;
}

}  // namespace spinframe
