#include "spinframe/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "spinframe/compat.hpp"
#include "spinframe/error.hpp"

namespace spinframe {

using ojson = nlohmann::ordered_json;

namespace {

std::string hash_of(const std::string& canonical) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  return std::string("fnv1a64:") + buf;
}

bool finite_le(double x, double tol) { return std::isfinite(x) && x <= tol; }

double safe_max(double a, double b) { return std::isnan(b) || b > a ? b : a; }

// Interior/edge statistics of a per-node residual; NaN entries count as failing.
CheckResult grid_check(const std::string& name, const Grid2& g, const Field<double>& r, double tol,
                       const std::vector<bool>* skip = nullptr) {
  CheckResult c;
  c.name = name;
  c.tolerance = tol;
  double interior = 0.0, edge = 0.0, sum = 0.0;
  std::size_t used = 0;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t n = g.index(i, j);
      if (skip && (*skip)[n]) {
        ++c.excluded;
        continue;
      }
      double& slot = g.in_edge_band(i, j) ? edge : interior;
      slot = safe_max(slot, r[n]);
      sum += r[n];
      ++used;
    }
  c.max_residual = interior;
  c.edge_residual = edge;
  c.mean_residual = used ? sum / used : 0.0;
  c.pass = used > 0 && finite_le(interior, tol) && finite_le(edge, 2.0 * tol);
  if (used == 0) c.error = "quantity undefined at every node";
  return c;
}

CheckResult scalar_check(const std::string& name, double value, double tol) {
  CheckResult c;
  c.name = name;
  c.max_residual = c.mean_residual = value;
  c.tolerance = tol;
  c.pass = finite_le(value, tol);
  return c;
}

CheckResult failed_check(const std::string& name, double tol, const Error& e) {
  CheckResult c;
  c.name = name;
  c.tolerance = tol;
  c.max_residual = c.mean_residual = std::numeric_limits<double>::infinity();
  c.error = std::string(to_string(e.kind())) + ": " + e.what();
  return c;
}

ojson range_of(const Field<double>& f) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double x : f) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return ojson::array({lo, hi});
}

ojson grid_json(const Field<double>& f) {
  ojson a = ojson::array();
  for (double x : f) a.push_back(std::isfinite(x) ? ojson(x) : ojson(nullptr));
  return a;
}

void add(Report& rep, CheckResult c, const Field<double>* field = nullptr) {
  if (field && rep.emit_grids) rep.grids[c.name] = grid_json(*field);
  rep.checks.push_back(std::move(c));
}

Field<Vec3> positions(const ExtrinsicData& ex) {
  Field<Vec3> F;
  F.reserve(ex.points.size());
  for (const auto& p : ex.points) F.push_back(p.F);
  return F;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Input, "cannot write \"" + path + "\"");
  out << text;
}

void describe_extraction(Report& rep, const ExtrinsicData& ex) {
  const std::size_t n = ex.points.size();
  Field<double> H(n), f(n), T(n), K = ex.intrinsic.K, asym(n);
  for (std::size_t k = 0; k < n; ++k) {
    H[k] = ex.points[k].H;
    f[k] = ex.points[k].f;
    T[k] = ex.points[k].T.norm();
    asym[k] = ex.points[k].asymmetry;
  }
  rep.summary["model"] = {{"kappa", ex.model.kappa()}, {"tau", ex.model.tau()}};
  rep.summary["H"] = range_of(H);
  rep.summary["f"] = range_of(f);
  rep.summary["T_norm"] = range_of(T);
  rep.summary["K"] = range_of(K);
  rep.summary["A_asymmetry_max"] = range_of(asym)[1];
}

Report base_report(const char* command, const std::string& canonical, const Grid2& g, const CommandOptions& opts) {
  Report rep;
  rep.command = command;
  rep.scene_hash = hash_of(canonical);
  rep.grid = g;
  rep.emit_grids = opts.emit_grids;
  return rep;
}

void compat_checks(Report& rep, const CompatEvaluator& ev, double tol) {
  const CompatResiduals r = ev.all();
  const Grid2& g = ev.data().grid;
  const std::pair<const char*, const Field<double>*> named[] = {
      {"compat.gauss", &r.gauss}, {"compat.codazzi", &r.codazzi}, {"compat.unit", &r.unit},
      {"compat.sym", &r.sym},     {"compat.div", &r.div},         {"compat.condT", &r.condT},
      {"compat.condF", &r.condF}};
  for (const auto& [name, f] : named) add(rep, grid_check(name, g, *f, tol), f);
}

void spinor_checks(Report& rep, const AbstractData& data, const IntrinsicGeometry& geo, const SpinorSpec& spec,
                   const Tolerances& tol) {
  const KillingModel km = killing_model(data.model, spec.geometry, spec.eta);
  TransportResult tr;
  try {
    tr = transport_spinor(data, geo, spec.seed, km);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CompatGateFailed && e.kind() != ErrorKind::StepUnstable) throw;
    add(rep, failed_check("transport", tol.get("holonomy"), e));
    return;
  }
  rep.summary["spinor"] = {{"geometry", geometry_name(spec.geometry)},
                           {"eta", ojson::array({km.eta.real(), km.eta.imag()})}};
  add(rep, scalar_check("holonomy", tr.holonomy_defect, tol.get("holonomy")));
  if (spec.geometry != SpinGeometry::ProductEtaIHalf)
    add(rep, scalar_check("norm_drift", tr.norm_drift, tol.get("norm")));

  const SpinEvaluator ev(data, geo, tr.field);
  const Grid2& g = data.grid;
  const std::size_t n = g.size();
  Field<double> kill(n), dirac(n), ricci(n), norm(n), recA(n, 0.0), W(n, 0.0);
  std::vector<bool> zero(n, false), half(n, false);
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t k = g.index(i, j);
      kill[k] = ev.killing_residual(i, j);
      dirac[k] = ev.dirac_residual(i, j);
      ricci[k] = ev.ricci_residual(i, j);
      norm[k] = ev.norm_law_residual(i, j);
      if (ev.vanishes(i, j)) {
        zero[k] = half[k] = true;
        continue;
      }
      recA[k] = ev.recover_A_error(i, j);
      try {
        const SplittingSuite s = ev.splitting_suite(i, j);
        W[k] = std::max({s.trW, s.symW, s.rankW, (s.A_recovered - data.A[k]).norm()});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::HalfSpinorVanishes) throw;
        half[k] = true;
      }
    }
  add(rep, grid_check("killing", g, kill, tol.get("killing")), &kill);
  add(rep, grid_check("dirac", g, dirac, tol.get("dirac")), &dirac);
  add(rep, grid_check("ricci", g, ricci, tol.get("killing")), &ricci);
  add(rep, grid_check("norm_law", g, norm, tol.get("norm")), &norm);
  add(rep, grid_check("recover_A", g, recA, tol.get("recover_A"), &zero), &recA);
  add(rep, grid_check("W", g, W, tol.get("W"), &half), &W);
}

BasePoint base_for(const AbstractData& d, const CommandOptions& opts) {
  if (opts.base_point) {
    const Vec3 p = *opts.base_point;
    if (!d.model.in_chart(p)) throw Error(ErrorKind::ChartExit, "base point is outside the chart domain");
    const Mat3 fr = canonical_frame(d.model, p);
    Mat3 X;  // frame in canonical components; e3 = xi at every point, so (T, f) stay consistent
    if (d.base && d.model.in_chart(d.base->point)) {
      Mat3 old;
      old << d.base->frame.E1, d.base->frame.E2, d.base->frame.nu;
      X = canonical_frame(d.model, d.base->point).inverse() * old;
    } else {
      const double f = std::clamp(d.f[0], -1.0, 1.0), s = std::sqrt(1.0 - f * f);
      const Vec3 nu(-s, 0.0, f), t(f, 0.0, s), m = nu.cross(t);
      const double th = s > 0.0 ? std::atan2(d.T[0][1], d.T[0][0]) : 0.0;
      X << std::cos(th) * t - std::sin(th) * m, std::sin(th) * t + std::cos(th) * m, nu;
    }
    const Mat3 B = fr * X;
    return {p, {B.col(0), B.col(1), B.col(2)}};
  }
  if (!d.base) throw Error(ErrorKind::Input, "no base point given");
  return *d.base;
}

void reconstruct_checks(Report& rep, const AbstractData& d, const IntrinsicGeometry& geo,
                        const Field<Vec3>* reference, const Tolerances& tol, const CommandOptions& opts) {
  ReconstructionResult r;
  try {
    const BasePoint base = base_for(d, opts);
    r = reconstruct_immersion(d, geo, base);
  } catch (const Error& e) {
    const ErrorKind k = e.kind();
    if (k != ErrorKind::CompatGateFailed && k != ErrorKind::ChartExit && k != ErrorKind::FrameDrift) throw;
    add(rep, failed_check("reconstruct", tol.get("roundtrip"), e));
    return;
  }
  add(rep, scalar_check("frame_drift", r.max_drift, tol.get("frame")));
  add(rep, scalar_check("path", r.path_defect, tol.get("roundtrip")));
  add(rep, scalar_check("xi", r.xi_defect, tol.get("roundtrip")));
  if (reference) add(rep, scalar_check("roundtrip", compare_up_to_base_alignment(d.grid, *reference, r.grid, r.F),
                                       tol.get("roundtrip")));
  if (opts.mesh) write_text(*opts.mesh, mesh_csv(r, opts.mesh_frames));
}

}  // namespace

bool Report::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

ojson Report::to_json() const {
  ojson j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["pass"] = pass();
  ojson cs = ojson::array();
  for (const auto& c : checks) {
    ojson o;
    o["name"] = c.name;
    o["max_residual"] = std::isfinite(c.max_residual) ? ojson(c.max_residual) : ojson(nullptr);
    o["mean_residual"] = std::isfinite(c.mean_residual) ? ojson(c.mean_residual) : ojson(nullptr);
    o["tolerance"] = c.tolerance;
    o["pass"] = c.pass;
    if (c.edge_residual) o["edge_residual"] = std::isfinite(*c.edge_residual) ? ojson(*c.edge_residual) : ojson(nullptr);
    if (c.excluded) o["excluded_nodes"] = c.excluded;
    if (!c.error.empty()) o["error"] = c.error;
    cs.push_back(o);
  }
  j["checks"] = cs;
  j["summary"] = summary;
  if (emit_grids) j["grids"] = grids;
  j["provenance"] = {{"scene_hash", scene_hash}, {"grid", {grid.nu, grid.nv}}, {"version", kVersion}};
  return j;
}

std::string Report::body() const { return to_json().dump(2) + "\n"; }

int exit_code(const Report& r) { return r.pass() ? 0 : 1; }

Report cmd_inspect(const Scene& scene, const CommandOptions& opts) {
  Report rep = base_report("inspect", scene.canonical, scene.surface.grid, opts);
  const ExtrinsicData ex = extract(scene.surface);
  describe_extraction(rep, ex);
  Field<double> unit(ex.points.size());
  for (std::size_t k = 0; k < unit.size(); ++k)
    unit[k] = std::abs(ex.points[k].f * ex.points[k].f + ex.points[k].T.squaredNorm() - 1.0);
  add(rep, grid_check("unit", ex.grid, unit, scene.tol.get("compat")), &unit);
  if (opts.emit_abstract) {
    const Field<Vec3> F = positions(ex);
    write_text(*opts.emit_abstract, dump_abstract(abstract_data(ex), &F));
  }
  return rep;
}

Report cmd_check(const Scene& scene, const CommandOptions& opts) {
  Report rep = base_report("check", scene.canonical, scene.surface.grid, opts);
  const ExtrinsicData ex = extract(scene.surface);
  describe_extraction(rep, ex);
  const AbstractData data = abstract_data(ex);
  if (opts.emit_abstract) {
    const Field<Vec3> F = positions(ex);
    write_text(*opts.emit_abstract, dump_abstract(data, &F));
  }
  compat_checks(rep, CompatEvaluator(data, ex.intrinsic), scene.tol.get("compat"));
  if (scene.spinor) spinor_checks(rep, data, ex.intrinsic, *scene.spinor, scene.tol);
  return rep;
}

Report cmd_reconstruct(const Scene& scene, const CommandOptions& opts) {
  Report rep = base_report("reconstruct", scene.canonical, scene.surface.grid, opts);
  const ExtrinsicData ex = extract(scene.surface);
  const AbstractData data = abstract_data(ex);
  const Field<Vec3> F = positions(ex);
  if (opts.emit_abstract) write_text(*opts.emit_abstract, dump_abstract(data, &F));
  reconstruct_checks(rep, data, ex.intrinsic, &F, scene.tol, opts);
  return rep;
}

Report cmd_reconstruct(const AbstractFile& file, const Tolerances& tol, const CommandOptions& opts) {
  Report rep = base_report("reconstruct", file.canonical, file.data.grid, opts);
  const AbstractData& d = file.data;
  const IntrinsicGeometry geo = intrinsic_geometry(d.grid, d.g, d.frame_angle);
  rep.summary["model"] = {{"kappa", d.model.kappa()}, {"tau", d.model.tau()}};
  reconstruct_checks(rep, d, geo, file.reference ? &*file.reference : nullptr, tol, opts);
  return rep;
}

Report cmd_curvature_table(const ModelSpace& m, const Tolerances& tol, const CommandOptions& opts) {
  std::ostringstream canon;
  canon.precision(17);
  canon << "curvature-table " << m.kappa() << " " << m.tau() << " " << opts.samples;
  Report rep = base_report("curvature-table", canon.str(), Grid2{}, opts);
  rep.grid = Grid2{opts.samples, 1, 0.0, 1.0, 0.0, 1.0};
  if (opts.samples < 1) throw Error(ErrorKind::Input, "samples must be positive");

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> coord(-0.8, 0.8);
  std::normal_distribution<double> nd;
  auto point = [&] {
    for (;;) {
      const Vec3 p(coord(rng), coord(rng), 2.0 * coord(rng));
      if (m.in_chart(p)) return p;
    }
  };
  const double t2 = m.tau() * m.tau();
  const double expect[3] = {t2, t2, m.kappa() - 3.0 * t2};
  const int pairs[3][2] = {{2, 3}, {3, 1}, {1, 2}};
  auto fv = [](int i) {
    Vec3 c = Vec3::Zero();
    c[i - 1] = 1.0;
    return AmbientVec{c, Basis::Frame};
  };

  double diag_err = 0.0, chr_err = 0.0, quad_err = 0.0, mean_diag[3] = {0, 0, 0};
  const bool fib = m.kind() == ModelKind::Fibration;
  for (int s = 0; s < opts.samples; ++s) {
    const Vec3 p = point();
    for (int k = 0; k < 3; ++k) {
      const double r = curvature_numeric(m, p, fv(pairs[k][0]), fv(pairs[k][1]), fv(pairs[k][0]), fv(pairs[k][1]));
      mean_diag[k] += r / opts.samples;
      diag_err = safe_max(diag_err, std::abs(r - expect[k]));
    }
    if (fib)
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
          for (int k = 1; k <= 3; ++k)
            chr_err = safe_max(chr_err, std::abs(christoffel_closed(m, i, j, k) - christoffel_numeric(m, p, i, j, k)));
    for (int q = 0; q < 2; ++q) {
      AmbientVec x[4];
      for (auto& v : x) v = {Vec3(nd(rng), nd(rng), nd(rng)), Basis::Frame};
      quad_err = safe_max(quad_err, std::abs(curvature_closed(m, p, x[0], x[1], x[2], x[3]) -
                                              curvature_numeric(m, p, x[0], x[1], x[2], x[3])));
    }
  }
  rep.summary["model"] = {{"kappa", m.kappa()}, {"tau", m.tau()}};
  rep.summary["samples"] = opts.samples;
  rep.summary["expected_diag"] = ojson::array({expect[0], expect[1], expect[2]});
  rep.summary["mean_numeric_diag"] = ojson::array({mean_diag[0], mean_diag[1], mean_diag[2]});
  add(rep, scalar_check("curvature.diag", diag_err, tol.get("curvature")));
  add(rep, scalar_check("curvature.closed_vs_numeric", quad_err, tol.get("curvature")));
  if (fib) add(rep, scalar_check("christoffel", chr_err, tol.get("christoffel")));
  return rep;
}

std::string mesh_csv(const ReconstructionResult& r, bool frames) {
  std::ostringstream os;
  os << (frames ? "u,v,x,y,z,E1x,E1y,E1z,E2x,E2y,E2z,nux,nuy,nuz\n" : "u,v,x,y,z\n");
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, ",%.17g", x);
    os << buf;
  };
  for (int i = 0; i < r.grid.nu; ++i)
    for (int j = 0; j < r.grid.nv; ++j) {
      const std::size_t n = r.grid.index(i, j);
      std::snprintf(buf, sizeof buf, "%.17g", r.grid.u(i));
      os << buf;
      put(r.grid.v(j));
      for (int c = 0; c < 3; ++c) put(r.F[n][c]);
      if (frames)
        for (const Vec3* v : {&r.frames[n].E1, &r.frames[n].E2, &r.frames[n].nu})
          for (int c = 0; c < 3; ++c) put((*v)[c]);
      os << "\n";
    }
  return os.str();
}

}  // namespace spinframe
