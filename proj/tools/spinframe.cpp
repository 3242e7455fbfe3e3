#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spinframe/commands.hpp"
#include "spinframe/error.hpp"

using namespace spinframe;

namespace {

constexpr int kInputError = 2;

std::pair<std::string, double> name_value(const std::string& s, const char* flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Input, std::string(flag) + " expects name=value");
  const std::string v = s.substr(eq + 1);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw Error(ErrorKind::Input, std::string(flag) + ": \"" + v + "\" is not a number");
  return {s.substr(0, eq), x};
}

Vec3 parse_point(const std::string& s) {
  Vec3 p;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf%c", &p[0], &p[1], &p[2], &extra) != 3)
    throw Error(ErrorKind::Input, "--base expects x,y,z");
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surfaces in homogeneous 3-spaces: extraction, compatibility, spinors, reconstruction"};
  app.require_subcommand(1);

  std::string file, out;
  int grid = 0;
  std::vector<std::string> tols, params;
  bool emit_grids = false, frames = false;
  std::string emit_abstract, mesh, base;
  double kappa = 0.0, tau = 0.0;
  int samples = 100;

  auto common = [&](CLI::App* sub, bool needs_file) {
    auto* f = sub->add_option("file", file, "scene or abstract-data JSON");
    if (needs_file) f->required();
    sub->add_option("--grid", grid, "square grid size override");
    sub->add_option("--tol", tols, "tolerance override name=value")->allow_extra_args(false);
    sub->add_option("--param", params, "expression parameter name=value")->allow_extra_args(false);
    sub->add_flag("--emit-grids", emit_grids, "include per-node residual grids in the report");
    sub->add_option("--out", out, "write the report here instead of stdout");
  };
  auto* inspect = app.add_subcommand("inspect", "extract (A, T, f, H) and report their ranges");
  common(inspect, true);
  inspect->add_option("--emit-abstract", emit_abstract, "write the extracted abstract data");
  auto* check = app.add_subcommand("check", "compatibility and spinor residual suites");
  common(check, true);
  check->add_option("--emit-abstract", emit_abstract, "write the extracted abstract data");
  auto* recon = app.add_subcommand("reconstruct", "integrate an immersion from abstract data");
  common(recon, true);
  recon->add_option("--mesh", mesh, "CSV output u,v,x,y,z");
  recon->add_flag("--frames", frames, "append the frame E1, E2, nu to the CSV");
  recon->add_option("--base", base, "base point x,y,z (canonical frame)");
  recon->add_option("--emit-abstract", emit_abstract, "write the abstract data of a scene input");
  auto* curv = app.add_subcommand("curvature-table", "closed-form vs numeric ambient curvature");
  common(curv, false);
  auto* ko = curv->add_option("--kappa", kappa, "model kappa");
  auto* to = curv->add_option("--tau", tau, "model tau");
  curv->add_option("--samples", samples, "random chart points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    SceneOverrides ov;
    if (grid) ov.grid = grid;
    for (const auto& t : tols) ov.tolerances.insert(name_value(t, "--tol"));
    for (const auto& p : params) ov.params.insert(name_value(p, "--param"));
    CommandOptions opts;
    opts.emit_grids = emit_grids;
    if (!emit_abstract.empty()) opts.emit_abstract = emit_abstract;
    if (!mesh.empty()) opts.mesh = mesh;
    opts.mesh_frames = frames;
    if (!base.empty()) opts.base_point = parse_point(base);
    opts.samples = samples;

    Report rep;
    if (*inspect) {
      rep = cmd_inspect(load_scene(file, ov), opts);
    } else if (*check) {
      rep = cmd_check(load_scene(file, ov), opts);
    } else if (*recon) {
      const std::string text = read_file(file);
      if (is_abstract_document(text)) {
        const AbstractFile af = parse_abstract(text, ov);
        Tolerances tol;
        for (const auto& [k, v] : ov.tolerances) tol.set(k, v);
        rep = cmd_reconstruct(af, tol, opts);
      } else {
        rep = cmd_reconstruct(parse_scene(text, ov), opts);
      }
    } else {
      if (!file.empty() && (ko->count() || to->count()))
        throw Error(ErrorKind::Input, "give either a file or --kappa/--tau, not both");
      if (file.empty() && !(ko->count() && to->count()))
        throw Error(ErrorKind::Input, "curvature-table needs a file or both --kappa and --tau");
      const ModelSpace m = file.empty() ? ModelSpace(kappa, tau) : load_model(file);
      Tolerances tol;
      for (const auto& [k, v] : ov.tolerances) tol.set(k, v);
      rep = cmd_curvature_table(m, tol, opts);
    }

    const std::string body = rep.body();
    if (out.empty()) {
      std::cout << body;
    } else {
      std::ofstream os(out, std::ios::binary);
      if (!os) throw Error(ErrorKind::Input, "cannot write \"" + out + "\"");
      os << body;
    }
    for (const auto& c : rep.checks)
      if (!c.pass) std::cerr << "FAIL " << c.name << (c.error.empty() ? "" : ": " + c.error) << "\n";
    return exit_code(rep);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kInputError;
  }
}
