#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures_common.hpp"
#include "spinframe/commands.hpp"
#include "spinframe/error.hpp"

using namespace testing_support;

namespace {

const std::string kFixtures = SPINFRAME_FIXTURES;
const std::string kBinary = SPINFRAME_BIN;

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

std::string tmp_path(const std::string& name) {
  const char* dir = std::getenv("TMPDIR");
  return std::string(dir ? dir : "/tmp") + "/spinframe_cli_" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& args) {
  const std::string cmd = "\"" + kBinary + "\" " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Input;
}

const char* kMinimal = R"({
  "model": {"kappa": 0, "tau": 0.5},
  "surface": {"x": "u", "y": "0", "z": "v"},
  "domain": {"u": [-0.5, 0.5], "v": [-0.5, 0.5]},
  "grid": 16
})";

nlohmann::json minimal() { return nlohmann::json::parse(kMinimal); }

const CheckResult* find(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("parameter substitution") {
  CHECK(substitute_params("$a*u + $ab", {{"a", 2.0}, {"ab", 0.5}}) == "(2)*u + (0.5)");
  CHECK(substitute_params("sin(u)", {}) == "sin(u)");
  CHECK(kind_of([] { substitute_params("$b*u", {{"a", 1.0}}); }) == ErrorKind::Input);
  const Expr e = parse(substitute_params("$a*u*v", {{"a", 0.1}}));
  CHECK(eval(e, 2.0, 3.0) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("fixture scenes match the hand-built surfaces") {
  const Scene s = load_scene(fixture("nil_graph.json"));
  const SurfaceScene ref = nil_graph(64);
  CHECK(s.surface.grid.same_shape(ref.grid));
  CHECK(s.surface.model.tau() == 0.5);
  for (double u : {-0.3, 0.1})
    for (double v : {-0.2, 0.35})
      for (int c = 0; c < 3; ++c)
        CHECK(eval(s.surface.F[c], u, v) == doctest::Approx(eval(ref.F[c], u, v)).epsilon(1e-15));
  REQUIRE(s.spinor);
  CHECK(s.spinor->geometry == SpinGeometry::Fibration);
  CHECK(std::abs(s.spinor->seed.norm() - 1.0) < 1e-15);
}

TEST_CASE("scene overrides") {
  SceneOverrides ov;
  ov.grid = 20;
  ov.params["a"] = 0.0;
  ov.tolerances["killing"] = 3e-4;
  const Scene s = load_scene(fixture("nil_graph.json"), ov);
  CHECK(s.surface.grid.nu == 20);
  CHECK(s.surface.grid.nv == 20);
  CHECK(s.tol.get("killing") == 3e-4);
  CHECK(s.tol.get("dirac") == 1e-5);
  // a = 0 leaves z = 0.2 sin(u)
  CHECK(eval(s.surface.F[2], 0.3, 0.7) == doctest::Approx(0.2 * std::sin(0.3)));

  ov.tolerances["killin"] = 1e-3;
  CHECK(kind_of([&] { load_scene(fixture("nil_graph.json"), ov); }) == ErrorKind::Input);
}

TEST_CASE("strict scene validation") {
  CHECK_NOTHROW(parse_scene(kMinimal));
  auto bad = [](const std::function<void(nlohmann::json&)>& edit) {
    nlohmann::json j = minimal();
    edit(j);
    return kind_of([&] { parse_scene(j.dump()); });
  };
  CHECK(bad([](auto& j) { j["colour"] = "red"; }) == ErrorKind::Input);
  CHECK(bad([](auto& j) { j.erase("model"); }) == ErrorKind::Input);
  CHECK(bad([](auto& j) { j["grid"] = 2.5; }) == ErrorKind::Input);
  CHECK(bad([](auto& j) { j["orientation"] = 0; }) == ErrorKind::Input);
  CHECK(bad([](auto& j) { j["tolerances"] = {{"holonomy", -1.0}}; }) == ErrorKind::Input);
  CHECK(bad([](auto& j) { j["spinor"] = {{"geometry", "berger"}, {"seed", {1, 0, 0, 0}}}; }) == ErrorKind::Input);
  CHECK(bad([](auto& j) { j["spinor"] = {{"geometry", "fibration"}, {"seed", {1, 0}}}; }) == ErrorKind::Input);
  CHECK(bad([](auto& j) { j["model"] = {{"kappa", 0}, {"tau", 0}}; }) == ErrorKind::InvalidModel);
  CHECK(bad([](auto& j) { j["surface"]["z"] = "v+w"; }) == ErrorKind::UnknownIdentifier);
  CHECK(kind_of([] { parse_scene("{\"model\": "); }) == ErrorKind::Input);
  CHECK(kind_of([] { load_scene(fixture("malformed_expression.json")); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { load_scene(fixture("no_such_file.json")); }) == ErrorKind::Input);
}

TEST_CASE("abstract data survives a dump and parse") {
  const ExtrinsicData ex = extract(nil_graph(12));
  AbstractData d = abstract_data(ex);
  Field<Vec3> F;
  for (const auto& p : ex.points) F.push_back(p.F);
  const AbstractFile back = parse_abstract(dump_abstract(d, &F));
  CHECK(back.data.grid.same_shape(d.grid));
  CHECK(back.data.model.kappa() == d.model.kappa());
  CHECK(back.data.orientation == d.orientation);
  double worst = 0.0;
  for (std::size_t k = 0; k < d.grid.size(); ++k) {
    worst = std::max(worst, (back.data.g[k] - d.g[k]).norm());
    worst = std::max(worst, (back.data.A[k] - d.A[k]).norm());
    worst = std::max(worst, (back.data.T[k] - d.T[k]).norm());
    worst = std::max(worst, std::abs(back.data.f[k] - d.f[k]) + std::abs(back.data.H[k] - d.H[k]));
    worst = std::max(worst, ((*back.reference)[k] - F[k]).norm());
  }
  CHECK(worst == 0.0);
  REQUIRE(back.data.base);
  CHECK((back.data.base->point - d.base->point).norm() == 0.0);
  // dumping again gives the same bytes
  CHECK(dump_abstract(back.data, &*back.reference) == dump_abstract(d, &F));
  CHECK(is_abstract_document(dump_abstract(d)));
  CHECK_FALSE(is_abstract_document(kMinimal));
}

TEST_CASE("abstract files reject scene-only overrides and bad shapes") {
  const std::string text = slurp(fixture("gauss_violating.abstract.json"));
  CHECK_NOTHROW(parse_abstract(text));
  SceneOverrides ov;
  ov.grid = 8;
  CHECK(kind_of([&] { parse_abstract(text, ov); }) == ErrorKind::Input);
  nlohmann::json j = nlohmann::json::parse(text);
  j["f"] = {1.0, 1.0};
  CHECK(kind_of([&] { parse_abstract(j.dump()); }) == ErrorKind::GridMismatch);
  j = nlohmann::json::parse(text);
  j["schema"] = "spinframe.abstract/0";
  CHECK(kind_of([&] { parse_abstract(j.dump()); }) == ErrorKind::Input);
}

TEST_CASE("reports are deterministic and hashed over the effective scene") {
  const Scene s = load_scene(fixture("nil_graph.json"));
  const std::string b1 = cmd_check(s).body();
  const std::string b2 = cmd_check(load_scene(fixture("nil_graph.json"))).body();
  CHECK(b1 == b2);
  const auto j = nlohmann::json::parse(b1);
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["command"] == "check");
  CHECK(j["pass"] == true);
  CHECK(j["provenance"]["version"] == kVersion);
  CHECK(j["provenance"]["grid"] == nlohmann::json::array({64, 64}));
  CHECK_FALSE(j.contains("grids"));

  SceneOverrides ov;
  ov.params["b"] = 0.25;
  CHECK(cmd_inspect(load_scene(fixture("nil_graph.json"), ov)).scene_hash != cmd_inspect(s).scene_hash);
  ov.params["b"] = 0.2;
  CHECK(cmd_inspect(load_scene(fixture("nil_graph.json"), ov)).scene_hash == cmd_inspect(s).scene_hash);

  CommandOptions opts;
  opts.emit_grids = true;
  SceneOverrides small;
  small.grid = 10;
  const auto jg = nlohmann::json::parse(cmd_inspect(load_scene(fixture("nil_graph.json"), small), opts).body());
  REQUIRE(jg.contains("grids"));
  CHECK(jg["grids"]["unit"].size() == 100);
}

TEST_CASE("check reports failing suites instead of throwing") {
  const Report flipped = cmd_check(load_scene(fixture("nil_graph_flipped.json")));
  CHECK_FALSE(flipped.pass());
  CHECK(exit_code(flipped) == 1);
  CHECK_FALSE(find(flipped, "compat.condT")->pass);
  CHECK(find(flipped, "compat.gauss")->pass);

  const Report slice = cmd_check(load_scene(fixture("slice.json")));
  CHECK(slice.pass());
  CHECK(exit_code(slice) == 0);
  for (const char* c : {"holonomy", "norm_drift", "killing", "dirac", "ricci", "norm_law", "recover_A", "W"})
    CHECK(find(slice, c) != nullptr);
}

TEST_CASE("reconstruct reports") {
  const AbstractFile gv = load_abstract(fixture("gauss_violating.abstract.json"));
  const Report r1 = cmd_reconstruct(gv, Tolerances{});
  REQUIRE(r1.checks.size() == 1);
  CHECK(r1.checks[0].name == "reconstruct");
  CHECK(r1.checks[0].error.find("CompatGateFailed") != std::string::npos);
  CHECK(exit_code(r1) == 1);

  const Report r2 = cmd_reconstruct(load_abstract(fixture("outside_chart.abstract.json")), Tolerances{});
  REQUIRE(r2.checks.size() == 1);
  CHECK(r2.checks[0].error.find("ChartExit") != std::string::npos);

  SceneOverrides ov;
  ov.grid = 20;
  CommandOptions opts;
  opts.mesh = tmp_path("mesh.csv");
  const Report r3 = cmd_reconstruct(load_scene(fixture("nil_vertical_plane.json"), ov), opts);
  CHECK(r3.pass());
  CHECK(find(r3, "roundtrip")->max_residual < 1e-9);
  std::istringstream csv(slurp(*opts.mesh));
  std::string line;
  int rows = 0;
  std::getline(csv, line);
  CHECK(line == "u,v,x,y,z");
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 400);
  std::remove(opts.mesh->c_str());

  // a chosen base point keeps the frame relative to the canonical frame
  opts = {};
  opts.base_point = Vec3(0.1, 0.0, 0.2);
  const Report r4 = cmd_reconstruct(load_scene(fixture("nil_vertical_plane.json"), ov), opts);
  CHECK(find(r4, "xi")->pass);
  CHECK(find(r4, "path")->pass);

  // without a stored base frame one is built from (T, f) at the first node
  AbstractFile nb = load_abstract(fixture("gauss_violating.abstract.json"));
  {
    const ExtrinsicData ex = extract(nil_graph(20));
    nb.data = abstract_data(ex);
    nb.data.base.reset();
    nb.reference.reset();
  }
  CHECK(cmd_reconstruct(nb, Tolerances{}, opts).pass());
  CHECK(kind_of([&] { cmd_reconstruct(nb, Tolerances{}); }) == ErrorKind::Input);
}

TEST_CASE("curvature table") {
  const Report r = cmd_curvature_table(ModelSpace(0.0, 0.5), Tolerances{});
  CHECK(r.pass());
  const auto j = nlohmann::json::parse(r.body());
  CHECK(j["summary"]["expected_diag"][2] == -0.75);
  CHECK(std::abs(j["summary"]["mean_numeric_diag"][0].get<double>() - 0.25) < 1e-5);
  CHECK(kind_of([] { cmd_curvature_table(ModelSpace(0.0, 0.0), Tolerances{}); }) == ErrorKind::InvalidModel);
  CommandOptions none;
  none.samples = 0;
  CHECK(kind_of([&] { cmd_curvature_table(ModelSpace(1.0, 0.0), Tolerances{}, none); }) == ErrorKind::Input);
}

TEST_CASE("binary exit codes and byte-stable output") {
  const std::string a = tmp_path("a.json"), b = tmp_path("b.json");
  CHECK(run("check \"" + fixture("slice.json") + "\" --out \"" + a + "\"") == 0);
  CHECK(run("check \"" + fixture("slice.json") + "\" --out \"" + b + "\"") == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == cmd_check(load_scene(fixture("slice.json"))).body());
  CHECK(run("check \"" + fixture("nil_graph_flipped.json") + "\"") == 1);
  CHECK(run("reconstruct \"" + fixture("outside_chart.abstract.json") + "\"") == 1);
  CHECK(run("check \"" + fixture("malformed_expression.json") + "\"") == 2);
  CHECK(run("check \"" + fixture("slice.json") + "\" --tol nosuch=1") == 2);
  CHECK(run("check \"" + fixture("slice.json") + "\" --tol killing=abc") == 2);
  CHECK(run("check \"" + fixture("nil_graph.json") + "\" --grid 16 --param a=0.1") == 0);
  CHECK(run("check") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("curvature-table --kappa 4 --tau 1 --samples 10") == 0);
  CHECK(run("curvature-table --kappa 0 --tau 0") == 2);
  CHECK(run("curvature-table \"" + fixture("berger_vertical_cylinder.json") + "\" --samples 10") == 0);
  // tightening a tolerance makes a passing scene fail
  CHECK(run("check \"" + fixture("slice.json") + "\" --tol holonomy=1e-14") == 1);
  std::remove(a.c_str());
  std::remove(b.c_str());
}
