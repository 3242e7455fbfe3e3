#include "spinframe/scene.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spinframe/error.hpp"

namespace spinframe {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Input, what); }

const json& need(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) bad(ctx + ": missing \"" + key + "\"");
  return j.at(key);
}

double num(const json& j, const std::string& ctx) {
  if (!j.is_number()) bad(ctx + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(ctx + " must be finite");
  return x;
}

std::vector<double> nums(const json& j, std::size_t n, const std::string& ctx) {
  if (!j.is_array() || j.size() != n) bad(ctx + " must be an array of " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(num(j[k], ctx));
  return out;
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& ctx) {
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) bad(ctx + ": unknown key \"" + it.key() + "\"");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

ModelSpace read_model(const json& doc) {
  const json& m = need(doc, "model", "scene");
  only_keys(m, {"kappa", "tau"}, "model");
  return ModelSpace(num(need(m, "kappa", "model"), "model.kappa"), num(need(m, "tau", "model"), "model.tau"));
}

Grid2 read_grid(const json& doc) {
  const json& d = need(doc, "domain", "scene");
  only_keys(d, {"u", "v"}, "domain");
  const auto u = nums(need(d, "u", "domain"), 2, "domain.u");
  const auto v = nums(need(d, "v", "domain"), 2, "domain.v");
  const json& g = need(doc, "grid", "scene");
  int nu = 0, nv = 0;
  if (g.is_number_integer()) {
    nu = nv = g.get<int>();
  } else if (g.is_array() && g.size() == 2 && g[0].is_number_integer() && g[1].is_number_integer()) {
    nu = g[0].get<int>();
    nv = g[1].get<int>();
  } else {
    bad("grid must be an integer or [nu, nv]");
  }
  Grid2 grid{nu, nv, u[0], u[1], v[0], v[1]};
  grid.validate();
  return grid;
}

int read_orientation(const json& doc) {
  if (!doc.contains("orientation")) return 1;
  const json& o = doc.at("orientation");
  if (!o.is_number_integer() || (o.get<int>() != 1 && o.get<int>() != -1)) bad("orientation must be 1 or -1");
  return o.get<int>();
}

void apply_tolerances(Tolerances& tol, const json& doc) {
  if (!doc.contains("tolerances")) return;
  const json& t = doc.at("tolerances");
  if (!t.is_object()) bad("tolerances must be an object");
  for (auto it = t.begin(); it != t.end(); ++it) tol.set(it.key(), num(it.value(), "tolerances." + it.key()));
}

void merge_overrides(json& doc, const SceneOverrides& ov) {
  if (!ov.params.empty()) {
    json& p = doc["parameters"];
    if (!p.is_object()) p = json::object();
    for (const auto& [k, v] : ov.params) p[k] = v;
  }
  if (ov.grid) doc["grid"] = json::array({*ov.grid, *ov.grid});
  if (!ov.tolerances.empty()) {
    json& t = doc["tolerances"];
    if (!t.is_object()) t = json::object();
    for (const auto& [k, v] : ov.tolerances) t[k] = v;
  }
}

Vec3 vec3(const json& j, const std::string& ctx) {
  const auto v = nums(j, 3, ctx);
  return {v[0], v[1], v[2]};
}

// A per-node list or one value for every node.
template <class T, class Read>
Field<T> node_field(const json& doc, const char* key, std::size_t n, bool constant_is_array, Read read) {
  const json& j = need(doc, key, "abstract data");
  const bool per_node = j.is_array() && (constant_is_array ? (!j.empty() && j[0].is_array()) : true);
  if (!per_node) return Field<T>(n, read(j));
  if (j.size() != n)
    throw Error(ErrorKind::GridMismatch, std::string("abstract field \"") + key + "\" has " + std::to_string(j.size()) +
                                             " entries, grid has " + std::to_string(n));
  Field<T> out;
  out.reserve(n);
  for (const json& x : j) out.push_back(read(x));
  return out;
}

Mat2 read_sym(const json& j, const char* what) {
  if (j.is_array() && j.size() == 4) {
    const auto a = nums(j, 4, what);
    return (Mat2() << a[0], a[1], a[2], a[3]).finished();
  }
  const auto a = nums(j, 3, what);
  return (Mat2() << a[0], a[1], a[1], a[2]).finished();
}

nlohmann::ordered_json vec_json(const Vec3& v) { return nlohmann::ordered_json::array({v[0], v[1], v[2]}); }

}  // namespace

Tolerances::Tolerances()
    : values_{{"compat", 5e-5},   {"killing", 1e-5},   {"dirac", 1e-5},     {"holonomy", 1e-6},
              {"roundtrip", 1e-5}, {"norm", 1e-6},      {"recover_A", 1e-4}, {"W", 1e-5},
              {"curvature", 1e-5}, {"christoffel", 1e-6}, {"frame", 1e-6}} {}

double Tolerances::get(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) bad("unknown tolerance \"" + name + "\"");
  return it->second;
}

void Tolerances::set(const std::string& name, double value) {
  if (!values_.count(name)) bad("unknown tolerance \"" + name + "\"");
  if (!(value > 0.0) || !std::isfinite(value)) bad("tolerance \"" + name + "\" must be positive");
  values_[name] = value;
}

std::string substitute_params(const std::string& expr, const Params& params) {
  std::string out;
  for (std::size_t k = 0; k < expr.size();) {
    if (expr[k] != '$') {
      out += expr[k++];
      continue;
    }
    std::size_t e = k + 1;
    while (e < expr.size() && (std::isalnum(static_cast<unsigned char>(expr[e])) || expr[e] == '_')) ++e;
    const std::string name = expr.substr(k + 1, e - k - 1);
    if (name.empty()) bad("'$' must be followed by a parameter name in \"" + expr + "\"");
    const auto it = params.find(name);
    if (it == params.end()) bad("undefined parameter $" + name);
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.17g)", it->second);
    out += buf;
    k = e;
  }
  return out;
}

Scene parse_scene(const std::string& json_text, const SceneOverrides& ov) {
  json doc = parse_json(json_text);
  if (!doc.is_object()) bad("scene must be a JSON object");
  only_keys(doc, {"name", "description", "model", "surface", "domain", "grid", "orientation", "frame_angle",
                  "parameters", "spinor", "tolerances"},
            "scene");
  merge_overrides(doc, ov);

  Scene s;
  s.surface.model = read_model(doc);
  s.surface.grid = read_grid(doc);
  s.surface.orientation = read_orientation(doc);
  if (doc.contains("frame_angle")) s.surface.frame_angle = num(doc.at("frame_angle"), "frame_angle");

  Params params;
  if (doc.contains("parameters")) {
    const json& p = doc.at("parameters");
    if (!p.is_object()) bad("parameters must be an object");
    for (auto it = p.begin(); it != p.end(); ++it) params[it.key()] = num(it.value(), "parameters." + it.key());
  }
  const json& surf = need(doc, "surface", "scene");
  only_keys(surf, {"x", "y", "z"}, "surface");
  const char* comps[3] = {"x", "y", "z"};
  for (int k = 0; k < 3; ++k) {
    const json& e = need(surf, comps[k], "surface");
    if (!e.is_string()) bad(std::string("surface.") + comps[k] + " must be an expression string");
    s.surface.F[k] = parse(substitute_params(e.get<std::string>(), params));
  }

  if (doc.contains("spinor")) {
    const json& sp = doc.at("spinor");
    only_keys(sp, {"geometry", "seed", "eta"}, "spinor");
    SpinorSpec spec;
    const json& g = need(sp, "geometry", "spinor");
    if (!g.is_string()) bad("spinor.geometry must be a string");
    spec.geometry = parse_geometry(g.get<std::string>());
    const auto seed = nums(need(sp, "seed", "spinor"), 4, "spinor.seed");
    spec.seed = Spinor(cplx(seed[0], seed[1]), cplx(seed[2], seed[3]));
    if (sp.contains("eta")) {
      const auto e = nums(sp.at("eta"), 2, "spinor.eta");
      spec.eta = cplx(e[0], e[1]);
    }
    s.spinor = spec;
  }
  apply_tolerances(s.tol, doc);
  s.canonical = doc.dump();
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read \"" + path + "\"");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Scene load_scene(const std::string& path, const SceneOverrides& ov) { return parse_scene(read_file(path), ov); }

ModelSpace load_model(const std::string& path) { return read_model(parse_json(read_file(path))); }

bool is_abstract_document(const std::string& json_text) {
  const json doc = json::parse(json_text, nullptr, false);
  return doc.is_object() && doc.contains("schema") && doc["schema"] == kAbstractSchema;
}

AbstractFile parse_abstract(const std::string& json_text, const SceneOverrides& ov) {
  json doc = parse_json(json_text);
  if (!doc.is_object()) bad("abstract data must be a JSON object");
  if (!doc.contains("schema") || doc["schema"] != kAbstractSchema)
    bad(std::string("abstract data must declare schema \"") + kAbstractSchema + "\"");
  only_keys(doc, {"schema", "name", "description", "model", "domain", "grid", "orientation", "frame_angle", "g", "A",
                  "T", "f", "H", "base", "reference", "tolerances"},
            "abstract data");
  if (ov.grid) bad("--grid does not apply to abstract data");
  if (!ov.params.empty()) bad("--param does not apply to abstract data");
  merge_overrides(doc, ov);

  AbstractFile out;
  AbstractData& d = out.data;
  d.model = read_model(doc);
  d.grid = read_grid(doc);
  d.orientation = read_orientation(doc);
  if (doc.contains("frame_angle")) d.frame_angle = num(doc.at("frame_angle"), "frame_angle");
  const std::size_t n = d.grid.size();
  d.g = node_field<Mat2>(doc, "g", n, true, [](const json& j) { return read_sym(j, "g entry"); });
  d.A = node_field<Mat2>(doc, "A", n, true, [](const json& j) { return read_sym(j, "A entry"); });
  d.T = node_field<Vec2>(doc, "T", n, true, [](const json& j) {
    const auto t = nums(j, 2, "T entry");
    return Vec2(t[0], t[1]);
  });
  d.f = node_field<double>(doc, "f", n, false, [](const json& j) { return num(j, "f entry"); });
  if (doc.contains("H"))
    d.H = node_field<double>(doc, "H", n, false, [](const json& j) { return num(j, "H entry"); });
  else
    d.recompute_H();
  if (doc.contains("base")) {
    const json& b = doc.at("base");
    only_keys(b, {"point", "E1", "E2", "nu"}, "base");
    BasePoint bp;
    bp.point = vec3(need(b, "point", "base"), "base.point");
    if (b.contains("E1") || b.contains("E2") || b.contains("nu")) {
      bp.frame = {vec3(need(b, "E1", "base"), "base.E1"), vec3(need(b, "E2", "base"), "base.E2"),
                  vec3(need(b, "nu", "base"), "base.nu")};
    } else if (d.model.in_chart(bp.point)) {
      // canonical frame at the point; outside the chart reconstruction reports ChartExit
      const Mat3 fr = canonical_frame(d.model, bp.point);
      bp.frame = {fr.col(0), fr.col(1), fr.col(2)};
    }
    d.base = bp;
  }
  if (doc.contains("reference")) {
    const json& r = doc.at("reference");
    if (!r.is_array() || r.size() != n) throw Error(ErrorKind::GridMismatch, "reference immersion does not match the grid");
    Field<Vec3> F;
    for (const json& p : r) F.push_back(vec3(p, "reference entry"));
    out.reference = F;
  }
  d.validate();
  out.canonical = doc.dump();
  return out;
}

AbstractFile load_abstract(const std::string& path, const SceneOverrides& ov) {
  return parse_abstract(read_file(path), ov);
}

std::string dump_abstract(const AbstractData& d, const Field<Vec3>* reference) {
  nlohmann::ordered_json doc;
  doc["schema"] = kAbstractSchema;
  doc["model"] = {{"kappa", d.model.kappa()}, {"tau", d.model.tau()}};
  doc["domain"] = {{"u", {d.grid.u0, d.grid.u1}}, {"v", {d.grid.v0, d.grid.v1}}};
  doc["grid"] = {d.grid.nu, d.grid.nv};
  doc["orientation"] = d.orientation;
  doc["frame_angle"] = d.frame_angle;
  // ordered_json keeps its keys in a vector, so references into doc dangle after the next insert
  auto g = nlohmann::ordered_json::array(), A = g, T = g, f = g, H = g;
  for (std::size_t k = 0; k < d.grid.size(); ++k) {
    g.push_back({d.g[k](0, 0), d.g[k](0, 1), d.g[k](1, 1)});
    A.push_back({d.A[k](0, 0), d.A[k](0, 1), d.A[k](1, 0), d.A[k](1, 1)});
    T.push_back({d.T[k][0], d.T[k][1]});
    f.push_back(d.f[k]);
    H.push_back(d.H[k]);
  }
  doc["g"] = std::move(g);
  doc["A"] = std::move(A);
  doc["T"] = std::move(T);
  doc["f"] = std::move(f);
  doc["H"] = std::move(H);
  if (d.base) {
    doc["base"] = {{"point", vec_json(d.base->point)},
                   {"E1", vec_json(d.base->frame.E1)},
                   {"E2", vec_json(d.base->frame.E2)},
                   {"nu", vec_json(d.base->frame.nu)}};
  }
  if (reference) {
    auto r = nlohmann::ordered_json::array();
    for (const Vec3& p : *reference) r.push_back(vec_json(p));
    doc["reference"] = std::move(r);
  }
  return doc.dump(1) + "\n";
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace spinframe
