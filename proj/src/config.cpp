#include "utb/config.hpp"

#include "utb/errors.hpp"
#include "utb/expression.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

namespace utb {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorKind::ValidationError, path + ": " + what);
}

class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_, "must be an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json* get(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    used_.insert(key);
    return &*it;
  }

  double number(const std::string& key, double def) {
    const json* v = get(key);
    return v ? as_number(*v, at(key)) : def;
  }

  double required_number(const std::string& key) {
    if (!has(key)) invalid(at(key), "required");
    return number(key, 0.0);
  }

  int integer(const std::string& key, int def) {
    const json* v = get(key);
    if (!v) return def;
    if (!v->is_number_integer()) invalid(at(key), "must be an integer");
    const auto value = v->get<std::int64_t>();
    if (value < -1'000'000'000 || value > 1'000'000'000) invalid(at(key), "out of range");
    return static_cast<int>(value);
  }

  std::string text(const std::string& key, const std::string& def) {
    const json* v = get(key);
    if (!v) return def;
    if (!v->is_string()) invalid(at(key), "must be a string");
    return v->get<std::string>();
  }

  std::string required_text(const std::string& key) {
    if (!has(key)) invalid(at(key), "required");
    return text(key, {});
  }

  std::array<double, 2> pair(const std::string& key, std::array<double, 2> def) {
    const json* v = get(key);
    if (!v) return def;
    if (!v->is_array() || v->size() != 2) invalid(at(key), "must be an array of two numbers");
    return {as_number((*v)[0], at(key) + "[0]"), as_number((*v)[1], at(key) + "[1]")};
  }

  void finish(const std::string& context = {}) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) {
        invalid(at(it.key()), context.empty() ? "unknown key '" + it.key() + "'"
                                              : "unknown key '" + it.key() + "' for " + context);
      }
    }
  }

 private:
  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) invalid(path, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) invalid(path, "must be finite");
    return x;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void check_expression(const std::string& text, std::vector<std::string> vars, const std::string& path) {
  try {
    Expression::parse(text, std::move(vars));
  } catch (const Error& e) {
    invalid(path, e.what());
  }
}

void positive(double v, const std::string& path) {
  if (!(v > 0.0)) invalid(path, fmt::format("must be positive (got {})", v));
}

RawParams parse_structure(const json& j) {
  Fields f(j, "structure");
  RawParams p;
  p.c1 = f.required_number("c1");
  p.c2 = f.required_number("c2");
  p.d1 = f.required_number("d1");
  p.lambda = f.required_number("lambda");
  p.a1 = f.required_number("a1");
  p.b1 = f.number("b1", 0.0);
  f.finish();
  positive(p.c1, "structure.c1");
  positive(p.c2, "structure.c2");
  if (!(p.c1 + p.d1 > 0.0)) invalid("structure.d1", fmt::format("c1 + d1 must be positive (got {})", p.c1 + p.d1));
  if (p.lambda == 0.0) invalid("structure.lambda", "must be nonzero");
  if (p.a1 == 0.0) invalid("structure.a1", "must be nonzero");
  if (p.a1 + 2.0 * kUnitBundleT * p.b1 == 0.0) invalid("structure.b1", "a1 + b1 must be nonzero");
  return p;
}

SurfaceSpec parse_surface(const json& j) {
  Fields f(j, "surface");
  SurfaceSpec s;
  s.kind = f.required_text("kind");
  if (s.kind == "sphere") {
    s.radius = f.number("radius", 1.0);
    positive(s.radius, "surface.radius");
  } else if (s.kind == "custom") {
    s.g11 = f.required_text("g11");
    s.g12 = f.text("g12", "0");
    s.g22 = f.required_text("g22");
    for (const auto& [key, text] : {std::pair{"g11", s.g11}, {"g12", s.g12}, {"g22", s.g22}}) {
      check_expression(text, {"x1", "x2"}, f.at(key));
    }
    if (const json* d = f.get("domain")) {
      Fields df(*d, "surface.domain");
      const auto x1 = df.pair("x1", {s.domain.lo1, s.domain.hi1});
      const auto x2 = df.pair("x2", {s.domain.lo2, s.domain.hi2});
      df.finish();
      if (!(x1[0] < x1[1])) invalid("surface.domain.x1", "lower bound must be below upper bound");
      if (!(x2[0] < x2[1])) invalid("surface.domain.x2", "lower bound must be below upper bound");
      s.domain = {x1[0], x1[1], x2[0], x2[1]};
    }
  } else if (s.kind != "plane") {
    invalid("surface.kind", "must be plane, sphere or custom, got '" + s.kind + "'");
  }
  f.finish("surface kind '" + s.kind + "'");
  try {
    build_surface(s);
  } catch (const Error& e) {
    invalid("surface", e.what());
  }
  return s;
}

BaseSpec parse_base(const json& j, const std::string& path) {
  Fields f(j, path);
  BaseSpec b;
  b.kind = f.required_text("kind");
  b.s0 = f.number("s0", b.s0);
  b.length = f.number("length", b.length);
  positive(b.length, f.at("length"));
  if (b.kind == "geodesic") {
    b.point = f.pair("point", b.point);
    b.velocity = f.pair("velocity", b.velocity);
    if (b.velocity[0] == 0.0 && b.velocity[1] == 0.0) invalid(f.at("velocity"), "must be nonzero");
  } else if (b.kind == "circle") {
    b.center = f.pair("center", b.center);
    b.radius = f.number("radius", b.radius);
    b.speed = f.number("speed", b.speed);
    b.phase = f.number("phase", b.phase);
    positive(b.radius, f.at("radius"));
    positive(b.speed, f.at("speed"));
  } else if (b.kind == "small_circle") {
    b.colatitude = f.number("colatitude", b.colatitude);
    b.speed = f.number("speed", b.speed);
    b.lon0 = f.number("lon0", b.lon0);
    if (!(b.colatitude > 0.0 && b.colatitude < kPi)) invalid(f.at("colatitude"), "must lie in (0, pi)");
    positive(b.speed, f.at("speed"));
  } else if (b.kind == "great_circle") {
    b.speed = f.number("speed", b.speed);
    b.lon0 = f.number("lon0", b.lon0);
    positive(b.speed, f.at("speed"));
  } else if (b.kind == "custom") {
    b.x1 = f.required_text("x1");
    b.x2 = f.required_text("x2");
    check_expression(b.x1, {"s"}, f.at("x1"));
    check_expression(b.x2, {"s"}, f.at("x2"));
  } else {
    invalid(f.at("kind"), "must be geodesic, circle, small_circle, great_circle or custom, got '" + b.kind + "'");
  }
  f.finish("base kind '" + b.kind + "'");
  return b;
}

int parse_sign(Fields& f, int def) {
  const int sign = f.integer("sign", def);
  if (sign != 1 && sign != -1) invalid(f.at("sign"), "must be 1 or -1");
  return sign;
}

LiftCfg parse_lift(const json& j, const std::string& path) {
  Fields f(j, path);
  LiftCfg l;
  l.kind = f.required_text("kind");
  if (l.kind == "parallel" || l.kind == "constant_angle") {
    l.angle = f.required_number("angle");
  } else if (l.kind == "slant") {
    l.c = f.required_number("c");
    l.phi0 = f.number("phi0", l.phi0);
    l.sign = parse_sign(f, l.sign);
    if (l.c == 0.0) invalid(f.at("c"), "must be nonzero");
  } else if (l.kind == "prescribed") {
    l.x1 = f.required_text("x1");
    l.x2 = f.required_text("x2");
    check_expression(l.x1, {"s"}, f.at("x1"));
    check_expression(l.x2, {"s"}, f.at("x2"));
  } else if (l.kind != "natural" && l.kind != "legendre") {
    invalid(f.at("kind"),
            "must be natural, parallel, constant_angle, legendre, slant or prescribed, got '" + l.kind + "'");
  }
  f.finish("lift kind '" + l.kind + "'");
  return l;
}

FrenetCfg parse_frenet(const json& j, const std::string& path) {
  Fields f(j, path);
  FrenetCfg d;
  d.x0 = f.pair("x0", d.x0);
  d.psi0 = f.number("psi0", d.psi0);
  d.theta0 = f.number("theta0", d.theta0);
  d.beta0 = f.number("beta0", d.beta0);
  d.length = f.number("length", d.length);
  d.kappa = f.text("kappa", d.kappa);
  d.c = f.text("c", d.c);
  d.sign = parse_sign(f, d.sign);
  f.finish();
  positive(d.length, f.at("length"));
  if (!(d.theta0 > 0.0 && d.theta0 < kPi)) invalid(f.at("theta0"), "must lie in (0, pi)");
  check_expression(d.kappa, {"s"}, f.at("kappa"));
  check_expression(d.c, {"s"}, f.at("c"));
  return d;
}

CurveSpec parse_curve(const json& j, const std::string& path) {
  Fields f(j, path);
  CurveSpec c;
  c.name = f.text("name", "");
  if (const json* d = f.get("frenet")) {
    if (f.has("base") || f.has("lift")) invalid(path, "give either frenet or base and lift, not both");
    c.frenet = true;
    c.drive = parse_frenet(*d, f.at("frenet"));
  } else {
    const json* b = f.get("base");
    const json* l = f.get("lift");
    if (!b) invalid(f.at("base"), "required");
    if (!l) invalid(f.at("lift"), "required");
    c.base = parse_base(*b, f.at("base"));
    c.lift = parse_lift(*l, f.at("lift"));
  }
  f.finish();
  if (c.name.empty()) c.name = describe(c);
  return c;
}

RunSettings parse_run(const json& j) {
  Fields f(j, "run");
  RunSettings r;
  r.samples = f.integer("samples", r.samples);
  r.fd_step = f.number("fd_step", r.fd_step);
  r.rk_steps = f.integer("rk_steps", r.rk_steps);
  if (const json* t = f.get("tolerances")) {
    Fields tf(*t, "run.tolerances");
    r.tolerances.classify = tf.number("classify", r.tolerances.classify);
    r.tolerances.zero = tf.number("zero", r.tolerances.zero);
    r.tolerances.relative = tf.number("relative", r.tolerances.relative);
    tf.finish();
    positive(r.tolerances.classify, "run.tolerances.classify");
    positive(r.tolerances.zero, "run.tolerances.zero");
    positive(r.tolerances.relative, "run.tolerances.relative");
  }
  r.output = f.text("output", r.output);
  f.finish();
  if (r.samples < 3) invalid("run.samples", "must be at least 3");
  if (!(r.fd_step > 0.0 && r.fd_step <= 0.1)) invalid("run.fd_step", "must lie in (0, 0.1]");
  if (r.rk_steps < 10) invalid("run.rk_steps", "must be at least 10");
  if (r.output.empty()) invalid("run.output", "must be nonempty");
  return r;
}

json pair_json(const std::array<double, 2>& a) { return json::array({a[0], a[1]}); }

}  // namespace

RunConfig parse_config(const json& j) {
  Fields f(j, "");
  RunConfig cfg;
  const json* s = f.get("structure");
  if (!s) invalid("structure", "required");
  cfg.structure = parse_structure(*s);
  const json* surf = f.get("surface");
  if (!surf) invalid("surface", "required");
  cfg.surface = parse_surface(*surf);
  if (const json* c = f.get("curve")) cfg.curve = parse_curve(*c, "curve");
  if (const json* fam = f.get("family")) {
    if (!fam->is_array()) invalid("family", "must be an array of curves");
    for (std::size_t i = 0; i < fam->size(); ++i) {
      cfg.family.push_back(parse_curve((*fam)[i], fmt::format("family[{}]", i)));
    }
  }
  if (const json* r = f.get("run")) cfg.run = parse_run(*r);
  f.finish();
  try {
    validate_params(cfg.structure);
  } catch (const Error& e) {
    invalid("structure", e.what());
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1, column = 1;
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    fail(ErrorKind::ParseError, fmt::format("line {} column {}: {}", line, column, e.what()));
  }
  return parse_config(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const CurveSpec& spec) {
  json c;
  c["name"] = spec.name;
  if (spec.frenet) {
    const FrenetCfg& d = spec.drive;
    c["frenet"] = {{"x0", pair_json(d.x0)}, {"psi0", d.psi0},   {"theta0", d.theta0}, {"beta0", d.beta0},
                   {"length", d.length},     {"kappa", d.kappa}, {"c", d.c},           {"sign", d.sign}};
    return c;
  }
  const BaseSpec& b = spec.base;
  json base = {{"kind", b.kind}, {"s0", b.s0}, {"length", b.length}};
  if (b.kind == "geodesic") {
    base["point"] = pair_json(b.point);
    base["velocity"] = pair_json(b.velocity);
  } else if (b.kind == "circle") {
    base["center"] = pair_json(b.center);
    base["radius"] = b.radius;
    base["speed"] = b.speed;
    base["phase"] = b.phase;
  } else if (b.kind == "small_circle") {
    base["colatitude"] = b.colatitude;
    base["speed"] = b.speed;
    base["lon0"] = b.lon0;
  } else if (b.kind == "great_circle") {
    base["speed"] = b.speed;
    base["lon0"] = b.lon0;
  } else if (b.kind == "custom") {
    base["x1"] = b.x1;
    base["x2"] = b.x2;
  }
  const LiftCfg& l = spec.lift;
  json lift = {{"kind", l.kind}};
  if (l.kind == "parallel" || l.kind == "constant_angle") {
    lift["angle"] = l.angle;
  } else if (l.kind == "slant") {
    lift["c"] = l.c;
    lift["phi0"] = l.phi0;
    lift["sign"] = l.sign;
  } else if (l.kind == "prescribed") {
    lift["x1"] = l.x1;
    lift["x2"] = l.x2;
  }
  c["base"] = std::move(base);
  c["lift"] = std::move(lift);
  return c;
}

json to_json(const RunConfig& cfg) {
  json j;
  const RawParams& p = cfg.structure;
  j["structure"] = {{"c1", p.c1}, {"c2", p.c2}, {"d1", p.d1}, {"lambda", p.lambda}, {"a1", p.a1}, {"b1", p.b1}};
  json s = {{"kind", cfg.surface.kind}};
  if (cfg.surface.kind == "sphere") {
    s["radius"] = cfg.surface.radius;
  } else if (cfg.surface.kind == "custom") {
    s["g11"] = cfg.surface.g11;
    s["g12"] = cfg.surface.g12;
    s["g22"] = cfg.surface.g22;
    const ChartDomain& d = cfg.surface.domain;
    s["domain"] = {{"x1", json::array({d.lo1, d.hi1})}, {"x2", json::array({d.lo2, d.hi2})}};
  }
  j["surface"] = std::move(s);
  if (cfg.curve) j["curve"] = to_json(*cfg.curve);
  if (!cfg.family.empty()) {
    json fam = json::array();
    for (const CurveSpec& c : cfg.family) fam.push_back(to_json(c));
    j["family"] = std::move(fam);
  }
  const RunSettings& r = cfg.run;
  j["run"] = {{"samples", r.samples},
              {"fd_step", r.fd_step},
              {"rk_steps", r.rk_steps},
              {"tolerances",
               {{"classify", r.tolerances.classify}, {"zero", r.tolerances.zero}, {"relative", r.tolerances.relative}}},
              {"output", r.output}};
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : to_json(cfg).dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

StructureParams structure_params(const RunConfig& cfg) {
  try {
    return validate_params(cfg.structure);
  } catch (const Error& e) {
    invalid("structure", e.what());
  }
}

VerifyOptions verify_options(const RunConfig& cfg) {
  VerifyOptions o;
  o.samples = cfg.run.samples;
  o.classify_tol = cfg.run.tolerances.classify;
  o.zero_tol = cfg.run.tolerances.zero;
  o.rel_tol = cfg.run.tolerances.relative;
  return o;
}

NumericsSettings numerics_settings(const RunConfig& cfg) { return {cfg.run.fd_step, cfg.run.rk_steps}; }

}  // namespace utb
