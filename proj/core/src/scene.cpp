#include "splatdyn/scene.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "splatdyn/error.hpp"
#include "splatdyn/presets.hpp"

namespace splatdyn {
namespace {

std::string where(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.is_null()) return "";
  return "line " + std::to_string(mark.line + 1) + ", column " + std::to_string(mark.column + 1) + ": ";
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& path, const std::string& msg) {
  throw ConfigError(where(node) + path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// A mapping node with its key path, rejecting keys it was not asked about.
class Section {
 public:
  Section(YAML::Node node, std::string path, std::initializer_list<const char*> allowed)
      : node_(std::move(node)), path_(std::move(path)) {
    if (!node_.IsMap()) fail(node_, path_.empty() ? "<root>" : path_, "expected a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        fail(kv.first, join(path_, key), "unknown key");
    }
  }

  bool has(const char* key) const { return static_cast<bool>(node_[key]); }
  YAML::Node operator[](const char* key) const { return node_[key]; }
  std::string path(const char* key) const { return join(path_, key); }

  double number(const char* key, double fallback) const { return has(key) ? as_number(node_[key], path(key)) : fallback; }
  int integer(const char* key, int fallback) const {
    if (!has(key)) return fallback;
    try {
      return node_[key].as<int>();
    } catch (const YAML::Exception&) {
      fail(node_[key], path(key), "expected an integer");
    }
  }
  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const auto n = node_[key];
    if (!n.IsScalar()) fail(n, path(key), "expected a string");
    return n.as<std::string>();
  }
  Vec3 vec3(const char* key, const Vec3& fallback) const { return has(key) ? as_vec3(node_[key], path(key)) : fallback; }

  static double as_number(const YAML::Node& n, const std::string& path) {
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "not a scalar");
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, path, "expected a number");
    }
  }
  static Vec3 as_vec3(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence() || n.size() != 3) fail(n, path, "expected a list of 3 numbers");
    Vec3 v;
    for (int a = 0; a < 3; ++a) v[a] = as_number(n[a], path + "[" + std::to_string(a) + "]");
    return v;
  }

  const YAML::Node& node() const { return node_; }

 private:
  YAML::Node node_;
  std::string path_;
};

void require(bool ok, const YAML::Node& node, const std::string& path, const std::string& msg) {
  if (!ok) fail(node, path, msg);
}

MaterialSpec parse_material(const YAML::Node& node, double* default_dt) {
  MaterialSpec spec;
  if (node.IsScalar()) {
    const auto& preset = [&]() -> const MaterialPreset& {
      try {
        return material_preset(node.as<std::string>());
      } catch (const ConfigError& e) {
        fail(node, "material", e.what());
      }
    }();
    spec.preset = preset.name;
    spec.params = preset.params;
    *default_dt = preset.default_dt;
    return spec;
  }
  Section m(node, "material",
            {"preset", "youngs_modulus", "poisson_ratio", "density", "elasticity", "plasticity", "friction_angle",
             "yield_stress", "stretch_clamp"});
  if (m.has("preset")) {
    try {
      const auto& preset = material_preset(m.string("preset", ""));
      spec.preset = preset.name;
      spec.params = preset.params;
      *default_dt = preset.default_dt;
    } catch (const ConfigError& e) {
      fail(m["preset"], m.path("preset"), e.what());
    }
  } else {
    require(m.has("youngs_modulus") && m.has("poisson_ratio"), node, "material",
            "inline material needs youngs_modulus and poisson_ratio (or a preset)");
  }
  auto& p = spec.params;
  p.youngs_modulus = m.number("youngs_modulus", p.youngs_modulus);
  p.poisson_ratio = m.number("poisson_ratio", p.poisson_ratio);
  p.density = m.number("density", p.density);
  if (m.has("elasticity")) {
    auto e = parse_elasticity(m.string("elasticity", ""));
    require(e.has_value(), m["elasticity"], m.path("elasticity"), "expected fixed_corotated or stvk");
    p.elasticity = *e;
  }
  if (m.has("plasticity")) {
    auto pl = parse_plasticity(m.string("plasticity", ""));
    require(pl.has_value(), m["plasticity"], m.path("plasticity"), "expected none, drucker_prager or von_mises");
    p.plasticity = *pl;
  }
  p.friction_angle_deg = m.number("friction_angle", p.friction_angle_deg);
  p.yield_stress = m.number("yield_stress", p.yield_stress);
  if (m.has("stretch_clamp")) {
    const auto n = m["stretch_clamp"];
    if (n.IsNull() || (n.IsScalar() && n.as<std::string>() == "none")) {
      p.stretch_clamp.reset();
    } else {
      require(n.IsSequence() && n.size() == 2, n, m.path("stretch_clamp"), "expected [min, max] or none");
      p.stretch_clamp = StretchClamp{Section::as_number(n[0], m.path("stretch_clamp") + "[0]"),
                                     Section::as_number(n[1], m.path("stretch_clamp") + "[1]")};
    }
  }
  try {
    p.derive_moduli();
    p.validate();
  } catch (const Error& e) {
    fail(node, "material", e.what());
  }
  return spec;
}

CameraSpec parse_camera(const YAML::Node& node, const std::string& path) {
  Section c(node, path, {"width", "height", "fov_y", "eye", "target", "up", "near"});
  CameraSpec cam;
  cam.width = c.integer("width", cam.width);
  cam.height = c.integer("height", cam.height);
  cam.fov_y_deg = c.number("fov_y", cam.fov_y_deg);
  if (c.has("eye")) cam.eye = c.vec3("eye", Vec3::Zero());
  if (c.has("target")) cam.target = c.vec3("target", Vec3::Zero());
  cam.up = c.vec3("up", cam.up);
  cam.near_clip = c.number("near", cam.near_clip);
  require(cam.width >= 1 && cam.height >= 1, node, path, "width and height must be >= 1");
  require(cam.fov_y_deg > 0.0 && cam.fov_y_deg < 180.0, node, c.path("fov_y"), "must lie in (0, 180)");
  require(cam.near_clip > 0.0, node, c.path("near"), "must be > 0");
  require(cam.up.norm() > 0.0, node, c.path("up"), "must be non-zero");
  return cam;
}

BoundaryCondition parse_boundary(const YAML::Node& node, const std::string& path) {
  Section b(node, path, {"kind", "point", "normal", "thickness"});
  require(b.has("kind"), node, path, "missing required key 'kind'");
  const auto kind = b.string("kind", "");
  BoundaryCondition bc;
  if (kind == "sticky_plane" || kind == "slip_plane") {
    bc.kind = kind == "sticky_plane" ? BoundaryCondition::Kind::StickyPlane : BoundaryCondition::Kind::SlipPlane;
    require(b.has("point") && b.has("normal"), node, path, "planes need 'point' and 'normal'");
    bc.point = b.vec3("point", Vec3::Zero());
    const Vec3 n = b.vec3("normal", Vec3::UnitY());
    require(n.norm() > 0.0, b["normal"], b.path("normal"), "must be non-zero");
    bc.normal = n.normalized();
    bc.thickness = b.number("thickness", 1.0);
  } else if (kind == "domain_walls") {
    require(!b.has("point") && !b.has("normal"), node, path, "domain_walls takes only 'thickness'");
    bc = BoundaryCondition::domain_walls(b.number("thickness", 3.0));
  } else {
    fail(b["kind"], b.path("kind"), "expected sticky_plane, slip_plane or domain_walls");
  }
  require(bc.thickness >= 0.0, node, b.path("thickness"), "must be >= 0");
  return bc;
}

Vec3 parse_background(const Section& s, const char* key, const Vec3& fallback) {
  const Vec3 bg = s.vec3(key, fallback);
  require((bg.array() >= 0.0).all() && (bg.array() <= 1.0).all(), s[key], s.path(key), "channels must lie in [0, 1]");
  return bg;
}

YAML::Node load_yaml(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ", column " + std::to_string(e.mark.column + 1) +
                      ": syntax error: " + e.msg);
  }
}

}  // namespace

SceneConfig parse_config(std::string_view text) {
  const YAML::Node root = load_yaml(text);
  Section top(root, "",
              {"input_ply", "material", "grid", "sim", "boundary", "camera", "initial_velocity", "external_force",
               "output"});
  SceneConfig cfg;

  require(top.has("input_ply"), root, "input_ply", "missing required key");
  cfg.input_ply = top.string("input_ply", "");
  require(!cfg.input_ply.empty(), top["input_ply"], "input_ply", "must not be empty");

  require(top.has("material"), root, "material", "missing required key");
  double default_dt = 1e-4;
  cfg.material = parse_material(top["material"], &default_dt);

  if (top.has("grid")) {
    Section g(top["grid"], "grid", {"resolution", "margin", "bounds"});
    cfg.grid.resolution = g.integer("resolution", cfg.grid.resolution);
    cfg.grid.margin = g.integer("margin", cfg.grid.margin);
    require(cfg.grid.resolution >= 4, g.node(), g.path("resolution"), "must be >= 4");
    require(cfg.grid.margin >= 3, g.node(), g.path("margin"), "must be >= 3 (stencil support)");
    if (g.has("bounds")) {
      Section b(g["bounds"], g.path("bounds"), {"min", "max"});
      require(b.has("min") && b.has("max"), b.node(), g.path("bounds"), "needs 'min' and 'max'");
      const Vec3 lo = b.vec3("min", Vec3::Zero()), hi = b.vec3("max", Vec3::Zero());
      require((hi.array() > lo.array()).all(), b.node(), g.path("bounds"), "max must exceed min on every axis");
      cfg.grid.bounds = std::make_pair(lo, hi);
    }
  }

  cfg.sim.dt = default_dt;
  if (top.has("sim")) {
    Section s(top["sim"], "sim", {"dt", "substeps_per_frame", "frame_count", "gravity", "cfl_policy"});
    cfg.sim.dt = s.number("dt", cfg.sim.dt);
    cfg.sim.substeps_per_frame = s.integer("substeps_per_frame", cfg.sim.substeps_per_frame);
    cfg.sim.frame_count = s.integer("frame_count", cfg.sim.frame_count);
    cfg.sim.gravity = s.vec3("gravity", cfg.sim.gravity);
    const auto policy = s.string("cfl_policy", "abort");
    require(policy == "abort" || policy == "clamp_dt", s.has("cfl_policy") ? s["cfl_policy"] : s.node(),
            s.path("cfl_policy"), "expected abort or clamp_dt");
    cfg.sim.cfl_policy = policy == "abort" ? CflPolicy::Abort : CflPolicy::ClampDt;
    require(cfg.sim.dt > 0.0 && std::isfinite(cfg.sim.dt), s.node(), s.path("dt"), "must be > 0");
    require(cfg.sim.substeps_per_frame >= 1, s.node(), s.path("substeps_per_frame"), "must be >= 1");
    require(cfg.sim.frame_count >= 1, s.node(), s.path("frame_count"), "must be >= 1");
  }

  if (top.has("boundary")) {
    const auto list = top["boundary"];
    require(list.IsSequence(), list, "boundary", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i)
      cfg.boundary.push_back(parse_boundary(list[i], "boundary[" + std::to_string(i) + "]"));
  } else {
    cfg.boundary.push_back(BoundaryCondition::domain_walls());
  }

  if (top.has("camera")) cfg.camera = parse_camera(top["camera"], "camera");

  if (top.has("initial_velocity")) {
    Section v(top["initial_velocity"], "initial_velocity", {"linear", "angular", "pivot"});
    InitialVelocity iv;
    iv.linear = v.vec3("linear", iv.linear);
    iv.angular = v.vec3("angular", iv.angular);
    iv.pivot = v.vec3("pivot", iv.pivot);
    cfg.initial_velocity = iv;
  }

  if (top.has("external_force")) {
    Section f(top["external_force"], "external_force", {"acceleration", "start_frame", "end_frame"});
    require(f.has("acceleration"), f.node(), "external_force", "missing required key 'acceleration'");
    ExternalForce ef;
    ef.acceleration = f.vec3("acceleration", ef.acceleration);
    ef.start_frame = f.integer("start_frame", 0);
    ef.end_frame = f.integer("end_frame", cfg.sim.frame_count);
    require(ef.start_frame >= 0 && ef.end_frame >= ef.start_frame, f.node(), "external_force",
            "need 0 <= start_frame <= end_frame");
    cfg.external_force = ef;
  }

  if (top.has("output")) {
    Section o(top["output"], "output", {"directory", "format", "background"});
    cfg.output.directory = o.string("directory", cfg.output.directory);
    const auto fmt = o.string("format", "png");
    require(fmt == "png" || fmt == "ppm", o.has("format") ? o["format"] : o.node(), o.path("format"),
            "expected png or ppm");
    cfg.output.format = fmt == "png" ? ImageFormat::Png : ImageFormat::Ppm;
    cfg.output.background = parse_background(o, "background", cfg.output.background);
  }
  return cfg;
}

SceneConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

void emit_vec3(YAML::Emitter& out, const Vec3& v) {
  out << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << v.z() << YAML::EndSeq;
}

}  // namespace

std::string serialize_config(const SceneConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "input_ply" << YAML::Value << YAML::DoubleQuoted << c.input_ply;

  const auto& p = c.material.params;
  out << YAML::Key << "material" << YAML::Value << YAML::BeginMap;
  if (!c.material.preset.empty()) out << YAML::Key << "preset" << YAML::Value << c.material.preset;
  out << YAML::Key << "youngs_modulus" << YAML::Value << p.youngs_modulus;
  out << YAML::Key << "poisson_ratio" << YAML::Value << p.poisson_ratio;
  out << YAML::Key << "density" << YAML::Value << p.density;
  out << YAML::Key << "elasticity" << YAML::Value << std::string(to_string(p.elasticity));
  out << YAML::Key << "plasticity" << YAML::Value << std::string(to_string(p.plasticity));
  out << YAML::Key << "friction_angle" << YAML::Value << p.friction_angle_deg;
  out << YAML::Key << "yield_stress" << YAML::Value << p.yield_stress;
  out << YAML::Key << "stretch_clamp" << YAML::Value;
  if (p.stretch_clamp)
    out << YAML::Flow << YAML::BeginSeq << p.stretch_clamp->min << p.stretch_clamp->max << YAML::EndSeq;
  else
    out << "none";
  out << YAML::EndMap;

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "resolution" << YAML::Value << c.grid.resolution;
  out << YAML::Key << "margin" << YAML::Value << c.grid.margin;
  if (c.grid.bounds) {
    out << YAML::Key << "bounds" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "min" << YAML::Value;
    emit_vec3(out, c.grid.bounds->first);
    out << YAML::Key << "max" << YAML::Value;
    emit_vec3(out, c.grid.bounds->second);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << c.sim.dt;
  out << YAML::Key << "substeps_per_frame" << YAML::Value << c.sim.substeps_per_frame;
  out << YAML::Key << "frame_count" << YAML::Value << c.sim.frame_count;
  out << YAML::Key << "gravity" << YAML::Value;
  emit_vec3(out, c.sim.gravity);
  out << YAML::Key << "cfl_policy" << YAML::Value << (c.sim.cfl_policy == CflPolicy::Abort ? "abort" : "clamp_dt");
  out << YAML::EndMap;

  out << YAML::Key << "boundary" << YAML::Value << YAML::BeginSeq;
  for (const auto& bc : c.boundary) {
    out << YAML::BeginMap;
    switch (bc.kind) {
      case BoundaryCondition::Kind::StickyPlane:
      case BoundaryCondition::Kind::SlipPlane:
        out << YAML::Key << "kind" << YAML::Value
            << (bc.kind == BoundaryCondition::Kind::StickyPlane ? "sticky_plane" : "slip_plane");
        out << YAML::Key << "point" << YAML::Value;
        emit_vec3(out, bc.point);
        out << YAML::Key << "normal" << YAML::Value;
        emit_vec3(out, bc.normal);
        break;
      case BoundaryCondition::Kind::DomainWalls:
        out << YAML::Key << "kind" << YAML::Value << "domain_walls";
        break;
    }
    out << YAML::Key << "thickness" << YAML::Value << bc.thickness;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "camera" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "width" << YAML::Value << c.camera.width;
  out << YAML::Key << "height" << YAML::Value << c.camera.height;
  out << YAML::Key << "fov_y" << YAML::Value << c.camera.fov_y_deg;
  if (c.camera.eye) {
    out << YAML::Key << "eye" << YAML::Value;
    emit_vec3(out, *c.camera.eye);
  }
  if (c.camera.target) {
    out << YAML::Key << "target" << YAML::Value;
    emit_vec3(out, *c.camera.target);
  }
  out << YAML::Key << "up" << YAML::Value;
  emit_vec3(out, c.camera.up);
  out << YAML::Key << "near" << YAML::Value << c.camera.near_clip;
  out << YAML::EndMap;

  if (c.initial_velocity) {
    out << YAML::Key << "initial_velocity" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "linear" << YAML::Value;
    emit_vec3(out, c.initial_velocity->linear);
    out << YAML::Key << "angular" << YAML::Value;
    emit_vec3(out, c.initial_velocity->angular);
    out << YAML::Key << "pivot" << YAML::Value;
    emit_vec3(out, c.initial_velocity->pivot);
    out << YAML::EndMap;
  }
  if (c.external_force) {
    out << YAML::Key << "external_force" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "acceleration" << YAML::Value;
    emit_vec3(out, c.external_force->acceleration);
    out << YAML::Key << "start_frame" << YAML::Value << c.external_force->start_frame;
    out << YAML::Key << "end_frame" << YAML::Value << c.external_force->end_frame;
    out << YAML::EndMap;
  }

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "directory" << YAML::Value << YAML::DoubleQuoted << c.output.directory;
  out << YAML::Key << "format" << YAML::Value << (c.output.format == ImageFormat::Png ? "png" : "ppm");
  out << YAML::Key << "background" << YAML::Value;
  emit_vec3(out, c.output.background);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

RenderSettings parse_render_settings(std::string_view text) {
  const YAML::Node root = load_yaml(text);
  Section top(root, "", {"camera", "background"});
  RenderSettings rs;
  if (top.has("camera")) rs.camera = parse_camera(top["camera"], "camera");
  rs.background = parse_background(top, "background", rs.background);
  return rs;
}

Camera resolve_camera(const CameraSpec& spec, const Vec3& lo, const Vec3& hi) {
  const Vec3 center = 0.5 * (lo + hi);
  const double radius = std::max(0.5 * (hi - lo).norm(), 1e-3);
  const Vec3 target = spec.target.value_or(center);
  // Default framing: back along +z and a little above, far enough that the
  // bounding sphere fits the vertical field of view.
  const double half_fov = 0.5 * spec.fov_y_deg * std::numbers::pi / 180.0;
  const double distance = 1.3 * radius / std::sin(half_fov);
  const Vec3 eye = spec.eye.value_or(target + distance * Vec3(0.0, 0.35, 1.0).normalized());
  auto cam = Camera::look_at(eye, target, spec.up, spec.fov_y_deg, spec.width, spec.height, spec.near_clip);
  cam.validate();
  return cam;
}

}  // namespace splatdyn
