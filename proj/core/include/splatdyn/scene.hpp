#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "splatdyn/boundary.hpp"
#include "splatdyn/camera.hpp"
#include "splatdyn/engine.hpp"
#include "splatdyn/image_io.hpp"
#include "splatdyn/material.hpp"
#include "splatdyn/math.hpp"

namespace splatdyn {

struct MaterialSpec {
  std::string preset;  // empty for a fully inline material
  MaterialParams params;
  bool operator==(const MaterialSpec&) const = default;
};

struct GridSpec {
  int resolution = 64;  // cells along the longest axis
  int margin = 4;       // cells of padding when fitted to the cloud
  std::optional<std::pair<Vec3, Vec3>> bounds;
  bool operator==(const GridSpec&) const = default;
};

struct SimSettings {
  double dt = 1e-4;
  int substeps_per_frame = 20;
  int frame_count = 30;
  Vec3 gravity = Vec3(0, -9.8, 0);
  CflPolicy cfl_policy = CflPolicy::Abort;
  bool operator==(const SimSettings&) const = default;
};

struct CameraSpec {
  int width = 256;
  int height = 256;
  double fov_y_deg = 50.0;
  std::optional<Vec3> eye;     // default: framed from the cloud bounds
  std::optional<Vec3> target;  // default: cloud bounds center
  Vec3 up = Vec3::UnitY();
  double near_clip = 0.01;
  bool operator==(const CameraSpec&) const = default;
};

struct InitialVelocity {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();  // rad/s about `pivot`
  Vec3 pivot = Vec3::Zero();
  bool operator==(const InitialVelocity&) const = default;
};

// Constant body acceleration applied on frames [start_frame, end_frame).
struct ExternalForce {
  Vec3 acceleration = Vec3::Zero();
  int start_frame = 0;
  int end_frame = 0;
  bool operator==(const ExternalForce&) const = default;
};

struct OutputSpec {
  std::string directory = "frames";
  ImageFormat format = ImageFormat::Png;
  Vec3 background = Vec3::Zero();
  bool operator==(const OutputSpec&) const = default;
};

struct SceneConfig {
  std::string input_ply;
  MaterialSpec material;
  GridSpec grid;
  SimSettings sim;
  std::vector<BoundaryCondition> boundary;
  CameraSpec camera;
  std::optional<InitialVelocity> initial_velocity;
  std::optional<ExternalForce> external_force;
  OutputSpec output;
  bool operator==(const SceneConfig&) const = default;
};

// Parses the YAML scene format described in docs/config.md. Presets are
// expanded and defaults filled. Throws ConfigError with line/column for
// syntax errors and with the key path for unknown keys and constraint
// violations.
SceneConfig parse_config(std::string_view text);
SceneConfig load_config_file(const std::filesystem::path& path);

// Fully explicit YAML; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SceneConfig& config);

// Camera file for single-frame renders: the `camera` block plus
// `background`.
struct RenderSettings {
  CameraSpec camera;
  Vec3 background = Vec3::Zero();
};
RenderSettings parse_render_settings(std::string_view text);

// Resolves the camera against the cloud bounds (used for eye/target
// defaults).
Camera resolve_camera(const CameraSpec& spec, const Vec3& bounds_lo, const Vec3& bounds_hi);

}  // namespace splatdyn
