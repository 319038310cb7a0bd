#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "splatdyn/camera.hpp"
#include "splatdyn/engine.hpp"
#include "splatdyn/render.hpp"
#include "splatdyn/scene.hpp"
#include "splatdyn/splat.hpp"

namespace splatdyn {

struct RunOptions {
  // Relative input_ply and output.directory resolve against this.
  std::filesystem::path base_dir = ".";
  int threads = 1;
  bool deterministic = true;
  std::optional<std::filesystem::path> output_dir;  // overrides output.directory
  std::ostream* log = nullptr;                      // one progress line per frame
};

struct FrameStats {
  int frame = 0;
  std::string file;
  double wall_seconds = 0.0;
  std::size_t particle_count = 0;
  double max_velocity = 0.0;
  bool nan_free = true;
};

struct FrameReport {
  std::filesystem::path output_dir;
  std::vector<FrameStats> frames;
  double total_wall_seconds = 0.0;
  long long substeps = 0;
  bool deterministic = true;
  int threads = 1;
  std::string error;  // empty on success

  bool nan_free() const;
};

// report.json contents (schema in docs/formats.md).
std::string report_to_json(const FrameReport& report);

// Everything the driver derives from a config before the first step.
struct PreparedScene {
  GaussianCloud cloud;
  Camera camera;
  MpmEngine engine;
};

PreparedScene prepare_scene(const SceneConfig& config, const RunOptions& options);

// Renders the cloud as currently deformed by `particles`.
Image render_particles(std::span<const Particle> particles, const GaussianCloud& cloud, const Camera& camera,
                       const Vec3& background, int threads);
// Renders the undeformed cloud.
Image render_static(const GaussianCloud& cloud, const Camera& camera, const Vec3& background, int threads);

// Runs every frame, writes frame_%05d.<ext> plus report.json into the
// output directory and returns the report. Engine faults are rethrown as
// FrameFault after the partial report has been written.
FrameReport run_simulation(const SceneConfig& config, const RunOptions& options = {});

}  // namespace splatdyn
