#include "splatdyn/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <system_error>

#include <json.hpp>

#include "splatdyn/deform.hpp"
#include "splatdyn/error.hpp"
#include "splatdyn/image_io.hpp"
#include "splatdyn/ply.hpp"

namespace splatdyn {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  return p.is_absolute() ? p : base / p;
}

Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return m;
}

std::string frame_name(int frame, ImageFormat format) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05d.%s", frame, format == ImageFormat::Png ? "png" : "ppm");
  return buf;
}

bool particles_finite(std::span<const Particle> particles) {
  for (const auto& p : particles)
    if (!p.x.allFinite() || !p.v.allFinite() || !p.F.allFinite()) return false;
  return true;
}

void write_report(const FrameReport& report) {
  const auto path = report.output_dir / "report.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << report_to_json(report);
  out.flush();
  if (!out) throw IoError("cannot write '" + path.string() + "': " + std::error_code(errno, std::generic_category()).message());
}

}  // namespace

bool FrameReport::nan_free() const {
  for (const auto& f : frames)
    if (!f.nan_free) return false;
  return true;
}

std::string report_to_json(const FrameReport& report) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["status"] = report.error.empty() ? "ok" : "fault";
  if (!report.error.empty()) j["error"] = report.error;
  j["deterministic"] = report.deterministic;
  j["threads"] = report.threads;
  j["frame_count"] = report.frames.size();
  j["substeps"] = report.substeps;
  j["total_wall_seconds"] = report.total_wall_seconds;
  j["nan_free"] = report.nan_free();
  auto frames = nlohmann::ordered_json::array();
  for (const auto& f : report.frames) {
    nlohmann::ordered_json e;
    e["frame"] = f.frame;
    e["file"] = f.file;
    e["wall_seconds"] = f.wall_seconds;
    e["particle_count"] = f.particle_count;
    e["max_velocity"] = std::isfinite(f.max_velocity) ? nlohmann::ordered_json(f.max_velocity) : nullptr;
    e["nan_free"] = f.nan_free;
    frames.push_back(std::move(e));
  }
  j["frames"] = std::move(frames);
  return j.dump(2) + "\n";
}

PreparedScene prepare_scene(const SceneConfig& config, const RunOptions& options) {
  auto cloud = load_ply_file(resolve(options.base_dir, config.input_ply));
  if (cloud.count() == 0) throw ConfigError("input_ply: cloud has no splats");
  const auto [lo, hi] = cloud.bounds();

  Grid grid = config.grid.bounds ? Grid::fit(config.grid.bounds->first, config.grid.bounds->second,
                                             config.grid.resolution, config.grid.margin)
                                 : Grid::fit(lo, hi, config.grid.resolution, config.grid.margin);

  auto particles = seed_particles(cloud, config.material.params, grid);
  if (config.initial_velocity) {
    const auto& iv = *config.initial_velocity;
    const Mat3 A = skew(iv.angular);
    for (auto& p : particles) {
      p.v = iv.linear + iv.angular.cross(p.x - iv.pivot);
      p.A = A;
    }
  }

  SimConfig sim;
  sim.dt = config.sim.dt;
  sim.gravity = config.sim.gravity;
  sim.substeps_per_frame = config.sim.substeps_per_frame;
  sim.boundary = config.boundary;
  sim.cfl_policy = config.sim.cfl_policy;
  sim.transfer = options.deterministic ? TransferMode::Deterministic : TransferMode::Fast;
  sim.threads = options.threads;

  Camera camera = resolve_camera(config.camera, lo, hi);
  MpmEngine engine(std::move(particles), std::move(grid), {config.material.params}, std::move(sim));
  return PreparedScene{std::move(cloud), camera, std::move(engine)};
}

Image render_particles(std::span<const Particle> particles, const GaussianCloud& cloud, const Camera& camera,
                       const Vec3& background, int threads) {
  const auto snap = snapshot_from_eye(particles, cloud, camera.center());
  return rasterize(project(snap, camera), camera, background, threads);
}

Image render_static(const GaussianCloud& cloud, const Camera& camera, const Vec3& background, int threads) {
  const auto snap = static_snapshot(cloud, camera.center());
  return rasterize(project(snap, camera), camera, background, threads);
}

FrameReport run_simulation(const SceneConfig& config, const RunOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto run_start = Clock::now();

  FrameReport report;
  report.deterministic = options.deterministic;
  report.threads = options.threads;
  report.output_dir = options.output_dir ? *options.output_dir : resolve(options.base_dir, config.output.directory);
  std::error_code ec;
  std::filesystem::create_directories(report.output_dir, ec);
  if (ec) throw IoError("cannot create '" + report.output_dir.string() + "': " + ec.message());

  auto scene = prepare_scene(config, options);
  auto& engine = scene.engine;

  int frame = 0, sub = 0;
  try {
    for (frame = 0; frame < config.sim.frame_count; ++frame) {
      const auto t0 = Clock::now();
      Vec3 accel = config.sim.gravity;
      if (config.external_force && frame >= config.external_force->start_frame &&
          frame < config.external_force->end_frame)
        accel += config.external_force->acceleration;

      for (sub = 0; sub < config.sim.substeps_per_frame; ++sub) engine.step(accel);
      sub = -1;

      FrameStats stats;
      stats.frame = frame;
      stats.file = frame_name(frame, config.output.format);
      stats.particle_count = engine.particles().size();
      stats.max_velocity = engine.max_particle_speed();
      stats.nan_free = particles_finite(engine.particles());
      if (!stats.nan_free) {
        report.frames.push_back(stats);
        throw SimulationFault("non-finite particle state", engine.substeps_taken());
      }
      const Image img = render_particles(engine.particles(), scene.cloud, scene.camera, config.output.background,
                                         options.threads);
      write_image(img, report.output_dir / stats.file);
      stats.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
      report.frames.push_back(stats);
      if (options.log)
        *options.log << "frame " << frame << "/" << config.sim.frame_count << "  max|v| " << stats.max_velocity
                     << " m/s  " << stats.wall_seconds << " s\n";
    }
  } catch (const SimulationFault& e) {
    report.substeps = engine.substeps_taken();
    report.total_wall_seconds = std::chrono::duration<double>(Clock::now() - run_start).count();
    const FrameFault fault(e.what(), frame, sub < 0 ? config.sim.substeps_per_frame - 1 : sub, e.particle());
    report.error = fault.what();
    write_report(report);
    throw fault;
  } catch (const NumericError& e) {
    report.substeps = engine.substeps_taken();
    const FrameFault fault(e.what(), frame, sub < 0 ? config.sim.substeps_per_frame - 1 : sub);
    report.error = fault.what();
    write_report(report);
    throw fault;
  }
  report.substeps = engine.substeps_taken();
  report.total_wall_seconds = std::chrono::duration<double>(Clock::now() - run_start).count();
  write_report(report);
  return report;
}

}  // namespace splatdyn
