#include <gtest/gtest.h>

#include <fstream>
#include <json.hpp>

#include "fixtures.hpp"
#include "splatdyn/driver.hpp"
#include "splatdyn/error.hpp"
#include "splatdyn/image_io.hpp"
#include "splatdyn/ply.hpp"

using namespace splatdyn;
using namespace splatdyn::testing;
namespace fs = std::filesystem;

namespace {

// Cube of side 0.3 resting 0.3 above a sticky ground at y = 0.
fs::path setup(const std::string& name, int n = 6) {
  const auto dir = scratch_dir(name);
  save_ply_file(cube_cloud(n, Vec3(-0.15, 0.3, -0.15), 0.3), dir / "cube.ply");
  return dir;
}

SceneConfig drop_config(int frames, int substeps) {
  return parse_config(
      "input_ply: cube.ply\n"
      "material: jelly\n"
      "grid: {resolution: 24, margin: 4, bounds: {min: [-0.4, 0, -0.4], max: [0.4, 0.8, 0.4]}}\n"
      "sim: {substeps_per_frame: " + std::to_string(substeps) + ", frame_count: " + std::to_string(frames) + "}\n"
      "boundary:\n  - {kind: sticky_plane, point: [0, 0, 0], normal: [0, 1, 0]}\n  - {kind: domain_walls}\n"
      "camera: {width: 48, height: 48, eye: [0, 0.5, 2.0], target: [0, 0.3, 0]}\n");
}

std::vector<std::uint8_t> bytes(const fs::path& p) { return read_file_bytes(p); }

}  // namespace

TEST(Driver, NoDynamicsFrameEqualsStaticRender) {
  const auto dir = setup("driver_static");
  auto c = drop_config(1, 1);
  c.sim.gravity = Vec3::Zero();
  RunOptions opt;
  opt.base_dir = dir;
  const auto report = run_simulation(c, opt);
  ASSERT_EQ(report.frames.size(), 1u);

  const auto cloud = load_ply_file(dir / "cube.ply");
  const auto [lo, hi] = cloud.bounds();
  const auto cam = resolve_camera(c.camera, lo, hi);
  write_image(render_static(cloud, cam, c.output.background, 1), dir / "direct.png");
  EXPECT_EQ(read_png(dir / "frames" / "frame_00000.png"), read_png(dir / "direct.png"));
}

TEST(Driver, JellyDropRisesThenSettles) {
  const auto dir = setup("driver_drop");
  RunOptions opt;
  opt.base_dir = dir;
  const auto report = run_simulation(drop_config(45, 25), opt);
  ASSERT_EQ(report.frames.size(), 45u);
  EXPECT_TRUE(report.nan_free());
  std::size_t peak = 0;
  for (std::size_t f = 0; f < report.frames.size(); ++f)
    if (report.frames[f].max_velocity > report.frames[peak].max_velocity) peak = f;
  EXPECT_GT(peak, 0u);
  EXPECT_LT(peak, report.frames.size() - 1);
  // Rising during free fall.
  for (std::size_t f = 1; f < std::min<std::size_t>(peak, 15); ++f)
    EXPECT_GT(report.frames[f].max_velocity, report.frames[f - 1].max_velocity) << f;
  EXPECT_LT(report.frames.back().max_velocity, 0.5 * report.frames[peak].max_velocity);
  for (const auto& f : report.frames) {
    EXPECT_TRUE(fs::exists(report.output_dir / f.file)) << f.file;
    EXPECT_EQ(f.particle_count, 216u);
  }

  std::ifstream in(report.output_dir / "report.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["frames"].size(), 45u);
  EXPECT_EQ(j["nan_free"], true);
}

TEST(Driver, DeterministicRunsAreBitIdentical) {
  const auto dir = setup("driver_det");
  const auto c = drop_config(4, 10);
  RunOptions a, b;
  a.base_dir = b.base_dir = dir;
  a.output_dir = dir / "a";
  b.output_dir = dir / "b";
  a.threads = 1;
  b.threads = 3;
  run_simulation(c, a);
  run_simulation(c, b);
  for (int f = 0; f < 4; ++f) {
    const auto name = "frame_0000" + std::to_string(f) + ".png";
    EXPECT_EQ(bytes(dir / "a" / name), bytes(dir / "b" / name)) << name;
  }
}

TEST(Driver, ExternalForceWindow) {
  const auto dir = setup("driver_force");
  auto c = drop_config(3, 5);
  c.sim.gravity = Vec3::Zero();
  c.external_force = ExternalForce{Vec3(1, 0, 0), 1, 2};
  RunOptions opt;
  opt.base_dir = dir;
  const auto r = run_simulation(c, opt);
  EXPECT_EQ(r.frames[0].max_velocity, 0.0);
  EXPECT_GT(r.frames[1].max_velocity, 0.0);
  EXPECT_NEAR(r.frames[2].max_velocity, r.frames[1].max_velocity, 0.2 * r.frames[1].max_velocity);
}

TEST(Driver, FaultCarriesFrameAndSubstep) {
  const auto dir = setup("driver_fault");
  auto c = drop_config(3, 4);
  c.initial_velocity = InitialVelocity{Vec3(0, 0, 0), Vec3::Zero(), Vec3::Zero()};
  c.external_force = ExternalForce{Vec3(0, 0, 1e6), 1, 3};
  RunOptions opt;
  opt.base_dir = dir;
  try {
    run_simulation(c, opt);
    FAIL();
  } catch (const FrameFault& e) {
    EXPECT_EQ(e.frame(), 1);
    EXPECT_NE(std::string(e.what()).find("frame 1, substep"), std::string::npos) << e.what();
  }
  std::ifstream in(dir / "frames" / "report.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["status"], "fault");
  EXPECT_EQ(j["frames"].size(), 1u);
}

TEST(Driver, OutsideSplatIsDomainError) {
  const auto dir = setup("driver_domain");
  auto c = drop_config(1, 1);
  c.grid.bounds = std::make_pair(Vec3(0.5, 0.5, 0.5), Vec3(1, 1, 1));
  c.grid.margin = 3;
  RunOptions opt;
  opt.base_dir = dir;
  EXPECT_THROW(run_simulation(c, opt), DomainError);
}

TEST(Driver, MissingInputIsIoError) {
  const auto dir = scratch_dir("driver_missing");
  RunOptions opt;
  opt.base_dir = dir;
  EXPECT_THROW(run_simulation(drop_config(1, 1), opt), IoError);
}
