#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "splatdyn/engine.hpp"
#include "splatdyn/error.hpp"
#include "splatdyn/presets.hpp"

using namespace splatdyn;
using splatdyn::testing::uniform_vec;

namespace {

Grid unit_grid(int n) { return Grid({n + 1, n + 1, n + 1}, 1.0 / n, Vec3::Zero()); }

std::vector<Particle> random_particles(std::mt19937_64& rng, int count, double lo, double hi, double dx) {
  std::vector<Particle> ps(count);
  for (int i = 0; i < count; ++i) {
    auto& p = ps[i];
    p.x = uniform_vec(rng, lo, hi);
    p.v = uniform_vec(rng, -1.0, 1.0);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) p.A(r, c) = splatdyn::testing::uniform(rng, -2.0, 2.0);
    p.volume0 = dx * dx * dx / 8.0;
    p.mass = 1000.0 * p.volume0 * splatdyn::testing::uniform(rng, 0.5, 1.5);
    p.splat_index = static_cast<std::uint32_t>(i);
  }
  return ps;
}

SimConfig free_config(double dt, TransferMode mode = TransferMode::Deterministic, int threads = 1) {
  SimConfig c;
  c.dt = dt;
  c.gravity = Vec3::Zero();
  c.transfer = mode;
  c.threads = threads;
  return c;
}

double rel(const Vec3& a, const Vec3& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST(Seed, VolumeSharedPerCell) {
  GaussianCloud cloud;
  cloud.splats.resize(3);
  cloud.splats[0].position = Vec3(0.51, 0.51, 0.51);
  cloud.splats[1].position = Vec3(0.52, 0.52, 0.52);
  cloud.splats[2].position = Vec3(0.3, 0.3, 0.3);
  const Grid g = unit_grid(10);
  const auto mat = material_preset("jelly").params;
  const auto ps = seed_particles(cloud, mat, g);
  EXPECT_NEAR(ps[0].volume0, 1e-3 / 2, 1e-18);
  EXPECT_NEAR(ps[2].volume0, 1e-3, 1e-18);
  EXPECT_NEAR(ps[2].mass, 1000.0 * 1e-3, 1e-15);
  EXPECT_EQ(ps[1].splat_index, 1u);
  EXPECT_EQ(ps[1].F, Mat3::Identity());
}

TEST(Seed, OutsideGridNamesSplat) {
  GaussianCloud cloud;
  cloud.splats.resize(2);
  cloud.splats[1].position = Vec3(5, 0, 0);
  try {
    seed_particles(cloud, material_preset("jelly").params, unit_grid(4));
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.splat_index(), 1u);
  }
}

TEST(Transfer, P2GConservesMassAndMomentum) {
  std::mt19937_64 rng(2);
  const Grid g = unit_grid(32);
  auto ps = random_particles(rng, 5000, 0.2, 0.8, g.spacing());
  MpmEngine e(ps, g, {material_preset("jelly").params}, free_config(1e-4));
  e.particle_to_grid();
  EXPECT_LE(std::abs(e.grid().total_mass() - e.total_particle_mass()) / e.total_particle_mass(), 1e-12);
  EXPECT_LE(rel(e.grid().total_momentum(), e.total_particle_momentum()), 1e-10);
}

TEST(Transfer, FullStepConservesMomentumWithoutGravity) {
  std::mt19937_64 rng(3);
  const Grid g = unit_grid(32);
  auto ps = random_particles(rng, 5000, 0.2, 0.8, g.spacing());
  MpmEngine e(ps, g, {material_preset("jelly").params}, free_config(1e-4));
  const Vec3 before = e.total_particle_momentum();
  e.step();
  EXPECT_LE(rel(e.total_particle_momentum(), before), 1e-8);
}

TEST(Transfer, DeterministicModeIndependentOfThreads) {
  std::mt19937_64 rng(4);
  const Grid g = unit_grid(24);
  auto ps = random_particles(rng, 2000, 0.25, 0.75, g.spacing());
  MpmEngine one(ps, g, {material_preset("jelly").params}, free_config(1e-4, TransferMode::Deterministic, 1));
  MpmEngine four(ps, g, {material_preset("jelly").params}, free_config(1e-4, TransferMode::Deterministic, 4));
  for (int s = 0; s < 3; ++s) {
    one.step();
    four.step();
  }
  for (std::size_t p = 0; p < ps.size(); ++p) {
    ASSERT_EQ(one.particles()[p].x, four.particles()[p].x);
    ASSERT_EQ(one.particles()[p].F, four.particles()[p].F);
  }
}

TEST(Transfer, FastModeAgreesClosely) {
  std::mt19937_64 rng(5);
  const Grid g = unit_grid(24);
  auto ps = random_particles(rng, 2000, 0.25, 0.75, g.spacing());
  MpmEngine det(ps, g, {material_preset("jelly").params}, free_config(1e-4));
  MpmEngine fast(ps, g, {material_preset("jelly").params}, free_config(1e-4, TransferMode::Fast, 3));
  det.step();
  fast.step();
  for (std::size_t p = 0; p < ps.size(); ++p)
    ASSERT_LT((det.particles()[p].v - fast.particles()[p].v).norm(), 1e-9);
}

TEST(Dynamics, FreeFallMatchesSymplecticEuler) {
  const Grid g({9, 41, 9}, 0.05, Vec3::Zero());
  Particle p;
  p.x = Vec3(0.2, 1.5, 0.2);
  p.v = Vec3(0.01, 0.0, -0.02);
  p.mass = 1.0;
  p.volume0 = 1e-3;
  SimConfig c = free_config(1e-4);
  c.gravity = Vec3(0, -9.8, 0);
  MpmEngine e({p}, g, {material_preset("jelly").params}, c);
  for (int n = 1; n <= 1000; ++n) {
    e.step();
    if (n % 100 == 0) {
      const auto ref = oracle::free_fall(p.x, p.v, c.gravity, c.dt, n);
      ASSERT_LE((e.particles()[0].x - ref.x).norm(), 1e-8) << "step " << n;
      ASSERT_LE((e.particles()[0].v - ref.v).norm(), 1e-8) << "step " << n;
    }
  }
}

TEST(Dynamics, RigidTranslationIsFixedPoint) {
  const Grid g = unit_grid(32);
  std::vector<Particle> ps;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) {
        Particle p;
        p.x = Vec3(0.4, 0.4, 0.4) + 0.02 * Vec3(i, j, k);
        p.v = Vec3(0.3, -0.2, 0.1);
        p.mass = 1e-3;
        p.volume0 = 1e-6;
        ps.push_back(p);
      }
  MpmEngine e(ps, g, {material_preset("elastic").params}, free_config(1e-4));
  for (int s = 0; s < 10; ++s) {
    std::vector<Vec3> before;
    for (const auto& p : e.particles()) before.push_back(p.v);
    e.step();
    for (std::size_t i = 0; i < before.size(); ++i) ASSERT_LE((e.particles()[i].v - before[i]).norm(), 1e-12);
  }
}

TEST(Dynamics, GridUpdateBeforeP2GIsLogicError) {
  MpmEngine e({}, unit_grid(8), {material_preset("jelly").params}, free_config(1e-4));
  EXPECT_THROW(e.grid_update(1e-4, Vec3::Zero()), std::logic_error);
}

TEST(Dynamics, CflAbortAndClamp) {
  const Grid g = unit_grid(16);
  Particle p;
  p.x = Vec3(0.5, 0.5, 0.5);
  p.v = Vec3(100.0, 0, 0);
  p.mass = 1e-3;
  p.volume0 = 1e-6;
  SimConfig c = free_config(1e-3);
  MpmEngine abort_engine({p}, g, {material_preset("jelly").params}, c);
  EXPECT_THROW(abort_engine.step(), CflError);
  c.cfl_policy = CflPolicy::ClampDt;
  MpmEngine clamp_engine({p}, g, {material_preset("jelly").params}, c);
  clamp_engine.step();
  EXPECT_EQ(clamp_engine.substeps_taken(), 2);
  EXPECT_NEAR(clamp_engine.particles()[0].x.x(), 0.5 + 0.1, 1e-9);
}

TEST(Dynamics, LeavingGridIsFault) {
  const Grid g = unit_grid(8);
  Particle p;
  p.x = Vec3(0.5, 0.5, 0.5);
  p.v = Vec3(0, -10, 0);
  p.mass = 1e-3;
  p.volume0 = 1e-6;
  MpmEngine e({p}, g, {material_preset("jelly").params}, free_config(1e-2 * 0.9));
  try {
    for (int s = 0; s < 100; ++s) e.step();
    FAIL();
  } catch (const SimulationFault& f) {
    EXPECT_EQ(f.particle(), 0);
    EXPECT_GT(f.substep(), 0);
  }
}

TEST(Dynamics, StickyGroundStopsFall) {
  const auto cloud = splatdyn::testing::cube_cloud(5, Vec3(0.35, 0.2, 0.35), 0.3);
  const Grid g = unit_grid(24);
  SimConfig c;
  c.dt = 2e-4;
  c.boundary = {BoundaryCondition::sticky_plane(Vec3(0, 0.1, 0), Vec3::UnitY())};
  MpmEngine e(seed_particles(cloud, material_preset("jelly").params, g), g, {material_preset("jelly").params}, c);
  for (int s = 0; s < 2000; ++s) e.step();
  for (const auto& p : e.particles()) EXPECT_GT(p.x.y(), 0.1 - g.spacing());
}
