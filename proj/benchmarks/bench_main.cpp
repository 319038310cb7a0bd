#include <benchmark/benchmark.h>

#include <random>

#include "splatdyn/engine.hpp"
#include "splatdyn/parallel.hpp"
#include "splatdyn/presets.hpp"
#include "splatdyn/render.hpp"
#include "splatdyn/svd.hpp"

using namespace splatdyn;

namespace {

std::vector<Particle> block(int side, double lo, double extent) {
  std::vector<Particle> ps;
  const double h = extent / side;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      for (int k = 0; k < side; ++k) {
        Particle p;
        p.x = Vec3::Constant(lo) + h * Vec3(i + 0.5, j + 0.5, k + 0.5);
        p.volume0 = h * h * h;
        p.mass = 1000 * p.volume0;
        ps.push_back(p);
      }
  return ps;
}

MpmEngine make_engine(int side, TransferMode mode, int threads) {
  SimConfig cfg;
  cfg.dt = 1e-4;
  cfg.transfer = mode;
  cfg.threads = threads;
  cfg.boundary = {BoundaryCondition::domain_walls(3)};
  return MpmEngine(block(side, 0.3, 0.4), Grid({65, 65, 65}, 1.0 / 64, Vec3::Zero()),
                   {material_preset("jelly").params}, cfg);
}

void BM_Substep(benchmark::State& state) {
  const auto mode = state.range(1) ? TransferMode::Fast : TransferMode::Deterministic;
  auto e = make_engine(static_cast<int>(state.range(0)), mode, hardware_threads());
  for (auto _ : state) e.step();
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(e.particles().size()));
}
BENCHMARK(BM_Substep)->ArgsProduct({{16, 24}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ParticleToGrid(benchmark::State& state) {
  auto e = make_engine(static_cast<int>(state.range(0)), TransferMode::Deterministic, 1);
  for (auto _ : state) {
    e.grid().clear();
    e.particle_to_grid();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(e.particles().size()));
}
BENCHMARK(BM_ParticleToGrid)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Rasterize(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  Camera cam;
  cam.width = cam.height = 256;
  cam.fx = cam.fy = 200;
  cam.cx = cam.cy = 128;
  DeformedSnapshot snap;
  for (long i = 0; i < state.range(0); ++i) {
    snap.positions.emplace_back(2 * u(rng) - 1, 2 * u(rng) - 1, 3 + 2 * u(rng));
    const double s = 0.01 + 0.05 * u(rng);
    snap.covariances.push_back(s * s * Mat3::Identity());
    snap.opacities.push_back(0.2 + 0.7 * u(rng));
    snap.colors.emplace_back(u(rng), u(rng), u(rng));
  }
  const auto splats = project(snap, cam);
  for (auto _ : state) benchmark::DoNotOptimize(rasterize(splats, cam, Vec3::Zero(), hardware_threads()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rasterize)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_PolarSvd(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0, 0.3);
  std::vector<Mat3> Fs(1024);
  for (auto& F : Fs) {
    F = Mat3::Identity();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) F(r, c) += n(rng);
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(polar_svd3(Fs[i++ & 1023]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PolarSvd);

}  // namespace
BENCHMARK_MAIN();
