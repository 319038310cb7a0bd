#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "splatdyn/boundary.hpp"
#include "splatdyn/grid.hpp"
#include "splatdyn/material.hpp"
#include "splatdyn/math.hpp"
#include "splatdyn/splat.hpp"

namespace splatdyn {

struct Particle {
  Vec3 x = Vec3::Zero();  // m
  Vec3 v = Vec3::Zero();  // m/s
  double mass = 0.0;      // kg
  double volume0 = 0.0;   // m^3
  Mat3 F = Mat3::Identity();  // elastic deformation gradient
  Mat3 A = Mat3::Zero();      // APIC affine velocity, 1/s
  std::uint32_t material_id = 0;
  std::uint32_t splat_index = 0;
};

// One particle per splat. Each particle gets V0 = dx^3 / n where n is the
// number of splats sharing its grid cell, and m = rho V0. Throws
// DomainError naming the first splat outside the lattice.
std::vector<Particle> seed_particles(const GaussianCloud& cloud, const MaterialParams& material,
                                     const Grid& grid, std::uint32_t material_id = 0);

enum class TransferMode {
  // Node-owned gather: every node sums its contributions in a fixed order,
  // bit-identical for any thread count.
  Deterministic,
  // Per-thread scatter buffers reduced in thread order. Reproducible for a
  // fixed thread count only.
  Fast,
};

enum class CflPolicy {
  Abort,    // throw CflError
  ClampDt,  // split the offending substep into 2^k halves until it passes
};

struct SimConfig {
  double dt = 1e-4;                  // s
  Vec3 gravity = Vec3(0, -9.8, 0);   // m/s^2
  int substeps_per_frame = 1;
  std::vector<BoundaryCondition> boundary;
  CflPolicy cfl_policy = CflPolicy::Abort;
  TransferMode transfer = TransferMode::Deterministic;
  int threads = 1;

  void validate() const;
};

// Explicit APIC material point stepper over a fixed lattice. Owns the
// particle state, the grid and the per-substep scratch.
class MpmEngine {
 public:
  MpmEngine(std::vector<Particle> particles, Grid grid, std::vector<MaterialParams> materials,
            SimConfig config);

  std::span<Particle> particles() noexcept { return particles_; }
  std::span<const Particle> particles() const noexcept { return particles_; }
  Grid& grid() noexcept { return grid_; }
  const Grid& grid() const noexcept { return grid_; }
  const std::vector<MaterialParams>& materials() const noexcept { return materials_; }
  const SimConfig& config() const noexcept { return config_; }
  long long substeps_taken() const noexcept { return substeps_; }

  // --- the transfer pipeline, exposed stage by stage ------------------------
  // Mass and APIC momentum to the (cleared) grid; node velocity = p / m.
  void particle_to_grid();
  // v <- v - dt/m sum_p V0 tau_p grad w + dt * body_acceleration on nodes
  // with mass. Needs particle_to_grid in the same substep. Throws
  // SimulationFault on a non-finite node velocity.
  void grid_update(double dt, const Vec3& body_acceleration);
  void apply_boundary();
  // Velocity, position, affine matrix, velocity gradient and F back to the
  // particles, then the plastic return map. Throws SimulationFault on an
  // inverted element.
  void grid_to_particle(double dt);

  // One substep with config().gravity.
  void step();
  // One substep with an explicit body acceleration (gravity plus any
  // external forcing).
  void step(const Vec3& body_acceleration);

  double total_particle_mass() const;
  Vec3 total_particle_momentum() const;
  double max_particle_speed() const;

 private:
  void substep(double dt, const Vec3& body_acceleration);
  void build_bins();
  template <typename Acc, typename Contribution>
  void transfer_to_nodes(std::vector<Acc>& out, Contribution&& contrib);

  std::vector<Particle> particles_;
  Grid grid_;
  std::vector<MaterialParams> materials_;
  SimConfig config_;
  long long substeps_ = 0;

  // Scratch valid between particle_to_grid and grid_to_particle.
  bool stencils_valid_ = false;
  std::vector<Stencil> stencils_;
  Index3 base_lo_{0, 0, 0};
  Index3 base_hi_{0, 0, 0};  // inclusive
  std::vector<std::uint32_t> bin_start_;
  std::vector<std::uint32_t> bin_particles_;
};

}  // namespace splatdyn
