#include "splatdyn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <unordered_map>

#include "splatdyn/constitutive.hpp"
#include "splatdyn/error.hpp"
#include "splatdyn/parallel.hpp"

namespace splatdyn {
namespace {

struct MassMomentum {
  double mass = 0.0;
  Vec3 momentum = Vec3::Zero();
  MassMomentum& operator+=(const MassMomentum& o) {
    mass += o.mass;
    momentum += o.momentum;
    return *this;
  }
};

template <typename T>
T zero() {
  if constexpr (std::is_same_v<T, Vec3>)
    return Vec3::Zero();
  else
    return T{};
}

}  // namespace

std::vector<Particle> seed_particles(const GaussianCloud& cloud, const MaterialParams& material,
                                     const Grid& grid, std::uint32_t material_id) {
  const double dx = grid.spacing();
  const auto& dims = grid.dims();
  std::vector<std::size_t> cell_of(cloud.count());
  std::unordered_map<std::size_t, std::uint32_t> occupancy;
  for (std::size_t i = 0; i < cloud.count(); ++i) {
    const Vec3& x = cloud.splats[i].position;
    if (!x.allFinite() || !grid.contains(x)) throw DomainError(i, "position lies outside the simulation grid");
    Index3 c{};
    for (int a = 0; a < 3; ++a)
      c[a] = std::clamp(static_cast<int>(std::floor((x[a] - grid.origin()[a]) / dx)), 0, dims[a] - 2);
    cell_of[i] = grid.index(c);
    ++occupancy[cell_of[i]];
  }

  std::vector<Particle> out(cloud.count());
  const double cell_volume = dx * dx * dx;
  for (std::size_t i = 0; i < cloud.count(); ++i) {
    Particle& p = out[i];
    p.x = cloud.splats[i].position;
    p.volume0 = cell_volume / occupancy[cell_of[i]];
    p.mass = material.density * p.volume0;
    p.material_id = material_id;
    p.splat_index = static_cast<std::uint32_t>(i);
  }
  return out;
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sim.dt must be > 0");
  if (substeps_per_frame < 1) throw ConfigError("sim.substeps_per_frame must be >= 1");
  if (!gravity.allFinite()) throw ConfigError("sim.gravity must be finite");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  for (const auto& bc : boundary) bc.validate();
}

MpmEngine::MpmEngine(std::vector<Particle> particles, Grid grid, std::vector<MaterialParams> materials,
                     SimConfig config)
    : particles_(std::move(particles)),
      grid_(std::move(grid)),
      materials_(std::move(materials)),
      config_(std::move(config)) {
  config_.validate();
  for (const auto& m : materials_) m.validate();
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    const auto& p = particles_[i];
    if (p.material_id >= materials_.size())
      throw ConfigError("particle " + std::to_string(i) + " references an unknown material");
    if (!(p.mass > 0.0) || !(p.volume0 > 0.0))
      throw ConfigError("particle " + std::to_string(i) + " needs positive mass and volume");
  }
}

void MpmEngine::build_bins() {
  const std::size_t n = particles_.size();
  stencils_.resize(n);
  parallel_for(n, config_.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      try {
        stencils_[p] = bspline_stencil(particles_[p].x, grid_);
      } catch (const StencilError& e) {
        throw SimulationFault(std::string("particle left the grid: ") + e.what(), substeps_,
                              static_cast<long long>(p));
      }
    }
  });

  if (n == 0) {
    base_lo_ = {0, 0, 0};
    base_hi_ = {-1, -1, -1};
    bin_start_.assign(1, 0);
    bin_particles_.clear();
    grid_.set_active_box({0, 0, 0}, {0, 0, 0});
    stencils_valid_ = true;
    return;
  }

  base_lo_ = stencils_[0].base;
  base_hi_ = stencils_[0].base;
  for (const auto& s : stencils_)
    for (int a = 0; a < 3; ++a) {
      base_lo_[a] = std::min(base_lo_[a], s.base[a]);
      base_hi_[a] = std::max(base_hi_[a], s.base[a]);
    }
  const Index3 bd{base_hi_[0] - base_lo_[0] + 1, base_hi_[1] - base_lo_[1] + 1, base_hi_[2] - base_lo_[2] + 1};
  const std::size_t bins = static_cast<std::size_t>(bd[0]) * bd[1] * bd[2];
  auto bin_of = [&](const Index3& b) {
    return (static_cast<std::size_t>(b[0] - base_lo_[0]) * bd[1] + static_cast<std::size_t>(b[1] - base_lo_[1])) *
               bd[2] +
           static_cast<std::size_t>(b[2] - base_lo_[2]);
  };

  // Counting sort keeps particle-index order inside each bin.
  bin_start_.assign(bins + 1, 0);
  for (const auto& s : stencils_) ++bin_start_[bin_of(s.base) + 1];
  for (std::size_t b = 0; b < bins; ++b) bin_start_[b + 1] += bin_start_[b];
  bin_particles_.resize(n);
  std::vector<std::uint32_t> cursor(bin_start_.begin(), bin_start_.end() - 1);
  for (std::size_t p = 0; p < n; ++p) bin_particles_[cursor[bin_of(stencils_[p].base)]++] = static_cast<std::uint32_t>(p);

  grid_.set_active_box(base_lo_, {base_hi_[0] + 3, base_hi_[1] + 3, base_hi_[2] + 3});
  stencils_valid_ = true;
}

template <typename Acc, typename Contribution>
void MpmEngine::transfer_to_nodes(std::vector<Acc>& out, Contribution&& contrib) {
  const Index3& lo = grid_.active_lo();
  const Index3& hi = grid_.active_hi();
  const Index3 nd{hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]};
  const std::size_t box = static_cast<std::size_t>(std::max(nd[0], 0)) * std::max(nd[1], 0) * std::max(nd[2], 0);
  out.assign(box, zero<Acc>());
  if (box == 0) return;
  auto local = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(i - lo[0]) * nd[1] + static_cast<std::size_t>(j - lo[1])) * nd[2] +
           static_cast<std::size_t>(k - lo[2]);
  };

  if (config_.transfer == TransferMode::Deterministic) {
    const Index3 bd{base_hi_[0] - base_lo_[0] + 1, base_hi_[1] - base_lo_[1] + 1, base_hi_[2] - base_lo_[2] + 1};
    parallel_for(static_cast<std::size_t>(nd[0]), config_.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t li = begin; li < end; ++li) {
        const int i = lo[0] + static_cast<int>(li);
        for (int j = lo[1]; j < hi[1]; ++j)
          for (int k = lo[2]; k < hi[2]; ++k) {
            const Vec3 xn = grid_.node_position(i, j, k);
            Acc acc = zero<Acc>();
            for (int a = 0; a < 3; ++a) {
              const int bx = i - a;
              if (bx < base_lo_[0] || bx > base_hi_[0]) continue;
              for (int b = 0; b < 3; ++b) {
                const int by = j - b;
                if (by < base_lo_[1] || by > base_hi_[1]) continue;
                for (int c = 0; c < 3; ++c) {
                  const int bz = k - c;
                  if (bz < base_lo_[2] || bz > base_hi_[2]) continue;
                  const std::size_t bin =
                      (static_cast<std::size_t>(bx - base_lo_[0]) * bd[1] + static_cast<std::size_t>(by - base_lo_[1])) *
                          bd[2] +
                      static_cast<std::size_t>(bz - base_lo_[2]);
                  for (std::uint32_t q = bin_start_[bin]; q < bin_start_[bin + 1]; ++q) {
                    const std::uint32_t p = bin_particles_[q];
                    contrib(p, stencils_[p], a, b, c, xn, acc);
                  }
                }
              }
            }
            out[local(i, j, k)] = acc;
          }
      }
    });
    return;
  }

  const std::size_t workers = static_cast<std::size_t>(std::max(config_.threads, 1));
  std::vector<std::vector<Acc>> buffers(workers, std::vector<Acc>(box, zero<Acc>()));
  const std::size_t n = particles_.size();
  parallel_chunks(workers, [&](std::size_t w) {
    auto& buf = buffers[w];
    for (std::size_t p = n * w / workers; p < n * (w + 1) / workers; ++p) {
      const Stencil& s = stencils_[p];
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) {
            const Index3 node = s.node(a, b, c);
            contrib(static_cast<std::uint32_t>(p), s, a, b, c, grid_.node_position(node[0], node[1], node[2]),
                    buf[local(node[0], node[1], node[2])]);
          }
    }
  });
  for (std::size_t w = 0; w < workers; ++w)
    for (std::size_t n2 = 0; n2 < box; ++n2) out[n2] += buffers[w][n2];
}

void MpmEngine::particle_to_grid() {
  build_bins();

  std::vector<Vec3> mv(particles_.size());
  std::vector<Mat3> mA(particles_.size());
  for (std::size_t p = 0; p < particles_.size(); ++p) {
    mv[p] = particles_[p].mass * particles_[p].v;
    mA[p] = particles_[p].mass * particles_[p].A;
  }

  std::vector<MassMomentum> acc;
  transfer_to_nodes(acc, [&](std::uint32_t p, const Stencil& s, int a, int b, int c, const Vec3& xn,
                             MassMomentum& out) {
    const double w = s.weight(a, b, c);
    out.mass += w * particles_[p].mass;
    out.momentum += w * (mv[p] + mA[p] * (xn - particles_[p].x));
  });

  const Index3& lo = grid_.active_lo();
  const Index3& hi = grid_.active_hi();
  std::size_t l = 0;
  for (int i = lo[0]; i < hi[0]; ++i)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int k = lo[2]; k < hi[2]; ++k, ++l) {
        const std::size_t n = grid_.index(i, j, k);
        grid_.mass(n) = acc[l].mass;
        grid_.velocity(n) = acc[l].mass > 0.0 ? Vec3(acc[l].momentum / acc[l].mass) : Vec3::Zero();
      }
}

void MpmEngine::grid_update(double dt, const Vec3& body_acceleration) {
  if (!stencils_valid_) throw std::logic_error("grid_update called before particle_to_grid");

  std::vector<Mat3> weighted_stress(particles_.size());
  parallel_for(particles_.size(), config_.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const Particle& pt = particles_[p];
      try {
        weighted_stress[p] = pt.volume0 * kirchhoff_stress(pt.F, materials_[pt.material_id]).tau;
      } catch (const NumericError& e) {
        throw SimulationFault(std::string("stress evaluation failed: ") + e.what(), substeps_,
                              static_cast<long long>(p));
      }
    }
  });

  std::vector<Vec3> force;
  transfer_to_nodes(force, [&](std::uint32_t p, const Stencil& s, int a, int b, int c, const Vec3&, Vec3& out) {
    out -= weighted_stress[p] * s.gradient(a, b, c);
  });

  const Index3& lo = grid_.active_lo();
  const Index3& hi = grid_.active_hi();
  std::size_t l = 0;
  for (int i = lo[0]; i < hi[0]; ++i)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int k = lo[2]; k < hi[2]; ++k, ++l) {
        const std::size_t n = grid_.index(i, j, k);
        const double m = grid_.mass(n);
        if (!(m > 0.0)) continue;
        Vec3& v = grid_.velocity(n);
        v += dt * (force[l] / m) + dt * body_acceleration;
        if (!v.allFinite())
          throw SimulationFault("non-finite grid velocity at node (" + std::to_string(i) + "," + std::to_string(j) +
                                    "," + std::to_string(k) + ") in substep " + std::to_string(substeps_),
                                substeps_);
      }
}

void MpmEngine::apply_boundary() { splatdyn::apply_boundary(grid_, config_.boundary); }

void MpmEngine::grid_to_particle(double dt) {
  const double affine = affine_prefactor(grid_.spacing());
  parallel_for(particles_.size(), config_.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      Particle& pt = particles_[p];
      Stencil s;
      try {
        s = bspline_stencil(pt.x, grid_);
      } catch (const StencilError& e) {
        throw SimulationFault(std::string("particle left the grid: ") + e.what(), substeps_,
                              static_cast<long long>(p));
      }
      Vec3 v = Vec3::Zero();
      Mat3 B = Mat3::Zero();
      Mat3 grad_v = Mat3::Zero();
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) {
            const Index3 node = s.node(a, b, c);
            const Vec3& vn = grid_.velocity(grid_.index(node));
            const double w = s.weight(a, b, c);
            v += w * vn;
            B += (w * vn) * (grid_.node_position(node[0], node[1], node[2]) - pt.x).transpose();
            grad_v += vn * s.gradient(a, b, c).transpose();
          }
      pt.v = v;
      pt.x += dt * v;
      pt.A = affine * B;
      const Mat3 trial = (Mat3::Identity() + dt * grad_v) * pt.F;
      Mat3 F;
      try {
        F = apply_return_map(trial, materials_[pt.material_id]);
      } catch (const NumericError& e) {
        throw SimulationFault(std::string("plastic return map failed: ") + e.what(), substeps_,
                              static_cast<long long>(p));
      }
      if (!F.allFinite() || !(F.determinant() > 0.0))
        throw SimulationFault("inverted element: det(F) <= 0 for particle " + std::to_string(p) + " in substep " +
                                  std::to_string(substeps_),
                              substeps_, static_cast<long long>(p));
      pt.F = F;
    }
  });
  stencils_valid_ = false;
}

void MpmEngine::substep(double dt, const Vec3& body_acceleration) {
  grid_.clear();
  particle_to_grid();
  grid_update(dt, body_acceleration);
  apply_boundary();
  grid_to_particle(dt);
  ++substeps_;
}

void MpmEngine::step() { step(config_.gravity); }

void MpmEngine::step(const Vec3& body_acceleration) {
  const double dx = grid_.spacing();
  const double vmax = max_particle_speed();
  double dt = config_.dt;
  if (!(dt * vmax < dx)) {
    if (config_.cfl_policy == CflPolicy::Abort || !std::isfinite(vmax))
      throw CflError("CFL violated in substep " + std::to_string(substeps_) + ": dt * max|v| = " +
                         std::to_string(dt * vmax) + " >= dx = " + std::to_string(dx),
                     substeps_);
    int pieces = 1;
    while (!(dt * vmax < dx)) {
      dt *= 0.5;
      pieces *= 2;
      if (pieces > (1 << 20)) throw CflError("CFL clamp could not recover a stable dt", substeps_);
    }
    for (int i = 0; i < pieces; ++i) substep(dt, body_acceleration);
    return;
  }
  substep(dt, body_acceleration);
}

double MpmEngine::total_particle_mass() const {
  double m = 0.0;
  for (const auto& p : particles_) m += p.mass;
  return m;
}

Vec3 MpmEngine::total_particle_momentum() const {
  Vec3 m = Vec3::Zero();
  for (const auto& p : particles_) m += p.mass * p.v;
  return m;
}

double MpmEngine::max_particle_speed() const {
  double v = 0.0;
  for (const auto& p : particles_) v = std::max(v, p.v.norm());
  return v;
}

}  // namespace splatdyn
