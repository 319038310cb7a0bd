#include "oracles.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace splatdyn::oracle {

Vec3 singular_values(const Mat3& F) {
  Eigen::JacobiSVD<Mat3> svd(F);
  return svd.singularValues();
}

double energy_fixed_corotated(const Mat3& F, double mu, double lambda) {
  const Vec3 s = singular_values(F);
  const double J = F.determinant();
  return mu * (s.array() - 1.0).square().sum() + 0.5 * lambda * (J - 1.0) * (J - 1.0);
}

double energy_stvk_hencky(const Mat3& F, double mu, double lambda) {
  const Vec3 e = singular_values(F).array().log().matrix();
  return mu * e.squaredNorm() + 0.5 * lambda * e.sum() * e.sum();
}

Mat3 fd_kirchhoff(const std::function<double(const Mat3&)>& energy, const Mat3& F, double h) {
  Mat3 P;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Mat3 Fp = F, Fm = F;
      Fp(i, j) += h;
      Fm(i, j) -= h;
      P(i, j) = (energy(Fp) - energy(Fm)) / (2.0 * h);
    }
  return P * F.transpose();
}

Vec3 hencky(const Mat3& F) { return singular_values(F).array().log().matrix(); }

Ballistic free_fall(const Vec3& x0, const Vec3& v0, const Vec3& g, double dt, long n) {
  const double nd = static_cast<double>(n);
  return {x0 + nd * dt * v0 + 0.5 * nd * (nd + 1.0) * dt * dt * g, v0 + nd * dt * g};
}

Vec3 composite_product_form(std::span<const double> alphas, std::span<const Vec3> colors, const Vec3& background) {
  Vec3 out = Vec3::Zero();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    double t = 1.0;
    for (std::size_t j = 0; j < i; ++j) t *= 1.0 - alphas[j];
    out += colors[i] * alphas[i] * t;
  }
  double t = 1.0;
  for (double a : alphas) t *= 1.0 - a;
  return out + background * t;
}

double footprint_alpha(double opacity, const Vec2& mean, const Mat2& c, const Vec2& p) {
  const double det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
  const double dx = p.x() - mean.x(), dy = p.y() - mean.y();
  const double q = (c(1, 1) * dx * dx - 2.0 * c(0, 1) * dx * dy + c(0, 0) * dy * dy) / det;
  return opacity * std::exp(-0.5 * q);
}

Image brute_force_render(std::span<const Splat2D> splats, const Camera& camera, const Vec3& background) {
  std::vector<const Splat2D*> order;
  for (const auto& s : splats) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const Splat2D* a, const Splat2D* b) {
    return a->depth < b->depth || (a->depth == b->depth && a->index < b->index);
  });

  Image img(camera.width, camera.height, background);
  for (int v = 0; v < camera.height; ++v)
    for (int u = 0; u < camera.width; ++u) {
      const double px = u + 0.5, py = v + 0.5;
      double r = 0, g = 0, b = 0, T = 1.0;
      for (const Splat2D* s : order) {
        const double dx = px - s->mean.x(), dy = py - s->mean.y();
        const double q = s->conic(0, 0) * dx * dx + 2.0 * s->conic(0, 1) * dx * dy + s->conic(1, 1) * dy * dy;
        const double a = s->opacity * std::exp(-0.5 * q);
        if (a < 1.0 / 255.0) continue;
        const double w = a * T;
        r += s->color.x() * w;
        g += s->color.y() * w;
        b += s->color.z() * w;
        T *= 1.0 - a;
        if (T < 1e-4) break;
      }
      img.at(u, v) = Vec3(r + T * background.x(), g + T * background.y(), b + T * background.z());
    }
  return img;
}

}  // namespace splatdyn::oracle
