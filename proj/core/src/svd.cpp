#include "splatdyn/svd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "splatdyn/error.hpp"

namespace splatdyn {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Any unit vector orthogonal to the unit vector `u`.
Vec3 any_orthogonal(const Vec3& u) {
  const Vec3 axis = std::abs(u.x()) <= std::abs(u.y()) && std::abs(u.x()) <= std::abs(u.z())
                        ? Vec3::UnitX()
                        : (std::abs(u.y()) <= std::abs(u.z()) ? Vec3::UnitY() : Vec3::UnitZ());
  return (axis - axis.dot(u) * u).normalized();
}

}  // namespace

SymmetricEigen3 symmetric_eigen3(const Mat3& input) {
  Mat3 a = symmetrized(input);
  Mat3 v = Mat3::Identity();
  constexpr std::array<std::array<int, 2>, 3> kPairs = {{{0, 1}, {0, 2}, {1, 2}}};

  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (const auto& pq : kPairs) {
      const int p = pq[0], q = pq[1];
      const double apq = a(p, q);
      if (apq == 0.0) continue;
      const double app = a(p, p), aqq = a(q, q);
      if (std::abs(apq) <= 8.0 * kEps * std::sqrt(std::abs(app * aqq)) ||
          std::abs(apq) <= std::numeric_limits<double>::min()) {
        a(p, q) = a(q, p) = 0.0;
        continue;
      }
      const double theta = (aqq - app) / (2.0 * apq);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;
      // a <- J^T a J with J the Givens rotation in the (p, q) plane.
      for (int k = 0; k < 3; ++k) {
        const double akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
      }
      for (int k = 0; k < 3; ++k) {
        const double apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
      }
      a(p, q) = a(q, p) = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double vkp = v(k, p), vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
      }
      rotated = true;
    }
    if (!rotated) break;
  }

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });
  SymmetricEigen3 out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

Decomposition3 polar_svd3(const Mat3& F) {
  if (!F.allFinite()) throw NumericError("polar_svd3: non-finite matrix entry");

  const SymmetricEigen3 eig = symmetric_eigen3(F.transpose() * F);
  Decomposition3 d;
  d.V = eig.vectors;
  if (d.V.determinant() < 0.0) d.V.col(2) = -d.V.col(2);

  const Vec3 f0 = F * d.V.col(0);
  const Vec3 f1 = F * d.V.col(1);
  const Vec3 f2 = F * d.V.col(2);

  const double n0 = f0.norm();
  Vec3 u0 = n0 > 0.0 ? Vec3(f0 / n0) : Vec3::UnitX();
  Vec3 u1 = f1 - u0.dot(f1) * u0;
  const double n1 = u1.norm();
  // Rank-deficient columns are pure rounding noise; any orthogonal
  // direction reconstructs F equally well.
  u1 = n1 > 64.0 * kEps * std::max(n0, std::numeric_limits<double>::min()) ? Vec3(u1 / n1) : any_orthogonal(u0);
  // One more pass keeps u0 and u1 orthogonal to working precision.
  u1 = (u1 - u0.dot(u1) * u0).normalized();
  const Vec3 u2 = u0.cross(u1);

  d.U.col(0) = u0;
  d.U.col(1) = u1;
  d.U.col(2) = u2;
  d.sigma = Vec3(u0.dot(f0), u1.dot(f1), u2.dot(f2));
  return d;
}

}  // namespace splatdyn
