#pragma once

#include "splatdyn/math.hpp"

namespace splatdyn {

// F = U diag(sigma) V^T with det(U) = det(V) = +1. Singular values are in
// descending order of magnitude as produced by the eigen-solve; when
// det(F) < 0 the reflection is carried by a negative last singular value.
struct Decomposition3 {
  Mat3 U = Mat3::Identity();
  Vec3 sigma = Vec3::Ones();
  Mat3 V = Mat3::Identity();

  Mat3 reconstruct() const { return U * sigma.asDiagonal() * V.transpose(); }
  Mat3 rotation() const { return U * V.transpose(); }
};

// Throws NumericError for non-finite input.
Decomposition3 polar_svd3(const Mat3& F);

// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi sweeps.
// Off-diagonal entries below rounding level of their diagonal pair are
// treated as zero, so (near-)diagonal input yields an identity basis.
// Eigenvalues sorted descending; ties keep input column order.
struct SymmetricEigen3 {
  Vec3 values;
  Mat3 vectors;  // columns
};
SymmetricEigen3 symmetric_eigen3(const Mat3& A);

}  // namespace splatdyn
