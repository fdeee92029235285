#pragma once

// Dense complex factorizations backed by LAPACK.

#include <Eigen/Core>

namespace ringsqueeze::linalg {

struct HermitianEigen {
  Eigen::VectorXd values;        // ascending
  Eigen::MatrixXcd vectors;      // columns, orthonormal
};

/// All eigenpairs of a Hermitian matrix (lower triangle is read).
HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& a);

struct Svd {
  Eigen::MatrixXcd u;
  Eigen::VectorXd s;             // descending
  Eigen::MatrixXcd vh;
};

Svd svd(const Eigen::MatrixXcd& a);

/// Takagi-Autonne factorization a = F diag(s) Fᵀ of a complex symmetric
/// matrix, F unitary, s descending. Built from the SVD; singular subspaces
/// whose values agree to `degeneracy_tol` (relative to the largest) are
/// treated jointly.
struct Takagi {
  Eigen::VectorXd s;
  Eigen::MatrixXcd f;
};

Takagi takagi(const Eigen::MatrixXcd& a, double degeneracy_tol = 1e-10);

/// Leading `count` Takagi pairs only, by block subspace iteration with a
/// fixed-seed start block. Converged when every residual
/// |a conj(f) - s f| <= tolerance * s_0.
Takagi leading_takagi(const Eigen::MatrixXcd& a, std::size_t count, double tolerance = 1e-13,
                      double degeneracy_tol = 1e-10);

}  // namespace ringsqueeze::linalg
