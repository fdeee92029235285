#include "ringsqueeze/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <random>
#include <string>

#include "ringsqueeze/error.hpp"

namespace ringsqueeze::linalg {

namespace {

lapack_int as_lapack(Eigen::Index n) { return static_cast<lapack_int>(n); }

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw solver_error("lapack", std::string(routine) + " failed with info = " + std::to_string(info));
  }
}

}  // namespace

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw invalid_parameter("hermitian_eigen needs a square matrix");
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;

  Eigen::MatrixXcd work = a;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', as_lapack(n), work.data(), as_lapack(n), 0.0, 0.0, 0,
                     0, 0.0, &found, out.values.data(), out.vectors.data(), as_lapack(n), support.data());
  check_info(info, "zheevr");
  return out;
}

Svd svd(const Eigen::MatrixXcd& a) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  Svd out;
  out.u.resize(m, m);
  out.vh.resize(n, n);
  out.s.resize(std::min(m, n));
  if (m == 0 || n == 0) return out;

  Eigen::MatrixXcd work = a;
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', as_lapack(m), as_lapack(n), work.data(),
                                         as_lapack(m), out.s.data(), out.u.data(), as_lapack(m),
                                         out.vh.data(), as_lapack(n));
  check_info(info, "zgesdd");
  return out;
}

namespace {

// Symmetric square root of a (nearly) symmetric unitary block.
Eigen::MatrixXcd unitary_sqrt(const Eigen::MatrixXcd& z) {
  if (z.rows() == 1) {
    const std::complex<double> w = z(0, 0);
    const double mag = std::abs(w);
    Eigen::MatrixXcd r(1, 1);
    r(0, 0) = mag > 0.0 ? std::sqrt(w / mag) : std::complex<double>(1.0);
    return r;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(z);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(es.eigenvectors());
  const Eigen::MatrixXcd q = qr.householderQ();
  // Rayleigh quotients give the eigenvalue belonging to each orthonormal column.
  Eigen::VectorXcd roots(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const std::complex<double> lam = q.col(i).dot(z * q.col(i));
    const double mag = std::abs(lam);
    roots[i] = mag > 0.0 ? std::sqrt(lam / mag) : std::complex<double>(1.0);
  }
  return q * roots.asDiagonal() * q.adjoint();
}

}  // namespace

namespace {

// Given a = u s vh restricted to the leading columns of a symmetric a:
// vhᵀ = u Z with Z block diagonal over equal singular values, unitary and
// symmetric; then F = u Z^{1/2}.
Eigen::MatrixXcd takagi_vectors(const Eigen::MatrixXcd& u, const Eigen::VectorXd& s, const Eigen::MatrixXcd& vh,
                                double degeneracy_tol) {
  const Eigen::Index k = s.size();
  const Eigen::MatrixXcd z = u.adjoint() * vh.transpose();
  Eigen::MatrixXcd f(u.rows(), k);
  const double scale = k > 0 ? s[0] : 0.0;
  Eigen::Index start = 0;
  while (start < k) {
    Eigen::Index end = start + 1;
    while (end < k && s[end - 1] - s[end] <= degeneracy_tol * scale) ++end;
    const Eigen::Index len = end - start;
    const Eigen::MatrixXcd root = unitary_sqrt(z.block(start, start, len, len));
    f.middleCols(start, len) = u.middleCols(start, len) * root;
    start = end;
  }
  return f;
}

Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(y);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(y.rows(), y.cols());
}

}  // namespace

Takagi takagi(const Eigen::MatrixXcd& a, double degeneracy_tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw invalid_parameter("takagi needs a square matrix");
  Takagi out;
  out.s.resize(n);
  out.f.resize(n, n);
  if (n == 0) return out;

  const Svd d = svd(a);
  out.s = d.s;
  out.f = takagi_vectors(d.u, d.s, d.vh, degeneracy_tol);
  return out;
}

Takagi leading_takagi(const Eigen::MatrixXcd& a, std::size_t count, double tolerance, double degeneracy_tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw invalid_parameter("leading_takagi needs a square matrix");
  const auto k = static_cast<Eigen::Index>(std::min<std::size_t>(count, static_cast<std::size_t>(n)));
  // Oversampling keeps the trailing wanted pairs away from the block edge.
  const Eigen::Index p = std::min<Eigen::Index>(n, 2 * k + 16);
  if (k == 0) return Takagi{};
  if (3 * p >= n) {
    Takagi full = takagi(a, degeneracy_tol);
    return Takagi{full.s.head(k), full.f.leftCols(k)};
  }

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd q(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) q(i, j) = std::complex<double>(normal(rng), normal(rng));
  }
  q = orthonormalize(a * q);

  const Eigen::MatrixXcd ah = a.adjoint();
  const int max_iterations = 200;
  for (int it = 0;; ++it) {
    // Rayleigh-Ritz on the current range estimate.
    const Eigen::MatrixXcd b = q.adjoint() * a;
    const Svd small = svd(b);
    const Eigen::MatrixXcd u = q * small.u.leftCols(k);
    const Eigen::VectorXd s = small.s.head(k);
    const Eigen::MatrixXcd vh = small.vh.topRows(k);
    const Eigen::MatrixXcd residual = a * vh.adjoint() - u * s.asDiagonal();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) worst = std::max(worst, residual.col(j).norm());
    const double scale = s[0] > 0.0 ? s[0] : 1.0;
    if (worst <= tolerance * scale || s[0] == 0.0) {
      return Takagi{s, takagi_vectors(u, s, vh, degeneracy_tol)};
    }
    if (it == max_iterations) {
      throw solver_error("takagi-convergence", "leading Takagi pairs did not converge; residual " +
                                                   std::to_string(worst / scale));
    }
    q = orthonormalize(a * orthonormalize(ah * q));
  }
}

}  // namespace ringsqueeze::linalg
