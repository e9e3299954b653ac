#pragma once

// Thin LAPACKE wrappers (Eigen's built-in eigensolver/SVD are too slow for
// the L=10 sweeps).

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#endif
#include <lapacke.h>

namespace hamrec::linalg {

struct HermitianEig {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // columns
};

inline HermitianEig eigh(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigh: square matrix required");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  HermitianEig out;
  out.eigenvectors = a;
  out.eigenvalues.resize(n);
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', n, out.eigenvectors.data(), n,
      out.eigenvalues.data());
  if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
  return out;
}

struct SymmetricEig {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;
};

inline SymmetricEig eigh(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigh: square matrix required");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  SymmetricEig out;
  out.eigenvectors = a;
  out.eigenvalues.resize(n);
  const lapack_int info = LAPACKE_dsyevd(
      LAPACK_COL_MAJOR, 'V', 'L', n, out.eigenvectors.data(), n,
      out.eigenvalues.data());
  if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
  return out;
}

struct RealSvd {
  Eigen::VectorXd singular_values;  // min(m,n) values, descending
  Eigen::MatrixXd vt;               // full n x n right singular rows
};

// SVD of a real m x n matrix with the full right factor (rows of vt past
// min(m,n) span the structural nullspace when m < n). U is not formed.
inline RealSvd svd(const Eigen::MatrixXd& a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  Eigen::MatrixXd work = a;
  RealSvd out;
  out.singular_values.resize(k);
  out.vt.resize(n, n);
  std::vector<double> superb(std::max<lapack_int>(1, k - 1));
  const lapack_int info = LAPACKE_dgesvd(
      LAPACK_COL_MAJOR, 'N', 'A', m, n, work.data(), m,
      out.singular_values.data(), nullptr, m, out.vt.data(), n,
      superb.data());
  if (info != 0) throw std::runtime_error("dgesvd failed, info=" + std::to_string(info));
  return out;
}

}  // namespace hamrec::linalg
