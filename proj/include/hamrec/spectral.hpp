#pragma once

// Steady-state construction and decomposition: weight blocks (the invariant
// subspaces attached to each distinct mixing weight) and the orthogonal
// complement basis.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hamrec/linalg.hpp"
#include "hamrec/pauli.hpp"

namespace hamrec {

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Mat eigenvectors;              // orthonormal columns
};

inline SpectralDecomposition eigendecompose(const Mat& h) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("eigendecompose: square matrix required");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("eigendecompose: input is not Hermitian");
  auto eig = linalg::eigh(h);
  return {std::move(eig.eigenvalues), std::move(eig.eigenvectors)};
}

struct WeightClass {
  double weight = 0.0;
  std::vector<int> indices;  // eigenstate indices sharing this weight
};

struct SteadyStateSpec {
  std::vector<WeightClass> classes;

  void validate() const {
    if (classes.empty()) throw std::invalid_argument("SteadyStateSpec: no classes");
    double trace = 0.0;
    std::vector<int> all;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const auto& c = classes[i];
      if (c.weight <= 0.0) throw std::invalid_argument("SteadyStateSpec: weights must be positive");
      if (c.indices.empty()) throw std::invalid_argument("SteadyStateSpec: empty index set");
      for (std::size_t j = i + 1; j < classes.size(); ++j)
        if (c.weight == classes[j].weight)
          throw std::invalid_argument(
              "SteadyStateSpec: weight classes must be pairwise distinct; "
              "merge the index sets instead");
      trace += c.weight * static_cast<double>(c.indices.size());
      all.insert(all.end(), c.indices.begin(), c.indices.end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
      throw std::invalid_argument("SteadyStateSpec: index sets must be disjoint");
    if (std::abs(trace - 1.0) > 1e-12)
      throw std::invalid_argument("SteadyStateSpec: trace must be 1");
  }
};

struct WeightBlock {
  double weight = 0.0;
  Mat vectors;  // dim x q, orthonormal columns
};

struct WeightBlocks {
  std::vector<WeightBlock> blocks;  // ascending weight
  Mat complement;                   // dim x (dim - Q)
  bool ambiguous_clustering = false;

  int dim() const {
    return blocks.empty() ? static_cast<int>(complement.rows())
                          : static_cast<int>(blocks.front().vectors.rows());
  }
  int total_block_size() const {
    int q = 0;
    for (const auto& b : blocks) q += static_cast<int>(b.vectors.cols());
    return q;
  }
  std::vector<int> degeneracy_profile() const {
    std::vector<int> q;
    for (const auto& b : blocks) q.push_back(static_cast<int>(b.vectors.cols()));
    return q;
  }
  Mat stacked() const {
    Mat s(dim(), total_block_size());
    int c = 0;
    for (const auto& b : blocks) {
      s.middleCols(c, b.vectors.cols()) = b.vectors;
      c += static_cast<int>(b.vectors.cols());
    }
    return s;
  }
};

// Orthonormal completion of a set of orthonormal columns, via full
// Householder QR. Returns dim x (dim - Q); every returned column is
// orthogonal to every input column.
inline Mat complement_basis(const Mat& stacked, int dim) {
  if (stacked.rows() != dim)
    throw std::invalid_argument("complement_basis: dimension mismatch");
  const int q = static_cast<int>(stacked.cols());
  if (q > dim) throw std::invalid_argument("complement_basis: too many vectors");
  if (q == dim) return Mat(dim, 0);
  if (q == 0) return Mat::Identity(dim, dim);
  Eigen::HouseholderQR<Mat> qr(stacked);
  Mat full = qr.householderQ() * Mat::Identity(dim, dim);
  return full.rightCols(dim - q);
}

// rho = sum_m p_m sum_{j in class m} |E_j><E_j|. The returned blocks are the
// ground-truth constructing eigenvectors, ordered by ascending weight.
inline std::pair<Mat, WeightBlocks> build_steady_state(
    const SteadyStateSpec& spec, const SpectralDecomposition& eig) {
  spec.validate();
  const int dim = static_cast<int>(eig.eigenvectors.rows());
  WeightBlocks wb;
  Mat rho = Mat::Zero(dim, dim);
  std::vector<WeightClass> classes = spec.classes;
  std::sort(classes.begin(), classes.end(),
            [](const WeightClass& a, const WeightClass& b) { return a.weight < b.weight; });
  for (const auto& c : classes) {
    WeightBlock blk;
    blk.weight = c.weight;
    blk.vectors.resize(dim, c.indices.size());
    int col = 0;
    for (int idx : c.indices) {
      if (idx < 0 || idx >= dim)
        throw std::invalid_argument("build_steady_state: eigenstate index out of range");
      blk.vectors.col(col++) = eig.eigenvectors.col(idx);
    }
    rho.noalias() += c.weight * (blk.vectors * blk.vectors.adjoint());
    wb.blocks.push_back(std::move(blk));
  }
  wb.complement = complement_basis(wb.stacked(), dim);
  return {std::move(rho), std::move(wb)};
}

// Eigendecompose rho and group eigenvalues into weight classes. Gaps are
// compared against tol * (largest eigenvalue); eigenvalues at or below the
// absolute floor form the complement, never a weight class.
inline WeightBlocks cluster_weights(const Mat& rho, double tol = 1e-10,
                                    double zero_floor = 1e-12) {
  const int dim = static_cast<int>(rho.rows());
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("cluster_weights: rho is not Hermitian");
  auto eig = linalg::eigh(rho);
  const double top = eig.eigenvalues[dim - 1];
  if (eig.eigenvalues[0] < -1e-10 * top)
    throw std::invalid_argument("cluster_weights: rho is not PSD");
  if (std::abs(eig.eigenvalues.sum() - 1.0) > 1e-10)
    throw std::invalid_argument("cluster_weights: rho trace is not 1");

  const double gap_tol = tol * top;
  WeightBlocks wb;
  int i = 0;
  while (i < dim && eig.eigenvalues[i] <= zero_floor) ++i;  // zero cluster
  while (i < dim) {
    int j = i + 1;
    while (j < dim && eig.eigenvalues[j] - eig.eigenvalues[j - 1] <= gap_tol) {
      ++j;
    }
    if (j < dim) {
      const double gap = eig.eigenvalues[j] - eig.eigenvalues[j - 1];
      if (gap > gap_tol && gap < 10.0 * gap_tol) wb.ambiguous_clustering = true;
    }
    WeightBlock blk;
    blk.weight = eig.eigenvalues.segment(i, j - i).mean();
    // re-orthonormalize within the block (thin QR)
    Eigen::HouseholderQR<Mat> qr(eig.eigenvectors.middleCols(i, j - i));
    blk.vectors = qr.householderQ() * Mat::Identity(dim, j - i);
    wb.blocks.push_back(std::move(blk));
    i = j;
  }
  wb.complement = complement_basis(wb.stacked(), dim);
  return wb;
}

}  // namespace hamrec
