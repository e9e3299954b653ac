#pragma once

// Homogeneous operator equations: rank of the linear map a -> [H(a), rho],
// used as an independent cross-check of the OSE equation count. The rank is
// computed through the N x N Gram matrix
//   K_{mn} = Re Tr([h_m, rho]^dag [h_n, rho]),
// which never materializes a 2^L x 2^L commutator.

#include <stdexcept>
#include <vector>

#include "hamrec/linalg.hpp"
#include "hamrec/models.hpp"
#include "hamrec/spectral.hpp"

namespace hamrec {

struct HoeGram {
  Eigen::MatrixXd k;  // symmetric PSD, N x N
};

// With rho = sum_mu w_mu |l_mu><l_mu| the commutator is a sum of rank-2
// updates, so every K entry reduces to inner products of the cached vectors
// A_mu^n = h_n |l_mu>.
inline HoeGram hoe_gram(const TermBasis& basis, const WeightBlocks& blocks) {
  const int dim = blocks.dim();
  if (dim != (1 << basis.length()))
    throw std::invalid_argument("hoe_gram: dimension mismatch");
  const int n_terms = basis.count();

  // flatten blocks into (vector, weight) pairs
  std::vector<double> w;
  const Mat lambda = blocks.stacked();
  for (const auto& b : blocks.blocks)
    for (int j = 0; j < b.vectors.cols(); ++j) w.push_back(b.weight);
  const int q_total = static_cast<int>(w.size());

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n_terms, n_terms);
  std::vector<Mat> c(q_total);  // c[mu](n, nu) = <A_mu^n | l_nu>
  Mat a_mu(dim, n_terms);
  for (int mu = 0; mu < q_total; ++mu) {
    for (int n = 0; n < n_terms; ++n)
      a_mu.col(n) = basis.term(n).apply(lambda.col(mu));
    k.noalias() += 2.0 * w[mu] * w[mu] * (a_mu.adjoint() * a_mu).real();
    c[mu] = w[mu] * (a_mu.adjoint() * lambda);
  }
  for (int mu = 0; mu < q_total; ++mu)
    for (int nu = 0; nu < q_total; ++nu) {
      // -2 Re sum_{mu,nu} E_mu(m,nu) E_nu(n,mu)
      const Vec u = c[mu].col(nu);
      const Vec v = c[nu].col(mu);
      k.noalias() -= 2.0 * (u * v.transpose()).real();
    }
  k = 0.5 * (k + k.transpose()).eval();  // symmetrize roundoff
  return {std::move(k)};
}

// Eigen-rank of K. Gram conditioning squares the singular values, hence the
// extra 1e3 safety factor on the threshold.
inline int hoe_rank(const HoeGram& g) {
  const int n = static_cast<int>(g.k.rows());
  auto eig = linalg::eigh(g.k);
  const double lmax = eig.eigenvalues[n - 1];
  if (lmax <= 0.0) return 0;
  const double tau =
      lmax * n * std::numeric_limits<double>::epsilon() * 1e3;
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (eig.eigenvalues[i] > tau) ++rank;
  return rank;
}

}  // namespace hamrec
