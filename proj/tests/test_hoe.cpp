#include <catch_amalgamated.hpp>

#include "hamrec/hoe.hpp"
#include "hamrec/pipeline.hpp"

using namespace hamrec;

namespace {

// dense-commutator brute force: K_mn = Re Tr([h_m,rho]^dag [h_n,rho])
Eigen::MatrixXd dense_gram(const TermBasis& basis, const Mat& rho) {
  const int n_terms = basis.count();
  std::vector<Mat> comm(n_terms);
  for (int n = 0; n < n_terms; ++n) {
    const Mat h = basis.term(n).dense();
    comm[n] = h * rho - rho * h;
  }
  Eigen::MatrixXd k(n_terms, n_terms);
  for (int m = 0; m < n_terms; ++m)
    for (int n = 0; n < n_terms; ++n)
      k(m, n) = (comm[m].adjoint() * comm[n]).trace().real();
  return k;
}

// numeric rank of the stacked real/imaginary commutator matrix
int stacked_rank(const TermBasis& basis, const Mat& rho) {
  const int dim = static_cast<int>(rho.rows());
  const int n_terms = basis.count();
  Eigen::MatrixXd stacked(2 * dim * dim, n_terms);
  for (int n = 0; n < n_terms; ++n) {
    const Mat h = basis.term(n).dense();
    const Mat c = h * rho - rho * h;
    for (int i = 0; i < dim * dim; ++i) {
      stacked(i, n) = c(i % dim, i / dim).real();
      stacked(dim * dim + i, n) = c(i % dim, i / dim).imag();
    }
  }
  auto svd = linalg::svd(stacked);
  const double tau = svd.singular_values[0] * stacked.rows() *
                     std::numeric_limits<double>::epsilon();
  int r = 0;
  for (int i = 0; i < svd.singular_values.size(); ++i)
    if (svd.singular_values[i] > tau) ++r;
  return r;
}

WeightBlocks blocks_for(const TermBasis& basis, std::uint64_t seed,
                        const std::vector<int>& profile, Mat* rho_out,
                        Eigen::VectorXd* a_out) {
  const auto a = random_instance(basis.kind(), basis.length(), seed);
  if (a_out) *a_out = a.values;
  auto eig = eigendecompose(assemble_dense(basis, a));
  auto [rho, truth] = build_steady_state(ladder_spec(profile), eig);
  if (rho_out) *rho_out = rho;
  return cluster_weights(rho);
}

}  // namespace

TEST_CASE("maximally mixed state commutes with everything") {
  const TermBasis basis(ModelKind::H2, 3);
  const Mat rho = Mat::Identity(8, 8) / 8.0;
  const auto wb = cluster_weights(rho);
  const auto g = hoe_gram(basis, wb);
  CHECK(g.k.cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(hoe_rank(g) == 0);
}

TEST_CASE("the true coefficients are in the Gram nullspace") {
  const TermBasis basis(ModelKind::H2, 3);
  Eigen::VectorXd a_true;
  const auto wb = blocks_for(basis, 9, {1}, nullptr, &a_true);
  const auto g = hoe_gram(basis, wb);
  // a^T K a = |[H, rho]|_F^2 = 0 for a steady state
  CHECK(std::abs(a_true.dot(g.k * a_true)) <=
        1e-10 * g.k.norm() * a_true.squaredNorm());
  CHECK((g.k * a_true).cwiseAbs().maxCoeff() <= 1e-9 * g.k.norm());
}

TEST_CASE("Gram matches the dense-commutator brute force (L <= 4)") {
  for (ModelKind kind : {ModelKind::H2, ModelKind::H3}) {
    for (int length = model_min_length(kind); length <= 4; ++length) {
      const TermBasis basis(kind, length);
      Mat rho;
      const auto wb = blocks_for(basis, 100 + length, {2, 2}, &rho, nullptr);
      const auto g = hoe_gram(basis, wb);
      const Eigen::MatrixXd brute = dense_gram(basis, rho);
      REQUIRE((g.k - brute).cwiseAbs().maxCoeff() <=
              1e-9 * brute.cwiseAbs().maxCoeff());
      CHECK((g.k - g.k.transpose()).cwiseAbs().maxCoeff() <= 1e-12);

      // same rank as the explicitly stacked commutator matrix
      CHECK(hoe_rank(g) == stacked_rank(basis, rho));
    }
  }
}

TEST_CASE("Gram ranks reproduce the S/N cross-check") {
  struct Case {
    ModelKind kind;
    int length;
    int expect;
  };
  for (const Case& c : {Case{ModelKind::H2, 3, 26}, Case{ModelKind::H3, 3, 40},
                        Case{ModelKind::H3, 4, 104}}) {
    const TermBasis basis(c.kind, c.length);
    const auto wb = blocks_for(basis, 42, {2, 2}, nullptr, nullptr);
    CHECK(hoe_rank(hoe_gram(basis, wb)) == c.expect);
  }
}
