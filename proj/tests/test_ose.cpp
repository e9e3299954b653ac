#include <catch_amalgamated.hpp>

#include <random>

#include "hamrec/ose.hpp"
#include "hamrec/pipeline.hpp"

using namespace hamrec;
using Catch::Approx;

TEST_CASE("predicted LIE count") {
  CHECK(predicted_lie_count({{2, 2}, 3}) == 40);
  CHECK(predicted_lie_count({{2, 2}, 2}) == 8);
  CHECK(predicted_lie_count({{16}, 4}) == 0);  // full-space single class

  SECTION("all-singleton profiles reduce to 2^{L+1} q - q^2 - q") {
    for (int length = 1; length <= 10; ++length)
      for (int q = 1; q <= std::min(16, 1 << length); ++q) {
        const std::vector<int> ones(q, 1);
        const std::int64_t expect =
            (std::int64_t{1} << (length + 1)) * q - std::int64_t{q} * q - q;
        REQUIRE(predicted_lie_count({ones, length}) == expect);
      }
  }

  SECTION("adding a weight class never decreases S") {
    std::mt19937 rng(1);
    for (int rep = 0; rep < 200; ++rep) {
      const int length = 3 + static_cast<int>(rng() % 6);
      std::vector<int> q;
      std::int64_t total = 0;
      const std::int64_t dim = std::int64_t{1} << length;
      while (true) {
        const int next = 1 + static_cast<int>(rng() % 3);
        if (total + next >= dim) break;
        q.push_back(next);
        total += next;
        if (q.size() >= 4) break;
      }
      if (q.size() < 2) continue;
      std::vector<int> fewer(q.begin(), q.end() - 1);
      REQUIRE(predicted_lie_count({q, length}) >=
              predicted_lie_count({fewer, length}));
    }
  }

  CHECK_THROWS_AS(predicted_lie_count({{3, 3}, 2}), std::invalid_argument);
  CHECK_THROWS_AS(predicted_lie_count({{}, 3}), std::invalid_argument);
}

TEST_CASE("equation assembly") {
  SECTION("maximally mixed state yields an empty system") {
    const TermBasis basis(ModelKind::H2, 3);
    const Mat rho = Mat::Identity(8, 8) / 8.0;
    const auto wb = cluster_weights(rho);
    const auto sys = assemble_equations(wb, basis);
    CHECK(sys.rows() == 0);
    CHECK(sys.cols() == 27);
  }

  SECTION("single-eigenvalued q=2 at L=4 gives 56 x 39") {
    const TermBasis basis(ModelKind::H2, 4);
    const auto a = random_instance(ModelKind::H2, 4, 3);
    auto eig = eigendecompose(assemble_dense(basis, a));
    auto [rho, truth] = build_steady_state(ladder_spec({2}), eig);
    const auto sys = assemble_equations(cluster_weights(rho), basis);
    CHECK(sys.rows() == 56);
    CHECK(sys.cols() == 39);
    CHECK(sys.row_tags.size() == 56);
  }

  SECTION("the true coefficients satisfy the assembled system") {
    const TermBasis basis(ModelKind::H3, 5);
    const auto a = random_instance(ModelKind::H3, 5, 11);
    auto eig = eigendecompose(assemble_dense(basis, a));
    auto [rho, truth] = build_steady_state(ladder_spec({2, 2}), eig);
    const auto sys = assemble_equations(cluster_weights(rho), basis);
    const double residual = (sys.matrix * a.values).cwiseAbs().maxCoeff();
    CHECK(residual <= 1e-9 * a.values.norm());
  }
}

TEST_CASE("nullspace recovery") {
  SECTION("H2, L=4, q=2 succeeds") {
    const auto r = run_trial(ModelKind::H2, 4, {2}, 7);
    CHECK(r.report.success);
    CHECK(r.report.nullity == 1);
    CHECK(r.report.delta <= 1e-10);
  }

  SECTION("H2, L=3, q=2 fails (S=24 < N-1=26)") {
    const auto r = run_trial(ModelKind::H2, 3, {2}, 7);
    CHECK(r.s_count == 24);
    CHECK_FALSE(r.report.success);
    CHECK(r.report.nullity == 3);  // N - min(S, N-1) = 27 - 24
    CHECK(r.report.delta > 0.1);
  }

  SECTION("H3, L=5, q=(2,2) succeeds") {
    const auto r = run_trial(ModelKind::H3, 5, {2, 2}, 1);
    CHECK(r.report.success);
    CHECK(r.report.delta <= 1e-10);
  }

  SECTION("a_true lies in the small-singular-value span") {
    const auto a = random_instance(ModelKind::H2, 4, 13);
    const TermBasis basis(ModelKind::H2, 4);
    auto eig = eigendecompose(assemble_dense(basis, a));
    auto [rho, truth] = build_steady_state(ladder_spec({2}), eig);
    const auto sys = assemble_equations(cluster_weights(rho), basis);
    auto svd = linalg::svd(sys.matrix);
    const int k = static_cast<int>(svd.singular_values.size());
    const double tau = svd.singular_values[0] *
                       std::max<std::int64_t>(sys.rows(), sys.cols()) *
                       std::numeric_limits<double>::epsilon();
    const Eigen::VectorXd unit = a.values.normalized();
    double overlap_sq = 0.0;
    for (int i = 0; i < k; ++i)
      if (svd.singular_values[i] <= tau)
        overlap_sq += std::pow(svd.vt.row(i).dot(unit), 2);
    CHECK(std::sqrt(overlap_sq) >= 1.0 - 1e-10);
  }
}

TEST_CASE("numeric rank equals min(S, N-1) on random instances") {
  std::mt19937 rng(5);
  for (ModelKind kind : {ModelKind::H2, ModelKind::H3})
    for (const std::vector<int>& prof :
         {std::vector<int>{2}, std::vector<int>{3}, std::vector<int>{2, 2}}) {
      for (int length = model_min_length(kind); length <= 6; ++length) {
        const auto r = run_trial(kind, length, prof, rng());
        const std::int64_t expect =
            std::min<std::int64_t>(r.s_count, r.n_terms - 1);
        REQUIRE(r.report.rank == expect);
      }
    }
}

TEST_CASE("recovery error") {
  Eigen::VectorXd a(3), b(3);
  a << 1, 2, 3;
  CHECK(recovery_error(a, a) == Approx(0.0).margin(1e-15));
  CHECK(recovery_error(a, (-3.7 * a).eval()) == Approx(0.0).margin(1e-15));
  b << -2, 1, 0;  // orthogonal to a
  CHECK(recovery_error(a, b) == Approx(1.0));
  CHECK_THROWS_AS(recovery_error(a, Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(recovery_error(a, Eigen::VectorXd::Zero(4)),
                  std::invalid_argument);
}

TEST_CASE("critical lengths") {
  CHECK(critical_length(ModelKind::H2, {2}, 12) == 4);
  CHECK(critical_length(ModelKind::H2, {3}, 12) == 3);
  CHECK(critical_length(ModelKind::H3, {2}, 12) == 6);
  CHECK(critical_length(ModelKind::H3, {3}, 12) == 5);
  CHECK(critical_length(ModelKind::H2, {2, 2}, 12) == 3);
  CHECK(critical_length(ModelKind::H3, {2, 2}, 12) == 5);
  // a profile that never fits/never recovers
  CHECK_FALSE(critical_length(ModelKind::H2, {1 << 11}, 10).has_value());
}
