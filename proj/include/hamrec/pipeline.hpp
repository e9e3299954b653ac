#pragma once

// End-to-end recovery pipeline: random instance -> H -> steady state ->
// weight blocks -> OSE system -> nullspace solve -> error.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hamrec/hoe.hpp"
#include "hamrec/models.hpp"
#include "hamrec/ose.hpp"
#include "hamrec/spectral.hpp"

namespace hamrec {

// Weight assignment for a degeneracy profile (q_1,...,q_M): class m gets the
// ladder weight (m+1)/Z with Z = sum_m q_m (m+1), applied to the lowest-index
// eigenstates in order. For M=1 this is the equal mixture 1/q; for q=(2,2)
// it reproduces the 0.2/0.3 split of the reference multi-eigenvalued state.
inline SteadyStateSpec ladder_spec(const std::vector<int>& q) {
  if (q.empty()) throw std::invalid_argument("ladder_spec: empty profile");
  double z = 0.0;
  for (std::size_t m = 0; m < q.size(); ++m)
    z += static_cast<double>(q[m]) * static_cast<double>(m + 2);
  SteadyStateSpec spec;
  int next = 0;
  for (std::size_t m = 0; m < q.size(); ++m) {
    WeightClass c;
    c.weight = static_cast<double>(m + 2) / z;
    for (int j = 0; j < q[m]; ++j) c.indices.push_back(next++);
    spec.classes.push_back(std::move(c));
  }
  return spec;
}

struct TrialResult {
  ModelKind kind;
  int length = 0;
  std::vector<int> profile;
  std::uint64_t seed = 0;
  std::int64_t s_count = 0;  // assembled LIE rows
  int n_terms = 0;
  RecoveryReport report;
  CoefficientVector a_true;
};

struct TrialOptions {
  double cluster_tol = 1e-10;
  bool use_spec = false;        // explicit SteadyStateSpec instead of ladder
  SteadyStateSpec spec;
};

inline TrialResult run_trial(ModelKind kind, int length,
                             const std::vector<int>& profile,
                             std::uint64_t seed,
                             const TrialOptions& opt = {}) {
  TrialResult out;
  out.kind = kind;
  out.length = length;
  out.seed = seed;
  out.a_true = random_instance(kind, length, seed);
  const TermBasis basis(kind, length);
  out.n_terms = basis.count();

  const Mat h = assemble_dense(basis, out.a_true);
  const SpectralDecomposition eig = eigendecompose(h);
  const SteadyStateSpec spec = opt.use_spec ? opt.spec : ladder_spec(profile);
  auto [rho, truth_blocks] = build_steady_state(spec, eig);
  (void)truth_blocks;
  const WeightBlocks blocks = cluster_weights(rho, opt.cluster_tol);
  out.profile = blocks.degeneracy_profile();

  const EquationSystem sys = assemble_equations(blocks, basis);
  out.s_count = sys.rows();
  if (sys.rows() == 0) {
    out.report.a_rec = Eigen::VectorXd::Zero(out.n_terms);
    out.report.rank = 0;
    out.report.nullity = out.n_terms;
    out.report.success = false;
    out.report.delta = 1.0;  // nothing recovered
    return out;
  }
  out.report = solve_nullspace(sys);
  out.report.delta = recovery_error(out.a_true.values, out.report.a_rec);
  return out;
}

}  // namespace hamrec
