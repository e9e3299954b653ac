#pragma once

// Orthogonal-space equations: assembly of the homogeneous constraint system,
// the linearly-independent-equation count, SVD nullspace recovery and the
// critical-length prediction.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hamrec/linalg.hpp"
#include "hamrec/models.hpp"
#include "hamrec/spectral.hpp"

namespace hamrec {

struct DegeneracyProfile {
  std::vector<int> q;  // q_1 ... q_M
  int length = 0;

  void validate() const {
    if (q.empty()) throw std::invalid_argument("DegeneracyProfile: M >= 1 required");
    if (length < 1) throw std::invalid_argument("DegeneracyProfile: L >= 1 required");
    std::int64_t total = 0;
    for (int qm : q) {
      if (qm < 1) throw std::invalid_argument("DegeneracyProfile: q_m >= 1 required");
      total += qm;
    }
    if (total > (std::int64_t{1} << length))
      throw std::invalid_argument("DegeneracyProfile: sum q_m exceeds 2^L");
  }
};

// S = 2 * sum_{m < m'} q_m q_m' + 2 Q (2^L - Q).  The cross sum is strictly
// over distinct block pairs; same-block matrix elements carry no constraint.
inline std::int64_t predicted_lie_count(const DegeneracyProfile& p) {
  p.validate();
  std::int64_t cross = 0, total = 0;
  for (std::size_t m = 0; m < p.q.size(); ++m) {
    for (std::size_t mp = m + 1; mp < p.q.size(); ++mp)
      cross += std::int64_t{p.q[m]} * p.q[mp];
    total += p.q[m];
  }
  const std::int64_t dim = std::int64_t{1} << p.length;
  return 2 * cross + 2 * total * (dim - total);
}

struct RowTag {
  enum class Kind { Cross, Complement } kind;
  int m = 0;       // source block
  int mprime = 0;  // target block (Cross)
  int i = 0;       // column within target block (Cross)
  int j = 0;       // column within source block
  int l = 0;       // complement vector index (Complement)
  bool imag = false;
};

struct EquationSystem {
  Eigen::MatrixXd matrix;  // S x N
  std::vector<RowTag> row_tags;
  std::int64_t rows() const { return matrix.rows(); }
  int cols() const { return static_cast<int>(matrix.cols()); }
};

// One complex row per cross pair (m < m', i, j) and per (complement l,
// block m, j); each emitted as a real and an imaginary row.
inline EquationSystem assemble_equations(const WeightBlocks& blocks,
                                         const TermBasis& basis) {
  const int dim = blocks.dim();
  if (dim != (1 << basis.length()))
    throw std::invalid_argument("assemble_equations: dimension mismatch");
  const int n_terms = basis.count();
  const int n_blocks = static_cast<int>(blocks.blocks.size());
  DegeneracyProfile prof{blocks.degeneracy_profile(), basis.length()};
  const std::int64_t s_rows = predicted_lie_count(prof);

  EquationSystem sys;
  sys.matrix.resize(s_rows, n_terms);
  sys.row_tags.reserve(s_rows);
  std::int64_t row = 0;

  auto emit = [&](const Eigen::RowVectorXcd& crow, RowTag tag) {
    tag.imag = false;
    sys.matrix.row(row) = crow.real();
    sys.row_tags.push_back(tag);
    ++row;
    tag.imag = true;
    sys.matrix.row(row) = crow.imag();
    sys.row_tags.push_back(tag);
    ++row;
  };

  Mat applied(dim, n_terms);
  for (int m = 0; m < n_blocks; ++m) {
    const Mat& src = blocks.blocks[m].vectors;
    for (int j = 0; j < src.cols(); ++j) {
      for (int n = 0; n < n_terms; ++n)
        applied.col(n) = basis.term(n).apply(src.col(j));
      for (int mp = m + 1; mp < n_blocks; ++mp) {
        const Mat rows = blocks.blocks[mp].vectors.adjoint() * applied;
        for (int i = 0; i < rows.rows(); ++i)
          emit(rows.row(i), {RowTag::Kind::Cross, m, mp, i, j, 0, false});
      }
      if (blocks.complement.cols() > 0) {
        const Mat rows = blocks.complement.adjoint() * applied;
        for (int l = 0; l < rows.rows(); ++l)
          emit(rows.row(l), {RowTag::Kind::Complement, m, 0, 0, j, l, false});
      }
    }
  }
  if (row != s_rows)
    throw std::logic_error("assemble_equations: row count disagrees with LIE count");
  return sys;
}

struct RecoveryReport {
  Eigen::VectorXd a_rec;  // unit 2-norm, largest-magnitude entry positive
  double delta = std::numeric_limits<double>::quiet_NaN();
  int rank = 0;
  int nullity = 0;
  Eigen::Vector3d singular_tail = Eigen::Vector3d::Zero();  // smallest 3
  bool success = false;
};

// Full SVD recovery; numeric rank via the sigma_max * max(S,N) * eps
// threshold, success iff the nullspace is exactly one-dimensional.
inline RecoveryReport solve_nullspace(const EquationSystem& sys) {
  RecoveryReport rep;
  const int n = sys.cols();
  if (n < 2) throw std::invalid_argument("solve_nullspace: N >= 2 required");
  if (sys.rows() == 0) {
    rep.a_rec = Eigen::VectorXd::Zero(n);
    rep.rank = 0;
    rep.nullity = n;
    rep.success = false;
    return rep;
  }
  auto svd = linalg::svd(sys.matrix);
  const int k = static_cast<int>(svd.singular_values.size());
  const double eps = std::numeric_limits<double>::epsilon();
  const double tau = svd.singular_values[0] *
                     static_cast<double>(std::max<std::int64_t>(sys.rows(), n)) * eps;
  int rank = 0;
  while (rank < k && svd.singular_values[rank] > tau) ++rank;
  rep.rank = rank;
  rep.nullity = n - rank;
  for (int t = 0; t < 3; ++t)
    rep.singular_tail[t] = (k - 3 + t >= 0) ? svd.singular_values[k - 3 + t] : 0.0;
  Eigen::VectorXd v = svd.vt.row(n - 1).transpose();
  v.normalize();
  int imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0) v = -v;
  rep.a_rec = std::move(v);
  rep.success = (rep.nullity == 1);
  return rep;
}

// Delta = 1 - |cos angle| between the two coefficient vectors; invariant
// under scaling and global sign of either argument.
inline double recovery_error(const Eigen::VectorXd& a_true,
                             const Eigen::VectorXd& a_rec) {
  if (a_true.size() != a_rec.size())
    throw std::invalid_argument("recovery_error: size mismatch");
  const double nt = a_true.norm(), nr = a_rec.norm();
  if (nt == 0.0 || nr == 0.0)
    throw std::invalid_argument("recovery_error: zero vector");
  return std::max(0.0, 1.0 - std::abs(a_true.dot(a_rec)) / (nt * nr));
}

// Smallest L with S >= N - 1, or nullopt if none up to l_max.  Lengths where
// the profile does not fit in the Hilbert space are skipped.
inline std::optional<int> critical_length(ModelKind kind,
                                          const std::vector<int>& q,
                                          int l_max) {
  for (int length = model_min_length(kind); length <= l_max; ++length) {
    std::int64_t total = 0;
    for (int qm : q) total += qm;
    if (total > (std::int64_t{1} << length)) continue;
    const DegeneracyProfile prof{q, length};
    if (predicted_lie_count(prof) >= term_count(kind, length) - 1)
      return length;
  }
  return std::nullopt;
}

}  // namespace hamrec
