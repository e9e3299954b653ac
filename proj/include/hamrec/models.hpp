#pragma once

// Term bases of the generic 2-local and 3-local open chain models,
// random coefficient instances and Hamiltonian assembly.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamrec/pauli.hpp"

namespace hamrec {

enum class ModelKind { H2, H3 };

inline std::string model_name(ModelKind k) {
  return k == ModelKind::H2 ? "h2" : "h3";
}

inline ModelKind model_from_name(const std::string& s) {
  if (s == "h2" || s == "H2") return ModelKind::H2;
  if (s == "h3" || s == "H3") return ModelKind::H3;
  throw std::invalid_argument("unknown model: " + s);
}

inline int model_min_length(ModelKind k) {
  return k == ModelKind::H2 ? 2 : 3;
}

// Closed-form term counts: 12L-9 (2-local) and 48L-81 (3-local).
inline int term_count(ModelKind kind, int length) {
  if (length < model_min_length(kind))
    throw std::invalid_argument("term_count: chain too short for model");
  return kind == ModelKind::H2 ? 12 * length - 9 : 48 * length - 81;
}

class TermBasis {
 public:
  TermBasis(ModelKind kind, int length)
      : kind_(kind), length_(length) {
    if (length < model_min_length(kind))
      throw std::invalid_argument("TermBasis: chain too short for model");
    const PauliOp xyz[3] = {PauliOp::X, PauliOp::Y, PauliOp::Z};
    auto push = [&](int site, std::initializer_list<PauliOp> local) {
      std::vector<PauliOp> ops(length, PauliOp::I);
      int s = site;
      for (PauliOp p : local) ops[s++] = p;
      terms_.emplace_back(length, std::move(ops));
    };
    // single-site terms, site-major
    for (int l = 0; l < length; ++l)
      for (PauliOp a : xyz) push(l, {a});
    // nearest-neighbor terms
    for (int l = 0; l + 1 < length; ++l)
      for (PauliOp a : xyz)
        for (PauliOp b : xyz) push(l, {a, b});
    if (kind == ModelKind::H3) {
      // width-3 support block: middle site ranges over {I,X,Y,Z}, so this
      // includes next-nearest-neighbor two-site couplings (36 per start).
      const PauliOp mid[4] = {PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z};
      for (int l = 0; l + 2 < length; ++l)
        for (PauliOp a : xyz)
          for (PauliOp b : mid)
            for (PauliOp c : xyz) push(l, {a, b, c});
    }
    if (static_cast<int>(terms_.size()) != term_count(kind, length))
      throw std::logic_error("TermBasis: enumeration disagrees with closed form");
  }

  ModelKind kind() const { return kind_; }
  int length() const { return length_; }
  int count() const { return static_cast<int>(terms_.size()); }
  const std::vector<PauliString>& terms() const { return terms_; }
  const PauliString& term(int n) const { return terms_.at(n); }

 private:
  ModelKind kind_;
  int length_;
  std::vector<PauliString> terms_;
};

inline TermBasis enumerate_terms(ModelKind kind, int length) {
  return TermBasis(kind, length);
}

struct CoefficientVector {
  ModelKind kind;
  int length = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd values;
};

namespace detail {

// mt19937_64 + Box-Muller, bit-reproducible across platforms
// (std::normal_distribution is not).
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  double uniform01() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace detail

// i.i.d. standard normal coefficients; same seed, same vector.
inline CoefficientVector random_instance(ModelKind kind, int length,
                                         std::uint64_t seed) {
  const int n = term_count(kind, length);
  detail::GaussianSource g(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = g.next();
  return {kind, length, seed, std::move(v)};
}

// H = sum_n a_n h_n as a dense matrix.
inline Mat assemble_dense(const TermBasis& basis, const CoefficientVector& a) {
  if (a.values.size() != basis.count())
    throw std::invalid_argument("assemble: coefficient/basis size mismatch");
  const std::int64_t dim = std::int64_t{1} << basis.length();
  Mat h = Mat::Zero(dim, dim);
  for (int n = 0; n < basis.count(); ++n)
    basis.term(n).accumulate(h, a.values[n]);
  return h;
}

// Matrix-free applier for the same operator.
inline std::function<Vec(const Vec&)> assemble_applier(
    const TermBasis& basis, const CoefficientVector& a) {
  if (a.values.size() != basis.count())
    throw std::invalid_argument("assemble: coefficient/basis size mismatch");
  return [&basis, values = a.values](const Vec& psi) {
    Vec acc = Vec::Zero(psi.size());
    for (int n = 0; n < basis.count(); ++n)
      acc += values[n] * basis.term(n).apply(psi);
    return acc;
  };
}

}  // namespace hamrec
