#pragma once

// Matrix-free Pauli-string kernels on L-qubit state vectors.
//
// Bit convention: site 1 is the most significant bit of the computational
// basis index, i.e. |b_1 b_2 ... b_L> maps to index (b_1 << (L-1)) | ... | b_L.

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hamrec {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

enum class PauliOp : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(PauliOp p) {
  return "IXYZ"[static_cast<int>(p)];
}

class PauliString {
 public:
  PauliString(int length, std::vector<PauliOp> ops)
      : length_(length), ops_(std::move(ops)) {
    if (length_ < 1 || static_cast<int>(ops_.size()) != length_)
      throw std::invalid_argument("PauliString: ops size must equal length");
    flip_mask_ = 0;
    phase_mask_ = 0;
    y_count_ = 0;
    for (int s = 0; s < length_; ++s) {
      const std::uint64_t bit = 1ull << (length_ - 1 - s);  // site s+1 -> MSB first
      switch (ops_[s]) {
        case PauliOp::I:
          break;
        case PauliOp::X:
          flip_mask_ |= bit;
          break;
        case PauliOp::Y:
          flip_mask_ |= bit;
          phase_mask_ |= bit;
          ++y_count_;
          break;
        case PauliOp::Z:
          phase_mask_ |= bit;
          break;
      }
    }
  }

  static PauliString from_label(const std::string& label) {
    std::vector<PauliOp> ops;
    ops.reserve(label.size());
    for (char c : label) {
      switch (c) {
        case 'I': ops.push_back(PauliOp::I); break;
        case 'X': ops.push_back(PauliOp::X); break;
        case 'Y': ops.push_back(PauliOp::Y); break;
        case 'Z': ops.push_back(PauliOp::Z); break;
        default: throw std::invalid_argument("bad Pauli label");
      }
    }
    return PauliString(static_cast<int>(label.size()), std::move(ops));
  }

  int length() const { return length_; }
  const std::vector<PauliOp>& ops() const { return ops_; }

  std::string label() const {
    std::string s(length_, 'I');
    for (int i = 0; i < length_; ++i) s[i] = pauli_char(ops_[i]);
    return s;
  }

  bool operator==(const PauliString& o) const {
    return length_ == o.length_ && ops_ == o.ops_;
  }

  // P|psi>, each output amplitude is one input amplitude times a phase in
  // {+-1, +-i}. O(2^L), no matrix is formed.
  Vec apply(const Vec& psi) const {
    const std::int64_t dim = std::int64_t{1} << length_;
    if (psi.size() != dim)
      throw std::invalid_argument("apply: dimension mismatch");
    static constexpr Complex i_pow[4] = {
        {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    const Complex base = i_pow[y_count_ & 3];
    Vec out(dim);
    for (std::int64_t idx = 0; idx < dim; ++idx) {
      const int par = std::popcount(static_cast<std::uint64_t>(idx) & phase_mask_) & 1;
      out[idx ^ static_cast<std::int64_t>(flip_mask_)] =
          (par ? -base : base) * psi[idx];
    }
    return out;
  }

  // <phi|P|psi>
  Complex matrix_element(const Vec& phi, const Vec& psi) const {
    if (phi.size() != psi.size())
      throw std::invalid_argument("matrix_element: dimension mismatch");
    return phi.dot(apply(psi));
  }

  // m += scale * P, exploiting the one-nonzero-per-column structure.
  void accumulate(Mat& m, Complex scale) const {
    const std::int64_t dim = std::int64_t{1} << length_;
    if (m.rows() != dim || m.cols() != dim)
      throw std::invalid_argument("accumulate: dimension mismatch");
    static constexpr Complex i_pow[4] = {
        {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    const Complex base = scale * i_pow[y_count_ & 3];
    for (std::int64_t idx = 0; idx < dim; ++idx) {
      const int par = std::popcount(static_cast<std::uint64_t>(idx) & phase_mask_) & 1;
      m(idx ^ static_cast<std::int64_t>(flip_mask_), idx) += par ? -base : base;
    }
  }

  // Explicit Kronecker-product matrix; test oracle only, guarded against
  // accidental 2^L x 2^L blowups.
  Mat dense(int max_length = 6) const {
    if (length_ > max_length)
      throw std::invalid_argument("dense: length exceeds oracle limit");
    Mat m = Mat::Identity(1, 1);
    for (int s = 0; s < length_; ++s) {
      Mat site(2, 2);
      switch (ops_[s]) {
        case PauliOp::I: site << 1, 0, 0, 1; break;
        case PauliOp::X: site << 0, 1, 1, 0; break;
        case PauliOp::Y: site << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case PauliOp::Z: site << 1, 0, 0, -1; break;
      }
      // kron(m, site): earlier sites stay most significant
      Mat next(m.rows() * 2, m.cols() * 2);
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
          next.block(i * 2, j * 2, 2, 2) = m(i, j) * site;
      m = std::move(next);
    }
    return m;
  }

 private:
  int length_;
  std::vector<PauliOp> ops_;
  std::uint64_t flip_mask_;   // X and Y sites
  std::uint64_t phase_mask_;  // Y and Z sites
  int y_count_;
};

}  // namespace hamrec
