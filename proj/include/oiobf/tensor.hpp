#ifndef OIOBF_TENSOR_HPP
#define OIOBF_TENSOR_HPP

#include <functional>

#include "oiobf/types.hpp"

namespace oiobf {

// Dense multi-mode tensor of complex doubles.
//
// Linearization convention (used everywhere in this project): the FIRST mode
// varies fastest, i.e. flat(i_1,...,i_D) = (i_1-1) + n_1*((i_2-1) + n_2*(...)).
// This is the column-major generalization, so a 2-mode tensor viewed through
// data() is a column-major matrix.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<std::int64_t> shape);
  DenseTensor(std::vector<std::int64_t> shape, std::vector<Complex> data);

  std::int64_t mode_count() const { return static_cast<std::int64_t>(shape_.size()); }
  const std::vector<std::int64_t>& shape() const { return shape_; }
  std::int64_t extent(std::int64_t mode1b) const { return shape_.at(static_cast<std::size_t>(mode1b - 1)); }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  // Flat offset of a 1-based multi-index.
  std::int64_t flatten(const MultiIndex& idx) const;
  MultiIndex unflatten(std::int64_t flat) const;

  Complex at(const MultiIndex& idx) const { return data_[static_cast<std::size_t>(flatten(idx))]; }
  Complex& at(const MultiIndex& idx) { return data_[static_cast<std::size_t>(flatten(idx))]; }

  double frobenius_norm() const;

  // Subtensor at one contiguous range per mode (1-based, inclusive).
  DenseTensor slice(const MultiSet& ranges) const;

 private:
  std::vector<std::int64_t> shape_;
  std::vector<Complex> data_;
};

// Mode-j unfolding: (prod_{k != j} n_k) x n_j matrix. Row index flattens the
// complement multi-index (modes in increasing order, first listed fastest),
// column index is mode j.
struct Unfolding {
  std::vector<std::int64_t> source_shape;
  std::int64_t mode = 1;  // 1-based
  Matrix m;
};

Unfolding unfold(const DenseTensor& t, std::int64_t mode);
DenseTensor refold(const Unfolding& u);

// Mode-j tensor-matrix product: Y = T x_j X with X (r x n_j); satisfies
// Y^(j) = T^(j) X^T. Result replaces extent n_j with r.
DenseTensor mode_product(const DenseTensor& t, std::int64_t mode, const Matrix& x);

// Mode-j product with a block-diagonal X given as a list of dense blocks.
// Column extents of the blocks must sum to extent(mode).
DenseTensor mode_product_blockdiag(const DenseTensor& t, std::int64_t mode,
                                   const std::vector<const Matrix*>& blocks,
                                   bool transpose_blocks = false);

// Reshape into a (prod row extents) x (prod col extents) matrix. row_modes and
// col_modes must partition {1..D}; flattening within each side follows the
// listed order, first listed fastest.
Matrix matricize(const DenseTensor& t, const std::vector<std::int64_t>& row_modes,
                 const std::vector<std::int64_t>& col_modes);

// Inverse of matricize for the standard split rows={1..d}, cols={d+1..2d}.
DenseTensor fold_matricization(const Matrix& m, const std::vector<std::int64_t>& row_shape,
                               const std::vector<std::int64_t>& col_shape);

// Entry function of a 2d-mode operator tensor: (i, j) -> K(i, j) in O(1).
// Pure and safe to call concurrently.
struct KernelEvaluator {
  std::int64_t d = 0;
  std::vector<std::int64_t> row_extents;  // m_1..m_d
  std::vector<std::int64_t> col_extents;  // n_1..n_d
  std::function<Complex(const MultiIndex&, const MultiIndex&)> eval;

  Complex operator()(const MultiIndex& i, const MultiIndex& j) const { return eval(i, j); }
  MultiSet full_rows() const;
  MultiSet full_cols() const;
};

// Materialize K(rows, cols) as a 2d-mode tensor, calling eval exactly
// prod|tau_k| * prod|nu_k| times.
DenseTensor subtensor(const KernelEvaluator& k, const MultiSet& rows, const MultiSet& cols);

// Same with arbitrary sorted index lists per mode (first d lists are row
// modes, last d are column modes).
DenseTensor subtensor_at(const KernelEvaluator& k, const std::vector<IndexList>& rows,
                         const std::vector<IndexList>& cols);

}  // namespace oiobf

#endif
