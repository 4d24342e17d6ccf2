#include "oiobf/tensor.hpp"

#include <cmath>
#include <numeric>

namespace oiobf {

namespace {

std::int64_t product(const std::vector<std::int64_t>& v) {
  std::int64_t p = 1;
  for (auto e : v) p *= e;
  return p;
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::int64_t> shape) : shape_(std::move(shape)) {
  for (auto e : shape_) require(e >= 0, "DenseTensor: negative extent");
  data_.assign(static_cast<std::size_t>(product(shape_)), Complex(0, 0));
}

DenseTensor::DenseTensor(std::vector<std::int64_t> shape, std::vector<Complex> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  require(static_cast<std::int64_t>(data_.size()) == product(shape_),
          "DenseTensor: data length does not match shape");
}

std::int64_t DenseTensor::flatten(const MultiIndex& idx) const {
  require(idx.size() == shape_.size(), "flatten: wrong index length");
  std::int64_t flat = 0;
  std::int64_t stride = 1;
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    require(idx[k] >= 1 && idx[k] <= shape_[k], "flatten: index out of range");
    flat += (idx[k] - 1) * stride;
    stride *= shape_[k];
  }
  return flat;
}

MultiIndex DenseTensor::unflatten(std::int64_t flat) const {
  MultiIndex idx(shape_.size());
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    idx[k] = flat % shape_[k] + 1;
    flat /= shape_[k];
  }
  return idx;
}

double DenseTensor::frobenius_norm() const {
  double s = 0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

DenseTensor DenseTensor::slice(const MultiSet& ranges) const {
  require(static_cast<std::int64_t>(ranges.size()) == mode_count(), "slice: wrong range count");
  std::vector<std::int64_t> out_shape(ranges.size());
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    require(ranges[k].lo >= 1 && ranges[k].hi <= shape_[k] && ranges[k].size() >= 0,
            "slice: range out of bounds");
    out_shape[k] = ranges[k].size();
  }
  DenseTensor out(out_shape);
  const std::int64_t total = out.size();
  MultiIndex src(ranges.size());
  for (std::int64_t f = 0; f < total; ++f) {
    MultiIndex local = out.unflatten(f);
    for (std::size_t k = 0; k < ranges.size(); ++k) src[k] = ranges[k].lo + local[k] - 1;
    out.data()[static_cast<std::size_t>(f)] = data_[static_cast<std::size_t>(flatten(src))];
  }
  return out;
}

Unfolding unfold(const DenseTensor& t, std::int64_t mode) {
  require(mode >= 1 && mode <= t.mode_count(), "unfold: mode out of range");
  const auto& shape = t.shape();
  const std::int64_t nj = shape[static_cast<std::size_t>(mode - 1)];
  std::int64_t rows = 1;
  for (std::int64_t k = 0; k < t.mode_count(); ++k)
    if (k != mode - 1) rows *= shape[static_cast<std::size_t>(k)];

  Unfolding u;
  u.source_shape = shape;
  u.mode = mode;
  u.m.resize(rows, nj);

  // stride of mode j in the flat layout and the strides of the complement
  const std::int64_t total = t.size();
  std::int64_t stride_j = 1;
  for (std::int64_t k = 0; k < mode - 1; ++k) stride_j *= shape[static_cast<std::size_t>(k)];

  // Walk the tensor once; for each flat offset compute (row, col).
  for (std::int64_t f = 0; f < total; ++f) {
    const std::int64_t col = (f / stride_j) % nj;
    // remove mode-j contribution: indices below mode j keep their place,
    // indices above shift down by one stride level
    const std::int64_t below = f % stride_j;
    const std::int64_t above = f / (stride_j * nj);
    const std::int64_t row = below + above * stride_j;
    u.m(row, col) = t.data()[static_cast<std::size_t>(f)];
  }
  return u;
}

DenseTensor refold(const Unfolding& u) {
  DenseTensor t(u.source_shape);
  const auto& shape = u.source_shape;
  const std::int64_t mode = u.mode;
  const std::int64_t nj = shape[static_cast<std::size_t>(mode - 1)];
  std::int64_t stride_j = 1;
  for (std::int64_t k = 0; k < mode - 1; ++k) stride_j *= shape[static_cast<std::size_t>(k)];
  const std::int64_t total = t.size();
  for (std::int64_t f = 0; f < total; ++f) {
    const std::int64_t col = (f / stride_j) % nj;
    const std::int64_t below = f % stride_j;
    const std::int64_t above = f / (stride_j * nj);
    const std::int64_t row = below + above * stride_j;
    t.data()[static_cast<std::size_t>(f)] = u.m(row, col);
  }
  return t;
}

DenseTensor mode_product(const DenseTensor& t, std::int64_t mode, const Matrix& x) {
  require(mode >= 1 && mode <= t.mode_count(), "mode_product: mode out of range");
  require(x.cols() == t.extent(mode), "mode_product: shape mismatch");
  Unfolding u = unfold(t, mode);
  Unfolding v;
  v.source_shape = t.shape();
  v.source_shape[static_cast<std::size_t>(mode - 1)] = x.rows();
  v.mode = mode;
  v.m = u.m * x.transpose();
  return refold(v);
}

DenseTensor mode_product_blockdiag(const DenseTensor& t, std::int64_t mode,
                                   const std::vector<const Matrix*>& blocks,
                                   bool transpose_blocks) {
  require(mode >= 1 && mode <= t.mode_count(), "mode_product_blockdiag: mode out of range");
  std::int64_t in_total = 0, out_total = 0;
  for (const Matrix* b : blocks) {
    in_total += transpose_blocks ? b->rows() : b->cols();
    out_total += transpose_blocks ? b->cols() : b->rows();
  }
  require(in_total == t.extent(mode), "mode_product_blockdiag: shape mismatch");

  Unfolding u = unfold(t, mode);
  Unfolding v;
  v.source_shape = t.shape();
  v.source_shape[static_cast<std::size_t>(mode - 1)] = out_total;
  v.mode = mode;
  v.m.resize(u.m.rows(), out_total);
  std::int64_t ci = 0, co = 0;
  for (const Matrix* b : blocks) {
    const std::int64_t bin = transpose_blocks ? b->rows() : b->cols();
    const std::int64_t bout = transpose_blocks ? b->cols() : b->rows();
    // Y^(j) = F^(j) X^T blockwise; with X = B^T the factor is B itself.
    if (transpose_blocks)
      v.m.middleCols(co, bout) = u.m.middleCols(ci, bin) * (*b);
    else
      v.m.middleCols(co, bout) = u.m.middleCols(ci, bin) * b->transpose();
    ci += bin;
    co += bout;
  }
  return refold(v);
}

Matrix matricize(const DenseTensor& t, const std::vector<std::int64_t>& row_modes,
                 const std::vector<std::int64_t>& col_modes) {
  const std::int64_t d = t.mode_count();
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (auto m : row_modes) {
    require(m >= 1 && m <= d && !seen[static_cast<std::size_t>(m - 1)], "matricize: bad row modes");
    seen[static_cast<std::size_t>(m - 1)] = true;
  }
  for (auto m : col_modes) {
    require(m >= 1 && m <= d && !seen[static_cast<std::size_t>(m - 1)], "matricize: bad col modes");
    seen[static_cast<std::size_t>(m - 1)] = true;
  }
  for (bool s : seen) require(s, "matricize: modes must cover all modes");

  std::int64_t rows = 1, cols = 1;
  for (auto m : row_modes) rows *= t.extent(m);
  for (auto m : col_modes) cols *= t.extent(m);
  Matrix out(rows, cols);

  const std::int64_t total = t.size();
  for (std::int64_t f = 0; f < total; ++f) {
    MultiIndex idx = t.unflatten(f);
    std::int64_t r = 0, rstride = 1;
    for (auto m : row_modes) {
      r += (idx[static_cast<std::size_t>(m - 1)] - 1) * rstride;
      rstride *= t.extent(m);
    }
    std::int64_t c = 0, cstride = 1;
    for (auto m : col_modes) {
      c += (idx[static_cast<std::size_t>(m - 1)] - 1) * cstride;
      cstride *= t.extent(m);
    }
    out(r, c) = t.data()[static_cast<std::size_t>(f)];
  }
  return out;
}

DenseTensor fold_matricization(const Matrix& m, const std::vector<std::int64_t>& row_shape,
                               const std::vector<std::int64_t>& col_shape) {
  std::vector<std::int64_t> shape = row_shape;
  shape.insert(shape.end(), col_shape.begin(), col_shape.end());
  std::int64_t rows = 1, cols = 1;
  for (auto e : row_shape) rows *= e;
  for (auto e : col_shape) cols *= e;
  require(m.rows() == rows && m.cols() == cols, "fold_matricization: shape mismatch");
  DenseTensor t(shape);
  // both sides flatten first-fastest, so the flat tensor layout coincides with
  // column-major (row-fastest) traversal of the matrix
  for (std::int64_t c = 0; c < cols; ++c)
    for (std::int64_t r = 0; r < rows; ++r)
      t.data()[static_cast<std::size_t>(c * rows + r)] = m(r, c);
  return t;
}

MultiSet KernelEvaluator::full_rows() const {
  MultiSet ms;
  for (auto e : row_extents) ms.push_back({1, e});
  return ms;
}

MultiSet KernelEvaluator::full_cols() const {
  MultiSet ms;
  for (auto e : col_extents) ms.push_back({1, e});
  return ms;
}

DenseTensor subtensor(const KernelEvaluator& k, const MultiSet& rows, const MultiSet& cols) {
  std::vector<IndexList> rl, cl;
  require(static_cast<std::int64_t>(rows.size()) == k.d && static_cast<std::int64_t>(cols.size()) == k.d,
          "subtensor: wrong mode count");
  for (std::size_t p = 0; p < rows.size(); ++p) {
    require(rows[p].lo >= 1 && rows[p].hi <= k.row_extents[p], "subtensor: row range out of bounds");
    rl.push_back(range_to_list(rows[p]));
  }
  for (std::size_t p = 0; p < cols.size(); ++p) {
    require(cols[p].lo >= 1 && cols[p].hi <= k.col_extents[p], "subtensor: col range out of bounds");
    cl.push_back(range_to_list(cols[p]));
  }
  return subtensor_at(k, rl, cl);
}

DenseTensor subtensor_at(const KernelEvaluator& k, const std::vector<IndexList>& rows,
                         const std::vector<IndexList>& cols) {
  const std::size_t d = static_cast<std::size_t>(k.d);
  require(rows.size() == d && cols.size() == d, "subtensor_at: wrong mode count");
  std::vector<std::int64_t> shape;
  for (const auto& l : rows) shape.push_back(static_cast<std::int64_t>(l.size()));
  for (const auto& l : cols) shape.push_back(static_cast<std::int64_t>(l.size()));
  DenseTensor t(shape);
  const std::int64_t total = t.size();
  MultiIndex i(d), j(d);
  for (std::int64_t f = 0; f < total; ++f) {
    MultiIndex local = t.unflatten(f);
    for (std::size_t p = 0; p < d; ++p) i[p] = rows[p][static_cast<std::size_t>(local[p] - 1)];
    for (std::size_t p = 0; p < d; ++p) j[p] = cols[p][static_cast<std::size_t>(local[d + p] - 1)];
    t.data()[static_cast<std::size_t>(f)] = k.eval(i, j);
  }
  return t;
}

}  // namespace oiobf
