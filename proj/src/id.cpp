#include "oiobf/id.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "oiobf/rng.hpp"

namespace oiobf {

namespace {

// Complex Householder QR with column pivoting. Stops at the requested
// tolerance or rank limit; returns the pivot order and the triangular factor
// restricted to the first `rank` rows.
struct QrcpResult {
  std::vector<std::int64_t> perm;  // 0-based column order, pivots first
  Matrix r;                        // rank x n, upper trapezoidal in pivot order
  std::int64_t rank = 0;
  bool saturated = false;
};

QrcpResult qrcp(Matrix a, double tol, std::int64_t rank_limit) {
  const std::int64_t m = a.rows();
  const std::int64_t n = a.cols();
  QrcpResult res;
  res.perm.resize(static_cast<std::size_t>(n));
  std::iota(res.perm.begin(), res.perm.end(), 0);

  const std::int64_t limit = std::min({m, n, rank_limit});
  double ref = 0;  // |R(1,1)|
  std::int64_t k = 0;
  for (;; ++k) {
    // exact residual norms of the trailing columns; first maximum wins so
    // equal norms break toward the lowest column index
    std::int64_t jmax = -1;
    double best = -1;
    for (std::int64_t j = k; j < n; ++j) {
      const double c = a.col(j).tail(m - k).squaredNorm();
      if (c > best) {
        best = c;
        jmax = j;
      }
    }
    const double eta = jmax >= 0 ? std::sqrt(best) : 0;
    if (k == 0) {
      ref = eta;
      if (ref == 0) break;  // zero matrix
    } else if (jmax < 0 || eta <= tol * ref) {
      break;  // tolerance met
    }
    if (k == limit) {
      res.saturated = (eta > tol * ref) && (limit < n);
      break;
    }

    a.col(k).swap(a.col(jmax));
    std::swap(res.perm[static_cast<std::size_t>(k)], res.perm[static_cast<std::size_t>(jmax)]);

    // Householder reflector zeroing a(k+1:m, k)
    const std::int64_t tail = m - k;
    Vector x = a.col(k).tail(tail);
    const double xnorm = x.norm();
    if (xnorm > 0) {
      Complex alpha = x(0);
      const Complex sign = (alpha == Complex(0, 0)) ? Complex(1, 0) : alpha / std::abs(alpha);
      Vector v = x;
      v(0) += sign * xnorm;
      const double vnorm2 = v.squaredNorm();
      if (vnorm2 > 0) {
        // apply H = I - 2 v v^H / (v^H v) to the trailing block
        auto block = a.bottomRightCorner(tail, n - k);
        Eigen::RowVectorXcd w = (2.0 / vnorm2) * (v.adjoint() * block);
        block.noalias() -= v * w;
      }
      a.col(k).tail(tail).setZero();
      a(k, k) = -sign * xnorm;
    }
  }

  res.rank = k;
  res.r = a.topRows(k);
  return res;
}

ColumnID id_from_qrcp(const QrcpResult& q, std::int64_t n) {
  ColumnID id;
  id.rank = q.rank;
  id.saturated = q.saturated;
  const std::int64_t r = q.rank;

  Matrix t;  // r x (n - r), interpolation coefficients in pivot order
  if (r > 0 && n > r) {
    t = q.r.topLeftCorner(r, r).triangularView<Eigen::Upper>().solve(q.r.topRightCorner(r, n - r));
  } else {
    t.resize(r, n - r);
  }

  // skeleton in ascending column order; permute interp rows to match
  std::vector<std::int64_t> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    return q.perm[static_cast<std::size_t>(a)] < q.perm[static_cast<std::size_t>(b)];
  });

  id.skeleton.resize(static_cast<std::size_t>(r));
  id.interp = Matrix::Zero(r, n);
  for (std::int64_t i = 0; i < r; ++i) {
    const std::int64_t p = order[static_cast<std::size_t>(i)];
    id.skeleton[static_cast<std::size_t>(i)] = q.perm[static_cast<std::size_t>(p)] + 1;
    id.interp(i, q.perm[static_cast<std::size_t>(p)]) = Complex(1, 0);
    for (std::int64_t j = r; j < n; ++j)
      id.interp(i, q.perm[static_cast<std::size_t>(j)]) = t(p, j - r);
  }
  id.interp_max_abs = (r > 0 && n > 0) ? id.interp.cwiseAbs().maxCoeff() : 0.0;
  if (id.interp_max_abs > 10)
    std::cerr << "[oiobf] warning: interpolation entries reach " << id.interp_max_abs << "\n";
  return id;
}

}  // namespace

ColumnID column_id(const Matrix& k, double tol, std::optional<std::int64_t> max_rank) {
  require(k.rows() > 0 && k.cols() > 0, "column_id: empty matrix");
  require(tol > 0 && tol < 1, "column_id: tolerance must be in (0,1)");
  const std::int64_t limit = max_rank.value_or(std::min(k.rows(), k.cols()));
  QrcpResult q = qrcp(k, tol, limit);
  return id_from_qrcp(q, k.cols());
}

RowID row_id(const Matrix& k, double tol, std::optional<std::int64_t> max_rank) {
  ColumnID c = column_id(k.transpose(), tol, max_rank);
  RowID r;
  r.skeleton = std::move(c.skeleton);
  r.interp = c.interp.transpose();
  r.rank = c.rank;
  r.saturated = c.saturated;
  r.interp_max_abs = c.interp_max_abs;
  return r;
}

HybridID hybrid_id(const Matrix& k, double tol) {
  HybridID h;
  h.col = column_id(k, tol);
  h.row = row_id(k, tol);
  h.core.resize(h.row.rank, h.col.rank);
  for (std::int64_t i = 0; i < h.row.rank; ++i)
    for (std::int64_t j = 0; j < h.col.rank; ++j)
      h.core(i, j) = k(h.row.skeleton[static_cast<std::size_t>(i)] - 1,
                       h.col.skeleton[static_cast<std::size_t>(j)] - 1);
  return h;
}

IndexList select_proxies_count(std::int64_t extent, std::int64_t count, ProxyMode mode,
                               std::uint64_t seed) {
  require(extent >= 1, "select_proxies: extent must be positive");
  count = std::min(extent, std::max<std::int64_t>(count, 1));
  IndexList out;
  switch (mode) {
    case ProxyMode::All: {
      out.resize(static_cast<std::size_t>(extent));
      std::iota(out.begin(), out.end(), 1);
      break;
    }
    case ProxyMode::EvenlySpaced: {
      const std::int64_t stride = std::max<std::int64_t>(1, extent / count);
      for (std::int64_t i = 0; i < count; ++i) out.push_back(1 + i * stride);
      break;
    }
    case ProxyMode::UniformRandom: {
      std::vector<std::int64_t> pool(static_cast<std::size_t>(extent));
      std::iota(pool.begin(), pool.end(), 1);
      SplitMix64 g(seed);
      for (std::int64_t i = 0; i < count; ++i) {
        const std::int64_t j = i + static_cast<std::int64_t>(g.bounded(static_cast<std::uint64_t>(extent - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      }
      out.assign(pool.begin(), pool.begin() + count);
      std::sort(out.begin(), out.end());
      break;
    }
  }
  return out;
}

IndexList select_proxies(std::int64_t extent, std::int64_t rank_estimate,
                         const ProxyStrategy& strategy, std::uint64_t seed) {
  const std::int64_t count =
      strategy.mode == ProxyMode::All ? extent : std::min(extent, strategy.q * std::max<std::int64_t>(rank_estimate, 1));
  return select_proxies_count(extent, count, strategy.mode, seed);
}

namespace {

// Builds the proxy-row index lists for one unfolding: one list per mode except
// `skip`, each of size min(extent, per_mode), with the product of the sizes
// reduced below the strategy row cap by halving the largest lists first.
std::vector<IndexList> proxy_lists(const std::vector<IndexRange>& ranges, std::size_t skip,
                                   std::int64_t per_mode, const ProxyStrategy& strategy,
                                   std::uint64_t seed) {
  std::vector<std::int64_t> counts(ranges.size(), 0);
  for (std::size_t p = 0; p < ranges.size(); ++p) {
    if (p == skip) continue;
    counts[p] = strategy.mode == ProxyMode::All ? ranges[p].size()
                                                : std::min(ranges[p].size(), per_mode);
  }
  auto rows_of = [&]() {
    std::int64_t r = 1;
    for (std::size_t p = 0; p < ranges.size(); ++p)
      if (p != skip) r *= counts[p];
    return r;
  };
  while (rows_of() > strategy.row_cap) {
    std::size_t argmax = skip == 0 ? 1 : 0;
    for (std::size_t p = 0; p < ranges.size(); ++p)
      if (p != skip && counts[p] > counts[argmax]) argmax = p;
    if (counts[argmax] <= 2) break;
    counts[argmax] = (counts[argmax] + 1) / 2;
  }

  std::vector<IndexList> lists(ranges.size());
  for (std::size_t p = 0; p < ranges.size(); ++p) {
    if (p == skip) continue;
    IndexList local = select_proxies_count(ranges[p].size(), counts[p], strategy.mode,
                                           derive_seed(seed, {0x70, static_cast<std::uint64_t>(p)}));
    for (auto& v : local) v += ranges[p].lo - 1;
    lists[p] = std::move(local);
  }
  return lists;
}

}  // namespace

TuckerID tucker_id(const KernelEvaluator& k, const MultiSet& rows, const MultiSet& cols,
                   double tol, const ProxyStrategy& proxies, std::uint64_t seed) {
  const std::size_t d = static_cast<std::size_t>(k.d);
  require(rows.size() == d && cols.size() == d, "tucker_id: wrong mode count");

  std::vector<IndexRange> ranges;
  ranges.insert(ranges.end(), rows.begin(), rows.end());
  ranges.insert(ranges.end(), cols.begin(), cols.end());

  TuckerID out;
  out.d = k.d;
  out.row_skeletons.resize(d);
  out.col_skeletons.resize(d);
  out.row_interp.resize(d);
  out.col_interp.resize(d);
  out.ranks.assign(2 * d, 0);

  std::int64_t r_est = 8;
  for (std::size_t mode = 0; mode < 2 * d; ++mode) {
    const IndexRange target = ranges[mode];
    ColumnID id;
    for (std::int64_t attempt = 0;; ++attempt) {
      const std::int64_t per_mode = proxies.q * r_est * (std::int64_t{1} << attempt);
      const std::uint64_t s = derive_seed(seed, {0x1D, static_cast<std::uint64_t>(mode),
                                                 static_cast<std::uint64_t>(attempt)});
      auto lists = proxy_lists(ranges, mode, per_mode, proxies, s);
      lists[mode] = range_to_list(target);

      std::vector<IndexList> rl(lists.begin(), lists.begin() + static_cast<std::ptrdiff_t>(d));
      std::vector<IndexList> cl(lists.begin() + static_cast<std::ptrdiff_t>(d), lists.end());
      DenseTensor sub = subtensor_at(k, rl, cl);
      Matrix unf = unfold(sub, static_cast<std::int64_t>(mode) + 1).m;
      id = column_id(unf, tol);
      if (!id.saturated || attempt >= proxies.max_retries) break;
    }
    out.saturated = out.saturated || id.saturated;
    out.ranks[mode] = id.rank;
    r_est = std::max(r_est, id.rank);

    IndexList global = id.skeleton;
    for (auto& v : global) v += target.lo - 1;
    if (mode < d) {
      out.row_skeletons[mode] = std::move(global);
      out.row_interp[mode] = std::move(id.interp);
    } else {
      out.col_skeletons[mode - d] = std::move(global);
      out.col_interp[mode - d] = std::move(id.interp);
    }
  }

  out.core = subtensor_at(k, out.row_skeletons, out.col_skeletons);
  return out;
}

std::int64_t TuckerID::memory_bytes() const {
  std::int64_t scalars = core.size();
  for (const auto& m : row_interp) scalars += m.size();
  for (const auto& m : col_interp) scalars += m.size();
  return scalars * static_cast<std::int64_t>(sizeof(Complex));
}

DenseTensor tucker_reconstruct(const TuckerID& t) {
  DenseTensor acc = t.core;
  for (std::int64_t k = 0; k < t.d; ++k)
    acc = mode_product(acc, k + 1, t.row_interp[static_cast<std::size_t>(k)].transpose());
  for (std::int64_t k = 0; k < t.d; ++k)
    acc = mode_product(acc, t.d + k + 1, t.col_interp[static_cast<std::size_t>(k)].transpose());
  return acc;
}

DenseTensor tucker_contract(const TuckerID& t, const DenseTensor& f) {
  require(f.mode_count() == t.d + 1, "tucker_contract: input must have d+1 modes");
  DenseTensor g = f;
  for (std::int64_t k = 0; k < t.d; ++k)
    g = mode_product(g, k + 1, t.col_interp[static_cast<std::size_t>(k)]);

  std::vector<std::int64_t> core_rows(t.core.shape().begin(), t.core.shape().begin() + t.d);
  std::vector<std::int64_t> core_cols(t.core.shape().begin() + t.d, t.core.shape().end());
  std::vector<std::int64_t> rm(static_cast<std::size_t>(t.d)), cm(static_cast<std::size_t>(t.d));
  std::iota(rm.begin(), rm.end(), 1);
  std::iota(cm.begin(), cm.end(), t.d + 1);
  Matrix core_mat = matricize(t.core, rm, cm);

  std::vector<std::int64_t> fr(static_cast<std::size_t>(t.d));
  std::iota(fr.begin(), fr.end(), 1);
  Matrix f_mat = matricize(g, fr, {t.d + 1});
  Matrix g_mat = core_mat * f_mat;

  std::vector<std::int64_t> g_shape = core_rows;
  g_shape.push_back(f.extent(t.d + 1));
  DenseTensor out = fold_matricization(g_mat, core_rows, {f.extent(t.d + 1)});
  for (std::int64_t k = 0; k < t.d; ++k)
    out = mode_product(out, k + 1, t.row_interp[static_cast<std::size_t>(k)].transpose());
  return out;
}

}  // namespace oiobf
