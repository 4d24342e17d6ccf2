#ifndef OIOBF_ID_HPP
#define OIOBF_ID_HPP

#include <optional>

#include "oiobf/tensor.hpp"
#include "oiobf/types.hpp"

namespace oiobf {

// Column interpolative decomposition K ~= K(:, skeleton) * interp, computed by
// Householder QR with column pivoting on column norms. Skeleton indices are
// 1-based into the columns of K and sorted ascending; interp rows follow the
// sorted order, so interp(:, skeleton[i]) = e_i exactly.
struct ColumnID {
  IndexList skeleton;
  Matrix interp;  // rank x ncols
  std::int64_t rank = 0;
  bool saturated = false;     // hit max_rank before the tolerance was met
  double interp_max_abs = 0;  // quality diagnostic, warned above 10
};

struct RowID {
  IndexList skeleton;  // selected row indices, sorted
  Matrix interp;       // nrows x rank, so K ~= interp * K(skeleton, :)
  std::int64_t rank = 0;
  bool saturated = false;
  double interp_max_abs = 0;
};

struct HybridID {
  RowID row;
  ColumnID col;
  Matrix core;  // K(row.skeleton, col.skeleton)
};

// Truncation rule: rank r is the smallest k such that the next pivot residual
// norm |R(k+1,k+1)| <= tol * |R(1,1)|. Ties between equal column norms break
// toward the lowest column index.
ColumnID column_id(const Matrix& k, double tol,
                   std::optional<std::int64_t> max_rank = std::nullopt);

RowID row_id(const Matrix& k, double tol,
             std::optional<std::int64_t> max_rank = std::nullopt);

HybridID hybrid_id(const Matrix& k, double tol);

enum class ProxyMode { All, UniformRandom, EvenlySpaced };

struct ProxyStrategy {
  ProxyMode mode = ProxyMode::UniformRandom;
  std::int64_t q = 3;           // oversampling factor for the per-mode count
  std::int64_t max_retries = 3; // doubling retries on ID saturation
  std::int64_t row_cap = 1 << 17;  // cap on materialized proxy-row counts
};

// Deterministic proxy index set of size min(extent, q * rank_estimate),
// sorted ascending, 1-based. UniformRandom draws without replacement from the
// seeded generator; EvenlySpaced uses a stride lattice starting at 1.
IndexList select_proxies(std::int64_t extent, std::int64_t rank_estimate,
                         const ProxyStrategy& strategy, std::uint64_t seed);

// As select_proxies but with an explicit count (used by the doubling retries).
IndexList select_proxies_count(std::int64_t extent, std::int64_t count, ProxyMode mode,
                               std::uint64_t seed);

// Tucker-like interpolative decomposition of the 2d-mode operator restricted
// to (rows, cols). Each mode is compressed independently by the column ID of
// its (proxy-subsampled) unfolding; the core is the exact subtensor at the
// skeleton multi-sets.
struct TuckerID {
  std::int64_t d = 0;
  std::vector<IndexList> row_skeletons;  // d lists of global row indices
  std::vector<IndexList> col_skeletons;  // d lists of global col indices
  std::vector<Matrix> row_interp;        // U^k: r_k x |tau_k|
  std::vector<Matrix> col_interp;        // V^k: r_k x |nu_k|
  DenseTensor core;                      // K(row_skeletons, col_skeletons)
  std::vector<std::int64_t> ranks;       // 2d ranks, row modes then col modes
  bool saturated = false;

  std::int64_t memory_bytes() const;
};

TuckerID tucker_id(const KernelEvaluator& k, const MultiSet& rows, const MultiSet& cols,
                   double tol, const ProxyStrategy& proxies, std::uint64_t seed);

// Reconstruction of the decomposition as a dense tensor (test/oracle use).
DenseTensor tucker_reconstruct(const TuckerID& t);

// Contraction G = K x_{d+1..2d} F through the Tucker-ID factors, with F a
// (d+1)-mode tensor (n_1..n_d, n_v).
DenseTensor tucker_contract(const TuckerID& t, const DenseTensor& f);

}  // namespace oiobf

#endif
