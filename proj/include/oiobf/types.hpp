#ifndef OIOBF_TYPES_HPP
#define OIOBF_TYPES_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oiobf {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// 1-based index tuple (i_1,...,i_d), one entry per mode.
using MultiIndex = std::vector<std::int64_t>;

// Contiguous 1-based index range [lo, hi], both inclusive.
struct IndexRange {
  std::int64_t lo = 1;
  std::int64_t hi = 0;

  std::int64_t size() const { return hi - lo + 1; }
  bool contains(std::int64_t i) const { return i >= lo && i <= hi; }
};

// One contiguous range per mode: the multi-set (tau_1,...,tau_d).
using MultiSet = std::vector<IndexRange>;

// Sorted list of 1-based indices within one mode (skeleton sets).
using IndexList = std::vector<std::int64_t>;

inline MultiSet replace_mode(const MultiSet& ms, std::size_t k, IndexRange r) {
  MultiSet out = ms;
  out.at(k) = r;
  return out;
}

inline IndexList range_to_list(IndexRange r) {
  IndexList out;
  out.reserve(static_cast<std::size_t>(r.size()));
  for (std::int64_t i = r.lo; i <= r.hi; ++i) out.push_back(i);
  return out;
}

[[noreturn]] inline void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

}  // namespace oiobf

#endif
