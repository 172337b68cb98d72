#ifndef SUBSPEC_SAMPLING_HPP
#define SUBSPEC_SAMPLING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "subspec/linalg.hpp"
#include "subspec/rng.hpp"

namespace subspec {

/// A k-subset of {0, ..., n-1}, sorted ascending. User-facing output adds 1.
struct SubsetSample {
  std::vector<std::size_t> indices;
  std::size_t n = 0;

  std::size_t k() const noexcept { return indices.size(); }
  friend bool operator==(const SubsetSample&, const SubsetSample&) = default;
};

inline constexpr char kPrngName[] =
    "xoshiro256++ seeded by splitmix64; sample seed = "
    "splitmix64(master ^ splitmix64(i + 1))";

/// Seed of the i-th sample's private stream.
constexpr std::uint64_t derive_sample_seed(std::uint64_t master_seed,
                                           std::uint64_t i) noexcept {
  return splitmix64_mix(master_seed ^ splitmix64_mix(i + 1));
}

inline Xoshiro256pp sample_stream(std::uint64_t master_seed, std::uint64_t i) {
  return Xoshiro256pp(derive_sample_seed(master_seed, i));
}

/// Uniform k-subset: first k slots of a partial Fisher-Yates shuffle, sorted.
/// Always consumes exactly k draws.
inline SubsetSample random_k_subset(std::size_t n, std::size_t k,
                                    Xoshiro256pp& rng) {
  if (k < 1 || k > n) throw std::invalid_argument("k out of range");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(rng, n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(k);
  std::sort(perm.begin(), perm.end());
  return {std::move(perm), n};
}

/// Rows `row_idx` and columns `col_idx` of m, in the given order.
inline DenseMatrix submatrix(const DenseMatrix& m,
                             std::span<const std::size_t> row_idx,
                             std::span<const std::size_t> col_idx) {
  DenseMatrix out(row_idx.size(), col_idx.size(), m.field());
  for (std::size_t a = 0; a < row_idx.size(); ++a) {
    for (std::size_t b = 0; b < col_idx.size(); ++b) {
      out.set(a, b, m.get(row_idx[a], col_idx[b]));
    }
  }
  return out;
}

inline DenseMatrix principal_submatrix(const DenseMatrix& m,
                                       std::span<const std::size_t> idx) {
  return submatrix(m, idx, idx);
}

inline DenseMatrix principal_submatrix(const DenseMatrix& m,
                                       const SubsetSample& s) {
  if (!m.is_square() || m.rows() != s.n) {
    throw std::invalid_argument("principal_submatrix: dimension mismatch");
  }
  return principal_submatrix(m, std::span<const std::size_t>(s.indices));
}

inline DenseMatrix row_submatrix(const DenseMatrix& m,
                                 std::span<const std::size_t> rows) {
  std::vector<std::size_t> cols(m.cols());
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  return submatrix(m, rows, cols);
}

inline DenseMatrix row_submatrix(const DenseMatrix& m, const SubsetSample& s) {
  if (m.rows() != s.n) {
    throw std::invalid_argument("row_submatrix: dimension mismatch");
  }
  return row_submatrix(m, std::span<const std::size_t>(s.indices));
}

/// Which spectrum of a random submatrix is under study: eigenvalues of the
/// principal k x k submatrix, or singular values of the k x n row submatrix.
enum class Mode { eigen, singular };

inline const char* to_string(Mode m) noexcept {
  return m == Mode::eigen ? "eigen" : "singular";
}

/// Spectrum of the submatrix picked by `idx` (order irrelevant to the result).
inline Spectrum submatrix_spectrum(const DenseMatrix& m,
                                   std::span<const std::size_t> idx, Mode mode) {
  if (mode == Mode::eigen) return eigenvalues_hermitian(principal_submatrix(m, idx));
  return singular_values(row_submatrix(m, idx));
}

/// Throws unless (m, k, mode) describes a valid random-submatrix experiment.
inline void check_experiment(const DenseMatrix& m, std::size_t k, Mode mode) {
  if (k < 1 || k > m.rows()) throw std::invalid_argument("k out of range");
  if (mode == Mode::eigen) {
    if (!m.is_square()) throw std::invalid_argument("not square");
    const double scale = m.max_abs() == 0.0 ? 1.0 : m.max_abs();
    if (!is_hermitian(m, 1e-10 * scale)) throw std::invalid_argument("not Hermitian");
  }
}

/// Number of values in each submatrix spectrum.
inline std::size_t spectrum_width(const DenseMatrix& m, std::size_t k, Mode mode) {
  return mode == Mode::eigen ? k : std::min(k, m.cols());
}

}  // namespace subspec

#endif  // SUBSPEC_SAMPLING_HPP
