#ifndef SUBSPEC_WALK_HPP
#define SUBSPEC_WALK_HPP

// The random transpositions walk on S_n, for n small enough to enumerate:
// Pi(p, p) = 1/n and Pi(p, p o tau) = 2/n^2 for each of the n(n-1)/2
// transpositions tau, with the uniform measure mu.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subspec/linalg.hpp"
#include "subspec/sampling.hpp"
#include "subspec/spectra.hpp"

namespace subspec {

inline constexpr std::size_t kMaxPermOrder = 8;
inline constexpr std::size_t kMaxKernelOrder = 6;

using Permutation = std::vector<std::size_t>;

constexpr std::size_t factorial(std::size_t n) noexcept {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Lexicographic ranking of permutations of {0..n-1}, n <= 8.
class PermIndex {
 public:
  explicit PermIndex(std::size_t n) : n_(n) {
    if (n < 1 || n > kMaxPermOrder) throw std::invalid_argument("PermIndex: n must be in [1, 8]");
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return factorial(n_); }

  std::size_t rank(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw std::invalid_argument("PermIndex: wrong length");
    std::size_t r = 0;
    unsigned used = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (perm[i] >= n_ || (used >> perm[i]) & 1u) {
        throw std::invalid_argument("PermIndex: not a permutation");
      }
      // Unused values smaller than perm[i] precede it lexicographically.
      const unsigned below = (~used) & ((1u << perm[i]) - 1u);
      r += static_cast<std::size_t>(__builtin_popcount(below)) * factorial(n_ - 1 - i);
      used |= 1u << perm[i];
    }
    return r;
  }

  Permutation unrank(std::size_t rank) const {
    if (rank >= size()) throw std::invalid_argument("PermIndex: rank out of range");
    Permutation perm(n_);
    std::vector<std::size_t> pool(n_);
    for (std::size_t i = 0; i < n_; ++i) pool[i] = i;
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t f = factorial(n_ - 1 - i);
      const std::size_t q = rank / f;
      rank %= f;
      perm[i] = pool[q];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(q));
    }
    return perm;
  }

 private:
  std::size_t n_;
};

/// All transpositions (i, j), i < j, in lexicographic order.
inline std::vector<std::pair<std::size_t, std::size_t>> transpositions(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) t.emplace_back(i, j);
  }
  return t;
}

/// Row p of the table lists rank(p o tau) for every transposition tau, in
/// the order of transpositions(n). Composition on the right swaps positions.
inline const std::vector<std::uint32_t>& neighbor_table(std::size_t n) {
  static std::array<std::once_flag, kMaxPermOrder + 1> once;
  static std::array<std::vector<std::uint32_t>, kMaxPermOrder + 1> tables;
  if (n < 1 || n > kMaxPermOrder) throw std::invalid_argument("neighbor_table: n must be in [1, 8]");
  std::call_once(once[n], [n] {
    const PermIndex idx(n);
    const auto taus = transpositions(n);
    auto& table = tables[n];
    table.resize(idx.size() * taus.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      Permutation p = idx.unrank(r);
      for (std::size_t t = 0; t < taus.size(); ++t) {
        std::swap(p[taus[t].first], p[taus[t].second]);
        table[r * taus.size() + t] = static_cast<std::uint32_t>(idx.rank(p));
        std::swap(p[taus[t].first], p[taus[t].second]);
      }
    }
  });
  return tables[n];
}

/// Real function on S_n indexed by lexicographic rank.
struct FunctionOnSn {
  std::size_t n = 0;
  std::vector<double> values;

  FunctionOnSn() = default;
  FunctionOnSn(std::size_t order, std::vector<double> v) : n(order), values(std::move(v)) {
    if (order < 1 || order > kMaxPermOrder || values.size() != factorial(order)) {
      throw std::invalid_argument("FunctionOnSn: need n in [1, 8] and n! values");
    }
    for (double x : values) {
      if (!std::isfinite(x)) throw std::invalid_argument("FunctionOnSn: non-finite value");
    }
  }
};

inline FunctionOnSn scaled(const FunctionOnSn& f, double c) {
  auto v = f.values;
  for (double& x : v) x *= c;
  return FunctionOnSn(f.n, std::move(v));
}

/// Dense n! x n! transition matrix.
inline DenseMatrix kernel_matrix(std::size_t n) {
  if (n < 2 || n > kMaxKernelOrder) throw std::invalid_argument("kernel_matrix: n must be in [2, 6]");
  const std::size_t states = factorial(n);
  const auto& nb = neighbor_table(n);
  const std::size_t t = n * (n - 1) / 2;
  const double hold = 1.0 / static_cast<double>(n);
  const double step = 2.0 / static_cast<double>(n * n);
  DenseMatrix k(states, states);
  for (std::size_t x = 0; x < states; ++x) {
    k(x, x) = hold;
    for (std::size_t j = 0; j < t; ++j) k(x, nb[x * t + j]) = step;
  }
  return k;
}

struct WalkReport {
  std::size_t n = 0;
  double row_sum_error = 0.0;
  double reversibility_error = 0.0;
  double invariance_error = 0.0;
  double gap = 0.0;
  double gap_theory = 0.0;
};

/// Eigenvalues of the symmetric part of a kernel, ascending.
inline std::vector<double> kernel_eigenvalues(const DenseMatrix& kernel) {
  return jacobi_eigen(real_symmetric_form(kernel), kernel.rows()).values;
}

/// Checks stochasticity, detailed balance against uniform mu (which is kernel
/// symmetry) and invariance of mu, then measures the gap.
inline WalkReport verify_kernel(const DenseMatrix& kernel, std::size_t n) {
  const std::size_t states = kernel.rows();
  if (!kernel.is_square() || states != factorial(n)) {
    throw std::invalid_argument("verify_kernel: kernel must be n! x n!");
  }
  WalkReport rep;
  rep.n = n;
  const double mu = 1.0 / static_cast<double>(states);
  for (std::size_t x = 0; x < states; ++x) {
    double row = 0.0;
    double col = 0.0;
    for (std::size_t y = 0; y < states; ++y) {
      row += kernel(x, y);
      col += kernel(y, x) * mu;
      rep.reversibility_error =
          std::max(rep.reversibility_error, std::abs(kernel(x, y) - kernel(y, x)));
    }
    rep.row_sum_error = std::max(rep.row_sum_error, std::abs(row - 1.0));
    rep.invariance_error = std::max(rep.invariance_error, std::abs(col - mu));
  }
  const auto ev = kernel_eigenvalues(kernel);
  rep.gap = 1.0 - ev[ev.size() - 2];
  rep.gap_theory = 2.0 / static_cast<double>(n);
  return rep;
}

inline WalkReport verify_kernel(std::size_t n) { return verify_kernel(kernel_matrix(n), n); }

/// 1 - (second-largest eigenvalue of the kernel).
inline double spectral_gap(std::size_t n) {
  const auto ev = kernel_eigenvalues(kernel_matrix(n));
  return 1.0 - ev[ev.size() - 2];
}

/// Gap together with a unit eigenvector of the second-largest eigenvalue.
inline std::pair<double, FunctionOnSn> spectral_gap_eigenfunction(std::size_t n) {
  const DenseMatrix k = kernel_matrix(n);
  const std::size_t states = k.rows();
  const auto eig = jacobi_eigen(real_symmetric_form(k), states, true);
  const std::size_t i = states - 2;
  std::vector<double> v(eig.vectors.begin() + static_cast<std::ptrdiff_t>(i * states),
                        eig.vectors.begin() + static_cast<std::ptrdiff_t>((i + 1) * states));
  return {1.0 - eig.values[i], FunctionOnSn(n, std::move(v))};
}

inline double mean_mu(const FunctionOnSn& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s / static_cast<double>(f.values.size());
}

inline double variance_mu(const FunctionOnSn& f) {
  const double m = mean_mu(f);
  double s = 0.0;
  for (double v : f.values) s += (v - m) * (v - m);
  return s / static_cast<double>(f.values.size());
}

/// E(f, f) = 1/2 sum_{x,y} (f(x) - f(y))^2 Pi(x, y) mu(x).
inline double dirichlet_form(const FunctionOnSn& f) {
  const std::size_t n = f.n;
  const std::size_t t = n * (n - 1) / 2;
  if (t == 0) return 0.0;
  const auto& nb = neighbor_table(n);
  const double step = 2.0 / static_cast<double>(n * n);
  double s = 0.0;
  for (std::size_t x = 0; x < f.values.size(); ++x) {
    for (std::size_t j = 0; j < t; ++j) {
      const double d = f.values[x] - f.values[nb[x * t + j]];
      s += d * d;
    }
  }
  return 0.5 * s * step / static_cast<double>(f.values.size());
}

/// |||f|||_inf = sqrt(1/2 max_x sum_y (f(x) - f(y))^2 Pi(x, y)); matrix-free.
inline double triple_norm(const FunctionOnSn& f) {
  const std::size_t n = f.n;
  const std::size_t t = n * (n - 1) / 2;
  if (t == 0) return 0.0;
  const auto& nb = neighbor_table(n);
  const double step = 2.0 / static_cast<double>(n * n);
  double worst = 0.0;
  for (std::size_t x = 0; x < f.values.size(); ++x) {
    double s = 0.0;
    for (std::size_t j = 0; j < t; ++j) {
      const double d = f.values[x] - f.values[nb[x * t + j]];
      s += d * d;
    }
    worst = std::max(worst, s);
  }
  return std::sqrt(0.5 * worst * step);
}

/// f_x(p) = F_{A(p)}(x) for every x in the grid, where A(p) is built from the
/// first k entries of p (principal submatrix in eigen mode, rows in singular
/// mode). Throws if a reordering of the same index set changes the spectrum.
inline std::vector<FunctionOnSn> esd_observables(const DenseMatrix& m, std::size_t k,
                                                 std::span<const double> x_grid,
                                                 Mode mode) {
  check_experiment(m, k, mode);
  const std::size_t n = m.rows();
  if (n > kMaxPermOrder) throw std::invalid_argument("esd_observables: n must be <= 8");
  const PermIndex idx(n);
  const std::size_t states = idx.size();
  const std::size_t width = spectrum_width(m, k, mode);

  std::map<unsigned, std::vector<double>> by_set;
  std::map<std::vector<std::size_t>, bool> checked_orderings;
  std::vector<std::vector<double>> out(x_grid.size(), std::vector<double>(states));
  for (std::size_t r = 0; r < states; ++r) {
    const Permutation p = idx.unrank(r);
    std::vector<std::size_t> prefix(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k));
    unsigned mask = 0;
    for (std::size_t v : prefix) mask |= 1u << v;
    auto it = by_set.find(mask);
    if (it == by_set.end()) {
      std::vector<std::size_t> sorted = prefix;
      std::sort(sorted.begin(), sorted.end());
      it = by_set.emplace(mask, submatrix_spectrum(m, sorted, mode).values).first;
    }
    const auto& spec = it->second;
    if (checked_orderings.emplace(prefix, true).second) {
      const auto ordered = submatrix_spectrum(m, prefix, mode).values;
      double scale = 1.0;
      for (double v : spec) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < width; ++i) {
        if (std::abs(ordered[i] - spec[i]) > 1e-9 * scale) {
          throw std::runtime_error("esd_observables: spectrum depends on index order");
        }
      }
    }
    for (std::size_t xi = 0; xi < x_grid.size(); ++xi) {
      const auto below = std::upper_bound(spec.begin(), spec.end(), x_grid[xi]) - spec.begin();
      out[xi][r] = static_cast<double>(below) / static_cast<double>(width);
    }
  }
  std::vector<FunctionOnSn> fs;
  fs.reserve(out.size());
  for (auto& v : out) fs.emplace_back(n, std::move(v));
  return fs;
}

inline FunctionOnSn esd_observable(const DenseMatrix& m, std::size_t k, double x, Mode mode) {
  const double grid[] = {x};
  return std::move(esd_observables(m, k, grid, mode).front());
}

struct TripleNormCheck {
  double worst = 0.0;  // max over the grid of k n |||f_x|||^2
  std::vector<double> offending_x;
};

/// Measures k n |||f_x|||^2 on the grid; violations are grid points where
/// |||f_x|||^2 > 4/(kn) + 1e-12.
inline TripleNormCheck check_triple_norm_bound(const DenseMatrix& m, std::size_t k,
                                               std::span<const double> x_grid, Mode mode) {
  const auto fs = esd_observables(m, k, x_grid, mode);
  const double kn = static_cast<double>(k) * static_cast<double>(m.rows());
  TripleNormCheck out;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double t2 = std::pow(triple_norm(fs[i]), 2);
    out.worst = std::max(out.worst, kn * t2);
    if (t2 > 4.0 / kn + 1e-12) out.offending_x.push_back(x_grid[i]);
  }
  return out;
}

/// Throwing form: returns the worst normalized value (at most 4).
inline double verify_triple_norm_bound(const DenseMatrix& m, std::size_t k,
                                       std::span<const double> x_grid, Mode mode) {
  const auto c = check_triple_norm_bound(m, k, x_grid, mode);
  if (!c.offending_x.empty()) {
    std::string msg = "|||f|||^2 > 4/(kn) at x =";
    for (double x : c.offending_x) msg += " " + format_real(x);
    throw std::runtime_error(msg);
  }
  return c.worst;
}

struct LedouxPoint {
  double r = 0.0;
  double measure = 0.0;  // mu(f >= E f + r)
  double bound = 0.0;    // 3 exp(-r sqrt(gap) / 2)
  bool pass = false;
};

struct LedouxCheck {
  double scale = 1.0;  // factor applied to f so that |||f|||_inf = 1
  std::vector<LedouxPoint> points;
  bool pass = true;
};

/// Exact superlevel measures against 3 exp(-r sqrt(gap)/2). A nonconstant f
/// is first normalized to |||f|||_inf = 1.
inline LedouxCheck verify_ledoux_tail(const FunctionOnSn& f, std::span<const double> r_grid,
                                      double gap) {
  LedouxCheck out;
  const double tn = triple_norm(f);
  out.scale = tn > 0.0 ? 1.0 / tn : 1.0;
  const FunctionOnSn g = scaled(f, out.scale);
  const double m = mean_mu(g);
  const double total = static_cast<double>(g.values.size());
  for (double r : r_grid) {
    LedouxPoint pt;
    pt.r = r;
    const auto hits = std::count_if(g.values.begin(), g.values.end(),
                                    [&](double v) { return v >= m + r; });
    pt.measure = static_cast<double>(hits) / total;
    pt.bound = 3.0 * std::exp(-r * std::sqrt(gap) / 2.0);
    pt.pass = pt.measure <= pt.bound;
    out.pass = out.pass && pt.pass;
    out.points.push_back(pt);
  }
  return out;
}

inline LedouxCheck verify_ledoux_tail(const FunctionOnSn& f, std::span<const double> r_grid) {
  return verify_ledoux_tail(f, r_grid, spectral_gap(f.n));
}

struct RankStep {
  std::size_t rank_diff = 0;
  double f_gap_max = 0.0;
  bool unselected_swap = false;  // both swapped positions outside the first k
  bool identical = false;        // A(s) == A(s tau) entrywise
};

/// Compares A(s) with A(s tau) where tau swaps positions i and j of s.
inline RankStep rank_step_check(const DenseMatrix& m, std::size_t k,
                                std::span<const std::size_t> sigma, std::size_t i,
                                std::size_t j, Mode mode = Mode::eigen) {
  if (i == j || i >= sigma.size() || j >= sigma.size()) {
    throw std::invalid_argument("rank_step_check: tau must swap two distinct positions");
  }
  check_experiment(m, k, mode);
  Permutation st(sigma.begin(), sigma.end());
  std::swap(st[i], st[j]);
  const std::span<const std::size_t> a_idx = sigma.first(k);
  const std::span<const std::size_t> b_idx = std::span<const std::size_t>(st).first(k);
  const DenseMatrix a = mode == Mode::eigen ? principal_submatrix(m, a_idx) : row_submatrix(m, a_idx);
  const DenseMatrix b = mode == Mode::eigen ? principal_submatrix(m, b_idx) : row_submatrix(m, b_idx);
  RankStep out;
  out.rank_diff = numerical_rank(a - b, 1e-12);
  out.f_gap_max = sup_distance(esd(submatrix_spectrum(m, a_idx, mode)),
                               esd(submatrix_spectrum(m, b_idx, mode)));
  out.unselected_swap = i >= k && j >= k;
  out.identical = a == b;
  return out;
}

}  // namespace subspec

#endif  // SUBSPEC_WALK_HPP
