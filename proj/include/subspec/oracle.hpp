#ifndef SUBSPEC_ORACLE_HPP
#define SUBSPEC_ORACLE_HPP

// Exact finite-population computations: every k-subset is enumerated, so the
// distribution of any statistic of F_A under a uniform subset is available
// exactly rather than by sampling.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subspec/linalg.hpp"
#include "subspec/parallel.hpp"
#include "subspec/sampling.hpp"
#include "subspec/spectra.hpp"

namespace subspec {

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

/// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(c);
}

class EnumerationCapExceeded : public std::runtime_error {
 public:
  EnumerationCapExceeded(std::uint64_t count, std::uint64_t cap)
      : std::runtime_error("C(n,k) = " + std::to_string(count) +
                           " subsets exceeds the enumeration cap of " +
                           std::to_string(cap) + "; use Monte Carlo estimation") {}
};

/// Lexicographic rank -> k-subset of {0..n-1}.
inline std::vector<std::size_t> unrank_subset(std::size_t n, std::size_t k,
                                              std::uint64_t rank) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < k; ++slot) {
    for (std::size_t v = next; v < n; ++v) {
      const std::uint64_t below = binomial(n - v - 1, k - slot - 1);
      if (rank < below) {
        out.push_back(v);
        next = v + 1;
        break;
      }
      rank -= below;
    }
  }
  return out;
}

/// Advances a sorted k-subset to its lexicographic successor. Returns false
/// after the last subset.
inline bool next_subset(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
  if (i == 0) return false;
  ++idx[i - 1];
  for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

/// All k-subsets of {0..n-1} in lexicographic order, as an input range.
class SubsetRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = SubsetSample;
    using difference_type = std::ptrdiff_t;
    using pointer = const SubsetSample*;
    using reference = const SubsetSample&;

    iterator() = default;
    iterator(std::size_t n, std::size_t k) : done_(false) {
      current_.n = n;
      current_.indices.resize(k);
      for (std::size_t i = 0; i < k; ++i) current_.indices[i] = i;
    }
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++() {
      done_ = !next_subset(current_.indices, current_.n);
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) {
      return a.done_ == b.done_;
    }

   private:
    SubsetSample current_;
    bool done_ = true;
  };

  SubsetRange(std::size_t n, std::size_t k) : n_(n), k_(k) {}
  iterator begin() const { return iterator(n_, k_); }
  iterator end() const { return iterator(); }
  std::uint64_t size() const { return binomial(n_, k_); }

 private:
  std::size_t n_;
  std::size_t k_;
};

inline SubsetRange enumerate_subsets(std::size_t n, std::size_t k,
                                     std::uint64_t cap = kDefaultEnumerationCap) {
  if (k < 1 || k > n) throw std::invalid_argument("k out of range");
  const std::uint64_t count = binomial(n, k);
  if (count > cap) throw EnumerationCapExceeded(count, cap);
  return SubsetRange(n, k);
}

/// Spectra of every k-subset submatrix, stored flat in lexicographic order.
struct SubsetEnsemble {
  std::size_t n = 0;
  std::size_t k = 0;
  Mode mode = Mode::eigen;
  std::size_t width = 0;
  std::size_t count = 0;
  std::vector<double> spectra;

  std::span<const double> spectrum(std::size_t i) const {
    return std::span<const double>(spectra).subspan(i * width, width);
  }
  StepCdf cdf(std::size_t i) const { return esd_of_sorted(spectrum(i)); }
};

inline SubsetEnsemble enumerate_spectra(const DenseMatrix& m, std::size_t k,
                                        Mode mode, unsigned threads = 1,
                                        std::uint64_t cap = kDefaultEnumerationCap) {
  check_experiment(m, k, mode);
  const std::size_t n = m.rows();
  const std::uint64_t count = binomial(n, k);
  if (count > cap) throw EnumerationCapExceeded(count, cap);

  SubsetEnsemble ens;
  ens.n = n;
  ens.k = k;
  ens.mode = mode;
  ens.width = spectrum_width(m, k, mode);
  ens.count = static_cast<std::size_t>(count);
  ens.spectra.resize(ens.count * ens.width);
  parallel_blocks(ens.count, threads, [&](std::size_t lo, std::size_t hi) {
    auto idx = unrank_subset(n, k, lo);
    for (std::size_t i = lo; i < hi; ++i) {
      const Spectrum s = submatrix_spectrum(m, idx, mode);
      std::copy(s.values.begin(), s.values.end(),
                ens.spectra.begin() + static_cast<std::ptrdiff_t>(i * ens.width));
      next_subset(idx, n);
    }
  });
  return ens;
}

/// F = E F_A as the equal-weight mixture of all subset ESDs. Each subset
/// contributes `width` atoms, so the mixture is the ESD of the pooled values.
inline StepCdf exact_F(const SubsetEnsemble& ens) {
  std::vector<double> pooled = ens.spectra;
  std::sort(pooled.begin(), pooled.end());
  return esd_of_sorted(pooled);
}

inline StepCdf exact_F(const DenseMatrix& m, std::size_t k, Mode mode,
                       unsigned threads = 1) {
  return exact_F(enumerate_spectra(m, k, mode, threads));
}

/// Finite law: atoms with strictly increasing values and positive masses.
struct ExactDistribution {
  std::vector<std::pair<double, double>> atoms;

  double mean() const {
    double s = 0.0;
    for (const auto& [v, p] : atoms) s += v * p;
    return s;
  }
  double variance() const {
    const double mu = mean();
    double s = 0.0;
    for (const auto& [v, p] : atoms) s += (v - mu) * (v - mu) * p;
    return s;
  }
  /// P(X >= t).
  double tail(double t) const {
    double s = 0.0;
    for (const auto& [v, p] : atoms) {
      if (v >= t) s += p;
    }
    return s;
  }
};

/// Groups equal values and assigns each its relative frequency.
inline ExactDistribution distribution_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  ExactDistribution d;
  const double total = static_cast<double>(values.size());
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    d.atoms.emplace_back(values[i], static_cast<double>(j - i) / total);
    i = j;
  }
  return d;
}

/// Exact law of ||F_A - F||_inf for a uniform subset, F = exact_F(ens).
inline ExactDistribution exact_supnorm_distribution(const SubsetEnsemble& ens,
                                                    const StepCdf& reference) {
  std::vector<double> d(ens.count);
  for (std::size_t i = 0; i < ens.count; ++i) d[i] = sup_distance(ens.cdf(i), reference);
  return distribution_of(std::move(d));
}

inline ExactDistribution exact_supnorm_distribution(const DenseMatrix& m,
                                                    std::size_t k, Mode mode,
                                                    unsigned threads = 1) {
  const auto ens = enumerate_spectra(m, k, mode, threads);
  return exact_supnorm_distribution(ens, exact_F(ens));
}

/// Exact P(|F_A(x) - F(x)| >= r) for a uniform subset.
inline double exact_pointwise_tail(const SubsetEnsemble& ens,
                                   const StepCdf& reference, double x, double r) {
  const double fx = eval(reference, x);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ens.count; ++i) {
    const auto s = ens.spectrum(i);
    const auto below = std::upper_bound(s.begin(), s.end(), x) - s.begin();
    const double fa = static_cast<double>(below) / static_cast<double>(ens.width);
    if (std::abs(fa - fx) >= r) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ens.count);
}

inline double exact_pointwise_tail(const DenseMatrix& m, std::size_t k, double x,
                                   double r, Mode mode) {
  const auto ens = enumerate_spectra(m, k, mode);
  return exact_pointwise_tail(ens, exact_F(ens), x, r);
}

/// Hypergeometric law of the number of marked items among k draws without
/// replacement from n items of which d are marked.
struct HypergeometricPmf {
  std::size_t h_min = 0;
  std::vector<double> p;  // p[i] = P(H = h_min + i)

  double operator()(std::size_t h) const {
    if (h < h_min || h - h_min >= p.size()) return 0.0;
    return p[h - h_min];
  }
};

/// Built from ratios of consecutive terms, anchored at the mode so that no
/// intermediate weight exceeds 1.
inline HypergeometricPmf hypergeometric_pmf(std::size_t n, std::size_t d,
                                            std::size_t k) {
  if (d > n || k > n) throw std::invalid_argument("hypergeometric: d, k must be <= n");
  const std::size_t lo = k > n - d ? k - (n - d) : 0;
  const std::size_t hi = std::min(k, d);
  const auto mode_guess = static_cast<std::size_t>(
      (static_cast<double>(k + 1) * static_cast<double>(d + 1)) /
      static_cast<double>(n + 2));
  const std::size_t mode = std::clamp(mode_guess, lo, hi);

  // ratio(h) = P(H = h + 1) / P(H = h)
  auto ratio = [&](std::size_t h) {
    return (static_cast<double>(d - h) * static_cast<double>(k - h)) /
           (static_cast<double>(h + 1) * static_cast<double>(n - d - k + h + 1));
  };
  std::vector<double> w(hi - lo + 1, 0.0);
  w[mode - lo] = 1.0;
  for (std::size_t h = mode; h < hi; ++h) w[h + 1 - lo] = w[h - lo] * ratio(h);
  for (std::size_t h = mode; h > lo; --h) w[h - 1 - lo] = w[h - lo] / ratio(h - 1);
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return {lo, std::move(w)};
}

/// Exact E||F_A - F||_inf for the half-ones diagonal matrix: with d = n/2
/// (floored) ones and H hypergeometric, the distance is |d/n - H/k|.
inline double halfones_exact_mean(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw std::invalid_argument("k out of range");
  const std::size_t d = n / 2;
  const auto pmf = hypergeometric_pmf(n, d, k);
  const double share = static_cast<double>(d) / static_cast<double>(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < pmf.p.size(); ++i) {
    const double h = static_cast<double>(pmf.h_min + i);
    mean += pmf.p[i] * std::abs(share - h / static_cast<double>(k));
  }
  return mean;
}

/// Law of |d/n - H/k| for the half-ones matrix, as an exact distribution.
inline ExactDistribution halfones_supnorm_distribution(std::size_t n, std::size_t k) {
  const std::size_t d = n / 2;
  const auto pmf = hypergeometric_pmf(n, d, k);
  const double share = static_cast<double>(d) / static_cast<double>(n);
  std::vector<std::pair<double, double>> raw;
  for (std::size_t i = 0; i < pmf.p.size(); ++i) {
    if (pmf.p[i] <= 0.0) continue;
    const double h = static_cast<double>(pmf.h_min + i);
    raw.emplace_back(std::abs(share - h / static_cast<double>(k)), pmf.p[i]);
  }
  std::sort(raw.begin(), raw.end());
  ExactDistribution out;
  for (const auto& [v, p] : raw) {
    if (!out.atoms.empty() && out.atoms.back().first == v) {
      out.atoms.back().second += p;
    } else {
      out.atoms.emplace_back(v, p);
    }
  }
  return out;
}

/// The half-ones reference F: mass 1 - d/n at 0, the rest at 1.
inline StepCdf halfones_reference(std::size_t n) {
  const std::size_t d = n / 2;
  if (d == 0) return StepCdf({0.0}, {1.0});
  if (d == n) return StepCdf({1.0}, {1.0});
  return StepCdf({0.0, 1.0},
                 {1.0 - static_cast<double>(d) / static_cast<double>(n), 1.0});
}

struct ChainingResult {
  double delta = 0.0;      // worst one-sided gap at the quantile grid
  double bound = 0.0;      // 1/l + delta
  double distance = 0.0;   // ||G - F||_inf
  bool holds = false;
};

/// Discretization step: ||G - F||_inf <= 1/l + Delta, with Delta measured
/// only at the l - 1 quantile points of F (both one-sided values).
inline ChainingResult chaining_check(const StepCdf& f, const StepCdf& g, int l) {
  ChainingResult r;
  for (double t : quantile_grid(f, l)) {
    r.delta = std::max(r.delta, std::abs(eval(g, t) - eval(f, t)));
    r.delta = std::max(r.delta, std::abs(eval_left(g, t) - eval_left(f, t)));
  }
  r.bound = 1.0 / static_cast<double>(l) + r.delta;
  r.distance = sup_distance(g, f);
  r.holds = r.distance <= r.bound + 1e-12;
  return r;
}

}  // namespace subspec

#endif  // SUBSPEC_ORACLE_HPP
