#ifndef SUBSPEC_ILLUSTRATION_HPP
#define SUBSPEC_ILLUSTRATION_HPP

// Two independent random principal submatrices of the same matrix, compared
// by a two-sample KS test after dropping their largest eigenvalues.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "subspec/linalg.hpp"
#include "subspec/montecarlo.hpp"
#include "subspec/parallel.hpp"
#include "subspec/sampling.hpp"
#include "subspec/spectra.hpp"

namespace subspec {

struct PairDraw {
  SubsetSample subset_a;
  SubsetSample subset_b;
  StepCdf cdf_a;
  StepCdf cdf_b;
  KsResult ks;
};

/// ESD of the k - exclude_top smallest eigenvalues, renormalized to mass 1.
inline StepCdf trimmed_esd(const Spectrum& s, std::size_t exclude_top) {
  if (exclude_top >= s.count()) throw std::invalid_argument("exclude_top must be < k");
  std::vector<double> v = s.values;
  std::sort(v.begin(), v.end());
  v.resize(v.size() - exclude_top);
  return esd_of_sorted(v);
}

inline PairDraw draw_pair(const DenseMatrix& m, std::size_t k, std::size_t exclude_top,
                          std::uint64_t seed_a, std::uint64_t seed_b) {
  check_experiment(m, k, Mode::eigen);
  if (exclude_top >= k) throw std::invalid_argument("exclude_top must be < k");
  Xoshiro256pp rng_a(seed_a);
  Xoshiro256pp rng_b(seed_b);
  PairDraw d;
  d.subset_a = random_k_subset(m.rows(), k, rng_a);
  d.subset_b = random_k_subset(m.rows(), k, rng_b);
  d.cdf_a = trimmed_esd(eigenvalues_hermitian(principal_submatrix(m, d.subset_a)), exclude_top);
  d.cdf_b = trimmed_esd(eigenvalues_hermitian(principal_submatrix(m, d.subset_b)), exclude_top);
  const auto kept = static_cast<long long>(k - exclude_top);
  d.ks = ks_two_sample(d.cdf_a, kept, d.cdf_b, kept);
  return d;
}

struct PairStudy {
  std::vector<PairDraw> pairs;
  double median_statistic = 0.0;
  double share_p_at_least_005 = 0.0;
  std::vector<std::pair<double, double>> statistic_quantiles;
  std::vector<std::pair<double, double>> p_value_quantiles;
};

/// Pair p draws A from stream 2p and B from stream 2p + 1 of the master plan.
inline PairStudy run_pair_study(const DenseMatrix& m, std::size_t k, std::size_t exclude_top,
                                std::size_t pairs, std::uint64_t master_seed,
                                unsigned threads = 1) {
  if (pairs < 1) throw std::invalid_argument("pairs must be >= 1");
  PairStudy st;
  st.pairs.resize(pairs);
  parallel_blocks(pairs, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      st.pairs[p] = draw_pair(m, k, exclude_top, derive_sample_seed(master_seed, 2 * p),
                              derive_sample_seed(master_seed, 2 * p + 1));
    }
  });
  std::vector<double> d;
  std::vector<double> pv;
  std::size_t large_p = 0;
  for (const auto& pr : st.pairs) {
    d.push_back(pr.ks.statistic);
    pv.push_back(pr.ks.p_value);
    if (pr.ks.p_value >= 0.05) ++large_p;
  }
  std::sort(d.begin(), d.end());
  std::sort(pv.begin(), pv.end());
  st.median_statistic = empirical_quantile(d, 0.5);
  st.share_p_at_least_005 = static_cast<double>(large_p) / static_cast<double>(pairs);
  for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    st.statistic_quantiles.emplace_back(q, empirical_quantile(d, q));
    st.p_value_quantiles.emplace_back(q, empirical_quantile(pv, q));
  }
  return st;
}

}  // namespace subspec

#endif  // SUBSPEC_ILLUSTRATION_HPP
