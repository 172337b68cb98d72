#ifndef SUBSPEC_MONTECARLO_HPP
#define SUBSPEC_MONTECARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subspec/linalg.hpp"
#include "subspec/oracle.hpp"
#include "subspec/parallel.hpp"
#include "subspec/sampling.hpp"
#include "subspec/spectra.hpp"

namespace subspec {

/// Spectra of sampled submatrices; sample j uses stream first_index + j.
struct SampleRun {
  std::size_t width = 0;
  std::size_t n_samples = 0;
  std::vector<double> spectra;

  std::span<const double> spectrum(std::size_t i) const {
    return std::span<const double>(spectra).subspan(i * width, width);
  }
};

inline SampleRun sample_spectra(const DenseMatrix& m, std::size_t k, Mode mode,
                                std::size_t n_samples, std::uint64_t master_seed,
                                unsigned threads = 1,
                                std::uint64_t first_index = 0) {
  check_experiment(m, k, mode);
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  SampleRun run;
  run.width = spectrum_width(m, k, mode);
  run.n_samples = n_samples;
  run.spectra.resize(n_samples * run.width);
  parallel_blocks(n_samples, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      auto rng = sample_stream(master_seed, first_index + i);
      const auto subset = random_k_subset(m.rows(), k, rng);
      const Spectrum s = submatrix_spectrum(m, subset.indices, mode);
      std::copy(s.values.begin(), s.values.end(),
                run.spectra.begin() + static_cast<std::ptrdiff_t>(i * run.width));
    }
  });
  return run;
}

/// Equal-weight mixture of the sampled ESDs (ESD of the pooled values).
inline StepCdf pooled_cdf(const SampleRun& run) {
  std::vector<double> pooled = run.spectra;
  std::sort(pooled.begin(), pooled.end());
  return esd_of_sorted(pooled);
}

inline StepCdf estimate_F(const DenseMatrix& m, std::size_t k, Mode mode,
                          std::size_t n_samples, std::uint64_t master_seed,
                          unsigned threads = 1) {
  return pooled_cdf(sample_spectra(m, k, mode, n_samples, master_seed, threads));
}

inline constexpr char kEigensolverName[] =
    "cyclic Jacobi, off-diagonal Frobenius <= 1e-12 * ||A||_F, max 100 sweeps";

struct EstimateReport {
  Mode mode = Mode::eigen;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t n_samples = 0;
  std::uint64_t master_seed = 0;
  StepCdf F_hat;
  double mean_supnorm = 0.0;
  std::vector<std::pair<double, double>> supnorm_quantiles;
  std::string metadata;
  std::string reference_kind;
  std::vector<double> per_sample;  // sup distance of each sample, in index order
};

/// Type-1 empirical quantile: the ceil(p N)-th smallest value.
inline double empirical_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("empirical_quantile: no data");
  const auto n = static_cast<double>(sorted.size());
  auto idx = static_cast<std::size_t>(std::ceil(p * n));
  idx = std::clamp<std::size_t>(idx, 1, sorted.size());
  return sorted[idx - 1];
}

inline EstimateReport summarize(const SampleRun& run, Mode mode, std::size_t n,
                                std::size_t k, std::uint64_t master_seed,
                                const StepCdf& reference, unsigned threads = 1) {
  EstimateReport rep;
  rep.mode = mode;
  rep.n = n;
  rep.k = k;
  rep.n_samples = run.n_samples;
  rep.master_seed = master_seed;
  rep.F_hat = pooled_cdf(run);
  rep.per_sample.resize(run.n_samples);
  parallel_blocks(run.n_samples, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      rep.per_sample[i] = sup_distance(esd_of_sorted(run.spectrum(i)), reference);
    }
  });
  double sum = 0.0;
  for (double v : rep.per_sample) sum += v;
  rep.mean_supnorm = sum / static_cast<double>(run.n_samples);
  std::vector<double> sorted = rep.per_sample;
  std::sort(sorted.begin(), sorted.end());
  for (double p : {0.5, 0.9, 0.99}) {
    rep.supnorm_quantiles.emplace_back(p, empirical_quantile(sorted, p));
  }
  rep.metadata = std::string("prng: ") + kPrngName + "; eigensolver: " + kEigensolverName;
  return rep;
}

/// Sup distances of sampled F_A to a caller-supplied reference F.
inline EstimateReport estimate_supnorm(const DenseMatrix& m, std::size_t k,
                                       Mode mode, std::size_t n_samples,
                                       std::uint64_t master_seed,
                                       const StepCdf& reference,
                                       unsigned threads = 1) {
  const auto run = sample_spectra(m, k, mode, n_samples, master_seed, threads);
  return summarize(run, mode, m.rows(), k, master_seed, reference, threads);
}

struct Reference {
  StepCdf F;
  std::string kind;
};

/// Master seed of the independent reference estimate.
constexpr std::uint64_t reference_seed(std::uint64_t master_seed) noexcept {
  return splitmix64_mix(master_seed ^ 0x7265666572656E63ULL);
}

/// Exact F when C(n, k) fits under the enumeration cap, otherwise an
/// estimate with 10x the samples on an independent seed.
inline Reference default_reference(const DenseMatrix& m, std::size_t k, Mode mode,
                                   std::size_t n_samples, std::uint64_t master_seed,
                                   unsigned threads = 1,
                                   std::uint64_t cap = kDefaultEnumerationCap) {
  if (binomial(m.rows(), k) <= cap) {
    return {exact_F(enumerate_spectra(m, k, mode, threads, cap)),
            "exact (all " + std::to_string(binomial(m.rows(), k)) + " subsets)"};
  }
  const std::size_t ref_samples = 10 * n_samples;
  return {estimate_F(m, k, mode, ref_samples, reference_seed(master_seed), threads),
          "monte carlo (" + std::to_string(ref_samples) +
              " samples, master seed " + std::to_string(reference_seed(master_seed)) + ")"};
}

inline double theorem1_tail_bound_raw(double k, double r) {
  return 12.0 * std::sqrt(k) * std::exp(-r * std::sqrt(k / 8.0));
}

/// min(1, 12 sqrt(k) exp(-r sqrt(k/8))).
inline double theorem1_tail_bound(double k, double r) {
  return std::min(1.0, theorem1_tail_bound_raw(k, r));
}

/// (13 + sqrt(8) ln k) / sqrt(k), unclamped.
inline double theorem1_mean_bound(double k) {
  return (13.0 + std::sqrt(8.0) * std::log(k)) / std::sqrt(k);
}

/// min(1, 6 exp(-r sqrt(k) / sqrt(8))).
inline double pointwise_tail_bound(double k, double r) {
  return std::min(1.0, 6.0 * std::exp(-r * std::sqrt(k) / std::sqrt(8.0)));
}

struct TailCurve {
  std::vector<double> r_grid;
  std::vector<double> empirical;
  std::vector<double> bound;
  std::vector<double> bound_raw;
  std::vector<double> stderr_;
  std::size_t n_samples = 0;
  std::size_t k = 0;
};

inline std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return g;
}

/// Fraction of samples with ||F_A - F|| >= k^{-1/2} + r, next to the bound.
inline TailCurve empirical_tail(const EstimateReport& report,
                                std::span<const double> r_grid) {
  if (report.per_sample.empty()) {
    throw std::invalid_argument("empirical_tail: report has no per-sample values");
  }
  TailCurve c;
  c.n_samples = report.per_sample.size();
  c.k = report.k;
  c.r_grid.assign(r_grid.begin(), r_grid.end());
  const double k = static_cast<double>(report.k);
  const double n = static_cast<double>(c.n_samples);
  for (double r : r_grid) {
    const double threshold = 1.0 / std::sqrt(k) + r;
    const auto hits = std::count_if(report.per_sample.begin(), report.per_sample.end(),
                                    [&](double v) { return v >= threshold; });
    const double p = static_cast<double>(hits) / n;
    c.empirical.push_back(p);
    c.bound.push_back(theorem1_tail_bound(k, r));
    c.bound_raw.push_back(theorem1_tail_bound_raw(k, r));
    c.stderr_.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return c;
}

struct TailViolation {
  std::size_t index = 0;
  double r = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  double stderr_ = 0.0;
};

/// Grid points where the empirical tail exceeds the bound by more than three
/// binomial standard errors. Empty means the bound dominates.
inline std::vector<TailViolation> compare_tail(const TailCurve& c) {
  std::vector<TailViolation> out;
  for (std::size_t i = 0; i < c.r_grid.size(); ++i) {
    const double p = c.empirical[i];
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(c.n_samples));
    if (p > c.bound[i] + 3.0 * se) out.push_back({i, c.r_grid[i], p, c.bound[i], se});
  }
  return out;
}

}  // namespace subspec

#endif  // SUBSPEC_MONTECARLO_HPP
