#ifndef SUBSPEC_SPECTRA_HPP
#define SUBSPEC_SPECTRA_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "subspec/linalg.hpp"

namespace subspec {

/// Right-continuous step distribution function with finitely many jumps.
///
/// Value at x is cum[i] for the largest i with jumps[i] <= x, and 0 below
/// the first jump.
class StepCdf {
 public:
  StepCdf() = default;

  StepCdf(std::vector<double> jumps, std::vector<double> cum)
      : jumps_(std::move(jumps)), cum_(std::move(cum)) {
    if (jumps_.empty() || jumps_.size() != cum_.size()) {
      throw std::invalid_argument("StepCdf: jumps and cum must be nonempty and "
                                  "of equal length");
    }
    for (std::size_t i = 0; i < jumps_.size(); ++i) {
      if (!std::isfinite(jumps_[i]) || !std::isfinite(cum_[i])) {
        throw std::invalid_argument("StepCdf: non-finite value");
      }
      if (i > 0 && !(jumps_[i] > jumps_[i - 1])) {
        throw std::invalid_argument("StepCdf: jumps must strictly increase");
      }
      if (i > 0 && cum_[i] < cum_[i - 1]) {
        throw std::invalid_argument("StepCdf: cum must be nondecreasing");
      }
    }
    if (!(cum_.front() > 0.0) || std::abs(cum_.back() - 1.0) > 1e-12) {
      throw std::invalid_argument("StepCdf: cum must start above 0 and end at 1");
    }
  }

  const std::vector<double>& jumps() const noexcept { return jumps_; }
  const std::vector<double>& cum() const noexcept { return cum_; }
  std::size_t size() const noexcept { return jumps_.size(); }

  friend bool operator==(const StepCdf&, const StepCdf&) = default;

 private:
  std::vector<double> jumps_;
  std::vector<double> cum_;
};

/// ESD of an ascending list of values (ties collapse into one jump).
inline StepCdf esd_of_sorted(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty spectrum");
  const double total = static_cast<double>(values.size());
  std::vector<double> jumps;
  std::vector<double> cum;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    jumps.push_back(values[i]);
    cum.push_back(static_cast<double>(i + 1) / total);
  }
  cum.back() = 1.0;
  return StepCdf(std::move(jumps), std::move(cum));
}

inline StepCdf esd(const Spectrum& s) {
  if (std::is_sorted(s.values.begin(), s.values.end())) {
    return esd_of_sorted(s.values);
  }
  auto v = s.values;
  std::sort(v.begin(), v.end());
  return esd_of_sorted(v);
}

inline double eval(const StepCdf& f, double x) {
  const auto& j = f.jumps();
  const auto it = std::upper_bound(j.begin(), j.end(), x);
  if (it == j.begin()) return 0.0;
  return f.cum()[static_cast<std::size_t>(it - j.begin()) - 1];
}

/// lim_{y -> x-} F(y).
inline double eval_left(const StepCdf& f, double x) {
  const auto& j = f.jumps();
  const auto it = std::lower_bound(j.begin(), j.end(), x);
  if (it == j.begin()) return 0.0;
  return f.cum()[static_cast<std::size_t>(it - j.begin()) - 1];
}

/// Exact sup-norm distance between two step CDFs.
///
/// Walks the merged jump sets once, comparing both one-sided values at every
/// jump; between jumps both functions are constant so this is exhaustive.
inline double sup_distance(const StepCdf& f, const StepCdf& g) {
  const auto& fj = f.jumps();
  const auto& gj = g.jumps();
  std::size_t i = 0, j = 0;
  double fv = 0.0, gv = 0.0, best = 0.0;
  while (i < fj.size() || j < gj.size()) {
    double x;
    if (j == gj.size() || (i < fj.size() && fj[i] <= gj[j])) {
      x = fj[i];
    } else {
      x = gj[j];
    }
    best = std::max(best, std::abs(fv - gv));
    if (i < fj.size() && fj[i] == x) fv = f.cum()[i++];
    if (j < gj.size() && gj[j] == x) gv = g.cum()[j++];
    best = std::max(best, std::abs(fv - gv));
  }
  return std::min(best, 1.0);
}

/// Finite mixture sum_i w_i F_i.
inline StepCdf average_cdfs(std::span<const StepCdf> cdfs,
                            std::span<const double> weights) {
  if (cdfs.empty()) throw std::invalid_argument("average_cdfs: empty list");
  if (cdfs.size() != weights.size()) {
    throw std::invalid_argument("average_cdfs: one weight per CDF required");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("average_cdfs: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("average_cdfs: weights must sum to 1");
  }

  std::vector<std::pair<double, double>> steps;
  for (std::size_t i = 0; i < cdfs.size(); ++i) {
    if (weights[i] == 0.0) continue;
    double prev = 0.0;
    for (std::size_t t = 0; t < cdfs[i].size(); ++t) {
      steps.emplace_back(cdfs[i].jumps()[t], weights[i] * (cdfs[i].cum()[t] - prev));
      prev = cdfs[i].cum()[t];
    }
  }
  std::stable_sort(steps.begin(), steps.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> jumps;
  std::vector<double> cum;
  double acc = 0.0;
  for (const auto& [x, dx] : steps) {
    acc += dx;
    if (!jumps.empty() && jumps.back() == x) {
      cum.back() = acc;
    } else {
      jumps.push_back(x);
      cum.push_back(acc);
    }
  }
  return StepCdf(std::move(jumps), std::move(cum));
}

/// Limiting survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2), with Q(0) = 1.
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j < 100000; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1) ? term : -term;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double lambda = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov law,
/// no small-sample correction. Sample sizes are supplied by the caller.
inline KsResult ks_two_sample(const StepCdf& f, long long size_f,
                              const StepCdf& g, long long size_g) {
  if (size_f < 1 || size_g < 1) {
    throw std::invalid_argument("ks_two_sample: sample sizes must be positive");
  }
  KsResult r;
  r.statistic = sup_distance(f, g);
  const double a = static_cast<double>(size_f);
  const double b = static_cast<double>(size_g);
  r.lambda = std::sqrt(a * b / (a + b)) * r.statistic;
  r.p_value = r.statistic == 0.0 ? 1.0 : kolmogorov_survival(r.lambda);
  return r;
}

/// t_i = least jump with F(t_i) >= i / l for i = 1..l-1.
inline std::vector<double> quantile_grid(const StepCdf& f, int l) {
  if (l < 2) throw std::invalid_argument("quantile_grid: l must be >= 2");
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(l - 1));
  const auto& cum = f.cum();
  for (int i = 1; i < l; ++i) {
    const double level = static_cast<double>(i) / static_cast<double>(l);
    auto it = std::find_if(cum.begin(), cum.end(),
                           [&](double c) { return c >= level; });
    const std::size_t idx =
        it == cum.end() ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
    t.push_back(f.jumps()[idx]);
  }
  return t;
}

/// 17 significant digits; round-trips every finite double.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Parses the whole of `text` as a decimal floating literal.
inline std::optional<double> parse_real(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

inline void write_csv(std::ostream& os, const StepCdf& f) {
  os << "x,F\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << format_real(f.jumps()[i]) << ',' << format_real(f.cum()[i]) << '\n';
  }
}

inline StepCdf read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "x,F") {
    throw std::runtime_error("StepCdf CSV: expected header \"x,F\"");
  }
  std::vector<double> jumps;
  std::vector<double> cum;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const std::string_view view(line);
    const auto x = comma == std::string::npos ? std::nullopt
                                              : parse_real(view.substr(0, comma));
    const auto v = comma == std::string::npos ? std::nullopt
                                              : parse_real(view.substr(comma + 1));
    if (!x || !v) {
      throw std::runtime_error("StepCdf CSV: malformed row at line " +
                               std::to_string(lineno));
    }
    jumps.push_back(*x);
    cum.push_back(*v);
  }
  return StepCdf(std::move(jumps), std::move(cum));
}

}  // namespace subspec

#endif  // SUBSPEC_SPECTRA_HPP
