// Command-line front end: matrix generation, Monte Carlo estimates, exact
// oracles, the walk/inequality verification suite, and the two-submatrix KS
// experiment.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subspec.hpp"
#include "subspec/serialize.hpp"

namespace {

using namespace subspec;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

/// Configuration or input problem; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string ensemble = "rw-covariance";
  std::string matrix_path;
  std::size_t n = 100;
  std::size_t k = 20;
  std::string mode = "eigen";
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::uint64_t matrix_seed = 1;
  unsigned threads = 1;
  double r_min = 0.0;
  double r_max = 1.0;
  std::size_t r_points = 21;
  std::size_t exclude_top = 4;
  std::size_t pairs = 500;
  std::string format = "json";
  std::string out;
  std::vector<double> x_points;
  std::string cdf_out;
  bool corrupt_kernel = false;
  std::vector<std::string> files;
};

unsigned default_threads() {
  if (const char* env = std::getenv("SUBSPEC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError("SUBSPEC_THREADS must be an integer in [1, 1024]");
  }
  return 1;
}

Mode parse_mode(const std::string& s) {
  if (s == "eigen") return Mode::eigen;
  if (s == "singular") return Mode::singular;
  throw UsageError("--mode must be eigen or singular");
}

bool is_random_ensemble(const std::string& e) {
  return e == "random" || e == "random-pm1" || e == "random-general";
}

DenseMatrix build_matrix(const std::string& ensemble, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw UsageError("--n must be >= 1");
  if (ensemble == "rw-covariance") return rw_covariance(n);
  if (ensemble == "half-ones") return half_ones_diagonal(n);
  if (ensemble == "random") return random_symmetric(n, seed, EntryDist::gaussian);
  if (ensemble == "random-pm1") return random_symmetric(n, seed, EntryDist::pm1);
  if (ensemble == "random-general") return random_general(n, n, seed, EntryDist::gaussian);
  throw UsageError("unknown ensemble \"" + ensemble +
                   "\" (rw-covariance, half-ones, random, random-pm1, random-general)");
}

DenseMatrix load_input(const std::string& path) {
  try {
    return load_matrix(path);
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

/// The matrix named by --matrix, or else by --ensemble/--n/--matrix-seed.
DenseMatrix source_matrix(const RunConfig& c) {
  if (!c.matrix_path.empty()) return load_input(c.matrix_path);
  return build_matrix(c.ensemble, c.n, c.matrix_seed);
}

Json config_json(const RunConfig& c) {
  // --threads is deliberately absent: it never changes an emitted number.
  Json j{{"subcommand", c.subcommand}};
  if (!c.matrix_path.empty()) {
    j["matrix"] = c.matrix_path;
  } else {
    j["ensemble"] = c.ensemble;
    j["n"] = c.n;
    if (is_random_ensemble(c.ensemble)) j["matrix_seed"] = c.matrix_seed;
  }
  if (c.subcommand == "gen") return j;
  if (c.subcommand == "ks") {
    j["files"] = c.files;
    j["mode"] = c.mode;
    j["exclude_top"] = c.exclude_top;
    return j;
  }
  j["k"] = c.k;
  if (c.subcommand != "fig1") j["mode"] = c.mode;
  if (c.subcommand == "estimate") {
    j["samples"] = c.samples;
    j["seed"] = c.seed;
  }
  if (c.subcommand == "estimate" || c.subcommand == "oracle") {
    j["r_min"] = c.r_min;
    j["r_max"] = c.r_max;
    j["r_points"] = c.r_points;
  }
  if (c.subcommand == "oracle") j["x"] = c.x_points;
  if (c.subcommand == "fig1") {
    j["seed"] = c.seed;
    j["exclude_top"] = c.exclude_top;
    j["pairs"] = c.pairs;
  }
  j["format"] = c.format;
  return j;
}

Json metadata_json() {
  return Json{{"prng", kPrngName},
              {"eigensolver", kEigensolverName},
              {"ks", "two-sample, asymptotic Kolmogorov distribution, no small-sample correction"},
              {"index_base", 1}};
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(c.out);
  if (!os) throw UsageError("cannot open " + c.out + " for writing");
  os << text;
}

std::vector<std::size_t> one_based(const SubsetSample& s) {
  std::vector<std::size_t> v = s.indices;
  for (auto& i : v) ++i;
  return v;
}

void validate_common(const RunConfig& c) {
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
  if (c.r_points < 1) throw UsageError("--r-points must be >= 1");
  if (!(c.r_min >= 0.0) || !(c.r_max >= c.r_min)) {
    throw UsageError("need 0 <= --r-min <= --r-max");
  }
}

void validate_experiment(const DenseMatrix& m, std::size_t k, Mode mode) {
  try {
    check_experiment(m, k, mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid experiment: ") + e.what());
  }
}

// ---------------------------------------------------------------- gen

int cmd_gen(const RunConfig& c) {
  const DenseMatrix m = build_matrix(c.ensemble, c.n, c.seed);
  std::ostringstream os;
  write_matrix(os, m);
  emit(c, os.str());
  return kExitOk;
}

// ----------------------------------------------------------- estimate

int cmd_estimate(const RunConfig& c) {
  validate_common(c);
  if (c.samples < 1) throw UsageError("--samples must be >= 1");
  const Mode mode = parse_mode(c.mode);
  const DenseMatrix m = source_matrix(c);
  validate_experiment(m, c.k, mode);

  const auto reference = default_reference(m, c.k, mode, c.samples, c.seed, c.threads);
  const auto run = sample_spectra(m, c.k, mode, c.samples, c.seed, c.threads);
  EstimateReport rep = summarize(run, mode, m.rows(), c.k, c.seed, reference.F, c.threads);
  rep.reference_kind = reference.kind;
  const auto grid = linear_grid(c.r_min, c.r_max, c.r_points);
  const TailCurve tail = empirical_tail(rep, grid);
  const auto violations = compare_tail(tail);

  std::ostringstream os;
  if (c.format == "csv") {
    write_csv(os, tail);
  } else {
    Json v = Json::array();
    for (const auto& t : violations) {
      v.push_back(Json{{"r", t.r}, {"empirical", t.empirical}, {"bound", t.bound}});
    }
    const double k = static_cast<double>(c.k);
    Json doc{{"config", config_json(c)},
             {"metadata", metadata_json()},
             {"report", to_json(rep)},
             {"mean_bound", theorem1_mean_bound(k)},
             {"sqrt_k_times_mean", std::sqrt(k) * rep.mean_supnorm},
             {"tail", to_json(tail)},
             {"tail_violations", v}};
    os << doc.dump(2) << '\n';
  }
  emit(c, os.str());
  return kExitOk;
}

// --------------------------------------------------------------- fig1

int cmd_fig1(const RunConfig& c) {
  validate_common(c);
  if (c.pairs < 1) throw UsageError("--pairs must be >= 1");
  if (c.exclude_top >= c.k) throw UsageError("--exclude-top must be < --k");
  const DenseMatrix m = source_matrix(c);
  validate_experiment(m, c.k, Mode::eigen);

  const PairStudy st = run_pair_study(m, c.k, c.exclude_top, c.pairs, c.seed, c.threads);
  if (!c.cdf_out.empty()) {
    std::ofstream a(c.cdf_out + "_A.csv");
    std::ofstream b(c.cdf_out + "_B.csv");
    if (!a || !b) throw UsageError("cannot write CDF files with prefix " + c.cdf_out);
    write_csv(a, st.pairs.front().cdf_a);
    write_csv(b, st.pairs.front().cdf_b);
  }

  std::ostringstream os;
  if (c.format == "csv") {
    os << "pair,statistic,lambda,p_value\n";
    for (std::size_t p = 0; p < st.pairs.size(); ++p) {
      const auto& ks = st.pairs[p].ks;
      os << p << ',' << format_real(ks.statistic) << ',' << format_real(ks.lambda) << ','
         << format_real(ks.p_value) << '\n';
    }
  } else {
    Json table = Json::array();
    for (std::size_t p = 0; p < st.pairs.size(); ++p) {
      const auto& pr = st.pairs[p];
      table.push_back(Json{{"pair", p},
                           {"subset_a", one_based(pr.subset_a)},
                           {"subset_b", one_based(pr.subset_b)},
                           {"ks", to_json(pr.ks)}});
    }
    Json meta = metadata_json();
    meta["renormalization"] =
        "top eigenvalues dropped; ESD renormalized over the remaining k - exclude_top "
        "values, which is also the KS sample size";
    Json doc{{"config", config_json(c)},
             {"metadata", meta},
             {"summary",
              Json{{"median_statistic", st.median_statistic},
                   {"share_p_at_least_0.05", st.share_p_at_least_005},
                   {"statistic_quantiles", quantiles_json(st.statistic_quantiles)},
                   {"p_value_quantiles", quantiles_json(st.p_value_quantiles)}}},
             {"first_pair",
              Json{{"cdf_a", to_json(st.pairs.front().cdf_a)},
                   {"cdf_b", to_json(st.pairs.front().cdf_b)}}},
             {"pairs", table}};
    os << doc.dump(2) << '\n';
  }
  emit(c, os.str());
  return kExitOk;
}

// ------------------------------------------------------------- verify

struct CheckLog {
  Json checks = Json::array();
  bool all_pass = true;

  void add(const std::string& name, bool pass, Json detail) {
    detail["name"] = name;
    detail["pass"] = pass;
    checks.push_back(std::move(detail));
    all_pass = all_pass && pass;
  }
};

std::vector<double> eigen_range_grid(const DenseMatrix& m, std::size_t points) {
  const auto ev = m.is_square() && is_hermitian(m, 1e-10 * std::max(1.0, m.max_abs()))
                      ? eigenvalues_hermitian(m).values
                      : singular_values(m).values;
  const double lo = ev.front() - 0.5;
  const double hi = ev.back() + 0.5;
  return linear_grid(lo, hi, points);
}

void verify_walk(std::size_t n, bool corrupt, std::uint64_t seed, CheckLog& log) {
  DenseMatrix kernel = kernel_matrix(n);
  if (corrupt) kernel(0, 1) += 1e-3;
  const WalkReport rep = verify_kernel(kernel, n);
  const double kernel_err =
      std::max({rep.row_sum_error, rep.reversibility_error, rep.invariance_error});
  Json kj = to_json(rep);
  kj["required_max_error"] = 1e-14;
  log.add("kernel validity n=" + std::to_string(n), kernel_err <= 1e-14, kj);
  const double gap_tol = n <= 5 ? 1e-8 : 1e-7;
  log.add("spectral gap = 2/n, n=" + std::to_string(n),
          std::abs(rep.gap - rep.gap_theory) <= gap_tol,
          Json{{"gap", rep.gap}, {"gap_theory", rep.gap_theory}, {"tolerance", gap_tol}});
  if (n < 3) return;

  const std::vector<double> r_grid = linear_grid(0.0, 5.0, 26);
  std::vector<std::pair<std::string, DenseMatrix>> mats = {
      {"rw-covariance", rw_covariance(n)},
      {"half-ones", half_ones_diagonal(n)},
      {"random", random_symmetric(n, seed, EntryDist::gaussian)}};
  for (const auto& [name, m] : mats) {
    const auto x_grid = eigen_range_grid(m, 20);
    for (std::size_t k = 2; k + 1 <= n; ++k) {
      const std::string tag = name + " n=" + std::to_string(n) + " k=" + std::to_string(k);
      const auto tn = check_triple_norm_bound(m, k, x_grid, Mode::eigen);
      log.add("|||f|||^2 <= 4/(kn), " + tag, tn.offending_x.empty(),
              Json{{"worst_kn_times_norm2", tn.worst}, {"limit", 4.0},
                   {"offending_x", tn.offending_x}});
      const auto fs = esd_observables(m, k, x_grid, Mode::eigen);
      bool ledoux_ok = true;
      Json witnesses = Json::array();
      for (std::size_t xi = 0; xi < fs.size(); ++xi) {
        for (double sign : {1.0, -1.0}) {
          const auto lc = verify_ledoux_tail(scaled(fs[xi], sign), r_grid, rep.gap);
          if (!lc.pass) {
            ledoux_ok = false;
            for (const auto& pt : lc.points) {
              if (!pt.pass) {
                witnesses.push_back(Json{{"x", x_grid[xi]}, {"sign", sign}, {"r", pt.r},
                                         {"measure", pt.measure}, {"bound", pt.bound}});
              }
            }
          }
        }
      }
      log.add("Ledoux tail 3exp(-r sqrt(gap)/2), " + tag, ledoux_ok,
              Json{{"violations", witnesses}});

      // One-step rank and ESD change along every transposition from a few
      // starting permutations.
      const PermIndex idx(n);
      std::size_t worst_rank = 0;
      double worst_gap = 0.0;
      bool unselected_identical = true;
      const auto taus = transpositions(n);
      for (std::size_t r = 0; r < idx.size(); r += std::max<std::size_t>(1, idx.size() / 7)) {
        const auto sigma = idx.unrank(r);
        for (const auto& [i, j] : taus) {
          const auto st = rank_step_check(m, k, sigma, i, j);
          worst_rank = std::max(worst_rank, st.rank_diff);
          worst_gap = std::max(worst_gap, st.f_gap_max);
          if (st.unselected_swap && !st.identical) unselected_identical = false;
        }
      }
      const double gap_limit = 2.0 / static_cast<double>(k) + 1e-12;
      log.add("rank(A(s)-A(st)) <= 2 and ||F diff|| <= 2/k, " + tag,
              worst_rank <= 2 && worst_gap <= gap_limit && unselected_identical,
              Json{{"max_rank", worst_rank}, {"max_sup_distance", worst_gap},
                   {"limit", gap_limit}, {"unselected_swaps_identical", unselected_identical}});
    }
  }
}

void verify_oracle(std::uint64_t seed, CheckLog& log) {
  const std::vector<double> r_grid = linear_grid(0.0, 5.0, 50);
  std::vector<std::pair<std::string, DenseMatrix>> mats;
  for (std::size_t n : {6u, 8u}) {
    mats.emplace_back("rw-covariance n=" + std::to_string(n), rw_covariance(n));
    mats.emplace_back("half-ones n=" + std::to_string(n), half_ones_diagonal(n));
    mats.emplace_back("random n=" + std::to_string(n),
                      random_symmetric(n, seed + n, EntryDist::gaussian));
  }
  for (const auto& [name, m] : mats) {
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto ens = enumerate_spectra(m, k, Mode::eigen);
      const StepCdf f = exact_F(ens);
      const auto dist = exact_supnorm_distribution(ens, f);
      const double kd = static_cast<double>(k);
      Json bad = Json::array();
      for (double r : r_grid) {
        const double tail = dist.tail(1.0 / std::sqrt(kd) + r);
        if (tail > theorem1_tail_bound(kd, r)) bad.push_back(Json{{"r", r}, {"tail", tail}});
      }
      const std::string tag = name + " k=" + std::to_string(k);
      log.add("exact tail <= 12 sqrt(k) exp(-r sqrt(k/8)), " + tag, bad.empty(),
              Json{{"violations", bad}, {"exact_mean", dist.mean()},
                   {"mean_bound", theorem1_mean_bound(kd)}});
      log.add("exact mean <= (13 + sqrt(8) ln k)/sqrt(k), " + tag,
              dist.mean() <= theorem1_mean_bound(kd), Json{{"exact_mean", dist.mean()}});

      Json pbad = Json::array();
      for (double x : eigen_range_grid(m, 20)) {
        for (double r : r_grid) {
          const double p = exact_pointwise_tail(ens, f, x, r);
          if (p > pointwise_tail_bound(kd, r)) pbad.push_back(Json{{"x", x}, {"r", r}, {"p", p}});
        }
      }
      log.add("pointwise tail <= 6 exp(-r sqrt(k)/sqrt(8)), " + tag, pbad.empty(),
              Json{{"violations", pbad}});

      bool chain_ok = true;
      for (std::size_t i = 0; i < std::min<std::size_t>(ens.count, 20); ++i) {
        for (int l = 2; l <= 40; ++l) chain_ok = chain_ok && chaining_check(f, ens.cdf(i), l).holds;
      }
      log.add("chaining ||F_A - F|| <= 1/l + Delta, " + tag, chain_ok, Json::object());
    }
  }
}

int cmd_verify(const RunConfig& c) {
  if (c.n < 3 || c.n > kMaxKernelOrder) throw UsageError("verify: --n must be in [3, 6]");
  CheckLog log;
  for (std::size_t n = 2; n <= c.n; ++n) verify_walk(n, c.corrupt_kernel, c.matrix_seed, log);
  verify_oracle(c.matrix_seed, log);
  Json doc{{"config", Json{{"subcommand", "verify"},
                           {"n", c.n},
                           {"matrix_seed", c.matrix_seed},
                           {"corrupt_kernel", c.corrupt_kernel}}},
           {"metadata", metadata_json()},
           {"pass", log.all_pass},
           {"checks", log.checks}};
  std::ostringstream os;
  os << doc.dump(2) << '\n';
  emit(c, os.str());
  if (!log.all_pass) {
    for (const auto& ch : log.checks) {
      if (!ch["pass"].get<bool>()) {
        std::cerr << "FAILED: " << ch["name"].get<std::string>() << '\n';
      }
    }
  }
  return log.all_pass ? kExitOk : kExitFailure;
}

// ------------------------------------------------------------- oracle

int cmd_oracle(const RunConfig& c) {
  validate_common(c);
  const Mode mode = parse_mode(c.mode);
  const DenseMatrix m = source_matrix(c);
  validate_experiment(m, c.k, mode);
  SubsetEnsemble ens;
  try {
    ens = enumerate_spectra(m, c.k, mode, c.threads);
  } catch (const EnumerationCapExceeded& e) {
    throw UsageError(e.what());
  }
  const StepCdf f = exact_F(ens);
  const auto dist = exact_supnorm_distribution(ens, f);

  std::ostringstream os;
  if (c.format == "csv") {
    write_csv(os, dist);
  } else {
    const double k = static_cast<double>(c.k);
    Json tail = Json::array();
    for (double r : linear_grid(c.r_min, c.r_max, c.r_points)) {
      tail.push_back(Json{{"r", r},
                          {"exact", dist.tail(1.0 / std::sqrt(k) + r)},
                          {"bound", theorem1_tail_bound(k, r)}});
    }
    Json pointwise = Json::array();
    for (double x : c.x_points) {
      for (double r : linear_grid(c.r_min, c.r_max, c.r_points)) {
        pointwise.push_back(Json{{"x", x},
                                 {"r", r},
                                 {"exact", exact_pointwise_tail(ens, f, x, r)},
                                 {"bound", pointwise_tail_bound(k, r)}});
      }
    }
    Json doc{{"config", config_json(c)},
             {"metadata", metadata_json()},
             {"subsets", ens.count},
             {"exact_F", to_json(f)},
             {"supnorm_distribution", to_json(dist)},
             {"mean_bound", theorem1_mean_bound(k)},
             {"tail", tail},
             {"pointwise_tail", pointwise}};
    os << doc.dump(2) << '\n';
  }
  emit(c, os.str());
  return kExitOk;
}

// ----------------------------------------------------------------- ks

int cmd_ks(const RunConfig& c) {
  validate_common(c);
  const Mode mode = parse_mode(c.mode);
  if (c.files.size() != 2) throw UsageError("ks needs exactly two matrix files");
  std::vector<StepCdf> cdfs;
  std::vector<long long> sizes;
  for (const auto& path : c.files) {
    const DenseMatrix m = load_input(path);
    if (mode == Mode::eigen) validate_experiment(m, m.rows(), mode);
    const Spectrum s = mode == Mode::eigen ? eigenvalues_hermitian(m) : singular_values(m);
    if (c.exclude_top >= s.count()) throw UsageError("--exclude-top must be < spectrum size");
    cdfs.push_back(trimmed_esd(s, c.exclude_top));
    sizes.push_back(static_cast<long long>(s.count() - c.exclude_top));
  }
  const KsResult r = ks_two_sample(cdfs[0], sizes[0], cdfs[1], sizes[1]);
  std::ostringstream os;
  if (c.format == "csv") {
    os << "statistic,lambda,p_value\n"
       << format_real(r.statistic) << ',' << format_real(r.lambda) << ','
       << format_real(r.p_value) << '\n';
  } else {
    Json doc{{"config", config_json(c)},
             {"metadata", metadata_json()},
             {"sample_sizes", sizes},
             {"ks", to_json(r)}};
    os << doc.dump(2) << '\n';
  }
  emit(c, os.str());
  return kExitOk;
}

void add_source_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--ensemble", c.ensemble,
                  "rw-covariance | half-ones | random | random-pm1 | random-general");
  sub->add_option("--n", c.n, "Matrix order for generated ensembles");
  sub->add_option("--matrix", c.matrix_path, "Matrix file (overrides --ensemble)");
  sub->add_option("--matrix-seed", c.matrix_seed, "Seed for random ensembles");
}

void add_output_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--format", c.format, "json | csv");
  sub->add_option("--out", c.out, "Output path (default: stdout)");
  sub->add_option("--threads", c.threads, "Worker threads (default: $SUBSPEC_THREADS or 1)")
      ->check(CLI::Range(1u, 1024u));
}

void add_grid_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--r-min", c.r_min, "Smallest r on the tail grid");
  sub->add_option("--r-max", c.r_max, "Largest r on the tail grid");
  sub->add_option("--r-points", c.r_points, "Number of r grid points");
}

int run(int argc, char** argv) {
  RunConfig c;
  c.threads = default_threads();

  CLI::App app{"Spectra of random submatrices: estimates, exact oracles and verification"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Write a matrix file");
  gen->add_option("ensemble,--ensemble", c.ensemble,
                  "rw-covariance | half-ones | random | random-pm1 | random-general");
  gen->add_option("--n", c.n, "Matrix order")->required();
  gen->add_option("--seed", c.seed, "Seed for random ensembles");
  gen->add_option("--out", c.out, "Output path (default: stdout)");
  gen->add_option("--threads", c.threads, "Accepted for uniformity; generation is serial")
      ->check(CLI::Range(1u, 1024u));

  auto* est = app.add_subcommand("estimate", "Monte Carlo estimate of F and of ||F_A - F||");
  add_source_options(est, c);
  est->add_option("--k", c.k, "Submatrix order")->required();
  est->add_option("--mode", c.mode, "eigen | singular");
  est->add_option("--samples", c.samples, "Number of sampled submatrices");
  est->add_option("--seed", c.seed, "Master seed");
  add_grid_options(est, c);
  add_output_options(est, c);

  auto* fig = app.add_subcommand("fig1", "KS comparison of two random submatrices, repeated");
  add_source_options(fig, c);
  fig->add_option("--k", c.k, "Submatrix order");
  fig->add_option("--exclude-top", c.exclude_top, "Largest eigenvalues dropped per submatrix");
  fig->add_option("--pairs", c.pairs, "Number of independent pairs");
  fig->add_option("--seed", c.seed, "Master seed");
  fig->add_option("--cdf-out", c.cdf_out, "Write the first pair's CDFs to PREFIX_A.csv, PREFIX_B.csv");
  add_output_options(fig, c);

  auto* ver = app.add_subcommand("verify", "Exhaustive checks of the walk and tail inequalities");
  ver->add_option("--n", c.n, "Largest permutation order for dense-kernel checks (3..6)");
  ver->add_option("--matrix-seed", c.matrix_seed, "Seed of the random test matrices");
  ver->add_flag("--corrupt-kernel", c.corrupt_kernel, "Self-test: perturb one kernel entry");
  ver->add_option("--out", c.out, "Output path (default: stdout)");
  ver->add_option("--threads", c.threads, "Accepted for uniformity; checks are serial")
      ->check(CLI::Range(1u, 1024u));

  auto* orc = app.add_subcommand("oracle", "Exact distributions by full subset enumeration");
  add_source_options(orc, c);
  orc->add_option("--k", c.k, "Submatrix order")->required();
  orc->add_option("--mode", c.mode, "eigen | singular");
  orc->add_option("--x", c.x_points, "Points x for exact P(|F_A(x) - F(x)| >= r)");
  add_grid_options(orc, c);
  add_output_options(orc, c);

  auto* ks = app.add_subcommand("ks", "Two-sample KS test between the spectra of two matrix files");
  ks->add_option("files", c.files, "Two matrix files")->required()->expected(2);
  ks->add_option("--mode", c.mode, "eigen | singular");
  ks->add_option("--exclude-top", c.exclude_top, "Largest values dropped from each spectrum");
  add_output_options(ks, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (gen->parsed()) c.subcommand = "gen";
  if (est->parsed()) c.subcommand = "estimate";
  if (fig->parsed()) c.subcommand = "fig1";
  if (ver->parsed()) c.subcommand = "verify";
  if (orc->parsed()) c.subcommand = "oracle";
  if (ks->parsed()) c.subcommand = "ks";
  if (ks->parsed() && ks->count("--exclude-top") == 0) c.exclude_top = 0;
  if (ver->parsed() && ver->count("--n") == 0) c.n = 5;

  if (c.subcommand == "gen") return cmd_gen(c);
  if (c.subcommand == "estimate") return cmd_estimate(c);
  if (c.subcommand == "fig1") return cmd_fig1(c);
  if (c.subcommand == "verify") return cmd_verify(c);
  if (c.subcommand == "oracle") return cmd_oracle(c);
  return cmd_ks(c);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
