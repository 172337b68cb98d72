#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "subspec/ensembles.hpp"
#include "subspec/montecarlo.hpp"
#include "subspec/walk.hpp"

namespace {

using subspec::DenseMatrix;
using subspec::FunctionOnSn;
using subspec::Mode;

TEST(Walk, PermIndexIsBijection) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const subspec::PermIndex idx(n);
    subspec::Permutation p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::size_t r = 0;
    do {
      EXPECT_EQ(idx.rank(p), r);
      EXPECT_EQ(idx.unrank(r), p);
      ++r;
    } while (std::next_permutation(p.begin(), p.end()));
    EXPECT_EQ(r, idx.size());
  }
  const std::size_t bad[] = {0, 0, 1};
  EXPECT_THROW(subspec::PermIndex(3).rank(bad), std::invalid_argument);
}

TEST(Walk, NeighborTableIsAnInvolution) {
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto& nb = subspec::neighbor_table(n);
    const std::size_t t = n * (n - 1) / 2;
    for (std::size_t r = 0; r < subspec::factorial(n); ++r) {
      for (std::size_t j = 0; j < t; ++j) {
        const auto s = nb[r * t + j];
        EXPECT_NE(s, r);
        EXPECT_EQ(nb[s * t + j], r);
      }
    }
  }
}

TEST(Walk, KernelSmallCases) {
  const auto k2 = subspec::kernel_matrix(2);
  EXPECT_EQ(k2, DenseMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}));

  const auto k3 = subspec::kernel_matrix(3);
  ASSERT_EQ(k3.rows(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(k3(i, i), 1.0 / 3.0, 1e-16);
    int moves = 0;
    for (std::size_t j = 0; j < 6; ++j) {
      if (j != i && k3(i, j) != 0.0) {
        EXPECT_NEAR(k3(i, j), 2.0 / 9.0, 1e-16);
        ++moves;
      }
    }
    EXPECT_EQ(moves, 3);
  }
  EXPECT_THROW(subspec::kernel_matrix(1), std::invalid_argument);
  EXPECT_THROW(subspec::kernel_matrix(7), std::invalid_argument);
}

TEST(Walk, VerifyKernel) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto r = subspec::verify_kernel(n);
    EXPECT_LE(r.row_sum_error, n == 3 ? 1e-15 : 1e-14);
    EXPECT_LE(r.reversibility_error, 1e-14);
    EXPECT_LE(r.invariance_error, 1e-14);
  }
  auto k = subspec::kernel_matrix(4);
  k(0, 1) += 1e-3;
  const auto bad = subspec::verify_kernel(k, 4);
  EXPECT_GT(bad.reversibility_error, 0.0);
}

TEST(Walk, SpectralGapIsTwoOverN) {
  EXPECT_NEAR(subspec::spectral_gap(2), 1.0, 1e-8);
  EXPECT_NEAR(subspec::spectral_gap(3), 2.0 / 3.0, 1e-8);
  EXPECT_NEAR(subspec::spectral_gap(4), 0.5, 1e-8);
  EXPECT_NEAR(subspec::spectral_gap(5), 0.4, 1e-8);
  const auto ev = subspec::kernel_eigenvalues(subspec::kernel_matrix(2));
  EXPECT_NEAR(ev[0], 0.0, 1e-15);
  EXPECT_NEAR(ev[1], 1.0, 1e-15);
}

TEST(Walk, DirichletFormAndTripleNormByHand) {
  const FunctionOnSn c(3, std::vector<double>(6, 2.0));
  EXPECT_EQ(subspec::variance_mu(c), 0.0);
  EXPECT_EQ(subspec::dirichlet_form(c), 0.0);
  EXPECT_EQ(subspec::triple_norm(c), 0.0);

  const FunctionOnSn f(2, {0.0, 1.0});
  EXPECT_DOUBLE_EQ(subspec::variance_mu(f), 0.25);
  EXPECT_DOUBLE_EQ(subspec::dirichlet_form(f), 0.25);
  EXPECT_DOUBLE_EQ(subspec::triple_norm(f), 0.5);
}

// Dirichlet form straight from the dense kernel: 1/2 sum mu(x) K(x,y) (f(x)-f(y))^2.
double dense_dirichlet(const DenseMatrix& k, const FunctionOnSn& f) {
  const std::size_t s = k.rows();
  double e = 0.0;
  for (std::size_t x = 0; x < s; ++x) {
    for (std::size_t y = 0; y < s; ++y) {
      const double d = f.values[x] - f.values[y];
      e += k(x, y) * d * d;
    }
  }
  return 0.5 * e / static_cast<double>(s);
}

TEST(Walk, PoincareInequality) {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> d;
  for (std::size_t n : {3u, 4u}) {
    const double gap = subspec::spectral_gap(n);
    const auto k = subspec::kernel_matrix(n);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> v(subspec::factorial(n));
      for (auto& x : v) x = d(gen);
      const FunctionOnSn f(n, v);
      const double e = subspec::dirichlet_form(f);
      EXPECT_NEAR(e, dense_dirichlet(k, f), 1e-13);
      EXPECT_LE(gap * subspec::variance_mu(f), e + 1e-13);
    }
  }
  const auto [gap, phi] = subspec::spectral_gap_eigenfunction(4);
  EXPECT_NEAR(gap * subspec::variance_mu(phi), subspec::dirichlet_form(phi), 1e-6);
}

TEST(Walk, EsdObservableEndpoints) {
  const auto m = subspec::rw_covariance(5);
  const auto hi = subspec::esd_observable(m, 3, 100.0, Mode::eigen);
  const auto lo = subspec::esd_observable(m, 3, -100.0, Mode::eigen);
  for (double v : hi.values) EXPECT_EQ(v, 1.0);
  for (double v : lo.values) EXPECT_EQ(v, 0.0);
}

TEST(Walk, EsdObservableHalfOnesCounts) {
  const auto f = subspec::esd_observable(subspec::half_ones_diagonal(4), 2, 0.0, Mode::eigen);
  const subspec::PermIndex idx(4);
  for (std::size_t r = 0; r < 24; ++r) {
    const auto p = idx.unrank(r);
    const int ones = (p[0] < 2) + (p[1] < 2);
    EXPECT_DOUBLE_EQ(f.values[r], (2.0 - ones) / 2.0);
  }
}

TEST(Walk, TripleNormBound) {
  const double d[] = {2, 2, 2, 2, 2};
  const auto grid = subspec::linear_grid(0.0, 4.0, 20);
  EXPECT_EQ(subspec::verify_triple_norm_bound(DenseMatrix::diagonal(d), 3, grid, Mode::eigen), 0.0);

  const double x0[] = {0.0};
  EXPECT_LE(subspec::verify_triple_norm_bound(subspec::half_ones_diagonal(4), 2, x0, Mode::eigen),
            4.0);

  const auto m = subspec::random_symmetric(5, 21, subspec::EntryDist::gaussian);
  const auto ev = subspec::eigenvalues_hermitian(m).values;
  const auto g = subspec::linear_grid(ev.front() - 0.5, ev.back() + 0.5, 20);
  EXPECT_LE(subspec::verify_triple_norm_bound(m, 3, g, Mode::eigen), 4.0);
}

TEST(Walk, LedouxExamples) {
  const auto grid = subspec::linear_grid(0.0, 5.0, 26);
  const FunctionOnSn c(4, std::vector<double>(24, 1.0));
  const auto lc = subspec::verify_ledoux_tail(c, grid);
  EXPECT_TRUE(lc.pass);
  for (const auto& p : lc.points) {
    if (p.r > 0) {
      EXPECT_EQ(p.measure, 0.0);
    }
  }
  const auto f = subspec::esd_observable(subspec::rw_covariance(5), 2, 2.0, Mode::eigen);
  const auto lf = subspec::verify_ledoux_tail(f, grid);
  EXPECT_TRUE(lf.pass);
  EXPECT_EQ(lf.points.front().bound, 3.0);
  EXPECT_TRUE(subspec::verify_ledoux_tail(subspec::scaled(f, -1.0), grid).pass);
}

TEST(Walk, RankStepExamples) {
  const auto m = subspec::random_symmetric(6, 30, subspec::EntryDist::gaussian);
  const std::size_t sigma[] = {3, 0, 5, 1, 4, 2};
  const auto out = subspec::rank_step_check(m, 3, sigma, 4, 5);
  EXPECT_TRUE(out.unselected_swap);
  EXPECT_TRUE(out.identical);
  EXPECT_EQ(out.rank_diff, 0u);
  EXPECT_EQ(out.f_gap_max, 0.0);

  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 3; j < 6; ++j) {
      const auto s = subspec::rank_step_check(m, 3, sigma, i, j);
      EXPECT_LE(s.rank_diff, 2u);
      EXPECT_LE(s.f_gap_max, static_cast<double>(s.rank_diff) / 3.0 + 1e-12);
    }
  }

  const double d[] = {5, 1, 4, 2, 3, 0};
  const auto diag = DenseMatrix::diagonal(d);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) {
      EXPECT_LE(subspec::rank_step_check(diag, 4, sigma, i, j).f_gap_max, 2.0 / 4.0 + 1e-15);
    }
  }
  EXPECT_THROW(subspec::rank_step_check(m, 3, sigma, 2, 2), std::invalid_argument);
}

}  // namespace
