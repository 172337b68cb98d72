#ifndef SUBSPEC_LINALG_HPP
#define SUBSPEC_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace subspec {

enum class Field { real, complex };

/// Dense row-major matrix over the reals or the complex numbers.
///
/// Complex entries are stored as interleaved (re, im) pairs, so the backing
/// buffer always has rows * cols * width() doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, Field field = Field::real)
      : rows_(rows), cols_(cols), field_(field),
        data_(rows * cols * (field == Field::complex ? 2 : 1), 0.0) {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("matrix dimensions must be positive");
    }
  }

  DenseMatrix(std::size_t rows, std::size_t cols, Field field,
              std::vector<double> entries)
      : rows_(rows), cols_(cols), field_(field), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("matrix dimensions must be positive");
    }
    if (data_.size() != rows * cols * width()) {
      throw std::invalid_argument("entry count does not match dimensions");
    }
    for (double v : data_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("matrix entries must be finite");
      }
    }
  }

  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) {
        throw std::invalid_argument("ragged initializer");
      }
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return DenseMatrix(r, c, Field::real, std::move(entries));
  }

  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<std::complex<double>>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> entries;
    entries.reserve(2 * r * c);
    for (const auto& row : rows) {
      if (row.size() != c) {
        throw std::invalid_argument("ragged initializer");
      }
      for (const auto& z : row) {
        entries.push_back(z.real());
        entries.push_back(z.imag());
      }
    }
    return DenseMatrix(r, c, Field::complex, std::move(entries));
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix diagonal(std::span<const double> d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Field field() const noexcept { return field_; }
  bool is_complex() const noexcept { return field_ == Field::complex; }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::size_t width() const noexcept { return is_complex() ? 2 : 1; }

  std::span<const double> entries() const noexcept { return data_; }

  // Real-field element access.
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::complex<double> get(std::size_t i, std::size_t j) const {
    if (is_complex()) {
      const std::size_t o = 2 * (i * cols_ + j);
      return {data_[o], data_[o + 1]};
    }
    return {data_[i * cols_ + j], 0.0};
  }

  void set(std::size_t i, std::size_t j, std::complex<double> z) {
    if (is_complex()) {
      const std::size_t o = 2 * (i * cols_ + j);
      data_[o] = z.real();
      data_[o + 1] = z.imag();
      return;
    }
    if (z.imag() != 0.0) {
      throw std::invalid_argument("imaginary part assigned into a real matrix");
    }
    data_[i * cols_ + j] = z.real();
  }

  /// Largest entry modulus; 0 for the zero matrix.
  double max_abs() const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        s = std::max(s, std::abs(get(i, j)));
      }
    }
    return s;
  }

  DenseMatrix conjugate_transpose() const {
    DenseMatrix t(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        t.set(j, i, std::conj(get(i, j)));
      }
    }
    return t;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Field field_ = Field::real;
  std::vector<double> data_;
};

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("dimension mismatch in subtraction");
  }
  const Field f = (a.is_complex() || b.is_complex()) ? Field::complex
                                                     : Field::real;
  DenseMatrix d(a.rows(), a.cols(), f);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      d.set(i, j, a.get(i, j) - b.get(i, j));
    }
  }
  return d;
}

/// Sorted (ascending) list of real eigenvalues or singular values.
struct Spectrum {
  std::vector<double> values;

  std::size_t count() const noexcept { return values.size(); }
};

/// Tolerances of the Jacobi eigensolver.
inline constexpr double kJacobiRelativeTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

namespace detail {

/// Result of a real symmetric eigendecomposition. `vectors` is row-major
/// n x n with row i holding the (unit) eigenvector of values[i].
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;
};

}  // namespace detail

/// Cyclic Jacobi on a real symmetric n x n matrix given row-major.
///
/// Stops once the off-diagonal Frobenius norm is at most
/// kJacobiRelativeTolerance times the Frobenius norm of the input. Eigenvalues
/// come back sorted ascending with eigenvector rows permuted alongside.
inline detail::SymmetricEigen jacobi_eigen(std::vector<double> a,
                                           std::size_t n,
                                           bool want_vectors = false) {
  if (a.size() != n * n) {
    throw std::invalid_argument("jacobi_eigen: buffer size mismatch");
  }
  std::vector<double> w;
  if (want_vectors) {
    w.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1.0;
  }

  double frob2 = 0.0;
  for (double v : a) frob2 += v * v;
  const double target = kJacobiRelativeTolerance * std::sqrt(frob2);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
    }
    return std::sqrt(2.0 * s);
  };

  // Entries below `skip` can stay: even if all n^2 of them survive, the
  // off-diagonal norm is still ten times under the target.
  const double skip = 0.1 * target / static_cast<double>(n);
  bool converged = off_norm() <= target;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= skip) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        double* row_p = &a[p * n];
        double* row_q = &a[q * n];
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = row_p[r];
          const double arq = row_q[r];
          const double np = c * arp - s * arq;
          const double nq = s * arp + c * arq;
          row_p[r] = np;
          row_q[r] = nq;
          a[r * n + p] = np;
          a[r * n + q] = nq;
        }
        if (want_vectors) {
          double* wp = &w[p * n];
          double* wq = &w[q * n];
          for (std::size_t r = 0; r < n; ++r) {
            const double vp = wp[r];
            const double vq = wq[r];
            wp[r] = c * vp - s * vq;
            wq[r] = s * vp + c * vq;
          }
        }
      }
    }
    converged = off_norm() <= target;
  }
  if (!converged) {
    throw std::runtime_error("eigensolver did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x] < a[y * n + y];
  });
  detail::SymmetricEigen out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a[order[i] * n + order[i]];
  if (want_vectors) {
    out.vectors.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy_n(&w[order[i] * n], n, &out.vectors[i * n]);
    }
  }
  return out;
}

inline bool is_hermitian(const DenseMatrix& m, double tol) {
  if (!m.is_square()) throw std::invalid_argument("not square");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      if (std::abs(m.get(i, j) - std::conj(m.get(j, i))) > tol) return false;
    }
  }
  return true;
}

/// Real symmetric form of a Hermitian matrix: the matrix itself when real,
/// the 2n x 2n embedding [[X, -Y], [Y, X]] of X + iY when complex.
inline std::vector<double> real_symmetric_form(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (!m.is_complex()) {
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a[i * n + j] = 0.5 * (m(i, j) + m(j, i));
      }
    }
    return a;
  }
  const std::size_t d = 2 * n;
  std::vector<double> a(d * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto z = 0.5 * (m.get(i, j) + std::conj(m.get(j, i)));
      a[i * d + j] = z.real();
      a[(i + n) * d + (j + n)] = z.real();
      a[i * d + (j + n)] = -z.imag();
      a[(i + n) * d + j] = z.imag();
    }
  }
  return a;
}

/// All eigenvalues of a Hermitian matrix, ascending, with multiplicity.
inline Spectrum eigenvalues_hermitian(const DenseMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("not square");
  const double scale = m.max_abs() == 0.0 ? 1.0 : m.max_abs();
  if (!is_hermitian(m, 1e-10 * scale)) {
    throw std::invalid_argument("not Hermitian");
  }
  const std::size_t n = m.rows();
  if (!m.is_complex()) {
    return {jacobi_eigen(real_symmetric_form(m), n).values};
  }
  // Every eigenvalue of the embedding appears twice; pairs sit adjacent once
  // sorted.
  const auto doubled = jacobi_eigen(real_symmetric_form(m), 2 * n).values;
  Spectrum s;
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.values[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  }
  return s;
}

/// A * A^H.
inline DenseMatrix gram(const DenseMatrix& a) {
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  if (!a.is_complex()) {
    DenseMatrix g(r, r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i; j < r; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < c; ++t) s += a(i, t) * a(j, t);
        g(i, j) = s;
        g(j, i) = s;
      }
    }
    return g;
  }
  DenseMatrix g(r, r, Field::complex);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      std::complex<double> s = 0.0;
      for (std::size_t t = 0; t < c; ++t) s += a.get(i, t) * std::conj(a.get(j, t));
      if (i == j) s = {s.real(), 0.0};
      g.set(i, j, s);
      g.set(j, i, std::conj(s));
    }
  }
  return g;
}

/// Singular values via the eigenvalues of the Gram matrix of the wide
/// orientation; min(rows, cols) values, ascending.
inline Spectrum singular_values(const DenseMatrix& a) {
  if (a.rows() > a.cols()) return singular_values(a.conjugate_transpose());
  const double scale = a.max_abs();
  const double floor = 1e-9 * scale * scale;
  Spectrum ev = eigenvalues_hermitian(gram(a));
  for (double& v : ev.values) {
    if (v < 0.0) {
      if (-v > floor) {
        throw std::runtime_error("Gram matrix has a negative eigenvalue");
      }
      v = 0.0;
    }
    v = std::sqrt(v);
  }
  return ev;
}

namespace detail {

/// One-sided (Hestenes) Jacobi singular values of a real m x n matrix given
/// row-major. Works on columns; accurate down to eps * sigma_max, which the
/// Gram route cannot deliver.
inline std::vector<double> hestenes_singular_values(std::vector<double> a,
                                                    std::size_t m,
                                                    std::size_t n) {
  if (m < n) {
    std::vector<double> t(m * n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) t[j * m + i] = a[i * n + j];
    }
    return hestenes_singular_values(std::move(t), n, m);
  }
  // Column-major copy so column operations are contiguous.
  std::vector<double> u(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) u[j * m + i] = a[i * n + j];
  }
  constexpr double eps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* up = &u[p * m];
        double* uq = &u[q * m];
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += up[i] * up[i];
          beta += uq[i] * uq[i];
          gamma += up[i] * uq[i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = up[i];
          const double y = uq[i];
          up[i] = c * x - s * y;
          uq[i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += u[j * m + i] * u[j * m + i];
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end());
  return sv;
}

}  // namespace detail

/// Number of singular values above rel_tol * max(rows, cols) * sigma_max.
///
/// Uses one-sided Jacobi rather than the Gram route so that exactly
/// rank-deficient inputs are not inflated by sqrt(eps) noise. Complex input
/// goes through the real embedding, whose singular values are doubled.
inline std::size_t numerical_rank(const DenseMatrix& a, double rel_tol) {
  if (rel_tol < 0) throw std::invalid_argument("rel_tol must be nonnegative");
  if (a.max_abs() == 0.0) return 0;
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  std::vector<double> sv;
  if (!a.is_complex()) {
    sv = detail::hestenes_singular_values(
        std::vector<double>(a.entries().begin(), a.entries().end()), r, c);
  } else {
    std::vector<double> e(4 * r * c);
    const std::size_t w = 2 * c;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        const auto z = a.get(i, j);
        e[i * w + j] = z.real();
        e[(i + r) * w + (j + c)] = z.real();
        e[i * w + (j + c)] = -z.imag();
        e[(i + r) * w + j] = z.imag();
      }
    }
    sv = detail::hestenes_singular_values(std::move(e), 2 * r, 2 * c);
  }
  const double threshold =
      rel_tol * static_cast<double>(std::max(r, c)) * sv.back();
  const auto above = static_cast<std::size_t>(
      std::count_if(sv.begin(), sv.end(), [&](double s) { return s > threshold; }));
  return a.is_complex() ? above / 2 : above;
}

}  // namespace subspec

#endif  // SUBSPEC_LINALG_HPP
