#ifndef SUBSPEC_ENSEMBLES_HPP
#define SUBSPEC_ENSEMBLES_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "subspec/linalg.hpp"
#include "subspec/rng.hpp"
#include "subspec/spectra.hpp"

namespace subspec {

/// Covariance of a simple random walk: entry (i, j) = min(i, j), 1-based.
inline DenseMatrix rw_covariance(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = static_cast<double>(std::min(i, j) + 1);
    }
  }
  return m;
}

/// diag(1, ..., 1, 0, ..., 0) with floor(n/2) leading ones.
inline DenseMatrix half_ones_diagonal(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n / 2; ++i) m(i, i) = 1.0;
  return m;
}

enum class EntryDist { gaussian, pm1 };

inline double draw_entry(Xoshiro256pp& rng, EntryDist dist) {
  if (dist == EntryDist::gaussian) return standard_normal(rng);
  return (rng() >> 63) ? 1.0 : -1.0;
}

/// Real symmetric matrix with i.i.d. upper triangle (row-major order),
/// mirrored below the diagonal.
inline DenseMatrix random_symmetric(std::size_t n, std::uint64_t seed,
                                    EntryDist dist) {
  Xoshiro256pp rng(seed);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = draw_entry(rng, dist);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

/// Real rows x cols matrix with i.i.d. entries in row-major order.
inline DenseMatrix random_general(std::size_t rows, std::size_t cols,
                                  std::uint64_t seed, EntryDist dist) {
  Xoshiro256pp rng(seed);
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = draw_entry(rng, dist);
  }
  return m;
}

/// Complex Hermitian matrix with Gaussian real and imaginary parts above the
/// diagonal and a real Gaussian diagonal.
inline DenseMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  DenseMatrix m(n, n, Field::complex);
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, i, {standard_normal(rng), 0.0});
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::complex<double> z(standard_normal(rng), standard_normal(rng));
      m.set(i, j, z);
      m.set(j, i, std::conj(z));
    }
  }
  return m;
}

class MatrixParseError : public std::runtime_error {
 public:
  MatrixParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

inline void write_matrix(std::ostream& os, const DenseMatrix& m) {
  os << m.rows() << ' ' << m.cols() << ' '
     << (m.is_complex() ? "complex" : "real") << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ' ';
      const auto z = m.get(i, j);
      os << format_real(z.real());
      if (m.is_complex()) os << ',' << format_real(z.imag());
    }
    os << '\n';
  }
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<std::size_t> parse_dim(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses the text matrix format: header "rows cols field", then one line per
/// row. Lines starting with '#' and blank lines are skipped.
inline DenseMatrix read_matrix(std::istream& is) {
  std::string line;
  int lineno = 0;
  auto next_content = [&]() -> bool {
    while (std::getline(is, line)) {
      ++lineno;
      if (!line.empty() && line[0] == '#') continue;
      if (detail::split_ws(line).empty()) continue;
      return true;
    }
    return false;
  };

  if (!next_content()) throw MatrixParseError(lineno + 1, "missing header");
  const auto header = detail::split_ws(line);
  if (header.size() != 3) {
    throw MatrixParseError(lineno, "header must be \"rows cols field\"");
  }
  const auto rows = detail::parse_dim(header[0]);
  const auto cols = detail::parse_dim(header[1]);
  if (!rows || !cols) throw MatrixParseError(lineno, "bad dimensions in header");
  Field field;
  if (header[2] == "real") {
    field = Field::real;
  } else if (header[2] == "complex") {
    field = Field::complex;
  } else {
    throw MatrixParseError(lineno, "field must be \"real\" or \"complex\"");
  }

  std::vector<double> entries;
  entries.reserve(*rows * *cols * (field == Field::complex ? 2 : 1));
  for (std::size_t r = 0; r < *rows; ++r) {
    if (!next_content()) {
      throw MatrixParseError(lineno + 1, "expected " + std::to_string(*rows) +
                                             " rows, found " + std::to_string(r));
    }
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != *cols) {
      throw MatrixParseError(lineno, "expected " + std::to_string(*cols) +
                                         " entries, found " +
                                         std::to_string(tokens.size()));
    }
    for (const auto tok : tokens) {
      if (field == Field::real) {
        const auto v = parse_real(tok);
        if (!v) throw MatrixParseError(lineno, "unparsable number \"" + std::string(tok) + "\"");
        entries.push_back(*v);
      } else {
        const auto comma = tok.find(',');
        const auto re = comma == std::string_view::npos ? std::nullopt
                                                        : parse_real(tok.substr(0, comma));
        const auto im = comma == std::string_view::npos ? std::nullopt
                                                        : parse_real(tok.substr(comma + 1));
        if (!re || !im) {
          throw MatrixParseError(lineno, "unparsable complex entry \"" + std::string(tok) + "\"");
        }
        entries.push_back(*re);
        entries.push_back(*im);
      }
    }
  }
  if (next_content()) throw MatrixParseError(lineno, "trailing content after last row");
  return DenseMatrix(*rows, *cols, field, std::move(entries));
}

inline void save_matrix(const DenseMatrix& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_matrix(os, m);
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

inline DenseMatrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_matrix(is);
}

enum class EnsembleKind {
  rw_covariance,
  half_ones,
  random_symmetric_gaussian,
  random_symmetric_pm1,
  file
};

/// Names a matrix source. `seed` applies to random kinds, `path` to files.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::rw_covariance;
  std::size_t n = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> path;
};

inline DenseMatrix make_matrix(const EnsembleSpec& spec) {
  switch (spec.kind) {
    case EnsembleKind::rw_covariance:
      return rw_covariance(spec.n);
    case EnsembleKind::half_ones:
      return half_ones_diagonal(spec.n);
    case EnsembleKind::random_symmetric_gaussian:
      return random_symmetric(spec.n, spec.seed.value_or(0), EntryDist::gaussian);
    case EnsembleKind::random_symmetric_pm1:
      return random_symmetric(spec.n, spec.seed.value_or(0), EntryDist::pm1);
    case EnsembleKind::file:
      if (!spec.path) throw std::invalid_argument("file ensemble needs a path");
      return load_matrix(*spec.path);
  }
  throw std::invalid_argument("unknown ensemble kind");
}

}  // namespace subspec

#endif  // SUBSPEC_ENSEMBLES_HPP
