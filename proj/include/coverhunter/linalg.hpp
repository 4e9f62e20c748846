#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coverhunter {

/// Dense row-major matrix of arbitrary-precision integers.
class IntegerMatrix {
public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  IntegerMatrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (const auto &row : init) {
      if (row.size() != cols_)
        throw std::invalid_argument("ragged matrix literal");
      for (long v : row)
        entries_.emplace_back(v);
    }
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  mpz_class &operator()(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  const mpz_class &operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  friend bool operator==(const IntegerMatrix &a, const IntegerMatrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpz_class> entries_;
};

enum class RankMethod { mod_p, fraction_free, dixon };

inline const char *to_string(RankMethod m) {
  switch (m) {
  case RankMethod::mod_p:
    return "mod_p";
  case RankMethod::fraction_free:
    return "fraction_free";
  case RankMethod::dixon:
    return "dixon";
  }
  return "?";
}

struct RankResult {
  std::size_t rank = 0;
  RankMethod method = RankMethod::fraction_free;
  std::optional<std::uint64_t> prime;
  bool certified_over_Q = false;
};

struct SmithForm {
  std::vector<mpz_class> divisors; // d1 | d2 | ... | dr, all positive
  std::size_t rank = 0;
};

inline constexpr std::uint64_t kDixonPrime = 1'073'741'789;
inline constexpr std::uint64_t kScreenPrime = 31'991;

inline bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  for (a %= p; e; e >>= 1, a = mulmod(a, a, p))
    if (e & 1)
      r = mulmod(r, a, p);
  return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  return powmod(a, p - 2, p);
}

inline std::uint64_t reduce(const mpz_class &v, std::uint64_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
  return r.get_ui();
}

/// Row echelon form over F_p in place; returns pivot columns in row order.
inline std::vector<std::size_t>
echelon_mod_p(std::vector<std::uint64_t> &a, std::size_t rows,
              std::size_t cols, std::uint64_t p,
              std::vector<std::size_t> *pivot_rows = nullptr) {
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> row_id(rows);
  for (std::size_t i = 0; i < rows; ++i)
    row_id[i] = i;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv * cols + c] == 0)
      ++piv;
    if (piv == rows)
      continue;
    if (piv != r) {
      std::swap_ranges(a.begin() + static_cast<long>(piv * cols),
                       a.begin() + static_cast<long>((piv + 1) * cols),
                       a.begin() + static_cast<long>(r * cols));
      std::swap(row_id[piv], row_id[r]);
    }
    std::uint64_t inv = invmod(a[r * cols + c], p);
    for (std::size_t k = c; k < cols; ++k)
      a[r * cols + k] = mulmod(a[r * cols + k], inv, p);
    for (std::size_t i = r + 1; i < rows; ++i) {
      std::uint64_t f = a[i * cols + c];
      if (f == 0)
        continue;
      for (std::size_t k = c; k < cols; ++k) {
        std::uint64_t t = mulmod(f, a[r * cols + k], p);
        std::uint64_t &x = a[i * cols + k];
        x = x >= t ? x - t : x + p - t;
      }
    }
    pivots.push_back(c);
    if (pivot_rows)
      pivot_rows->push_back(row_id[r]);
    ++r;
  }
  return pivots;
}

inline std::vector<std::uint64_t> reduce_matrix(const IntegerMatrix &m,
                                                std::uint64_t p) {
  std::vector<std::uint64_t> a(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      a[i * m.cols() + j] = reduce(m(i, j), p);
  return a;
}

} // namespace detail

inline std::size_t rank_mod_p(const IntegerMatrix &m, std::uint64_t p) {
  if (!is_prime(p))
    throw std::invalid_argument("rank_mod_p: " + std::to_string(p) +
                                " is not prime");
  auto a = detail::reduce_matrix(m, p);
  return detail::echelon_mod_p(a, m.rows(), m.cols(), p).size();
}

/// Basis of the right kernel {v : M v = 0} over F_p, one vector per free
/// column with a 1 in that column.
inline std::vector<std::vector<std::uint64_t>>
nullspace_mod_p(const IntegerMatrix &m, std::uint64_t p) {
  const std::size_t rows = m.rows(), cols = m.cols();
  auto a = detail::reduce_matrix(m, p);
  auto pivots = detail::echelon_mod_p(a, rows, cols, p);
  // Back substitution to reduced row echelon form.
  for (std::size_t r = pivots.size(); r-- > 0;) {
    std::size_t c = pivots[r];
    for (std::size_t i = 0; i < r; ++i) {
      std::uint64_t f = a[i * cols + c];
      if (f == 0)
        continue;
      for (std::size_t k = c; k < cols; ++k) {
        std::uint64_t t = detail::mulmod(f, a[r * cols + k], p);
        std::uint64_t &x = a[i * cols + k];
        x = x >= t ? x - t : x + p - t;
      }
    }
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots)
    is_pivot[c] = true;
  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc])
      continue;
    std::vector<std::uint64_t> v(cols, 0);
    v[fc] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = (p - a[r * cols + fc]) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

/// A fraction num/den with den > 0 and gcd 1.
struct Fraction {
  mpz_class num, den;
  friend bool operator==(const Fraction &, const Fraction &) = default;
};

/// The unique a/b with |a|, b <= bound and a = r*b (mod m), if any.
inline std::optional<Fraction> rational_reconstruction(const mpz_class &r,
                                                       const mpz_class &m,
                                                       const mpz_class &bound) {
  mpz_class r0 = m, r1 = r % m, t0 = 0, t1 = 1;
  if (r1 < 0)
    r1 += m;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (t1 == 0 || abs(t1) > bound)
    return std::nullopt;
  if (t1 < 0) {
    t1 = -t1;
    r1 = -r1;
  }
  if (gcd(r1, t1) != 1)
    return std::nullopt;
  return Fraction{r1, t1};
}

/// Reconstruction with both bounds floor(sqrt(p/2)).
inline std::optional<Fraction> rational_reconstruction(std::uint64_t r,
                                                       std::uint64_t p) {
  if (r >= p)
    throw std::invalid_argument("rational_reconstruction: residue out of range");
  mpz_class half = mpz_class(static_cast<unsigned long>(p)) / 2;
  mpz_class bound = sqrt(half);
  return rational_reconstruction(mpz_class(static_cast<unsigned long>(r)),
                                 mpz_class(static_cast<unsigned long>(p)),
                                 bound);
}

namespace detail {

/// Fraction-free (Bareiss) elimination, pivoting on the entry of smallest
/// nonzero magnitude in the current column. Returns the rank r and the last
/// pivot, which is +-an r x r minor (1 when r = 0).
inline std::pair<std::size_t, mpz_class> bareiss(const IntegerMatrix &m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<mpz_class> a(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      a[i * cols + j] = m(i, j);
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (sgn(a[i * cols + c]) != 0 &&
          (piv == rows || mpz_cmpabs(a[i * cols + c].get_mpz_t(), a[piv * cols + c].get_mpz_t()) < 0))
        piv = i;
    if (piv == rows)
      continue;
    if (piv != r)
      for (std::size_t k = 0; k < cols; ++k)
        std::swap(a[piv * cols + k], a[r * cols + k]);
    const mpz_class &pv = a[r * cols + c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        mpz_class &x = a[i * cols + k];
        x = pv * x - a[i * cols + c] * a[r * cols + k];
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      }
      a[i * cols + c] = 0;
    }
    prev = pv;
    ++r;
  }
  return {r, abs(prev)};
}

} // namespace detail

/// Rank over Q by fraction-free elimination.
inline std::size_t bareiss_rank(const IntegerMatrix &m) {
  return detail::bareiss(m).first;
}

namespace detail {

/// Dixon's p-adic method on the kernel. Rows and columns of the mod-p pivot
/// block B are chosen by echelon form; the kernel basis of M is
/// {(-B^-1 C e_j, e_j)}, solved p-adically and recovered by rational
/// reconstruction, then checked exactly against all of M. Returns nullopt
/// if reconstruction or the exact check fails.
inline std::optional<std::size_t> dixon_rank(const IntegerMatrix &m,
                                             std::uint64_t p) {
  const std::size_t rows = m.rows(), cols = m.cols();
  auto a = reduce_matrix(m, p);
  std::vector<std::size_t> prow;
  auto pivots = echelon_mod_p(a, rows, cols, p, &prow);
  const std::size_t r = pivots.size();
  if (r == cols)
    return r; // full column rank mod p is full column rank over Q
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots)
    is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < cols; ++c)
    if (!is_pivot[c])
      free_cols.push_back(c);
  if (r == 0) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(m(i, j)) != 0)
          return std::nullopt;
    return 0;
  }

  // B^-1 mod p via Gauss-Jordan on [B | I].
  std::vector<std::uint64_t> binv(r * r, 0);
  {
    std::vector<std::uint64_t> aug(r * 2 * r, 0);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j)
        aug[i * 2 * r + j] = reduce(m(prow[i], pivots[j]), p);
      aug[i * 2 * r + r + i] = 1;
    }
    for (std::size_t c = 0; c < r; ++c) {
      std::size_t piv = c;
      while (piv < r && aug[piv * 2 * r + c] == 0)
        ++piv;
      if (piv == r)
        return std::nullopt;
      if (piv != c)
        std::swap_ranges(aug.begin() + static_cast<long>(piv * 2 * r),
                         aug.begin() + static_cast<long>((piv + 1) * 2 * r),
                         aug.begin() + static_cast<long>(c * 2 * r));
      std::uint64_t inv = invmod(aug[c * 2 * r + c], p);
      for (std::size_t k = 0; k < 2 * r; ++k)
        aug[c * 2 * r + k] = mulmod(aug[c * 2 * r + k], inv, p);
      for (std::size_t i = 0; i < r; ++i) {
        if (i == c || aug[i * 2 * r + c] == 0)
          continue;
        std::uint64_t f = aug[i * 2 * r + c];
        for (std::size_t k = 0; k < 2 * r; ++k) {
          std::uint64_t t = mulmod(f, aug[c * 2 * r + k], p);
          std::uint64_t &x = aug[i * 2 * r + k];
          x = x >= t ? x - t : x + p - t;
        }
      }
    }
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        binv[i * r + j] = aug[i * 2 * r + r + j];
  }

  // Hadamard bound on |det B| and on the Cramer numerators.
  mpz_class hadamard_sq = 1, max_col_sq = 0;
  std::vector<mpz_class> col_sq(r);
  for (std::size_t j = 0; j < r; ++j) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < r; ++i)
      s += m(prow[i], pivots[j]) * m(prow[i], pivots[j]);
    col_sq[j] = s;
  }
  for (auto fc : free_cols) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < r; ++i)
      s += m(prow[i], fc) * m(prow[i], fc);
    max_col_sq = std::max(max_col_sq, s);
  }
  for (std::size_t j = 0; j < r; ++j)
    hadamard_sq *= std::max(col_sq[j], std::max(max_col_sq, mpz_class(1)));
  // p^k must exceed 2 * H^2 so that numerator and denominator both fit.
  mpz_class needed = 2 * hadamard_sq;

  const mpz_class pz(static_cast<unsigned long>(p));
  std::vector<std::vector<mpz_class>> kernel;
  for (auto fc : free_cols) {
    // Solve B x = -C e_fc p-adically.
    std::vector<mpz_class> residual(r), x(r, 0);
    for (std::size_t i = 0; i < r; ++i)
      residual[i] = -m(prow[i], fc);
    mpz_class modulus = 1;
    std::size_t next_try = 1, steps = 0;
    std::optional<std::vector<mpz_class>> solution;
    while (true) {
      std::vector<std::uint64_t> rv(r), digit(r, 0);
      for (std::size_t i = 0; i < r; ++i)
        rv[i] = reduce(residual[i], p);
      for (std::size_t i = 0; i < r; ++i) {
        unsigned __int128 acc = 0;
        for (std::size_t k = 0; k < r; ++k)
          acc += static_cast<unsigned __int128>(binv[i * r + k]) * rv[k];
        digit[i] = static_cast<std::uint64_t>(acc % p);
      }
      for (std::size_t i = 0; i < r; ++i)
        x[i] += modulus * digit[i];
      for (std::size_t i = 0; i < r; ++i) {
        mpz_class s = 0;
        for (std::size_t k = 0; k < r; ++k)
          if (digit[k])
            s += m(prow[i], pivots[k]) * digit[k];
        residual[i] -= s;
        mpz_divexact(residual[i].get_mpz_t(), residual[i].get_mpz_t(),
                     pz.get_mpz_t());
      }
      modulus *= pz;
      ++steps;
      bool final_try = modulus > needed;
      if (steps == next_try || final_try) {
        next_try *= 2;
        mpz_class bound = sqrt(modulus / 2);
        std::vector<mpz_class> v(cols, 0);
        mpz_class common = 1;
        std::vector<Fraction> fr;
        bool ok = true;
        for (std::size_t i = 0; i < r && ok; ++i) {
          auto f = rational_reconstruction(x[i], modulus, bound);
          if (!f)
            ok = false;
          else {
            common = lcm(common, f->den);
            fr.push_back(*f);
          }
        }
        if (ok) {
          for (std::size_t i = 0; i < r; ++i)
            v[pivots[i]] = fr[i].num * (common / fr[i].den);
          v[fc] = common;
          bool zero = true;
          for (std::size_t i = 0; i < rows && zero; ++i) {
            mpz_class s = 0;
            for (std::size_t j = 0; j < cols; ++j)
              if (sgn(v[j]) != 0)
                s += m(i, j) * v[j];
            zero = sgn(s) == 0;
          }
          if (zero) {
            solution = std::move(v);
            break;
          }
        }
        if (final_try)
          break;
      }
    }
    if (!solution)
      return std::nullopt;
    kernel.push_back(std::move(*solution));
  }
  // The verified vectors are independent (each has a unit in its own free
  // column and zeros in the others), so nullity >= cols - r; with
  // rank_Q >= rank_p = r this pins the rank.
  return r;
}

} // namespace detail

/// Exact rank over Q: mod-p lower bound, Dixon lifting with exact
/// verification, Bareiss as the fallback.
inline RankResult rank_over_Q(const IntegerMatrix &m,
                              std::uint64_t p = kDixonPrime) {
  if (auto r = detail::dixon_rank(m, p))
    return {*r, RankMethod::dixon, p, true};
  return {bareiss_rank(m), RankMethod::fraction_free, std::nullopt, true};
}

namespace detail {

/// Unimodular row (or column) step: replaces x, y by g = gcd(x, y) and 0,
/// applying the same 2 x 2 transform to the partner entries xs, ys.
inline void gcd_step(std::vector<mpz_class *> &xs, std::vector<mpz_class *> &ys,
                     const mpz_class &modulus) {
  mpz_class x = *xs[0], y = *ys[0], g, s, t;
  if (mpz_divisible_p(y.get_mpz_t(), x.get_mpz_t()))
    g = x, s = 1, t = 0; // keeps the pivot row intact
  else
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  mpz_class u = x / g, v = y / g;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mpz_class a = *xs[k], b = *ys[k];
    *xs[k] = s * a + t * b;
    *ys[k] = u * b - v * a;
    mpz_fdiv_r(xs[k]->get_mpz_t(), xs[k]->get_mpz_t(), modulus.get_mpz_t());
    mpz_fdiv_r(ys[k]->get_mpz_t(), ys[k]->get_mpz_t(), modulus.get_mpz_t());
  }
}

} // namespace detail

/// Smith normal form. The first r invariant factors divide the nonzero
/// r x r minor D found by Bareiss elimination, so the matrix is diagonalized
/// over Z/D with gcd steps and the factors read off as gcd(e_i, D).
inline SmithForm smith_normal_form(const IntegerMatrix &m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  auto [rank, det] = detail::bareiss(m);
  if (rank == 0)
    return {{}, 0};
  if (det == 1)
    return {std::vector<mpz_class>(rank, mpz_class(1)), rank};
  std::vector<mpz_class> a(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      mpz_fdiv_r(a[i * cols + j].get_mpz_t(), m(i, j).get_mpz_t(), det.get_mpz_t());
  auto at = [&](std::size_t i, std::size_t j) -> mpz_class & {
    return a[i * cols + j];
  };
  const std::size_t n = std::min(rows, cols);
  std::vector<mpz_class> diag;
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (sgn(at(i, j)) != 0 && (pi == rows || at(i, j) < at(pi, pj)))
          pi = i, pj = j;
    if (pi == rows)
      break;
    for (std::size_t j = 0; j < cols; ++j)
      std::swap(at(t, j), at(pi, j));
    for (std::size_t i = 0; i < rows; ++i)
      std::swap(at(i, t), at(i, pj));
    // Each gcd step that changes the pivot makes it a proper divisor of
    // itself, so the alternation stops.
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (sgn(at(i, t)) == 0)
          continue;
        std::vector<mpz_class *> xs, ys;
        for (std::size_t j = t; j < cols; ++j) {
          xs.push_back(&at(t, j));
          ys.push_back(&at(i, j));
        }
        detail::gcd_step(xs, ys, det);
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (sgn(at(t, j)) == 0)
          continue;
        std::vector<mpz_class *> xs, ys;
        for (std::size_t i = t; i < rows; ++i) {
          xs.push_back(&at(i, t));
          ys.push_back(&at(i, j));
        }
        detail::gcd_step(xs, ys, det);
      }
      for (std::size_t i = t + 1; i < rows && !dirty; ++i)
        dirty = sgn(at(i, t)) != 0;
    }
    diag.push_back(gcd(at(t, t), det));
  }
  diag.resize(n, det);
  // Normalize to a divisibility chain (gcd/lcm sweep).
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      mpz_class g = gcd(diag[i], diag[j]);
      mpz_class l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  diag.resize(rank);
  return {diag, rank};
}

} // namespace coverhunter
