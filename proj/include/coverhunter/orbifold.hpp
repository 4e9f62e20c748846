#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "groups.hpp"
#include "linalg.hpp"
#include "presentation.hpp"

namespace coverhunter {

using Rational = mpq_class;

/// Sphere with three cone points of orders a1, a2, a3.
struct ConeStructure {
  std::array<long, 3> orders{2, 3, 7};

  [[nodiscard]] bool is_hyperbolic() const {
    Rational s = 0;
    for (long a : orders)
      s += Rational(1, a);
    return s < 1;
  }
};

/// <x1,x2 | x1^a1, x2^a2, (x1*x2)^a3>, with x3 = (x1 x2)^-1 eliminated.
inline Presentation triangle_presentation(long a1, long a2, long a3) {
  if (a1 < 2 || a2 < 2 || a3 < 2)
    throw std::invalid_argument("triangle_presentation: cone orders must be >= 2");
  Presentation p;
  p.generator_names = {"x1", "x2"};
  p.relators = {Word{1}.power(a1), Word{2}.power(a2), Word{1, 2}.power(a3)};
  return p;
}

/// chi(S^2(a1,a2,a3)) = -1 + sum 1/a_i.
inline Rational orbifold_euler_char(const ConeStructure &c) {
  Rational chi = -1;
  for (long a : c.orders) {
    if (a < 2)
      throw std::invalid_argument("orbifold_euler_char: cone order < 2");
    chi += Rational(1, a);
  }
  chi.canonicalize();
  return chi;
}

/// Euler characteristic after capping a boundary with an order-n cone point.
inline Rational filled_euler_char(const Rational &chi, long n) {
  if (n < 1)
    throw std::invalid_argument("filled_euler_char: n must be positive");
  Rational r = chi + Rational(1, n);
  r.canonicalize();
  return r;
}

/// 1 + d(|chi| - 1/n): generators minus relations of a degree-d
/// torsion-free cover of the filled orbifold.
inline Rational rank_bound(long d, const Rational &chi, long n) {
  if (d < 1 || n < 1)
    throw std::invalid_argument("rank_bound: d and n must be positive");
  Rational r = 1 + d * (abs(chi) - Rational(1, n));
  r.canonicalize();
  return r;
}

/// 2x2 matrix over F_p, up to sign when used projectively.
struct Mat2ModP {
  std::uint64_t a = 1, b = 0, c = 0, d = 1;
  std::uint64_t p = 2;

  friend Mat2ModP operator*(const Mat2ModP &x, const Mat2ModP &y) {
    auto mm = [&](std::uint64_t u, std::uint64_t v) {
      return detail::mulmod(u, v, x.p);
    };
    return {(mm(x.a, y.a) + mm(x.b, y.c)) % x.p,
            (mm(x.a, y.b) + mm(x.b, y.d)) % x.p,
            (mm(x.c, y.a) + mm(x.d, y.c)) % x.p,
            (mm(x.c, y.b) + mm(x.d, y.d)) % x.p, x.p};
  }

  [[nodiscard]] std::uint64_t det() const {
    std::uint64_t ad = detail::mulmod(a, d, p), bc = detail::mulmod(b, c, p);
    return (ad + p - bc) % p;
  }
  [[nodiscard]] std::uint64_t trace() const { return (a + d) % p; }
  [[nodiscard]] Mat2ModP inverse() const { // det 1 assumed
    return {d, (p - b) % p, (p - c) % p, a, p};
  }
  [[nodiscard]] bool is_scalar_pm1() const {
    return b == 0 && c == 0 && a == d && (a == 1 || a == p - 1);
  }
  [[nodiscard]] Mat2ModP pow(std::uint64_t e) const {
    Mat2ModP r{1, 0, 0, 1, p}, base = *this;
    for (; e; e >>= 1, base = base * base)
      if (e & 1)
        r = r * base;
    return r;
  }

  friend bool operator==(const Mat2ModP &, const Mat2ModP &) = default;
};

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> f;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      f.push_back(q);
      while (n % q == 0)
        n /= q;
    }
  if (n > 1)
    f.push_back(n);
  return f;
}

/// True iff X^n = +-I and X^(n/q) != +-I for every prime q dividing n.
inline bool has_projective_order(const Mat2ModP &x, std::uint64_t n) {
  if (!x.pow(n).is_scalar_pm1())
    return false;
  for (auto q : prime_factors(n))
    if (x.pow(n / q).is_scalar_pm1())
      return false;
  return true;
}

/// Action x -> (a x + c)/(b x + d) on the projective line, i.e. row vectors
/// [x : 1] times the matrix; products of matrices map to products of
/// permutations in the same order.
inline Permutation projective_permutation(const Mat2ModP &m) {
  return projective_action(m.a, m.c, m.b, m.d, m.p);
}

inline Mat2ModP evaluate_word(const std::vector<Mat2ModP> &images,
                              const Word &w) {
  std::uint64_t p = images.front().p;
  Mat2ModP r{1, 0, 0, 1, p};
  for (int x : w) {
    const Mat2ModP &g = images.at(static_cast<std::size_t>(std::abs(x)) - 1);
    r = r * (x > 0 ? g : g.inverse());
  }
  return r;
}

namespace detail {

/// Arithmetic in F_p[s]/(s^2 - nr) for a quadratic non-residue nr.
struct Fp2 {
  std::uint64_t x = 0, y = 0;
};

struct Fp2Field {
  std::uint64_t p, nr;
  [[nodiscard]] Fp2 mul(Fp2 u, Fp2 v) const {
    return {(mulmod(u.x, v.x, p) + mulmod(mulmod(u.y, v.y, p), nr, p)) % p,
            (mulmod(u.x, v.y, p) + mulmod(u.y, v.x, p)) % p};
  }
  [[nodiscard]] Fp2 pow(Fp2 u, std::uint64_t e) const {
    Fp2 r{1, 0};
    for (; e; e >>= 1, u = mul(u, u))
      if (e & 1)
        r = mul(r, u);
    return r;
  }
  [[nodiscard]] Fp2 inv(Fp2 u) const {
    // (x + ys)^-1 = (x - ys) / (x^2 - nr y^2)
    std::uint64_t n = (mulmod(u.x, u.x, p) + p -
                       mulmod(mulmod(u.y, u.y, p), nr, p)) %
                      p;
    std::uint64_t ni = invmod(n, p);
    return {mulmod(u.x, ni, p), mulmod((p - u.y) % p, ni, p)};
  }
};

inline std::optional<std::uint64_t> sqrt_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0)
    return 0;
  if (p == 2)
    return a;
  if (powmod(a, (p - 1) / 2, p) != 1)
    return std::nullopt;
  // Tonelli-Shanks
  std::uint64_t q = p - 1, s = 0;
  while (q % 2 == 0)
    q /= 2, ++s;
  std::uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1)
    ++z;
  std::uint64_t m = s, c = powmod(z, q, p), t = powmod(a, q, p),
                r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1)
      tt = mulmod(tt, tt, p), ++i;
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + i + 1 < m; ++j)
      b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

/// Traces t in F_p, ascending, of the elements of projective order exactly
/// a in PSL(2,p): t = z + 1/z for z of order 2a in F_p or in the norm-one
/// torus of F_{p^2}, or t = +-2 when a = p.
inline std::vector<std::uint64_t> traces_of_order(std::uint64_t a,
                                                  std::uint64_t p) {
  std::vector<std::uint64_t> out;
  if (a == p) {
    // Unipotent classes: trace +-2.
    for (std::uint64_t t : {std::uint64_t{2}, p - 2})
      if (has_projective_order(Mat2ModP{0, 1, p - 1, t, p}, a))
        out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
  }
  const std::uint64_t m = 2 * a;
  const std::uint64_t p2 = p * p - 1;
  if (p2 % m != 0)
    return out;
  std::uint64_t nr = 2;
  while (powmod(nr, (p - 1) / 2, p) != p - 1)
    ++nr;
  Fp2Field f{p, nr};
  // Element of order exactly m.
  std::optional<Fp2> zeta;
  auto factors = prime_factors(m);
  for (std::uint64_t y = 0; y < p && !zeta; ++y)
    for (std::uint64_t x = 1; x < p && !zeta; ++x) {
      Fp2 cand = f.pow(Fp2{x, y}, p2 / m);
      bool exact = true;
      for (auto q : factors) {
        Fp2 e = f.pow(cand, m / q);
        if (e.x == 1 && e.y == 0)
          exact = false;
      }
      if (exact)
        zeta = cand;
      if (x > 64)
        break;
    }
  if (!zeta)
    return out;
  for (std::uint64_t k = 1; k < m; ++k) {
    if (std::gcd(k, m) != 1)
      continue;
    Fp2 z = f.pow(*zeta, k), zi = f.inv(z);
    Fp2 t{(z.x + zi.x) % p, (z.y + zi.y) % p};
    if (t.y != 0)
      continue;
    Mat2ModP x{0, 1, p - 1, t.x, p};
    if (has_projective_order(x, a))
      out.push_back(t.x);
  }
  // z of order a (a odd) gives the same class up to sign; include it.
  if (a % 2 == 1) {
    Fp2 z1 = f.pow(*zeta, 2);
    for (std::uint64_t k = 1; k < a; ++k) {
      if (std::gcd(k, a) != 1)
        continue;
      Fp2 z = f.pow(z1, k), zi = f.inv(z);
      Fp2 t{(z.x + zi.x) % p, (z.y + zi.y) % p};
      if (t.y != 0)
        continue;
      Mat2ModP x{0, 1, p - 1, t.x, p};
      if (has_projective_order(x, a))
        out.push_back(t.x);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace detail

struct CongruenceQuotient {
  std::uint64_t p = 0;
  std::array<std::uint64_t, 3> traces{}; // of X1, X2, X1*X2
  Mat2ModP x1, x2;
  Homomorphism images; // on the p + 1 points of the projective line
};

/// Searches primes p <= prime_bound for X1, X2 in SL(2,p) whose images in
/// PSL(2,p) have x1, x2, x1*x2, gamma of projective orders exactly
/// (a1, a2, a3, n). X1 = [[0,1],[-1,t1]]; X2 is [[t2, -z],[1/z, 0]] when a
/// root z of order 2*a3 lies in F_p, and otherwise the solution with the
/// smallest lower-right entry of tr X2 = t2, tr X1X2 = t3, det X2 = 1.
inline std::optional<CongruenceQuotient>
congruence_quotient(long a1, long a2, long a3, const Word &gamma, long n,
                    std::uint64_t prime_bound = 100'000) {
  ConeStructure cs{{a1, a2, a3}};
  if (a1 < 2 || a2 < 2 || a3 < 2 || !cs.is_hyperbolic())
    throw std::invalid_argument("congruence_quotient: (a1,a2,a3) not hyperbolic");
  if (n < 2)
    throw std::invalid_argument("congruence_quotient: n must be >= 2");
  if (gamma.empty() || gamma.max_generator() > 2)
    throw std::invalid_argument("congruence_quotient: gamma must be a word in x1, x2");
  const auto A1 = static_cast<std::uint64_t>(a1), A2 = static_cast<std::uint64_t>(a2),
             A3 = static_cast<std::uint64_t>(a3), N = static_cast<std::uint64_t>(n);
  for (std::uint64_t p = 5; p <= prime_bound; p += 2) {
    if (!is_prime(p))
      continue;
    auto t1s = detail::traces_of_order(A1, p);
    if (t1s.empty())
      continue;
    auto t2s = detail::traces_of_order(A2, p);
    if (t2s.empty())
      continue;
    auto t3s = detail::traces_of_order(A3, p);
    if (t3s.empty())
      continue;
    if ((p * p - 1) % (2 * N) != 0 && p % N != 0)
      continue; // no element of projective order n in PSL(2,p)
    std::optional<std::uint64_t> z3;
    if ((p - 1) % (2 * A3) == 0) {
      std::uint64_t g = 2;
      while (true) {
        std::uint64_t cand = detail::powmod(g, (p - 1) / (2 * A3), p);
        bool exact = true;
        for (auto q : prime_factors(2 * A3))
          if (detail::powmod(cand, 2 * A3 / q, p) == 1)
            exact = false;
        if (exact) {
          z3 = cand;
          break;
        }
        ++g;
      }
    }
    for (auto t1 : t1s)
      for (auto t2 : t2s)
        for (auto t3 : t3s) {
          Mat2ModP x1{0, 1, p - 1, t1, p};
          std::vector<Mat2ModP> x2s;
          if (z3) {
            // z + 1/z = t3 for some power z of z3 of order 2*a3.
            for (std::uint64_t k = 1; k < 2 * A3; ++k) {
              if (std::gcd(k, 2 * A3) != 1)
                continue;
              std::uint64_t z = detail::powmod(*z3, k, p);
              std::uint64_t zi = detail::invmod(z, p);
              if ((z + zi) % p == t3) {
                x2s.push_back({t2, (p - z) % p, zi, 0, p});
                break;
              }
            }
          }
          if (x2s.empty()) {
            for (std::uint64_t d = 0; d < p && x2s.empty(); ++d) {
              // c^2 + (t1 d - t3) c + (d^2 - t2 d + 1) = 0
              std::uint64_t B = (detail::mulmod(t1, d, p) + p - t3) % p;
              std::uint64_t C = (detail::mulmod(d, d, p) + p -
                                 detail::mulmod(t2, d, p) + 1) %
                                p;
              std::uint64_t disc =
                  (detail::mulmod(B, B, p) + p - detail::mulmod(4, C, p)) % p;
              auto s = detail::sqrt_mod(disc, p);
              if (!s)
                continue;
              std::uint64_t inv2 = detail::invmod(2, p);
              std::uint64_t c = detail::mulmod((p - B + *s) % p, inv2, p);
              std::uint64_t b = (c + detail::mulmod(t1, d, p) + p - t3) % p;
              x2s.push_back({(t2 + p - d) % p, b, c, d, p});
            }
          }
          for (const auto &x2 : x2s) {
            if (x2.det() != 1)
              continue;
            if (!has_projective_order(x1, A1) || !has_projective_order(x2, A2) ||
                !has_projective_order(x1 * x2, A3))
              continue;
            Mat2ModP g = evaluate_word({x1, x2}, gamma);
            if (!has_projective_order(g, N))
              continue;
            CongruenceQuotient out;
            out.p = p;
            out.traces = {t1, t2, t3};
            out.x1 = x1;
            out.x2 = x2;
            out.images.degree = p + 1;
            out.images.images = {projective_permutation(x1),
                                 projective_permutation(x2)};
            return out;
          }
        }
  }
  return std::nullopt;
}

} // namespace coverhunter
