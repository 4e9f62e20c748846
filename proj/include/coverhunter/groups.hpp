#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "linalg.hpp"
#include "perm_group.hpp"

namespace coverhunter {

inline PermGroup symmetric_group(std::size_t n) {
  if (n < 2)
    return PermGroup(std::max<std::size_t>(n, 1), {});
  std::vector<Point> cyc(n);
  for (Point i = 0; i < n; ++i)
    cyc[i] = (i + 1) % static_cast<Point>(n);
  return PermGroup(n, {Permutation::from_cycles(n, {{1, 2}}), Permutation(cyc)});
}

inline PermGroup alternating_group(std::size_t n) {
  if (n < 3)
    return PermGroup(std::max<std::size_t>(n, 1), {});
  std::vector<Permutation> gens;
  for (Point k = 3; k <= n; ++k)
    gens.push_back(Permutation::from_cycles(n, {{1, 2, k}}));
  return PermGroup(n, gens);
}

/// Moebius map x -> (a x + b) / (c x + d) on the projective line over F_p,
/// points 0..p-1 and infinity = p.
inline Permutation projective_action(std::uint64_t a, std::uint64_t b,
                                     std::uint64_t c, std::uint64_t d,
                                     std::uint64_t p) {
  std::vector<Point> img(p + 1);
  auto inf = static_cast<Point>(p);
  for (std::uint64_t x = 0; x <= p; ++x) {
    std::uint64_t num, den;
    if (x == p) {
      num = a % p;
      den = c % p;
    } else {
      num = (detail::mulmod(a, x, p) + b) % p;
      den = (detail::mulmod(c, x, p) + d) % p;
    }
    img[x] = den == 0 ? inf
                      : static_cast<Point>(
                            detail::mulmod(num, detail::invmod(den, p), p));
  }
  return Permutation(std::move(img));
}

/// PSL(2,p) on the p+1 points of the projective line, p an odd prime.
inline PermGroup psl2_prime(std::uint64_t p) {
  if (!is_prime(p) || p < 3)
    throw std::invalid_argument("psl2_prime: p must be an odd prime");
  return PermGroup(p + 1, {projective_action(1, 1, 0, 1, p),
                           projective_action(0, p - 1, 1, 0, p)});
}

/// PSL(2,8) = SL(2,8) on the 9 points of the projective line over GF(8).
inline PermGroup psl2_8() {
  // GF(8) = F_2[w]/(w^3 + w + 1), elements as 3-bit masks; infinity = 8.
  auto mul = [](unsigned a, unsigned b) {
    unsigned r = 0;
    for (int i = 0; i < 3; ++i)
      if (b >> i & 1)
        r ^= a << i;
    for (int i = 4; i >= 3; --i)
      if (r >> i & 1)
        r ^= 0b1011u << (i - 3);
    return r;
  };
  auto inv = [&](unsigned a) {
    for (unsigned b = 1; b < 8; ++b)
      if (mul(a, b) == 1)
        return b;
    return 0u;
  };
  auto translate = [](unsigned t) {
    std::vector<Point> img(9);
    for (unsigned x = 0; x < 8; ++x)
      img[x] = x ^ t;
    img[8] = 8;
    return Permutation(img);
  };
  std::vector<Point> img(9);
  img[0] = 8;
  img[8] = 0;
  for (unsigned x = 1; x < 8; ++x)
    img[x] = inv(x);
  return PermGroup(9, {translate(1), translate(2), translate(4), Permutation(img)});
}

/// Named groups: "A<n>", "S<n>", "L2(<q>)" for q = 8 or an odd prime.
inline PermGroup named_group(std::string_view name) {
  auto number = [&](std::string_view digits) -> std::uint64_t {
    if (digits.empty() || digits.size() > 6)
      throw std::invalid_argument("unknown group '" + std::string(name) + "'");
    std::uint64_t v = 0;
    for (char c : digits) {
      if (c < '0' || c > '9')
        throw std::invalid_argument("unknown group '" + std::string(name) + "'");
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
  };
  if (name.starts_with("L2(") && name.ends_with(")")) {
    std::uint64_t q = number(name.substr(3, name.size() - 4));
    return q == 8 ? psl2_8() : psl2_prime(q);
  }
  if (name.starts_with("A"))
    return alternating_group(number(name.substr(1)));
  if (name.starts_with("S"))
    return symmetric_group(number(name.substr(1)));
  throw std::invalid_argument("unknown group '" + std::string(name) + "'");
}

inline const std::vector<std::string> &default_simple_targets() {
  static const std::vector<std::string> names{"A5",    "L2(7)",  "A6",
                                              "L2(8)", "L2(11)", "L2(13)"};
  return names;
}

} // namespace coverhunter
