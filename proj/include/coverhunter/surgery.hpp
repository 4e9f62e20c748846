#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "orbifold.hpp"

namespace coverhunter {

/// Primitive class p/q, normalized with q > 0; infinity is 1/0.
struct Slope {
  std::int64_t p = 1, q = 0;

  Slope() = default;
  Slope(std::int64_t num, std::int64_t den) : p(num), q(den) {
    if (p == 0 && q == 0)
      throw std::invalid_argument("slope 0/0");
    std::int64_t g = std::gcd(p, q);
    p /= g;
    q /= g;
    if (q < 0 || (q == 0 && p < 0)) {
      p = -p;
      q = -q;
    }
  }

  [[nodiscard]] bool is_infinity() const noexcept { return q == 0; }
  friend bool operator==(const Slope &, const Slope &) = default;
};

/// Display order: |p|, then |q|, then positive before negative.
inline bool slope_less(const Slope &x, const Slope &y) {
  auto key = [](const Slope &s) {
    return std::array<std::int64_t, 3>{std::llabs(s.p), s.q, s.p < 0 ? 1 : 0};
  };
  return key(x) < key(y);
}

/// "p/q", "p" when q = 1, "inf" for 1/0.
inline std::string to_string(const Slope &s) {
  if (s.is_infinity())
    return "inf";
  if (s.q == 1)
    return std::to_string(s.p);
  return std::to_string(s.p) + "/" + std::to_string(s.q);
}

inline Slope parse_slope(std::string_view text) {
  if (text == "inf")
    return Slope(1, 0);
  auto num = [&](std::string_view t) {
    if (t.empty())
      throw std::invalid_argument("bad slope");
    std::size_t used = 0;
    long long v = std::stoll(std::string(t), &used);
    if (used != t.size())
      throw std::invalid_argument("bad slope");
    return static_cast<std::int64_t>(v);
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return Slope(num(text), 1);
  return Slope(num(text.substr(0, slash)), num(text.substr(slash + 1)));
}

/// Minimal intersection number |p1 q2 - q1 p2|.
inline std::int64_t distance(const Slope &x, const Slope &y) {
  return std::llabs(x.p * y.q - x.q * y.p);
}

/// |p - 6q| > 6, |p - 4q| > 4, |p - 3q| > 3 for the fillings W(1), W(2), W(3).
inline std::array<bool, 3> whitehead_conditions(const Slope &s) {
  return {std::llabs(s.p - 6 * s.q) > 6, std::llabs(s.p - 4 * s.q) > 4,
          std::llabs(s.p - 3 * s.q) > 3};
}

/// Slopes with |p|, |q| <= bound where fewer than two conditions hold.
inline std::vector<Slope> whitehead_exceptional_set(std::int64_t bound = 100) {
  if (bound < 1)
    throw std::invalid_argument("whitehead_exceptional_set: bound must be positive");
  std::vector<Slope> out;
  for (std::int64_t q = 0; q <= bound; ++q)
    for (std::int64_t p = -bound; p <= bound; ++p) {
      if (std::gcd(p, q) != 1 || (q == 0 && p < 0))
        continue;
      Slope s(p, q);
      auto c = whitehead_conditions(s);
      if (c[0] + c[1] + c[2] < 2)
        out.push_back(s);
    }
  std::sort(out.begin(), out.end(), slope_less);
  return out;
}

struct ExcludedSlope {
  int filling = 0;
};

struct BaseOrbifold {
  ConeStructure cone;
  bool hyperbolic = false;
};

/// Base orbifold of the Seifert fibered filling W(i; p/q).
inline std::variant<BaseOrbifold, ExcludedSlope>
whitehead_base_orbifold(int filling, const Slope &s) {
  long x, y, k;
  switch (filling) {
  case 1:
    x = 2, y = 3, k = 6;
    break;
  case 2:
    x = 2, y = 4, k = 4;
    break;
  case 3:
    x = 3, y = 3, k = 3;
    break;
  default:
    throw std::invalid_argument("whitehead_base_orbifold: filling must be 1, 2 or 3");
  }
  long third = static_cast<long>(std::llabs(s.p - k * s.q));
  if (third == 0)
    return ExcludedSlope{filling};
  BaseOrbifold b;
  b.cone.orders = {x, y, third};
  // A cone point of order 1 is no cone point: the sphere is then spherical.
  b.hyperbolic = third >= 2 && orbifold_euler_char(b.cone) < 0;
  return b;
}

/// Slopes for which none of D(a, +-1) >= 11, D(a, +-2) >= 6, D(a, +-3) >= 6
/// holds.
inline std::vector<Slope> fig8_exceptional_set() {
  struct Strip {
    Slope center;
    std::int64_t threshold;
  };
  const std::array<Strip, 6> strips{{{Slope(1, 1), 11},
                                     {Slope(-1, 1), 11},
                                     {Slope(2, 1), 6},
                                     {Slope(-2, 1), 6},
                                     {Slope(3, 1), 6},
                                     {Slope(-3, 1), 6}}};
  // D(p/q, +-r) = |p -+ r q| < T for both signs gives 2 r q < 2 T, so
  // q < T/r; then |p| < T + r q.
  std::int64_t qmax = 0, pmax = 0;
  {
    std::int64_t best = -1;
    for (const auto &st : strips) {
      std::int64_t r = std::llabs(st.center.p);
      std::int64_t qb = (st.threshold - 1) / r;
      if (best < 0 || qb < best)
        best = qb;
    }
    qmax = best;
    for (const auto &st : strips)
      pmax = std::max<std::int64_t>(pmax, st.threshold + std::llabs(st.center.p) * qmax);
  }
  std::vector<Slope> out;
  for (std::int64_t q = 0; q <= qmax; ++q)
    for (std::int64_t p = -pmax; p <= pmax; ++p) {
      if (std::gcd(p, q) != 1 || (q == 0 && p < 0))
        continue;
      Slope s(p, q);
      bool any = false;
      for (const auto &st : strips)
        any = any || distance(s, st.center) >= st.threshold;
      if (!any)
        out.push_back(s);
    }
  std::sort(out.begin(), out.end(), slope_less);
  return out;
}

} // namespace coverhunter
