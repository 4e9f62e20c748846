#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "word.hpp"

namespace coverhunter {

using Point = std::uint32_t;

/// A permutation of {0, ..., degree-1} acting on the right.
///
/// `p[i]` is the image of point i. Products compose left to right:
/// `(g * h)[i] == h[g[i]]`, so the first factor is applied first.
/// Text forms (cycle notation) are 1-based.
class Permutation {
public:
  Permutation() = default;
  explicit Permutation(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), Point{0});
  }
  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> hit(images_.size(), false);
    for (Point x : images_) {
      if (x >= images_.size() || hit[x])
        throw std::invalid_argument("permutation images are not a bijection");
      hit[x] = true;
    }
  }

  static Permutation identity(std::size_t degree) { return Permutation(degree); }

  /// Builds from 1-based cycles, e.g. {{1,2,3},{4,5}}.
  static Permutation from_cycles(std::size_t degree,
                                 const std::vector<std::vector<Point>> &cycles) {
    std::vector<Point> img(degree);
    std::iota(img.begin(), img.end(), Point{0});
    std::vector<bool> used(degree, false);
    for (const auto &c : cycles) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        Point a = c[i], b = c[(i + 1) % c.size()];
        if (a < 1 || a > degree || b < 1 || b > degree)
          throw std::invalid_argument("cycle point out of range");
        if (used[a - 1])
          throw std::invalid_argument("cycles are not disjoint");
        used[a - 1] = true;
        img[a - 1] = b - 1;
      }
    }
    return Permutation(std::move(img));
  }

  [[nodiscard]] std::size_t degree() const noexcept { return images_.size(); }
  [[nodiscard]] Point operator[](Point i) const { return images_[i]; }
  [[nodiscard]] std::span<const Point> images() const noexcept {
    return images_;
  }

  [[nodiscard]] bool is_identity() const noexcept {
    for (Point i = 0; i < images_.size(); ++i)
      if (images_[i] != i)
        return false;
    return true;
  }

  [[nodiscard]] Permutation inverse() const {
    std::vector<Point> inv(images_.size());
    for (Point i = 0; i < images_.size(); ++i)
      inv[images_[i]] = i;
    Permutation r;
    r.images_ = std::move(inv);
    return r;
  }

  friend Permutation operator*(const Permutation &g, const Permutation &h) {
    if (g.degree() != h.degree())
      throw std::invalid_argument("permutation degree mismatch");
    Permutation r;
    r.images_.resize(g.degree());
    for (Point i = 0; i < g.degree(); ++i)
      r.images_[i] = h.images_[g.images_[i]];
    return r;
  }

  [[nodiscard]] Permutation pow(long e) const {
    Permutation base = e < 0 ? inverse() : *this;
    Permutation r(degree());
    for (unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e); k;
         k >>= 1) {
      if (k & 1)
        r = r * base;
      base = base * base;
    }
    return r;
  }

  /// g^-1 h g (conjugate of `*this` by g under the right action).
  [[nodiscard]] Permutation conjugate_by(const Permutation &g) const {
    return g.inverse() * *this * g;
  }

  [[nodiscard]] std::uint64_t order() const {
    std::uint64_t o = 1;
    std::vector<bool> seen(degree(), false);
    for (Point i = 0; i < degree(); ++i) {
      if (seen[i])
        continue;
      std::uint64_t len = 0;
      for (Point j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        ++len;
      }
      o = std::lcm(o, len);
    }
    return o;
  }

  /// Lengths of all cycles (including fixed points), unsorted.
  [[nodiscard]] std::vector<std::size_t> cycle_lengths() const {
    std::vector<std::size_t> out;
    std::vector<bool> seen(degree(), false);
    for (Point i = 0; i < degree(); ++i) {
      if (seen[i])
        continue;
      std::size_t len = 0;
      for (Point j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        ++len;
      }
      out.push_back(len);
    }
    return out;
  }

  [[nodiscard]] std::optional<Point> smallest_moved_point() const {
    for (Point i = 0; i < degree(); ++i)
      if (images_[i] != i)
        return i;
    return std::nullopt;
  }

  friend bool operator==(const Permutation &, const Permutation &) = default;
  friend auto operator<=>(const Permutation &, const Permutation &) = default;

private:
  std::vector<Point> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation &p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Point x : p.images())
      h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

/// Disjoint cycle notation, 1-based; the identity is "()".
inline std::string to_cycle_string(const Permutation &p) {
  std::string s;
  std::vector<bool> seen(p.degree(), false);
  for (Point i = 0; i < p.degree(); ++i) {
    if (seen[i] || p[i] == i)
      continue;
    s += '(';
    for (Point j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      if (j != i)
        s += ',';
      s += std::to_string(j + 1);
    }
    s += ')';
  }
  return s.empty() ? "()" : s;
}

/// Parses "(1,2,3)(4,5)" or "()" into a permutation of the given degree.
inline Permutation parse_cycles(std::string_view text, std::size_t degree) {
  std::vector<std::vector<Point>> cycles;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
      ++i;
  };
  skip();
  if (i == text.size())
    throw std::invalid_argument("empty permutation text");
  while (i < text.size()) {
    if (text[i] != '(')
      throw std::invalid_argument("expected '(' in cycle notation");
    ++i;
    std::vector<Point> cycle;
    skip();
    if (i < text.size() && text[i] == ')') {
      ++i;
      skip();
      continue;
    }
    while (true) {
      skip();
      std::size_t start = i;
      std::uint64_t v = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
        if (v > degree)
          throw std::invalid_argument("cycle point exceeds degree");
        ++i;
      }
      if (i == start)
        throw std::invalid_argument("expected point in cycle");
      cycle.push_back(static_cast<Point>(v));
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ')') {
        ++i;
        break;
      }
      throw std::invalid_argument("malformed cycle");
    }
    cycles.push_back(std::move(cycle));
    skip();
  }
  for (const auto &c : cycles)
    for (Point x : c)
      if (x == 0)
        throw std::invalid_argument("cycle point 0 (points are 1-based)");
  return Permutation::from_cycles(degree, cycles);
}

/// Generator images of a homomorphism from a finitely presented group into
/// Sym(degree); images[i] is the image of generator i+1.
struct Homomorphism {
  std::size_t degree = 0;
  std::vector<Permutation> images;

  friend bool operator==(const Homomorphism &, const Homomorphism &) = default;
};

/// Image of a word, evaluated left to right.
inline Permutation evaluate_word(const Homomorphism &f, const Word &w) {
  std::vector<Permutation> inverses(f.images.size());
  Permutation r(f.degree);
  for (int x : w) {
    auto g = static_cast<std::size_t>(std::abs(x)) - 1;
    if (g >= f.images.size())
      throw std::out_of_range("evaluate_word: generator has no image");
    if (x > 0) {
      r = r * f.images[g];
    } else {
      if (inverses[g].degree() == 0)
        inverses[g] = f.images[g].inverse();
      r = r * inverses[g];
    }
  }
  return r;
}

} // namespace coverhunter
