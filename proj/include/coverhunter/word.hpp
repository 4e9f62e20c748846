#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace coverhunter {

/// A word in the free group on generators 1..n.
///
/// Letters are signed generator indices: `+i` is generator i, `-i` its
/// inverse. Index 0 never occurs.
class Word {
public:
  Word() = default;
  Word(std::initializer_list<int> letters) : letters_(letters) { check(); }
  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {
    check();
  }

  [[nodiscard]] std::span<const int> letters() const noexcept {
    return letters_;
  }
  [[nodiscard]] std::size_t size() const noexcept { return letters_.size(); }
  [[nodiscard]] bool empty() const noexcept { return letters_.empty(); }
  [[nodiscard]] int operator[](std::size_t i) const { return letters_[i]; }

  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  /// Largest generator index referenced, 0 for the empty word.
  [[nodiscard]] int max_generator() const noexcept {
    int m = 0;
    for (int x : letters_)
      m = std::max(m, std::abs(x));
    return m;
  }

  [[nodiscard]] bool is_reduced() const noexcept {
    for (std::size_t i = 1; i < letters_.size(); ++i)
      if (letters_[i] == -letters_[i - 1])
        return false;
    return true;
  }

  [[nodiscard]] Word inverse() const {
    Word w;
    w.letters_.assign(letters_.rbegin(), letters_.rend());
    for (int &x : w.letters_)
      x = -x;
    return w;
  }

  /// w^n for any integer n (negative powers invert).
  [[nodiscard]] Word power(long n) const {
    Word base = n < 0 ? inverse() : *this;
    Word w;
    for (long k = 0; k < std::labs(n); ++k)
      w.letters_.insert(w.letters_.end(), base.letters_.begin(),
                        base.letters_.end());
    return w;
  }

  Word &operator*=(const Word &rhs) {
    letters_.insert(letters_.end(), rhs.letters_.begin(), rhs.letters_.end());
    return *this;
  }
  friend Word operator*(Word lhs, const Word &rhs) { return lhs *= rhs; }

  friend bool operator==(const Word &, const Word &) = default;
  friend auto operator<=>(const Word &, const Word &) = default;

private:
  void check() const {
    for (int x : letters_)
      if (x == 0)
        throw std::invalid_argument("word letter 0 is not a generator");
  }

  std::vector<int> letters_;
};

/// Free reduction: cancels every adjacent pair x x^-1.
inline Word free_reduce(const Word &w) {
  std::vector<int> out;
  out.reserve(w.size());
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return Word(std::move(out));
}

/// Cyclic reduction of a freely reduced word.
inline Word cyclic_reduce(const Word &w) {
  Word r = free_reduce(w);
  auto l = r.letters();
  std::size_t i = 0, j = l.size();
  while (j - i >= 2 && l[i] == -l[j - 1]) {
    ++i;
    --j;
  }
  return Word(std::vector<int>(l.begin() + static_cast<long>(i),
                               l.begin() + static_cast<long>(j)));
}

} // namespace coverhunter
