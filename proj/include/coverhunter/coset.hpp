#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "perm_group.hpp"
#include "presentation.hpp"

namespace coverhunter {

inline constexpr std::size_t kDefaultMaxCosets = 1'000'000;
inline constexpr std::uint64_t kDefaultMaxNodes = 10'000'000;

/// Column of a signed letter: generator i (1-based) owns columns 2(i-1) and
/// 2(i-1)+1 for its inverse, so `column(-x) == column(x) ^ 1`.
constexpr std::size_t column(int letter) noexcept {
  return letter > 0 ? 2 * static_cast<std::size_t>(letter - 1)
                    : 2 * static_cast<std::size_t>(-letter - 1) + 1;
}

/// Action of the generators on the cosets of a subgroup H. Cosets are
/// 0-based and coset 0 is H itself; -1 marks an undefined entry.
class CosetTable {
public:
  CosetTable() = default;
  CosetTable(int generator_count, std::size_t index)
      : generators_(generator_count),
        data_(index * 2 * static_cast<std::size_t>(generator_count), -1) {}

  [[nodiscard]] int generator_count() const noexcept { return generators_; }
  [[nodiscard]] std::size_t width() const noexcept {
    return 2 * static_cast<std::size_t>(generators_);
  }
  [[nodiscard]] std::size_t index() const noexcept {
    return generators_ ? data_.size() / width() : 0;
  }

  [[nodiscard]] int entry(std::size_t coset, std::size_t col) const {
    return data_[coset * width() + col];
  }
  void set(std::size_t coset, std::size_t col, int value) {
    data_[coset * width() + col] = value;
  }
  /// Image of a coset under a signed letter.
  [[nodiscard]] int act(std::size_t coset, int letter) const {
    return entry(coset, column(letter));
  }

  /// Image of a coset under a word; -1 if the trace hits an undefined entry.
  [[nodiscard]] int trace(std::size_t coset, const Word &w) const {
    int c = static_cast<int>(coset);
    for (int x : w) {
      c = act(static_cast<std::size_t>(c), x);
      if (c < 0)
        return -1;
    }
    return c;
  }

  [[nodiscard]] bool is_complete() const noexcept {
    return std::find(data_.begin(), data_.end(), -1) == data_.end();
  }

  /// Complete, columns mutually inverse, and every relator closes at every
  /// coset.
  [[nodiscard]] bool is_valid_for(const Presentation &p) const {
    if (!is_complete() || p.generator_count() != generators_)
      return false;
    const std::size_t n = index();
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t col = 0; col < width(); ++col) {
        int d = entry(c, col);
        if (d < 0 || static_cast<std::size_t>(d) >= n ||
            entry(static_cast<std::size_t>(d), col ^ 1) != static_cast<int>(c))
          return false;
      }
    for (const auto &r : p.relators)
      for (std::size_t c = 0; c < n; ++c)
        if (trace(c, r) != static_cast<int>(c))
          return false;
    return true;
  }

  [[nodiscard]] const std::vector<int> &raw() const noexcept { return data_; }

  friend bool operator==(const CosetTable &, const CosetTable &) = default;

private:
  int generators_ = 0;
  std::vector<int> data_;
};

/// Live-coset bound reached before the enumeration closed. Says nothing
/// about whether the index is finite.
struct Overflow {
  std::size_t high_water = 0;
};

using EnumerationResult = std::variant<CosetTable, Overflow>;

namespace detail {

inline std::vector<std::size_t> word_columns(const Word &w) {
  std::vector<std::size_t> cols;
  cols.reserve(w.size());
  for (int x : w)
    cols.push_back(column(x));
  return cols;
}

struct OverflowSignal {};

/// HLT coset enumeration with coincidence processing and a relator-scan
/// lookahead when the coset bound comes close.
class HltEnumerator {
public:
  HltEnumerator(const Presentation &p, const std::vector<Word> &subgroup,
                std::size_t max_cosets)
      : width_(2 * static_cast<std::size_t>(p.generator_count())),
        max_(max_cosets) {
    for (const auto &r : p.relators)
      if (!r.empty())
        relators_.push_back(word_columns(r));
    for (const auto &w : subgroup) {
      if (w.max_generator() > p.generator_count())
        throw std::invalid_argument("subgroup word uses unknown generators");
      if (!w.empty())
        subgroup_.push_back(word_columns(w));
    }
    for (const auto &r : relators_)
      slack_ += r.size();
    slack_ += width_ + 1;
  }

  EnumerationResult run() {
    if (width_ == 0)
      return CosetTable(0, 1);
    try {
      new_coset();
      for (const auto &w : subgroup_)
        scan_and_fill(0, w);
      for (std::size_t alpha = 0; alpha < parent_.size(); ++alpha) {
        if (live_ + slack_ > max_ && lookahead_allowed_) {
          std::size_t before = live_;
          lookahead();
          lookahead_allowed_ = (before - live_) * 10 >= max_;
        }
        if (parent_.size() > 2 * max_ + slack_ && live_ < parent_.size())
          alpha = compact(alpha);
        if (!alive(alpha))
          continue;
        for (const auto &r : relators_) {
          scan_and_fill(alpha, r);
          if (!alive(alpha))
            break;
        }
        if (!alive(alpha))
          continue;
        for (std::size_t col = 0; col < width_; ++col)
          if (at(alpha, col) < 0)
            define(alpha, col);
      }
    } catch (const OverflowSignal &) {
      return Overflow{high_water_};
    }
    compact(0);
    CosetTable t(static_cast<int>(width_ / 2), parent_.size());
    for (std::size_t c = 0; c < parent_.size(); ++c)
      for (std::size_t col = 0; col < width_; ++col)
        t.set(c, col, at(c, col));
    return t;
  }

private:
  int &at(std::size_t c, std::size_t col) { return table_[c * width_ + col]; }
  [[nodiscard]] bool alive(std::size_t c) const {
    return parent_[c] == static_cast<int>(c);
  }

  int new_coset() {
    if (live_ >= max_)
      throw OverflowSignal{};
    auto n = static_cast<int>(parent_.size());
    parent_.push_back(n);
    table_.resize(table_.size() + width_, -1);
    ++live_;
    high_water_ = std::max(high_water_, live_);
    return n;
  }

  void define(std::size_t c, std::size_t col) {
    int n = new_coset();
    at(c, col) = n;
    at(static_cast<std::size_t>(n), col ^ 1) = static_cast<int>(c);
  }

  int rep(int c) {
    int r = c;
    while (parent_[static_cast<std::size_t>(r)] != r)
      r = parent_[static_cast<std::size_t>(r)];
    while (parent_[static_cast<std::size_t>(c)] != r) {
      int next = parent_[static_cast<std::size_t>(c)];
      parent_[static_cast<std::size_t>(c)] = r;
      c = next;
    }
    return r;
  }

  void merge(int a, int b) {
    int x = rep(a), y = rep(b);
    if (x == y)
      return;
    if (x > y)
      std::swap(x, y);
    parent_[static_cast<std::size_t>(y)] = x;
    --live_;
    queue_.push_back(y);
  }

  void coincidence(int a, int b) {
    queue_.clear();
    merge(a, b);
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      auto g = static_cast<std::size_t>(queue_[qi]);
      for (std::size_t col = 0; col < width_; ++col) {
        int d = at(g, col);
        if (d < 0)
          continue;
        at(static_cast<std::size_t>(d), col ^ 1) = -1;
        int mu = rep(static_cast<int>(g)), nu = rep(d);
        auto umu = static_cast<std::size_t>(mu), unu = static_cast<std::size_t>(nu);
        if (at(umu, col) >= 0)
          merge(nu, at(umu, col));
        else if (at(unu, col ^ 1) >= 0)
          merge(mu, at(unu, col ^ 1));
        else {
          at(umu, col) = nu;
          at(unu, col ^ 1) = mu;
        }
      }
    }
  }

  /// Traces w at c from both ends. With `fill`, gaps are closed by defining
  /// new cosets; without, only deductions and coincidences are made.
  void scan(std::size_t c, const std::vector<std::size_t> &w, bool fill) {
    if (w.empty())
      return;
    int f = static_cast<int>(c), b = f;
    std::size_t i = 0, j = w.size();
    while (true) {
      while (i < j && at(static_cast<std::size_t>(f), w[i]) >= 0)
        f = at(static_cast<std::size_t>(f), w[i++]);
      if (i == j) {
        if (f != b)
          coincidence(f, b);
        return;
      }
      while (j > i && at(static_cast<std::size_t>(b), w[j - 1] ^ 1) >= 0)
        b = at(static_cast<std::size_t>(b), w[--j] ^ 1);
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        at(static_cast<std::size_t>(f), w[i]) = b;
        at(static_cast<std::size_t>(b), w[i] ^ 1) = f;
        return;
      }
      if (!fill)
        return;
      define(static_cast<std::size_t>(f), w[i]);
    }
  }

  void scan_and_fill(std::size_t c, const std::vector<std::size_t> &w) {
    scan(c, w, true);
  }

  void lookahead() {
    for (std::size_t c = 0; c < parent_.size(); ++c)
      for (const auto &r : relators_) {
        if (!alive(c))
          break;
        scan(c, r, false);
      }
  }

  /// Renumbers live cosets in order, dropping dead rows. Returns the new
  /// number of `keep` (or of the next live coset after it).
  std::size_t compact(std::size_t keep) {
    std::vector<int> renum(parent_.size(), -1);
    int next = 0;
    std::size_t keep_new = 0;
    bool keep_set = false;
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (!keep_set && c >= keep) {
        keep_new = static_cast<std::size_t>(next);
        keep_set = true;
      }
      if (alive(c))
        renum[c] = next++;
    }
    if (!keep_set)
      keep_new = static_cast<std::size_t>(next);
    std::vector<int> table(static_cast<std::size_t>(next) * width_);
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (renum[c] < 0)
        continue;
      for (std::size_t col = 0; col < width_; ++col) {
        int d = at(c, col);
        table[static_cast<std::size_t>(renum[c]) * width_ + col] =
            d < 0 ? -1 : renum[static_cast<std::size_t>(d)];
      }
    }
    table_ = std::move(table);
    parent_.resize(static_cast<std::size_t>(next));
    std::iota(parent_.begin(), parent_.end(), 0);
    return keep_new;
  }

  std::size_t width_;
  std::size_t max_;
  std::size_t slack_ = 0;
  std::vector<std::vector<std::size_t>> relators_, subgroup_;
  std::vector<int> table_, parent_, queue_;
  std::size_t live_ = 0, high_water_ = 0;
  bool lookahead_allowed_ = true;
};

} // namespace detail

/// Enumerates the cosets of the subgroup generated by `subgroup_words`
/// (empty list: trivial subgroup). Overflow is returned, not thrown.
inline EnumerationResult todd_coxeter(const Presentation &p,
                                      const std::vector<Word> &subgroup_words,
                                      std::size_t max_cosets = kDefaultMaxCosets) {
  if (max_cosets == 0)
    throw std::invalid_argument("todd_coxeter: max_cosets must be positive");
  return detail::HltEnumerator(p, subgroup_words, max_cosets).run();
}

namespace detail {

/// Sims' low-index backtrack over partial tables. Entries are filled in
/// row-major order, so tables stay standardized and a conjugate given by
/// re-rooting at another coset can be compared lexicographically.
class LowIndexSearch {
public:
  LowIndexSearch(const Presentation &p, std::size_t max_index,
                 std::uint64_t max_nodes)
      : width_(2 * static_cast<std::size_t>(p.generator_count())),
        max_index_(max_index), max_nodes_(max_nodes), pres_(p) {
    rotations_.resize(width_);
    for (const auto &r : p.relators) {
      auto cols = word_columns(r);
      // Only the distinct rotations: a proper power u^k has |u| of them.
      std::size_t period = cols.size();
      for (std::size_t d = 1; d < cols.size(); ++d)
        if (cols.size() % d == 0 &&
            std::equal(cols.begin() + static_cast<long>(d), cols.end(), cols.begin())) {
          period = d;
          break;
        }
      for (std::size_t s = 0; s < period; ++s) {
        std::vector<std::size_t> rot(cols.begin() + static_cast<long>(s),
                                     cols.end());
        rot.insert(rot.end(), cols.begin(), cols.begin() + static_cast<long>(s));
        rotations_[rot.front()].push_back(std::move(rot));
      }
    }
  }

  std::vector<CosetTable> run() {
    if (width_ == 0) {
      found_.emplace_back(0, 1);
      return found_;
    }
    table_.assign(max_index_ * width_, -1);
    cosets_ = 1;
    recurse();
    return found_;
  }

private:
  int &at(std::size_t c, std::size_t col) { return table_[c * width_ + col]; }

  struct Undo {
    std::vector<std::size_t> slots;
  };

  bool assign(std::size_t c, std::size_t col, int d, Undo &undo) {
    auto ud = static_cast<std::size_t>(d);
    at(c, col) = d;
    undo.slots.push_back(c * width_ + col);
    if (at(ud, col ^ 1) >= 0 && at(ud, col ^ 1) != static_cast<int>(c))
      return false;
    if (at(ud, col ^ 1) < 0) {
      at(ud, col ^ 1) = static_cast<int>(c);
      undo.slots.push_back(ud * width_ + (col ^ 1));
    }
    pending_.emplace_back(c, col);
    return true;
  }

  /// Scans every relator rotation starting with a newly set entry until no
  /// more deductions arise. False on a contradiction.
  bool deduce(Undo &undo) {
    while (!pending_.empty()) {
      auto [c, col] = pending_.back();
      pending_.pop_back();
      for (int side = 0; side < 2; ++side) {
        std::size_t start = side == 0 ? c : static_cast<std::size_t>(at(c, col));
        std::size_t first = side == 0 ? col : (col ^ 1);
        for (const auto &w : rotations_[first])
          if (!scan(start, w, undo))
            return false;
      }
    }
    return true;
  }

  bool scan(std::size_t c, const std::vector<std::size_t> &w, Undo &undo) {
    int f = static_cast<int>(c), b = f;
    std::size_t i = 0, j = w.size();
    while (i < j && at(static_cast<std::size_t>(f), w[i]) >= 0)
      f = at(static_cast<std::size_t>(f), w[i++]);
    if (i == j)
      return f == b;
    while (j > i && at(static_cast<std::size_t>(b), w[j - 1] ^ 1) >= 0)
      b = at(static_cast<std::size_t>(b), w[--j] ^ 1);
    if (j == i)
      return f == b;
    if (j == i + 1) {
      auto uf = static_cast<std::size_t>(f), ub = static_cast<std::size_t>(b);
      if (at(ub, w[i] ^ 1) >= 0)
        return false;
      at(uf, w[i]) = b;
      at(ub, w[i] ^ 1) = f;
      undo.slots.push_back(uf * width_ + w[i]);
      undo.slots.push_back(ub * width_ + (w[i] ^ 1));
      pending_.emplace_back(uf, w[i]);
    }
    return true;
  }

  /// False if re-rooting the table at some coset gives a lexicographically
  /// smaller standardized table (a conjugate already covered elsewhere).
  bool is_canonical() {
    std::vector<int> label(cosets_), order(cosets_);
    for (std::size_t beta = 1; beta < cosets_; ++beta) {
      std::fill(label.begin(), label.end(), -1);
      label[beta] = 0;
      order[0] = static_cast<int>(beta);
      std::size_t labelled = 1;
      bool decided = false;
      for (std::size_t r = 0; r < cosets_ && !decided; ++r) {
        if (r >= labelled)
          break;
        auto old = static_cast<std::size_t>(order[r]);
        for (std::size_t col = 0; col < width_; ++col) {
          int t = at(old, col);
          int mine = at(r, col);
          if (t < 0 || mine < 0) {
            decided = true;
            break;
          }
          if (label[static_cast<std::size_t>(t)] < 0) {
            label[static_cast<std::size_t>(t)] = static_cast<int>(labelled);
            order[labelled++] = t;
          }
          int relabelled = label[static_cast<std::size_t>(t)];
          if (relabelled < mine)
            return false;
          if (relabelled > mine) {
            decided = true;
            break;
          }
        }
      }
    }
    return true;
  }

  void recurse() {
    if (++nodes_ > max_nodes_)
      throw ResourceLimit("low-index search exceeded " +
                          std::to_string(max_nodes_) + " nodes");
    std::size_t c = 0, col = 0;
    bool open = false;
    for (c = 0; c < cosets_ && !open; ++c)
      for (col = 0; col < width_; ++col)
        if (at(c, col) < 0) {
          open = true;
          break;
        }
    if (!open) {
      CosetTable t(static_cast<int>(width_ / 2), cosets_);
      for (std::size_t r = 0; r < cosets_; ++r)
        for (std::size_t k = 0; k < width_; ++k)
          t.set(r, k, at(r, k));
      if (t.is_valid_for(pres_))
        found_.push_back(std::move(t));
      return;
    }
    --c;
    std::size_t limit = std::min(cosets_ + 1, max_index_);
    for (std::size_t d = 0; d < limit; ++d) {
      bool fresh = d == cosets_;
      if (!fresh && at(d, col ^ 1) >= 0)
        continue;
      Undo undo;
      pending_.clear();
      if (fresh)
        ++cosets_;
      bool ok = assign(c, col, static_cast<int>(d), undo) && deduce(undo) &&
                is_canonical();
      if (ok)
        recurse();
      for (auto slot : undo.slots)
        table_[slot] = -1;
      if (fresh)
        --cosets_;
    }
  }

  std::size_t width_;
  std::size_t max_index_;
  std::uint64_t max_nodes_;
  const Presentation &pres_;
  std::vector<std::vector<std::vector<std::size_t>>> rotations_;
  std::vector<int> table_;
  std::size_t cosets_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pending_;
  std::vector<CosetTable> found_;
  std::uint64_t nodes_ = 0;
};

} // namespace detail

/// One table per conjugacy class of subgroups of index at most `max_index`,
/// each the lexicographically least among its conjugates.
inline std::vector<CosetTable>
low_index_subgroups(const Presentation &p, std::size_t max_index,
                    std::uint64_t max_nodes = kDefaultMaxNodes) {
  if (max_index < 1)
    throw std::invalid_argument("low_index_subgroups: max_index must be >= 1");
  return detail::LowIndexSearch(p, max_index, max_nodes).run();
}

/// Right action of the generators on the cosets of a complete table.
inline Homomorphism action_homomorphism(const CosetTable &t) {
  if (!t.is_complete())
    throw std::invalid_argument("action_homomorphism: incomplete table");
  Homomorphism f;
  f.degree = t.index();
  for (int g = 1; g <= t.generator_count(); ++g) {
    std::vector<Point> img(t.index());
    for (std::size_t c = 0; c < t.index(); ++c)
      img[c] = static_cast<Point>(t.act(c, g));
    f.images.emplace_back(std::move(img));
  }
  return f;
}

/// The coset table of the stabilizer of point 0 under a transitive action.
inline CosetTable table_from_action(const Homomorphism &f) {
  CosetTable t(static_cast<int>(f.images.size()), f.degree);
  for (std::size_t g = 0; g < f.images.size(); ++g) {
    const auto &p = f.images[g];
    for (Point c = 0; c < f.degree; ++c) {
      t.set(c, 2 * g, static_cast<int>(p[c]));
      t.set(p[c], 2 * g + 1, static_cast<int>(c));
    }
  }
  std::vector<bool> seen(f.degree, false);
  std::vector<Point> queue{0};
  if (f.degree)
    seen[0] = true;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const auto &p : f.images)
      if (!seen[p[queue[i]]]) {
        seen[p[queue[i]]] = true;
        queue.push_back(p[queue[i]]);
      }
  if (queue.size() != f.degree)
    throw std::invalid_argument("table_from_action: action is not transitive");
  return t;
}

namespace detail {

/// Canonical key of the right coset U*q: the lexicographically least image
/// of the base under elements of the coset. `chain` is U's chain with the
/// full base of Q as its base.
inline std::vector<Point> coset_key(const StabChain &chain,
                                    const Permutation &q) {
  std::vector<Point> key;
  key.reserve(chain.levels().size());
  Permutation g = q;
  for (const auto &lv : chain.levels()) {
    std::size_t best = 0;
    Point best_img = g[lv.orbit[0]];
    for (std::size_t k = 1; k < lv.orbit.size(); ++k) {
      Point img = g[lv.orbit[k]];
      if (img < best_img) {
        best_img = img;
        best = k;
      }
    }
    if (best != 0)
      g = lv.transversal[best] * g;
    key.push_back(best_img);
  }
  return key;
}

} // namespace detail

/// Table of f^-1(U): the action of the presentation, through f, on the
/// right cosets of U in the image of f. Coset 0 is U.
inline CosetTable pullback_subgroup(const Homomorphism &f, const PermGroup &u,
                                    std::size_t max_cosets = kDefaultMaxCosets) {
  PermGroup q = image_group(f);
  for (const auto &g : u.generators())
    if (!q.contains(g))
      throw std::invalid_argument(
          "pullback_subgroup: U is not contained in the image of f");
  std::vector<Point> base = q.chain().base();
  StabChain uc(f.degree, u.generators(), base);
  if (uc.levels().size() != base.size())
    throw std::logic_error("pullback_subgroup: base mismatch");

  const std::size_t gens = f.images.size();
  std::map<std::vector<Point>, int> index;
  std::vector<Permutation> reps{Permutation::identity(f.degree)};
  index.emplace(detail::coset_key(uc, reps[0]), 0);
  std::vector<std::vector<int>> rows;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    rows.emplace_back(gens);
    for (std::size_t g = 0; g < gens; ++g) {
      Permutation next = reps[i] * f.images[g];
      auto key = detail::coset_key(uc, next);
      auto [it, inserted] = index.emplace(std::move(key), static_cast<int>(reps.size()));
      if (inserted) {
        if (reps.size() >= max_cosets)
          throw ResourceLimit("pullback_subgroup: index exceeds " +
                              std::to_string(max_cosets));
        reps.push_back(std::move(next));
      }
      rows[i][g] = it->second;
    }
  }
  CosetTable t(static_cast<int>(gens), reps.size());
  for (std::size_t c = 0; c < reps.size(); ++c)
    for (std::size_t g = 0; g < gens; ++g) {
      t.set(c, 2 * g, rows[c][g]);
      t.set(static_cast<std::size_t>(rows[c][g]), 2 * g + 1, static_cast<int>(c));
    }
  return t;
}

} // namespace coverhunter
