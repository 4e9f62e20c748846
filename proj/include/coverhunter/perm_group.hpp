#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "perm.hpp"

namespace coverhunter {

/// Stabilizer chain built by the deterministic incremental Schreier-Sims
/// algorithm. New base points are always the smallest point moved by the
/// element that forces them.
class StabChain {
public:
  struct Level {
    Point base_point = 0;
    std::vector<Permutation> generators;
    std::vector<Point> orbit;
    // transversal[slot[b]] maps base_point to b; slot is -1 off the orbit.
    std::vector<int> slot;
    std::vector<Permutation> transversal;
  };

  StabChain() = default;
  StabChain(std::size_t degree, const std::vector<Permutation> &generators,
            const std::vector<Point> &base_prefix = {})
      : degree_(degree) {
    for (Point b : base_prefix)
      add_level(b);
    std::vector<Permutation> gens;
    for (const auto &g : generators) {
      if (g.degree() != degree)
        throw std::invalid_argument("generator degree mismatch");
      if (!g.is_identity())
        gens.push_back(g);
    }
    for (const auto &g : gens) {
      bool fixes_base = true;
      for (const auto &l : levels_)
        fixes_base = fixes_base && g[l.base_point] == l.base_point;
      if (fixes_base)
        add_level(*g.smallest_moved_point());
    }
    for (std::size_t l = 0; l < levels_.size(); ++l) {
      for (const auto &g : gens) {
        bool fixes = true;
        for (std::size_t m = 0; m < l; ++m)
          fixes = fixes && g[levels_[m].base_point] == levels_[m].base_point;
        if (fixes)
          levels_[l].generators.push_back(g);
      }
      rebuild_orbit(l);
    }
    schreier_sims();
  }

  [[nodiscard]] std::size_t degree() const noexcept { return degree_; }
  [[nodiscard]] const std::vector<Level> &levels() const noexcept {
    return levels_;
  }
  [[nodiscard]] std::vector<Point> base() const {
    std::vector<Point> b;
    for (const auto &l : levels_)
      b.push_back(l.base_point);
    return b;
  }

  /// Group order; throws std::overflow_error past 2^64.
  [[nodiscard]] std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto &l : levels_) {
      std::uint64_t s = l.orbit.size();
      if (o > std::numeric_limits<std::uint64_t>::max() / s)
        throw std::overflow_error("group order exceeds 64 bits");
      o *= s;
    }
    return o;
  }

  /// Sifts g through levels [from, depth). Returns the residue and the level
  /// at which sifting stopped (depth when it passed every level).
  [[nodiscard]] std::pair<Permutation, std::size_t>
  strip(Permutation g, std::size_t from = 0) const {
    for (std::size_t l = from; l < levels_.size(); ++l) {
      const Level &lv = levels_[l];
      Point beta = g[lv.base_point];
      if (lv.slot[beta] < 0)
        return {std::move(g), l};
      g = g * lv.transversal[static_cast<std::size_t>(lv.slot[beta])].inverse();
    }
    return {std::move(g), levels_.size()};
  }

  [[nodiscard]] bool contains(const Permutation &g) const {
    if (g.degree() != degree_)
      return false;
    auto [h, l] = strip(g);
    return l == levels_.size() && h.is_identity();
  }

  /// Strong generators of the pointwise stabilizer of the first `depth` base
  /// points.
  [[nodiscard]] std::vector<Permutation>
  stabilizer_generators(std::size_t depth) const {
    if (depth < levels_.size())
      return levels_[depth].generators;
    return {};
  }

private:
  void add_level(Point b) {
    Level l;
    l.base_point = b;
    l.slot.assign(degree_, -1);
    levels_.push_back(std::move(l));
  }

  void rebuild_orbit(std::size_t idx) {
    Level &lv = levels_[idx];
    lv.orbit.clear();
    lv.transversal.clear();
    std::fill(lv.slot.begin(), lv.slot.end(), -1);
    lv.orbit.push_back(lv.base_point);
    lv.transversal.push_back(Permutation::identity(degree_));
    lv.slot[lv.base_point] = 0;
    for (std::size_t i = 0; i < lv.orbit.size(); ++i) {
      Point b = lv.orbit[i];
      for (const auto &x : lv.generators) {
        Point c = x[b];
        if (lv.slot[c] >= 0)
          continue;
        lv.slot[c] = static_cast<int>(lv.orbit.size());
        lv.orbit.push_back(c);
        lv.transversal.push_back(lv.transversal[i] * x);
      }
    }
  }

  void schreier_sims() {
    long i = static_cast<long>(levels_.size()) - 1;
    while (i >= 0) {
      bool restarted = false;
      auto li = static_cast<std::size_t>(i);
      for (std::size_t oi = 0; oi < levels_[li].orbit.size() && !restarted;
           ++oi) {
        for (std::size_t gi = 0;
             gi < levels_[li].generators.size() && !restarted; ++gi) {
          const Level &lv = levels_[li];
          Point b = lv.orbit[oi];
          const Permutation &x = lv.generators[gi];
          Point bx = x[b];
          Permutation g1 = lv.transversal[oi] * x;
          const Permutation &u = lv.transversal[static_cast<std::size_t>(lv.slot[bx])];
          if (g1 == u)
            continue;
          auto [h, j] = strip(g1 * u.inverse(), li + 1);
          bool fresh = j < levels_.size();
          if (!fresh && !h.is_identity()) {
            add_level(*h.smallest_moved_point());
            j = levels_.size() - 1;
            fresh = true;
          }
          if (!fresh)
            continue;
          for (std::size_t l = li + 1; l <= j; ++l) {
            levels_[l].generators.push_back(h);
            rebuild_orbit(l);
          }
          i = static_cast<long>(j);
          restarted = true;
        }
      }
      if (!restarted)
        --i;
    }
  }

  std::size_t degree_ = 0;
  std::vector<Level> levels_;
};

/// A permutation group given by generators, with its stabilizer chain
/// computed at construction.
class PermGroup {
public:
  PermGroup() = default;
  PermGroup(std::size_t degree, std::vector<Permutation> generators,
            const std::vector<Point> &base_prefix = {})
      : degree_(degree), generators_(std::move(generators)),
        chain_(std::make_shared<StabChain>(degree, generators_, base_prefix)) {}

  [[nodiscard]] std::size_t degree() const noexcept { return degree_; }
  [[nodiscard]] const std::vector<Permutation> &generators() const noexcept {
    return generators_;
  }
  [[nodiscard]] const StabChain &chain() const { return *chain_; }
  [[nodiscard]] std::uint64_t order() const { return chain_->order(); }
  [[nodiscard]] bool contains(const Permutation &g) const {
    return chain_->contains(g);
  }
  [[nodiscard]] bool is_trivial() const { return order() == 1; }

  /// All elements, breadth first from the identity over the generators.
  [[nodiscard]] std::vector<Permutation> elements(std::uint64_t bound) const {
    if (order() > bound)
      throw ResourceLimit("group order " + std::to_string(order()) +
                          " exceeds element enumeration bound " +
                          std::to_string(bound));
    std::vector<Permutation> out{Permutation::identity(degree_)};
    std::unordered_set<Permutation, PermutationHash> seen(out.begin(),
                                                          out.end());
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const auto &g : generators_) {
        Permutation h = out[i] * g;
        if (seen.insert(h).second)
          out.push_back(std::move(h));
      }
    return out;
  }

  /// Pointwise stabilizer of the points {0, ..., k-1} along the chain base.
  [[nodiscard]] PermGroup base_stabilizer(std::size_t depth) const {
    return PermGroup(degree_, chain_->stabilizer_generators(depth));
  }

private:
  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::shared_ptr<const StabChain> chain_;
};

inline std::uint64_t group_order(const std::vector<Permutation> &gens) {
  if (gens.empty())
    return 1;
  return StabChain(gens.front().degree(), gens).order();
}

/// Image group of a homomorphism.
inline PermGroup image_group(const Homomorphism &f) {
  return PermGroup(f.degree, f.images);
}

} // namespace coverhunter
