#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "perm_group.hpp"

namespace coverhunter {

inline constexpr std::uint64_t kDefaultSubgroupOrderBound = 10'000;

/// One conjugacy class of subgroups: a representative and the class size.
struct SubgroupClass {
  PermGroup group;
  std::uint64_t order = 0;
  std::uint64_t conjugates = 0;
};

/// Conjugacy class representatives of subgroups, by decreasing order.
struct SubgroupList {
  std::vector<SubgroupClass> classes;
  bool conjugacy_class_representatives = true;

  [[nodiscard]] std::uint64_t total_subgroups() const {
    std::uint64_t t = 0;
    for (const auto &c : classes)
      t += c.conjugates;
    return t;
  }
};

namespace detail {

/// Explicit element list of a small group with hashed lookup.
class ElementTable {
public:
  explicit ElementTable(const PermGroup &g, std::uint64_t bound)
      : elements_(g.elements(bound)) {
    index_.reserve(elements_.size() * 2);
    for (std::size_t i = 0; i < elements_.size(); ++i)
      index_.emplace(elements_[i], static_cast<std::uint32_t>(i));
  }

  [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
  [[nodiscard]] const Permutation &operator[](std::size_t i) const {
    return elements_[i];
  }
  [[nodiscard]] std::uint32_t index_of(const Permutation &p) const {
    return index_.at(p);
  }

private:
  std::vector<Permutation> elements_;
  std::unordered_map<Permutation, std::uint32_t, PermutationHash> index_;
};

using ElementSet = std::vector<bool>;

inline ElementSet closure(const ElementTable &table, ElementSet start,
                          const std::vector<Permutation> &gens) {
  std::vector<std::uint32_t> queue;
  for (std::uint32_t i = 0; i < start.size(); ++i)
    if (start[i])
      queue.push_back(i);
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (const auto &g : gens) {
      std::uint32_t j = table.index_of(table[queue[q]] * g);
      if (!start[j]) {
        start[j] = true;
        queue.push_back(j);
      }
    }
  return start;
}

inline bool is_prime_power(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0)
        n /= p;
      return n == 1;
    }
  return true;
}

} // namespace detail

/// All subgroups of Q up to conjugacy, by cyclic extension: every subgroup
/// is reached as <H, g> with H a class representative of smaller order and g
/// of prime-power order.
inline SubgroupList
enumerate_subgroups(const PermGroup &q,
                    std::uint64_t order_bound = kDefaultSubgroupOrderBound) {
  if (q.order() > order_bound)
    throw ResourceLimit("subgroup enumeration: |Q| = " +
                        std::to_string(q.order()) + " exceeds bound " +
                        std::to_string(order_bound) +
                        "; scan point stabilizers instead");
  detail::ElementTable table(q, order_bound);
  const std::size_t n = table.size();
  const std::size_t degree = q.degree();

  // One generator per cyclic subgroup of prime-power order.
  std::vector<std::uint32_t> cyclic_gens;
  {
    std::vector<bool> covered(n, false);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (covered[i] || !detail::is_prime_power(table[i].order()))
        continue;
      cyclic_gens.push_back(i);
      auto o = static_cast<long>(table[i].order());
      for (long k = 1; k < o; ++k)
        if (std::gcd(k, o) == 1)
          covered[table.index_of(table[i].pow(k))] = true;
    }
  }

  struct Rep {
    std::vector<Permutation> gens;
    detail::ElementSet members;
    std::uint64_t order;
  };
  std::vector<Rep> reps;
  reps.push_back(
      {{}, [&] {
         detail::ElementSet s(n, false);
         s[0] = true;
         return s;
       }(),
       1});

  auto conjugate_into = [&](const std::vector<Permutation> &gens,
                            const detail::ElementSet &target) {
    for (std::size_t e = 0; e < n; ++e) {
      bool ok = true;
      for (const auto &g : gens) {
        if (!target[table.index_of(g.conjugate_by(table[e]))]) {
          ok = false;
          break;
        }
      }
      if (ok)
        return true;
    }
    return false;
  };

  std::map<std::vector<bool>, std::size_t> seen;
  seen.emplace(reps[0].members, 0);
  for (std::size_t r = 0; r < reps.size(); ++r) {
    for (std::uint32_t ci : cyclic_gens) {
      if (reps[r].members[ci])
        continue;
      std::vector<Permutation> gens = reps[r].gens;
      gens.push_back(table[ci]);
      detail::ElementSet members =
          detail::closure(table, reps[r].members, gens);
      if (seen.contains(members))
        continue;
      auto order = static_cast<std::uint64_t>(
          std::count(members.begin(), members.end(), true));
      bool known = false;
      for (std::size_t k = 0; k < reps.size() && !known; ++k)
        if (reps[k].order == order && conjugate_into(gens, reps[k].members))
          known = true;
      seen.emplace(members, reps.size());
      if (!known)
        reps.push_back({std::move(gens), std::move(members), order});
    }
  }

  SubgroupList out;
  for (auto &rep : reps) {
    std::uint64_t normalizer = 0;
    for (std::size_t e = 0; e < n; ++e) {
      bool ok = true;
      for (const auto &g : rep.gens)
        if (!rep.members[table.index_of(g.conjugate_by(table[e]))]) {
          ok = false;
          break;
        }
      normalizer += ok ? 1 : 0;
    }
    out.classes.push_back(
        {PermGroup(degree, rep.gens), rep.order, n / normalizer});
  }
  std::stable_sort(out.classes.begin(), out.classes.end(),
                   [](const SubgroupClass &a, const SubgroupClass &b) {
                     return a.order > b.order;
                   });
  return out;
}

/// True iff some q in Q conjugates every generator image of f to that of g.
inline bool are_conjugate_homs(const Homomorphism &f, const Homomorphism &g,
                               const PermGroup &q) {
  if (f.degree != g.degree || f.images.size() != g.images.size())
    return false;
  if (f == g)
    return true;
  for (std::size_t i = 0; i < f.images.size(); ++i) {
    auto a = f.images[i].cycle_lengths(), b = g.images[i].cycle_lengths();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      return false;
  }
  for (const auto &e : q.elements(kDefaultSubgroupOrderBound)) {
    bool ok = true;
    for (std::size_t i = 0; i < f.images.size() && ok; ++i)
      ok = f.images[i].conjugate_by(e) == g.images[i];
    if (ok)
      return true;
  }
  return false;
}

} // namespace coverhunter
