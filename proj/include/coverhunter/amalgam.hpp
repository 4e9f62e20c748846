#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbifold.hpp"
#include "perm_group.hpp"
#include "presentation.hpp"

namespace coverhunter {

enum class Factor { A, B };

enum class TransversalChoice {
  lex_first, // lexicographically smallest element of each coset
  lex_last   // largest, except that C itself is represented by the identity
};

/// A *_C B for finite permutation groups A and B. Each amalgam generator is
/// an element of one factor; C is given by pairs (c in A, c in B) of
/// corresponding generators.
struct AmalgamSpec {
  PermGroup a, b;
  std::vector<std::pair<Permutation, Permutation>> c_generators;
  std::vector<std::pair<Factor, Permutation>> generators;
  std::vector<std::string> generator_names;
  TransversalChoice transversal = TransversalChoice::lex_first;
};

/// c * r_1 * ... * r_k with c in C (stored on the A side) and the r_i
/// alternating nontrivial right-coset representatives.
struct NormalForm {
  Permutation c;
  std::vector<std::pair<Factor, std::size_t>> syllables; // (factor, rep index)

  [[nodiscard]] bool is_trivial() const {
    return syllables.empty() && c.is_identity();
  }
  friend bool operator==(const NormalForm &, const NormalForm &) = default;
};

namespace detail {

/// One factor with its right-coset decomposition x = c * r.
struct FactorTable {
  std::vector<Permutation> reps;
  std::unordered_map<Permutation, std::pair<Permutation, std::size_t>,
                     PermutationHash>
      split; // x -> (c in this factor, rep index)
};

inline FactorTable build_factor(const PermGroup &x, const PermGroup &c,
                                TransversalChoice choice) {
  const std::uint64_t bound = 1'000'000;
  auto elems = x.elements(bound);
  auto sub = c.elements(bound);
  std::sort(elems.begin(), elems.end());
  std::unordered_map<Permutation, std::size_t, PermutationHash> coset_of;
  std::vector<std::vector<Permutation>> cosets;
  for (const auto &g : elems) {
    if (coset_of.count(g))
      continue;
    cosets.emplace_back();
    for (const auto &h : sub) {
      Permutation y = h * g;
      coset_of[y] = cosets.size() - 1;
      cosets.back().push_back(y);
    }
  }
  FactorTable t;
  for (auto &cs : cosets) {
    std::sort(cs.begin(), cs.end());
    bool is_c = cs.front().is_identity();
    t.reps.push_back(is_c || choice == TransversalChoice::lex_first
                         ? cs.front()
                         : cs.back());
  }
  // Cosets were discovered in lexicographic order of their smallest element,
  // so with identity first the list is already deterministic; reorder by
  // representative for the lex_last choice.
  std::vector<std::size_t> order(t.reps.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin() + 1, order.end(),
            [&](std::size_t i, std::size_t j) { return t.reps[i] < t.reps[j]; });
  std::vector<Permutation> reps;
  std::vector<std::size_t> new_index(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    reps.push_back(t.reps[order[k]]);
    new_index[order[k]] = k;
  }
  t.reps = std::move(reps);
  for (const auto &g : elems) {
    std::size_t k = new_index[coset_of.at(g)];
    t.split.emplace(g, std::make_pair(g * t.reps[k].inverse(), k));
  }
  return t;
}

/// Isomorphism C_A -> C_B determined by the generator correspondence.
inline std::unordered_map<Permutation, Permutation, PermutationHash>
c_isomorphism(const AmalgamSpec &s) {
  if (s.c_generators.empty())
    return {{Permutation::identity(s.a.degree()),
             Permutation::identity(s.b.degree())}};
  std::unordered_map<Permutation, Permutation, PermutationHash> phi;
  std::unordered_map<Permutation, Permutation, PermutationHash> back;
  std::vector<Permutation> queue{Permutation::identity(s.a.degree())};
  phi.emplace(queue[0], Permutation::identity(s.b.degree()));
  back.emplace(Permutation::identity(s.b.degree()), queue[0]);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Permutation x = queue[i];
    for (const auto &[ga, gb] : s.c_generators) {
      Permutation ya = x * ga, yb = phi.at(x) * gb;
      auto it = phi.find(ya);
      if (it != phi.end()) {
        if (it->second != yb)
          throw std::invalid_argument(
              "amalgam: embeddings of C do not define an isomorphism");
        continue;
      }
      if (back.count(yb))
        throw std::invalid_argument(
            "amalgam: embeddings of C have different orders");
      phi.emplace(ya, yb);
      back.emplace(yb, ya);
      queue.push_back(ya);
    }
  }
  return phi;
}

} // namespace detail

/// Decides the word problem in a finite amalgam via right-coset normal forms.
class AmalgamNormalizer {
public:
  explicit AmalgamNormalizer(AmalgamSpec spec) : spec_(std::move(spec)) {
    phi_ = detail::c_isomorphism(spec_);
    std::vector<Permutation> ca, cb;
    for (const auto &[x, y] : spec_.c_generators) {
      if (!spec_.a.contains(x) || !spec_.b.contains(y))
        throw std::invalid_argument("amalgam: C generator outside its factor");
      ca.push_back(x);
      cb.push_back(y);
    }
    for (const auto &[x, y] : phi_)
      phi_inv_.emplace(y, x);
    tables_[0] = detail::build_factor(spec_.a, PermGroup(spec_.a.degree(), ca),
                                      spec_.transversal);
    tables_[1] = detail::build_factor(spec_.b, PermGroup(spec_.b.degree(), cb),
                                      spec_.transversal);
    for (const auto &[f, g] : spec_.generators)
      if (!(f == Factor::A ? spec_.a : spec_.b).contains(g))
        throw std::invalid_argument("amalgam: generator outside its factor");
  }

  [[nodiscard]] const AmalgamSpec &spec() const noexcept { return spec_; }
  [[nodiscard]] const std::vector<Permutation> &representatives(Factor f) const {
    return tables_[idx(f)].reps;
  }

  [[nodiscard]] NormalForm normal_form(const Word &w) const {
    Permutation c = Permutation::identity(spec_.a.degree());
    std::vector<std::pair<Factor, std::size_t>> syl;
    // Pushes an element of C (A side) leftwards through all syllables into c.
    auto absorb = [&](Permutation pending) {
      for (std::size_t j = syl.size(); j-- > 0;) {
        auto [f, k] = syl[j];
        Permutation y = tables_[idx(f)].reps[k] * to_side(pending, f);
        auto [cc, kk] = split(f, y);
        syl[j].second = kk; // cannot be the identity coset
        pending = from_side(cc, f);
      }
      c = c * pending;
    };
    for (int x : w) {
      auto i = static_cast<std::size_t>(std::abs(x)) - 1;
      if (i >= spec_.generators.size())
        throw std::invalid_argument("normal_form: letter " + std::to_string(x) +
                                    " is not in either factor");
      auto [f, g] = spec_.generators[i];
      if (x < 0)
        g = g.inverse();
      Permutation y;
      if (!syl.empty() && syl.back().first == f) {
        y = tables_[idx(f)].reps[syl.back().second] * g;
        syl.pop_back();
      } else if (syl.empty()) {
        y = to_side(c, f) * g;
        c = Permutation::identity(spec_.a.degree());
      } else {
        y = g;
      }
      auto [cc, k] = split(f, y);
      absorb(from_side(cc, f));
      if (k != 0)
        syl.emplace_back(f, k);
    }
    return NormalForm{std::move(c), std::move(syl)};
  }

  [[nodiscard]] std::string to_string(const NormalForm &nf) const {
    std::string s = to_cycle_string(nf.c);
    for (auto [f, k] : nf.syllables)
      s += std::string(" * ") + (f == Factor::A ? "A" : "B") + ":" +
           to_cycle_string(tables_[idx(f)].reps[k]);
    return s;
  }

private:
  static std::size_t idx(Factor f) { return f == Factor::A ? 0 : 1; }

  [[nodiscard]] std::pair<Permutation, std::size_t> split(Factor f,
                                                          const Permutation &y) const {
    return tables_[idx(f)].split.at(y);
  }
  [[nodiscard]] Permutation to_side(const Permutation &c, Factor f) const {
    return f == Factor::A ? c : phi_.at(c);
  }
  [[nodiscard]] Permutation from_side(const Permutation &c, Factor f) const {
    return f == Factor::A ? c : phi_inv_.at(c);
  }

  AmalgamSpec spec_;
  std::unordered_map<Permutation, Permutation, PermutationHash> phi_, phi_inv_;
  detail::FactorTable tables_[2];
};

inline NormalForm normal_form(const AmalgamSpec &spec, const Word &w) {
  return AmalgamNormalizer(spec).normal_form(w);
}

/// <a,b | a^3, b^4, (a*b^2)^2>.
inline Presentation sister_gamma_presentation() {
  return parse_presentation("<a,b | a^3, b^4, (a*b^2)^2>");
}

/// S3 *_{C2} C4 with A = <a, b^2> and B = <b>.
inline AmalgamSpec sister_amalgam_spec(
    TransversalChoice t = TransversalChoice::lex_first) {
  Permutation a = Permutation::from_cycles(3, {{1, 2, 3}});
  Permutation b2 = Permutation::from_cycles(3, {{1, 2}});
  Permutation b = Permutation::from_cycles(4, {{1, 2, 3, 4}});
  AmalgamSpec s{PermGroup(3, {a, b2}), PermGroup(4, {b}), {{b2, b * b}},
                {{Factor::A, a}, {Factor::B, b}}, {"a", "b"}, t};
  return s;
}

/// Gamma_n = Gamma / <<(ab)^n>>.
inline Presentation sister_gamma_n(long n) {
  return quotient_presentation(sister_gamma_presentation(), Word{1, 2}, n);
}

/// The fundamental group of the sister of the figure-8 complement.
inline Presentation sister_manifold_presentation() {
  return parse_presentation("<a,b | a*b^2*a*b^-1*a^3*b^-1, a*b^2*a^-2*b^2>");
}

enum class SpecialKind { special, almost_special };

struct SpecialRep {
  std::size_t degree = 0;
  Permutation a, b;
  SpecialKind kind = SpecialKind::special;
};

inline std::string to_string(SpecialKind k) {
  return k == SpecialKind::special ? "special" : "almost_special";
}

namespace detail {

inline SpecialRep special_base(std::size_t n) {
  using Cycles = std::vector<std::vector<Point>>;
  auto rep = [&](const Cycles &a, const Cycles &b, SpecialKind k) {
    return SpecialRep{n, Permutation::from_cycles(n, a),
                      Permutation::from_cycles(n, b), k};
  };
  switch (n) {
  case 6:
    return rep({{1, 2, 3}, {4, 5, 6}}, {{2, 4, 3, 5}}, SpecialKind::special);
  case 7:
    return rep({{2, 3, 4}, {5, 6, 7}}, {{1, 2}, {3, 5, 4, 6}},
               SpecialKind::special);
  case 15:
    return rep({{2, 3, 4}, {5, 7, 9}, {6, 8, 11}, {12, 13, 15}},
               {{1, 2}, {3, 5, 4, 6}, {7, 10, 11, 14}, {8, 12, 9, 13}},
               SpecialKind::special);
  case 16:
    return rep({{2, 3, 4}, {5, 7, 9}, {6, 8, 11}, {12, 13, 15}},
               {{1, 2}, {3, 5, 4, 6}, {7, 10, 11, 14}, {8, 12, 9, 13}, {15, 16}},
               SpecialKind::almost_special);
  case 17:
    return rep({{2, 3, 5}, {6, 8, 11}, {7, 10, 9}, {12, 15, 13}, {14, 16, 17}},
               {{1, 2, 4, 7}, {3, 6, 9, 12}, {5, 8, 10, 13}, {11, 14, 15, 16}},
               SpecialKind::special);
  default:
    throw std::invalid_argument("no base representation for n = " +
                                std::to_string(n));
  }
}

/// Glues the 7-point pattern onto the fixed point n of b; with seven new
/// points the result is almost special.
inline SpecialRep extend(const SpecialRep &f, std::size_t extra) {
  if (f.kind != SpecialKind::special)
    throw std::invalid_argument("extend: input must be special");
  const std::size_t n = f.degree, m = n + extra;
  auto p = [&](Point i) { return static_cast<Point>(n + i); };
  std::vector<std::vector<Point>> ga{{p(1), p(2), p(3)}, {p(4), p(5), p(6)}};
  std::vector<std::vector<Point>> gb{{static_cast<Point>(n), p(1)},
                                     {p(2), p(4), p(3), p(5)}};
  if (extra == 7)
    gb.push_back({p(6), p(7)});
  auto widen = [&](const Permutation &x) {
    std::vector<Point> img(x.images().begin(), x.images().end());
    for (std::size_t i = n; i < m; ++i)
      img.push_back(static_cast<Point>(i));
    return Permutation(std::move(img));
  };
  return SpecialRep{m, widen(f.a) * Permutation::from_cycles(m, ga),
                    widen(f.b) * Permutation::from_cycles(m, gb),
                    extra == 7 ? SpecialKind::almost_special
                               : SpecialKind::special};
}

} // namespace detail

/// Base degree and number of +6 steps, and whether a final +7 step follows.
struct SpecialPlan {
  std::size_t base = 0;
  std::size_t steps6 = 0;
  bool plus7 = false;
};

inline SpecialPlan plan_special_rep(std::size_t n) {
  if (!(n == 6 || n == 7 || n >= 12))
    throw std::invalid_argument("special_rep: n = " + std::to_string(n) +
                                " is unsupported (need n in {6,7} or n >= 12)");
  if (n == 16)
    return {16, 0, false};
  switch (n % 6) {
  case 0:
    return {6, (n - 6) / 6, false};
  case 1:
    return {7, (n - 7) / 6, false};
  case 3:
    return {15, (n - 15) / 6, false};
  case 5:
    return {17, (n - 17) / 6, false};
  case 2: // 7 + 6k + 7
    return {7, (n - 14) / 6, true};
  default: // 4: 15 + 6k + 7
    return {15, (n - 22) / 6, true};
  }
}

inline SpecialRep special_rep(std::size_t n) {
  SpecialPlan plan = plan_special_rep(n);
  SpecialRep r = detail::special_base(plan.base);
  for (std::size_t i = 0; i < plan.steps6; ++i)
    r = detail::extend(r, 6);
  if (plan.plus7)
    r = detail::extend(r, 7);
  return r;
}

struct SpecialCheck {
  std::string name;
  bool passed = false;
};

struct SpecialReport {
  std::vector<SpecialCheck> checks;
  [[nodiscard]] bool ok() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const SpecialCheck &c) { return c.passed; });
  }
};

inline SpecialReport verify_special(const SpecialRep &r) {
  SpecialReport rep;
  auto add = [&](std::string name, bool ok) {
    rep.checks.push_back({std::move(name), ok});
  };
  const std::size_t n = r.degree;
  bool shapes = r.a.degree() == n && r.b.degree() == n && n > 0;
  add("degree", shapes);
  if (!shapes)
    return rep;
  Permutation b2 = r.b * r.b;
  Permutation ab2 = r.a * b2;
  add("a^3 = 1", r.a.pow(3).is_identity());
  add("b^4 = 1", r.b.pow(4).is_identity());
  add("(a*b^2)^2 = 1", ab2.pow(2).is_identity());
  auto lens = (r.a * r.b).cycle_lengths();
  add("a*b is an n-cycle",
      std::count(lens.begin(), lens.end(), n) == 1);
  add("order(a) = 3", r.a.order() == 3);
  add("order(b) = 4", r.b.order() == 4);
  add("order(a*b^2) = 2", ab2.order() == 2);
  add("|<a, b^2>| = 6", group_order({r.a, b2}) == 6);
  if (r.kind == SpecialKind::special)
    add("b fixes n", r.b[static_cast<Point>(n - 1)] == n - 1);
  return rep;
}

inline Homomorphism to_homomorphism(const SpecialRep &r) {
  return Homomorphism{r.degree, {r.a, r.b}};
}

/// chi(S3 *_{C2} C4) = 1/6 + 1/4 - 1/2.
inline Rational sister_euler_char() { return Rational(-1, 12); }

/// Rank 1 + |Q|/12 of the free kernel of Gamma -> Q, faithful on factors.
inline std::uint64_t kernel_rank_prediction(std::uint64_t order_q) {
  if (order_q == 0 || order_q % 12 != 0)
    throw std::invalid_argument("kernel_rank_prediction: 12 must divide |Q|");
  return 1 + order_q / 12;
}

/// 1 + |Q|/12 - |Q|/n: kernel rank minus the |Q|/n relators added by
/// (ab)^n. May be negative, in which case it says nothing.
inline std::int64_t gamma_n_relator_bound(std::uint64_t order_q, std::uint64_t n) {
  if (order_q == 0 || order_q % 12 != 0)
    throw std::invalid_argument("gamma_n_relator_bound: 12 must divide |Q|");
  if (n == 0 || order_q % n != 0)
    throw std::invalid_argument("gamma_n_relator_bound: n must divide |Q|");
  return 1 + static_cast<std::int64_t>(order_q / 12) -
         static_cast<std::int64_t>(order_q / n);
}

} // namespace coverhunter
