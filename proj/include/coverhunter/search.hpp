#pragma once

#include <chrono>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "certificate.hpp"
#include "groups.hpp"
#include "subgroups.hpp"

namespace coverhunter {

/// Wall-clock budget shared by all tactics of one run.
class Deadline {
public:
  explicit Deadline(double seconds)
      : end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(seconds))),
        seconds_(seconds) {}
  void check() const {
    if (std::chrono::steady_clock::now() > end_)
      throw ResourceLimit("time limit of " + std::to_string(seconds_) +
                          " s exceeded");
  }

private:
  std::chrono::steady_clock::time_point end_;
  double seconds_;
};

struct SearchLimits {
  std::size_t max_cosets = kDefaultMaxCosets;
  std::uint64_t max_nodes = kDefaultMaxNodes;
  std::uint64_t subgroup_order_bound = kDefaultSubgroupOrderBound;
  double time_limit_s = 600;
  std::uint64_t screen_prime = kScreenPrime;
};

/// Kernel of G -> H_1(G; F_p) = (Z/p)^k as a coset table (index p^k), or
/// nullopt when k = 0.
inline std::optional<CosetTable>
abelian_cover_subgroup(const Presentation &p, std::uint64_t exponent,
                       std::size_t max_cosets = kDefaultMaxCosets) {
  if (!is_prime(exponent))
    throw std::invalid_argument("abelian_cover_subgroup: exponent must be prime");
  // The index-1 table: every generator fixes the single coset.
  const int gens = p.generator_count();
  CosetTable one(gens, 1);
  for (std::size_t col = 0; col < static_cast<std::size_t>(2 * gens); ++col)
    one.set(0, col, 0);
  IntegerMatrix m = rs_abelianized_matrix(p, one).matrix();
  auto basis = nullspace_mod_p(m, exponent);
  const std::size_t k = basis.size();
  if (k == 0)
    return std::nullopt;
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (size > max_cosets / exponent)
      throw ResourceLimit("abelian cover of index " + std::to_string(exponent) +
                          "^" + std::to_string(k) + " exceeds coset cap");
    size *= exponent;
  }
  // Generator g acts on (Z/p)^k by adding (basis_1[g], ..., basis_k[g]).
  Homomorphism f;
  f.degree = size;
  for (int g = 0; g < gens; ++g) {
    std::vector<Point> img(size);
    for (std::uint64_t x = 0; x < size; ++x) {
      std::uint64_t rest = x, y = 0, place = 1;
      for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t digit = rest % exponent;
        rest /= exponent;
        y += ((digit + basis[i][static_cast<std::size_t>(g)]) % exponent) * place;
        place *= exponent;
      }
      img[x] = static_cast<Point>(y);
    }
    f.images.emplace_back(std::move(img));
  }
  return table_from_action(f);
}

namespace detail {

/// Relabels a tuple of permutations by breadth-first search from `start`
/// and returns the concatenated images; minimal over starts it is a
/// canonical form under conjugation in Sym(m) for transitive tuples.
inline std::vector<Point> relabel_from(const std::vector<Permutation> &gens,
                                       Point start, std::size_t degree) {
  std::vector<int> label(degree, -1);
  std::vector<Point> order;
  label[start] = 0;
  order.push_back(start);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto &g : gens) {
      Point y = g[order[i]];
      if (label[y] < 0) {
        label[y] = static_cast<int>(order.size());
        order.push_back(y);
      }
    }
  for (Point x = 0; x < degree; ++x)
    if (label[x] < 0) {
      label[x] = static_cast<int>(order.size());
      order.push_back(x);
    }
  std::vector<Point> key;
  key.reserve(gens.size() * degree);
  for (const auto &g : gens)
    for (std::size_t i = 0; i < degree; ++i)
      key.push_back(static_cast<Point>(label[g[order[i]]]));
  return key;
}

inline std::vector<Point> conjugacy_key(const std::vector<Permutation> &gens,
                                        std::size_t degree) {
  std::vector<Point> best;
  for (Point s = 0; s < degree; ++s) {
    auto k = relabel_from(gens, s, degree);
    if (best.empty() || k < best)
      best = std::move(k);
  }
  return best;
}

/// Order forced on generator g by relators that are powers of g alone
/// (0 when unconstrained).
inline std::uint64_t forced_order(const Presentation &p, int g) {
  std::uint64_t o = 0;
  for (const auto &r : p.relators) {
    Word c = cyclic_reduce(r);
    if (c.empty())
      continue;
    bool pure = true;
    for (int x : c)
      pure = pure && std::abs(x) == g && x == c[0];
    if (pure)
      o = std::gcd(o, static_cast<std::uint64_t>(c.size()));
  }
  return o;
}

} // namespace detail

/// All surjections P -> target up to conjugation by the normalizer of the
/// target in Sym(m), sorted by canonical form.
inline std::vector<Homomorphism>
find_epimorphisms(const Presentation &p, const PermGroup &target,
                  std::uint64_t max_nodes = kDefaultMaxNodes,
                  std::uint64_t order_bound = kDefaultSubgroupOrderBound,
                  const Deadline *deadline = nullptr) {
  const int gens = p.generator_count();
  const std::size_t m = target.degree();
  if (gens == 0)
    return {};
  const std::uint64_t order = target.order();
  detail::ElementTable table(target, order_bound);
  std::vector<std::vector<std::uint32_t>> candidates(static_cast<std::size_t>(gens));
  for (int g = 1; g <= gens; ++g) {
    std::uint64_t o = detail::forced_order(p, g);
    for (std::uint32_t e = 0; e < table.size(); ++e)
      if (o == 0 || o % table[e].order() == 0)
        candidates[static_cast<std::size_t>(g - 1)].push_back(e);
  }
  // Up to conjugation in the target, the first image is a class representative.
  {
    std::vector<bool> covered(table.size(), false);
    std::vector<std::uint32_t> reps;
    for (std::uint32_t e : candidates[0]) {
      if (covered[e])
        continue;
      reps.push_back(e);
      std::vector<std::uint32_t> queue{e};
      covered[e] = true;
      for (std::size_t i = 0; i < queue.size(); ++i)
        for (const auto &h : target.generators()) {
          auto j = table.index_of(table[queue[i]].conjugate_by(h));
          if (!covered[j]) {
            covered[j] = true;
            queue.push_back(j);
          }
        }
    }
    candidates[0] = std::move(reps);
  }
  // Relators grouped by the largest generator they use.
  std::vector<std::vector<const Word *>> checks(static_cast<std::size_t>(gens) + 1);
  for (const auto &r : p.relators)
    checks[static_cast<std::size_t>(r.max_generator())].push_back(&r);

  std::map<std::vector<Point>, Homomorphism> found;
  Homomorphism f;
  f.degree = m;
  f.images.assign(static_cast<std::size_t>(gens), Permutation::identity(m));
  std::uint64_t nodes = 0;
  auto rec = [&](auto &&self, int depth) -> void {
    if (++nodes > max_nodes)
      throw ResourceLimit("epimorphism search exceeded " +
                          std::to_string(max_nodes) + " nodes");
    if (deadline && (nodes & 1023) == 0)
      deadline->check();
    if (depth == gens) {
      if (group_order(f.images) != order)
        return;
      auto key = detail::conjugacy_key(f.images, m);
      found.emplace(std::move(key), f);
      return;
    }
    for (std::uint32_t e : candidates[static_cast<std::size_t>(depth)]) {
      f.images[static_cast<std::size_t>(depth)] = table[e];
      bool ok = true;
      for (const Word *r : checks[static_cast<std::size_t>(depth) + 1])
        if (!evaluate_word(f, *r).is_identity()) {
          ok = false;
          break;
        }
      if (ok)
        self(self, depth + 1);
    }
    f.images[static_cast<std::size_t>(depth)] = Permutation::identity(m);
  };
  rec(rec, 0);
  std::vector<Homomorphism> out;
  for (auto &[k, h] : found)
    out.push_back(std::move(h));
  return out;
}

struct ScanHit {
  PermGroup subgroup;
  CosetTable table;
  BettiReport report;
};

/// Scans subgroups U of Q = f(G) by increasing index, screening
/// f^-1(U) mod p and certifying screen hits over Q. Groups above the
/// enumeration bound are scanned along the base stabilizer chain instead.
inline std::optional<ScanHit>
intermediate_cover_scan(const Presentation &p, const Homomorphism &f,
                        const PermGroup &q, const SearchLimits &lim = {},
                        const Deadline *deadline = nullptr,
                        bool skip_whole_group = false) {
  std::vector<PermGroup> candidates;
  if (q.order() <= lim.subgroup_order_bound) {
    for (auto &cls : enumerate_subgroups(q, lim.subgroup_order_bound).classes)
      candidates.push_back(std::move(cls.group));
  } else {
    const std::size_t depth = q.chain().levels().size();
    for (std::size_t d = 0; d <= depth; ++d)
      candidates.push_back(q.base_stabilizer(d));
    candidates.front() = q;
  }
  for (const auto &u : candidates) {
    if (deadline)
      deadline->check();
    if (skip_whole_group && u.order() == q.order())
      continue;
    if (q.order() / u.order() > lim.max_cosets)
      throw ResourceLimit("intermediate cover index " +
                          std::to_string(q.order() / u.order()) +
                          " exceeds coset cap");
    CosetTable t = pullback_subgroup(f, u, lim.max_cosets);
    auto screen = betti(p, t, BettiMode::screen, lim.screen_prime);
    if (screen.betti == 0)
      continue;
    auto cert = betti(p, t, BettiMode::certify);
    if (cert.betti == 0)
      continue;
    cert.screened_prime = lim.screen_prime;
    return ScanHit{u, std::move(t), std::move(cert)};
  }
  return std::nullopt;
}

struct AbelianCover {
  std::uint64_t exponent = 2;
};
struct LowIndex {
  std::size_t max_index = 6;
  bool take_core = true;
};
struct SimpleQuotient {
  std::vector<std::string> targets = default_simple_targets();
};
using Tactic = std::variant<AbelianCover, LowIndex, SimpleQuotient>;

inline std::string describe(const Tactic &t) {
  return std::visit(
      [](const auto &x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AbelianCover>)
          return "AbelianCover(" + std::to_string(x.exponent) + ")";
        else if constexpr (std::is_same_v<T, LowIndex>)
          return "LowIndex(" + std::to_string(x.max_index) +
                 (x.take_core ? ", core)" : ")");
        else {
          std::string s = "SimpleQuotient(";
          for (std::size_t i = 0; i < x.targets.size(); ++i)
            s += (i ? "," : "") + x.targets[i];
          return s + ")";
        }
      },
      t);
}

struct Strategy {
  std::vector<Tactic> tactics;
  SearchLimits limits;
};

inline Strategy default_strategy() {
  return {{AbelianCover{2}, AbelianCover{3}, LowIndex{6, true},
           SimpleQuotient{}, LowIndex{12, true}},
          {}};
}

struct NotFound {
  std::vector<std::string> diagnostics;
  bool hit_limit = false; // some tactic stopped at a resource cap
};

using SearchOutcome = std::variant<Certificate, NotFound>;

/// Certificate for the subgroup K = f^-1(U) found by a scan. It keeps f;
/// K is named as the kernel, the stabilizer of point 1, or an explicit
/// coset table.
inline Certificate make_certificate(const Presentation &p,
                                    const Homomorphism &f, const PermGroup &q,
                                    const ScanHit &hit,
                                    std::uint64_t screen_prime) {
  Certificate c;
  c.presentation = p;
  c.screen_prime = screen_prime;
  c.betti = hit.report.betti;
  if (hit.report.torsion_known && !hit.report.torsion.empty())
    c.torsion = hit.report.torsion;
  const auto &u = hit.subgroup;
  bool stab_of_first = false;
  if (u.order() < q.order()) {
    bool fixes = true;
    for (const auto &g : u.generators())
      fixes = fixes && g[0] == 0;
    stab_of_first = fixes && u.order() * f.degree == q.order() &&
                    hit.table.index() == f.degree;
  }
  c.hom = f;
  if (u.order() == 1)
    c.selector = SubgroupSelector::kernel;
  else if (stab_of_first)
    c.selector = SubgroupSelector::stab1;
  else {
    c.selector = SubgroupSelector::table;
    c.table = hit.table;
  }
  return c;
}

/// Screens the subgroup of a coset table and certifies it over Q; the
/// certificate is the coset action with the stabilizer of the first coset.
inline std::optional<Certificate> certify_table(const Presentation &p,
                                                const CosetTable &t,
                                                std::uint64_t screen_prime) {
  if (betti(p, t, BettiMode::screen, screen_prime).betti == 0)
    return std::nullopt;
  auto cb = betti(p, t, BettiMode::certify);
  if (cb.betti == 0)
    return std::nullopt;
  Certificate c;
  c.presentation = p;
  c.hom = action_homomorphism(t);
  c.selector = SubgroupSelector::stab1;
  c.screen_prime = screen_prime;
  c.betti = cb.betti;
  if (cb.torsion_known && !cb.torsion.empty())
    c.torsion = cb.torsion;
  return c;
}

/// Runs the tactics in order and returns the first Q-certified cover.
inline SearchOutcome search_pipeline(const Presentation &p, const Strategy &s) {
  if (s.tactics.empty())
    throw std::invalid_argument("search_pipeline: empty strategy");
  const SearchLimits &lim = s.limits;
  Deadline deadline(lim.time_limit_s);
  NotFound nf;
  bool whole_group_screened = false;

  auto try_hom = [&](const Homomorphism &f) -> std::optional<Certificate> {
    PermGroup q = image_group(f);
    auto hit = intermediate_cover_scan(p, f, q, lim, &deadline,
                                       whole_group_screened);
    whole_group_screened = true;
    if (!hit)
      return std::nullopt;
    return make_certificate(p, f, q, *hit, lim.screen_prime);
  };

  for (const auto &tactic : s.tactics) {
    std::string name = describe(tactic);
    try {
      std::optional<Certificate> cert;
      if (auto *a = std::get_if<AbelianCover>(&tactic)) {
        auto t = abelian_cover_subgroup(p, a->exponent, lim.max_cosets);
        if (!t) {
          nf.diagnostics.push_back(name + ": H_1 has no " +
                                   std::to_string(a->exponent) + "-torsion quotient");
          continue;
        }
        cert = certify_table(p, *t, lim.screen_prime);
        if (!cert)
          nf.diagnostics.push_back(name + ": index " + std::to_string(t->index()) +
                                   " kernel has betti 0");
      } else if (auto *li = std::get_if<LowIndex>(&tactic)) {
        auto tables = low_index_subgroups(p, li->max_index, lim.max_nodes);
        std::stable_sort(tables.begin(), tables.end(),
                         [](const CosetTable &a, const CosetTable &b) {
                           return a.index() < b.index();
                         });
        std::size_t tried = 0;
        for (const auto &t : tables) {
          deadline.check();
          if (t.index() == 1 && whole_group_screened)
            continue;
          ++tried;
          if (li->take_core) {
            try {
              cert = try_hom(action_homomorphism(t));
            } catch (const ResourceLimit &e) {
              nf.hit_limit = true;
              nf.diagnostics.push_back(name + ": index " +
                                       std::to_string(t.index()) + " skipped (" +
                                       e.what() + ")");
            }
          } else {
            cert = certify_table(p, t, lim.screen_prime);
          }
          if (cert)
            break;
        }
        if (!cert)
          nf.diagnostics.push_back(name + ": " + std::to_string(tried) +
                                   " subgroup classes, none positive");
      } else if (auto *sq = std::get_if<SimpleQuotient>(&tactic)) {
        for (const auto &target_name : sq->targets) {
          PermGroup target = named_group(target_name);
          if (target.order() > lim.subgroup_order_bound) {
            nf.diagnostics.push_back(name + ": " + target_name +
                                     " exceeds the order bound");
            continue;
          }
          auto homs = find_epimorphisms(p, target, lim.max_nodes,
                                        lim.subgroup_order_bound, &deadline);
          for (const auto &f : homs) {
            try {
              cert = try_hom(f);
            } catch (const ResourceLimit &e) {
              nf.hit_limit = true;
              nf.diagnostics.push_back(name + ": " + target_name + " skipped (" +
                                       e.what() + ")");
            }
            if (cert)
              break;
          }
          if (cert)
            break;
          nf.diagnostics.push_back(name + ": " + target_name + ", " +
                                   std::to_string(homs.size()) +
                                   " epimorphisms, none positive");
        }
      }
      if (cert)
        return *cert;
    } catch (const ResourceLimit &e) {
      nf.hit_limit = true;
      deadline.check();
      nf.diagnostics.push_back(name + ": " + e.what());
    }
  }
  return nf;
}

} // namespace coverhunter
