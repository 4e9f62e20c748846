#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "coset.hpp"
#include "linalg.hpp"

namespace coverhunter {

/// Sparse integer relation matrix: each row a sorted list of (column, value).
struct SparseRelations {
  using Row = std::vector<std::pair<std::uint32_t, std::int64_t>>;
  std::size_t cols = 0;
  std::vector<Row> rows;

  [[nodiscard]] IntegerMatrix dense() const {
    IntegerMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (auto [c, v] : rows[i])
        m(i, c) = static_cast<long>(v);
    return m;
  }
};

/// Relation matrix of H_1(H) from Reidemeister-Schreier rewriting. Columns
/// are the Schreier generators left after collapsing a spanning tree of the
/// coset graph, so the cokernel is the abelianization of H.
struct AbelianizedPresentation {
  std::size_t schreier_generator_count = 0;
  SparseRelations relations;

  [[nodiscard]] IntegerMatrix matrix() const { return relations.dense(); }
};

/// Builds the abelianized Reidemeister-Schreier matrix. The spanning tree is
/// breadth first from coset 0, columns taken in order (g1, g1^-1, g2, ...).
inline AbelianizedPresentation rs_abelianized_matrix(const Presentation &p,
                                                     const CosetTable &t) {
  if (!t.is_complete())
    throw std::invalid_argument("rs_abelianized_matrix: incomplete table");
  if (t.generator_count() != p.generator_count())
    throw std::invalid_argument("rs_abelianized_matrix: generator mismatch");
  const std::size_t k = t.index();
  const auto g = static_cast<std::size_t>(p.generator_count());
  // edge (c, x) for positive generator x: index c*g + (x-1)
  std::vector<bool> tree(k * g, false);
  {
    std::vector<bool> seen(k, false);
    std::vector<std::size_t> queue{0};
    seen[0] = true;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      std::size_t c = queue[i];
      for (std::size_t col = 0; col < 2 * g; ++col) {
        auto d = static_cast<std::size_t>(t.entry(c, col));
        if (seen[d])
          continue;
        seen[d] = true;
        queue.push_back(d);
        std::size_t gen = col / 2;
        if (col % 2 == 0)
          tree[c * g + gen] = true;
        else
          tree[d * g + gen] = true;
      }
    }
    if (queue.size() != k)
      throw std::invalid_argument("rs_abelianized_matrix: table not transitive");
  }
  std::vector<std::int64_t> colidx(k * g, -1);
  std::size_t ncols = 0;
  for (std::size_t e = 0; e < k * g; ++e)
    if (!tree[e])
      colidx[e] = static_cast<std::int64_t>(ncols++);

  AbelianizedPresentation out;
  out.schreier_generator_count = ncols;
  out.relations.cols = ncols;
  std::set<SparseRelations::Row> seen_rows;
  std::vector<std::int64_t> acc(ncols, 0);
  std::vector<std::uint32_t> touched;
  for (const auto &r : p.relators) {
    for (std::size_t c0 = 0; c0 < k; ++c0) {
      std::size_t c = c0;
      for (int x : r) {
        std::size_t gen = static_cast<std::size_t>(std::abs(x)) - 1;
        std::size_t e;
        std::int64_t sign;
        if (x > 0) {
          e = c * g + gen;
          sign = 1;
          c = static_cast<std::size_t>(t.entry(c, 2 * gen));
        } else {
          c = static_cast<std::size_t>(t.entry(c, 2 * gen + 1));
          e = c * g + gen;
          sign = -1;
        }
        if (colidx[e] >= 0) {
          auto col = static_cast<std::uint32_t>(colidx[e]);
          if (acc[col] == 0)
            touched.push_back(col);
          acc[col] += sign;
        }
      }
      SparseRelations::Row row;
      std::sort(touched.begin(), touched.end());
      for (auto col : touched) {
        if (acc[col] != 0)
          row.emplace_back(col, acc[col]);
        acc[col] = 0;
      }
      touched.clear();
      if (!row.empty() && seen_rows.insert(row).second)
        out.relations.rows.push_back(std::move(row));
    }
  }
  return out;
}

namespace detail {

/// Pivots on +-1 entries (sparsest first), deleting the pivot row and column.
/// Each step is a unimodular change of basis, so the cokernel is preserved.
/// Returns the reduced dense matrix and the number of eliminated pivots.
struct ReducedRelations {
  IntegerMatrix matrix;
  std::size_t eliminated = 0;
};

inline bool checked_axpy(std::int64_t a, std::int64_t f, std::int64_t b,
                         std::int64_t &out) {
  // out = a - f*b
  std::int64_t prod;
  if (__builtin_mul_overflow(f, b, &prod))
    return false;
  return !__builtin_sub_overflow(a, prod, &out);
}

inline ReducedRelations unit_pivot_reduce(const SparseRelations &m) {
  using Row = SparseRelations::Row;
  std::vector<Row> rows = m.rows;
  std::vector<bool> row_alive(rows.size(), true), col_alive(m.cols, true);
  std::vector<std::vector<std::uint32_t>> col_rows(m.cols);
  for (std::uint32_t i = 0; i < rows.size(); ++i)
    for (auto [c, v] : rows[i])
      col_rows[c].push_back(i);

  using Key = std::pair<std::size_t, std::uint32_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
  for (std::uint32_t i = 0; i < rows.size(); ++i)
    queue.emplace(rows[i].size(), i);

  std::size_t eliminated = 0;
  auto has_col = [&](std::uint32_t r, std::uint32_t c) -> std::int64_t {
    auto it = std::lower_bound(
        rows[r].begin(), rows[r].end(), c,
        [](const auto &e, std::uint32_t col) { return e.first < col; });
    return it != rows[r].end() && it->first == c ? it->second : 0;
  };

  while (!queue.empty()) {
    auto [len, i] = queue.top();
    queue.pop();
    if (!row_alive[i] || len != rows[i].size())
      continue;
    if (rows[i].empty()) {
      row_alive[i] = false;
      continue;
    }
    // Unit entry whose column is shortest.
    std::optional<std::uint32_t> pivot;
    std::size_t best = SIZE_MAX;
    for (auto [c, v] : rows[i]) {
      if (v != 1 && v != -1)
        continue;
      auto &cr = col_rows[c];
      std::erase_if(cr, [&](std::uint32_t r) {
        return !row_alive[r] || has_col(r, c) == 0;
      });
      if (cr.size() < best) {
        best = cr.size();
        pivot = c;
      }
    }
    if (!pivot)
      continue;
    const std::uint32_t j = *pivot;
    const std::int64_t aij = has_col(i, j);
    bool complete = true;
    std::vector<std::uint32_t> users = col_rows[j];
    for (std::uint32_t k : users) {
      if (k == i)
        continue;
      std::int64_t akj = has_col(k, j);
      if (akj == 0)
        continue;
      std::int64_t f = akj * aij; // row_k -= f * row_i clears column j
      Row merged;
      merged.reserve(rows[k].size() + rows[i].size());
      bool ok = true;
      std::size_t a = 0, b = 0;
      const Row &rk = rows[k], &ri = rows[i];
      while ((a < rk.size() || b < ri.size()) && ok) {
        if (b == ri.size() || (a < rk.size() && rk[a].first < ri[b].first)) {
          merged.push_back(rk[a++]);
        } else if (a == rk.size() || ri[b].first < rk[a].first) {
          std::int64_t v = 0;
          ok = checked_axpy(0, f, ri[b].second, v);
          merged.emplace_back(ri[b++].first, v);
        } else {
          std::int64_t v = 0;
          ok = checked_axpy(rk[a].second, f, ri[b].second, v);
          if (v != 0)
            merged.emplace_back(rk[a].first, v);
          ++a, ++b;
        }
      }
      if (!ok) {
        complete = false;
        continue;
      }
      for (auto [c, v] : merged)
        if (has_col(k, c) == 0)
          col_rows[c].push_back(k);
      rows[k] = std::move(merged);
      queue.emplace(rows[k].size(), k);
    }
    if (!complete) {
      queue.emplace(rows[i].size(), i);
      continue;
    }
    row_alive[i] = false;
    col_alive[j] = false;
    col_rows[j].clear();
    ++eliminated;
  }

  std::vector<std::int64_t> newcol(m.cols, -1);
  std::size_t nc = 0;
  for (std::size_t c = 0; c < m.cols; ++c)
    if (col_alive[c])
      newcol[c] = static_cast<std::int64_t>(nc++);
  std::set<Row> distinct;
  for (std::uint32_t i = 0; i < rows.size(); ++i)
    if (row_alive[i] && !rows[i].empty())
      distinct.insert(rows[i]);
  ReducedRelations out{IntegerMatrix(distinct.size(), nc), eliminated};
  std::size_t r = 0;
  for (const auto &row : distinct) {
    for (auto [c, v] : row)
      out.matrix(r, static_cast<std::size_t>(newcol[c])) = static_cast<long>(v);
    ++r;
  }
  return out;
}

} // namespace detail

enum class BettiMode { screen, certify };

struct BettiReport {
  std::size_t betti = 0;
  /// Elementary divisors > 1 of the torsion subgroup; empty when trivial or
  /// when not computed (see torsion_known).
  std::vector<mpz_class> torsion;
  bool torsion_known = false;
  std::optional<std::uint64_t> screened_prime;
  bool certified_over_Q = false;
};

/// Largest reduced matrix (entries) on which the Smith form is attempted.
inline constexpr std::size_t kTorsionEntryCap = 40'000;

/// Betti number of the group whose H_1 is the cokernel of `ap`.
inline BettiReport betti_of(const AbelianizedPresentation &ap, BettiMode mode,
                            std::uint64_t prime = kScreenPrime) {
  auto reduced = detail::unit_pivot_reduce(ap.relations);
  const IntegerMatrix &m = reduced.matrix;
  BettiReport rep;
  if (mode == BettiMode::screen) {
    rep.betti = m.cols() - rank_mod_p(m, prime);
    rep.screened_prime = prime;
    return rep;
  }
  rep.betti = m.cols() - rank_over_Q(m).rank;
  rep.certified_over_Q = true;
  if (m.rows() * m.cols() <= kTorsionEntryCap) {
    auto snf = smith_normal_form(m);
    for (auto &d : snf.divisors)
      if (d > 1)
        rep.torsion.push_back(d);
    rep.torsion_known = true;
  }
  return rep;
}

inline BettiReport betti(const Presentation &p, const CosetTable &t,
                         BettiMode mode, std::uint64_t prime = kScreenPrime) {
  return betti_of(rs_abelianized_matrix(p, t), mode, prime);
}

} // namespace coverhunter
