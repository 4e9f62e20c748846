#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "homology.hpp"

namespace coverhunter {

enum class SubgroupSelector { stab1, kernel, table };

/// A claim that some finite-index subgroup has positive betti number, with
/// everything needed to re-check it.
struct Certificate {
  Presentation presentation;
  Homomorphism hom;
  SubgroupSelector selector = SubgroupSelector::stab1;
  CosetTable table; // only for SubgroupSelector::table
  std::uint64_t screen_prime = kScreenPrime;
  std::size_t betti = 0;
  std::optional<std::vector<mpz_class>> torsion;

  friend bool operator==(const Certificate &, const Certificate &) = default;
};

/// Failure to parse a certificate, tagged with the invariant concerned.
class CertificateError : public std::runtime_error {
public:
  CertificateError(std::string invariant, const std::string &what)
      : std::runtime_error(invariant + ": " + what),
        invariant_(std::move(invariant)) {}
  [[nodiscard]] const std::string &invariant() const noexcept {
    return invariant_;
  }

private:
  std::string invariant_;
};

inline std::string to_vhc(const Certificate &c) {
  std::ostringstream os;
  os << "vhc 1\n";
  os << "presentation " << to_string(c.presentation) << "\n";
  os << "degree " << c.hom.degree << "\n";
  for (std::size_t i = 0; i < c.hom.images.size(); ++i)
    os << "gen " << c.presentation.generator_names[i] << " = "
       << to_cycle_string(c.hom.images[i]) << "\n";
  switch (c.selector) {
  case SubgroupSelector::stab1:
    os << "subgroup stab 1\n";
    break;
  case SubgroupSelector::kernel:
    os << "subgroup kernel\n";
    break;
  case SubgroupSelector::table:
    os << "subgroup table\n";
    for (std::size_t r = 0; r < c.table.index(); ++r) {
      for (int g = 1; g <= c.table.generator_count(); ++g)
        os << (g > 1 ? " " : "") << c.table.act(r, g) + 1;
      os << "\n";
    }
    break;
  }
  os << "screen-prime " << c.screen_prime << "\n";
  os << "betti-q " << c.betti << "\n";
  if (c.torsion && !c.torsion->empty()) {
    os << "torsion ";
    for (std::size_t i = 0; i < c.torsion->size(); ++i)
      os << (i ? "," : "") << (*c.torsion)[i].get_str();
    os << "\n";
  }
  return os.str();
}

namespace detail {

inline std::uint64_t parse_count(std::string_view s, const std::string &field) {
  if (s.empty() || s.size() > 18)
    throw CertificateError(field, "expected a decimal number");
  std::uint64_t v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9')
      throw CertificateError(field, "expected a decimal number");
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  return v;
}

inline bool take_prefix(std::string_view &line, std::string_view prefix) {
  if (!line.starts_with(prefix))
    return false;
  line.remove_prefix(prefix.size());
  return true;
}

} // namespace detail

/// Parses VHC-v1 text. Structural problems throw CertificateError naming
/// the field.
inline Certificate parse_vhc(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (!line.empty())
      lines.push_back(line);
    if (nl == std::string_view::npos)
      break;
    text.remove_prefix(nl + 1);
  }
  std::size_t i = 0;
  auto next = [&](const std::string &field) -> std::string_view {
    if (i >= lines.size())
      throw CertificateError(field, "missing line");
    return lines[i++];
  };

  Certificate c;
  std::string_view line = next("version");
  if (!detail::take_prefix(line, "vhc "))
    throw CertificateError("version", "not a VHC certificate");
  if (line != "1")
    throw CertificateError("version", "unsupported version '" +
                                          std::string(line) + "'");
  line = next("presentation");
  if (!detail::take_prefix(line, "presentation "))
    throw CertificateError("presentation", "expected presentation line");
  try {
    c.presentation = parse_presentation(line);
  } catch (const ParseError &e) {
    throw CertificateError("presentation", e.what());
  }
  line = next("degree");
  if (!detail::take_prefix(line, "degree "))
    throw CertificateError("degree", "expected degree line");
  c.hom.degree = detail::parse_count(line, "degree");
  if (c.hom.degree == 0 || c.hom.degree > 100'000'000)
    throw CertificateError("degree", "degree out of range");
  for (const auto &name : c.presentation.generator_names) {
    line = next("permutation");
    std::string prefix = "gen " + name + " = ";
    if (!detail::take_prefix(line, prefix))
      throw CertificateError("permutation",
                             "expected image of generator " + name);
    std::uint64_t largest = 0, cur = 0;
    for (char ch : line) {
      if (ch >= '0' && ch <= '9') {
        cur = std::min<std::uint64_t>(cur * 10 + static_cast<std::uint64_t>(ch - '0'),
                                      1'000'000'000'000ULL);
        largest = std::max(largest, cur);
      } else {
        cur = 0;
      }
    }
    if (largest > c.hom.degree)
      throw CertificateError("degree", "generator " + name + " moves point " +
                                           std::to_string(largest) +
                                           " beyond the declared degree");
    try {
      c.hom.images.push_back(parse_cycles(line, c.hom.degree));
    } catch (const std::invalid_argument &e) {
      throw CertificateError("permutation",
                             "generator " + name + ": " + e.what());
    }
  }
  line = next("subgroup");
  if (line == "subgroup stab 1") {
    c.selector = SubgroupSelector::stab1;
  } else if (line == "subgroup kernel") {
    c.selector = SubgroupSelector::kernel;
  } else if (line == "subgroup table") {
    c.selector = SubgroupSelector::table;
    std::vector<std::vector<int>> rows;
    while (i < lines.size() && !lines[i].empty() && lines[i][0] >= '0' &&
           lines[i][0] <= '9') {
      std::vector<int> row;
      std::string_view l = lines[i++];
      while (!l.empty()) {
        auto sp = l.find(' ');
        row.push_back(static_cast<int>(
            detail::parse_count(l.substr(0, sp), "subgroup")));
        l = sp == std::string_view::npos ? std::string_view{} : l.substr(sp + 1);
      }
      if (row.size() != c.presentation.generator_names.size())
        throw CertificateError("subgroup", "table row has wrong width");
      rows.push_back(std::move(row));
    }
    const int gens = c.presentation.generator_count();
    c.table = CosetTable(gens, rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (int g = 0; g < gens; ++g) {
        int d = rows[r][static_cast<std::size_t>(g)] - 1;
        if (d < 0 || static_cast<std::size_t>(d) >= rows.size())
          throw CertificateError("subgroup", "table entry out of range");
        c.table.set(r, 2 * static_cast<std::size_t>(g), d);
        c.table.set(static_cast<std::size_t>(d), 2 * static_cast<std::size_t>(g) + 1,
                    static_cast<int>(r));
      }
  } else {
    throw CertificateError("subgroup", "unknown subgroup selector");
  }
  line = next("screen-prime");
  if (!detail::take_prefix(line, "screen-prime "))
    throw CertificateError("screen-prime", "expected screen-prime line");
  c.screen_prime = detail::parse_count(line, "screen-prime");
  line = next("betti-q");
  if (!detail::take_prefix(line, "betti-q "))
    throw CertificateError("betti-q", "expected betti-q line");
  c.betti = detail::parse_count(line, "betti-q");
  if (i < lines.size()) {
    line = lines[i++];
    if (!detail::take_prefix(line, "torsion "))
      throw CertificateError("torsion", "unexpected line");
    std::vector<mpz_class> t;
    while (!line.empty()) {
      auto comma = line.find(',');
      auto part = line.substr(0, comma);
      detail::parse_count(part, "torsion");
      t.emplace_back(std::string(part));
      line = comma == std::string_view::npos ? std::string_view{}
                                             : line.substr(comma + 1);
    }
    c.torsion = std::move(t);
  }
  if (i != lines.size())
    throw CertificateError("version", "trailing lines");
  return c;
}

struct VerificationReport {
  bool ok = false;
  std::string failed_invariant; // empty when ok
  std::string message;
  std::size_t index = 0;
  std::size_t recomputed_betti = 0;
};

/// Re-derives every claim of a certificate from scratch.
inline VerificationReport verify_certificate(const Certificate &c) {
  VerificationReport rep;
  auto fail = [&](std::string inv, std::string msg) {
    rep.ok = false;
    rep.failed_invariant = std::move(inv);
    rep.message = std::move(msg);
    return rep;
  };
  const Presentation &p = c.presentation;
  if (c.hom.images.size() != p.generator_names.size())
    return fail("permutation", "wrong number of generator images");
  for (const auto &img : c.hom.images)
    if (img.degree() != c.hom.degree)
      return fail("degree", "image degree differs from declared degree");
  if (c.hom.degree > 1) {
    bool top_moved = false;
    const auto top = static_cast<Point>(c.hom.degree - 1);
    for (const auto &g : c.hom.images)
      top_moved = top_moved || g[top] != top;
    if (!top_moved)
      return fail("degree", "no generator moves the last point " +
                                std::to_string(c.hom.degree));
  }
  for (std::size_t r = 0; r < p.relators.size(); ++r)
    if (!evaluate_word(c.hom, p.relators[r]).is_identity())
      return fail("relator", "relator " + std::to_string(r + 1) + " (" +
                                 format_word(p.relators[r], p.generator_names) +
                                 ") is not satisfied");
  {
    std::vector<bool> seen(c.hom.degree, false);
    std::vector<Point> queue{0};
    seen[0] = true;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (const auto &g : c.hom.images)
        if (!seen[g[queue[q]]]) {
          seen[g[queue[q]]] = true;
          queue.push_back(g[queue[q]]);
        }
    if (queue.size() != c.hom.degree)
      return fail("transitive", "action on " + std::to_string(c.hom.degree) +
                                " points is not transitive");
  }
  CosetTable t;
  try {
    switch (c.selector) {
    case SubgroupSelector::stab1:
      t = table_from_action(c.hom);
      break;
    case SubgroupSelector::kernel:
      t = pullback_subgroup(c.hom, PermGroup(c.hom.degree, {}));
      break;
    case SubgroupSelector::table:
      t = c.table;
      break;
    }
  } catch (const std::exception &e) {
    return fail("subgroup", e.what());
  }
  if (!t.is_valid_for(p))
    return fail("subgroup", "subgroup coset table does not close");
  if (c.selector == SubgroupSelector::table) {
    // The table subgroup must contain ker f: the diagonal action of
    // (f(x), T(x)) on both point sets generates a copy of f(G).
    const std::size_t d = c.hom.degree, m = t.index();
    std::vector<Permutation> diag;
    for (int g = 1; g <= p.generator_count(); ++g) {
      std::vector<Point> img(d + m);
      const auto &f = c.hom.images[static_cast<std::size_t>(g - 1)];
      for (std::size_t i = 0; i < d; ++i)
        img[i] = f[static_cast<Point>(i)];
      for (std::size_t i = 0; i < m; ++i)
        img[d + i] = static_cast<Point>(d + static_cast<std::size_t>(t.act(i, g)));
      diag.emplace_back(std::move(img));
    }
    if (group_order(diag) != group_order(c.hom.images))
      return fail("subgroup", "table subgroup does not contain the kernel of "
                              "the homomorphism");
  }
  rep.index = t.index();
  if (!is_prime(c.screen_prime))
    return fail("screen-prime", "screen prime is not prime");
  auto b = betti(p, t, BettiMode::certify);
  rep.recomputed_betti = b.betti;
  if (b.betti != c.betti)
    return fail("betti-q", "stored " + std::to_string(c.betti) +
                               ", recomputed " + std::to_string(b.betti));
  if (c.torsion) {
    if (!b.torsion_known)
      return fail("torsion", "torsion claimed but too large to recheck");
    if (*c.torsion != b.torsion)
      return fail("torsion", "torsion divisors differ from recomputation");
  }
  if (c.betti < 1)
    return fail("betti-positive", "certified betti number is zero");
  rep.ok = true;
  return rep;
}

} // namespace coverhunter
