#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "groups.hpp"

namespace coverhunter {

/// One (manifold, group) observation.
struct SurveyRecord {
  std::string manifold_id;
  std::string group_name;
  bool has_cover = false;
  bool has_positive_betti_cover = false;
  std::vector<std::uint64_t> betti_values; // one per cover found
};

/// Groups Q(1), Q(2), ... in increasing order, ties broken by name.
struct GroupOrderTable {
  std::vector<std::pair<std::string, std::uint64_t>> groups;

  static GroupOrderTable from(std::vector<std::pair<std::string, std::uint64_t>> g) {
    std::sort(g.begin(), g.end(), [](const auto &x, const auto &y) {
      return std::tie(x.second, x.first) < std::tie(y.second, y.first);
    });
    for (std::size_t i = 1; i < g.size(); ++i)
      if (g[i].first == g[i - 1].first)
        throw std::invalid_argument("GroupOrderTable: duplicate group " + g[i].first);
    return GroupOrderTable{std::move(g)};
  }
};

inline void validate(const SurveyRecord &r) {
  if (r.has_positive_betti_cover && !r.has_cover)
    throw std::invalid_argument("record " + r.manifold_id + "/" + r.group_name +
                                ": positive betti cover without a cover");
  for (auto b : r.betti_values)
    if (b > 0 && !r.has_positive_betti_cover)
      throw std::invalid_argument("record " + r.manifold_id + "/" +
                                  r.group_name +
                                  ": positive betti value but has_pos_betti false");
}

/// Percentages as exact rationals; undefined when the denominator is empty.
struct Table2Rates {
  mpq_class hit, havcov;
  std::optional<mpq_class> sucrat1, sucrat2;
};

namespace detail {

inline std::set<std::string> manifold_ids(const std::vector<SurveyRecord> &rs) {
  std::set<std::string> ids;
  for (const auto &r : rs)
    ids.insert(r.manifold_id);
  return ids;
}

/// Manifolds (by id) satisfying a predicate for the given group.
template <class Pred>
std::set<std::string> manifolds_with(const std::vector<SurveyRecord> &rs,
                                     const std::string &group, Pred pred) {
  std::set<std::string> ids;
  for (const auto &r : rs)
    if (r.group_name == group && pred(r))
      ids.insert(r.manifold_id);
  return ids;
}

} // namespace detail

/// Hit, HavCov, SucRat1 and SucRat2 for one group. Every manifold in the
/// record set counts in the denominator of Hit and HavCov.
inline Table2Rates table2_rates(const std::vector<SurveyRecord> &records,
                                const std::string &group) {
  if (records.empty())
    throw std::invalid_argument("table2_rates: empty record set");
  const auto total = static_cast<long>(detail::manifold_ids(records).size());
  const auto hits = static_cast<long>(
      detail::manifolds_with(records, group, [](const SurveyRecord &r) {
        return r.has_positive_betti_cover;
      }).size());
  const auto covered = static_cast<long>(
      detail::manifolds_with(records, group,
                             [](const SurveyRecord &r) { return r.has_cover; })
          .size());
  long covers = 0, positive = 0;
  for (const auto &r : records)
    if (r.group_name == group)
      for (auto b : r.betti_values) {
        ++covers;
        positive += b > 0;
      }
  Table2Rates t;
  t.hit = mpq_class(100 * hits, total);
  t.havcov = mpq_class(100 * covered, total);
  t.hit.canonicalize();
  t.havcov.canonicalize();
  if (covered > 0) {
    t.sucrat1 = mpq_class(100 * hits, covered);
    t.sucrat1->canonicalize();
  }
  if (covers > 0) {
    t.sucrat2 = mpq_class(100 * positive, covers);
    t.sucrat2->canonicalize();
  }
  return t;
}

/// Mean of all betti values recorded for the group, zeros included.
inline std::optional<mpq_class> mean_betti(const std::vector<SurveyRecord> &records,
                                           const std::string &group) {
  mpz_class sum = 0;
  long count = 0;
  for (const auto &r : records)
    if (r.group_name == group)
      for (auto b : r.betti_values) {
        sum += static_cast<unsigned long>(b);
        ++count;
      }
  if (count == 0)
    return std::nullopt;
  mpq_class m(sum, count);
  m.canonicalize();
  return m;
}

/// Proportions in [0, 1] for Q(n), n = 1, 2, ...
struct VCurvePoint {
  std::string group;
  mpq_class h, v, e, v_prime;
  std::optional<mpq_class> deviation; // undefined when V(n-1) = 1
};

inline std::vector<VCurvePoint> v_curves(const std::vector<SurveyRecord> &records,
                                         const GroupOrderTable &table) {
  if (table.groups.empty())
    throw std::invalid_argument("v_curves: empty group table");
  const auto total = static_cast<long>(detail::manifold_ids(records).size());
  std::vector<VCurvePoint> out;
  std::set<std::string> hit_so_far;
  mpq_class v_prev = 0, vp_prev = 0;
  for (const auto &[name, order] : table.groups) {
    auto hits = detail::manifolds_with(records, name, [](const SurveyRecord &r) {
      return r.has_positive_betti_cover;
    });
    hit_so_far.insert(hits.begin(), hits.end());
    VCurvePoint pt;
    pt.group = name;
    if (total > 0) {
      pt.h = mpq_class(static_cast<long>(hits.size()), total);
      pt.v = mpq_class(static_cast<long>(hit_so_far.size()), total);
    }
    pt.h.canonicalize();
    pt.v.canonicalize();
    pt.e = v_prev + (1 - v_prev) * pt.h;
    pt.v_prime = vp_prev + (1 - vp_prev) * pt.h;
    if (v_prev != 1)
      pt.deviation = mpq_class((pt.e - pt.v) / (1 - v_prev));
    out.push_back(pt);
    v_prev = pt.v;
    vp_prev = pt.v_prime;
  }
  return out;
}

enum class Indicator { has_cover, has_positive_betti_cover };

struct CorrelationMatrix {
  std::vector<std::string> groups;
  std::vector<std::vector<std::optional<double>>> r; // nullopt = undefined
  std::optional<double> average_off_diagonal;
};

/// Pearson correlations of the per-manifold indicator columns. Constant
/// columns give undefined off-diagonal entries, which the average skips.
inline CorrelationMatrix correlation_matrix(const std::vector<SurveyRecord> &records,
                                            Indicator ind,
                                            std::vector<std::string> groups = {}) {
  auto ids = detail::manifold_ids(records);
  if (ids.size() < 2)
    throw std::invalid_argument("correlation_matrix: need at least 2 manifolds");
  if (groups.empty()) {
    std::set<std::string> g;
    for (const auto &r : records)
      g.insert(r.group_name);
    groups.assign(g.begin(), g.end());
  }
  if (groups.size() < 2)
    throw std::invalid_argument("correlation_matrix: need at least 2 groups");
  std::map<std::string, std::size_t> row;
  for (const auto &id : ids)
    row.emplace(id, row.size());
  std::vector<std::vector<int>> x(groups.size(), std::vector<int>(ids.size(), 0));
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (const auto &r : records)
      if (r.group_name == groups[g] &&
          (ind == Indicator::has_cover ? r.has_cover : r.has_positive_betti_cover))
        x[g][row.at(r.manifold_id)] = 1;
  const auto n = static_cast<long>(ids.size());
  CorrelationMatrix m;
  m.groups = groups;
  m.r.assign(groups.size(), std::vector<std::optional<double>>(groups.size()));
  long double sum = 0;
  long defined = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    long si = std::accumulate(x[i].begin(), x[i].end(), 0L);
    if (si != 0 && si != n) // a constant column has no correlation, even with itself
      m.r[i][i] = 1.0;
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      long sx = 0, sy = 0, sxy = 0;
      for (std::size_t k = 0; k < ids.size(); ++k) {
        sx += x[i][k];
        sy += x[j][k];
        sxy += x[i][k] * x[j][k];
      }
      // Binary columns: sum of squares equals sum.
      mpz_class num = mpz_class(n) * sxy - mpz_class(sx) * sy;
      mpz_class dx = mpz_class(n) * sx - mpz_class(sx) * sx;
      mpz_class dy = mpz_class(n) * sy - mpz_class(sy) * sy;
      if (dx == 0 || dy == 0)
        continue;
      long double den = std::sqrt(static_cast<long double>(dx.get_d()) *
                                  static_cast<long double>(dy.get_d()));
      double v = static_cast<double>(static_cast<long double>(num.get_d()) / den);
      m.r[i][j] = m.r[j][i] = v;
      sum += v;
      ++defined;
    }
  }
  if (defined > 0)
    m.average_off_diagonal = static_cast<double>(sum / defined);
  return m;
}

struct LogLogFit {
  long double slope = 0, intercept = 0;
};

/// Least squares line through (log10 x, log10 y).
inline LogLogFit fit_loglog(const std::vector<std::pair<double, double>> &points) {
  std::vector<long double> lx, ly;
  for (auto [x, y] : points) {
    if (!(x > 0) || !(y > 0))
      throw std::invalid_argument("fit_loglog: inputs must be positive");
    lx.push_back(std::log10(static_cast<long double>(x)));
    ly.push_back(std::log10(static_cast<long double>(y)));
  }
  const auto n = static_cast<long double>(lx.size());
  if (lx.size() < 2)
    throw std::invalid_argument("fit_loglog: need at least 2 points");
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  long double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0)
    throw std::invalid_argument("fit_loglog: degenerate x values");
  LogLogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

/// Rounds half away from zero to the given number of decimals.
inline std::string round_decimal(const mpq_class &x, int decimals) {
  mpz_class scale = 1;
  for (int i = 0; i < decimals; ++i)
    scale *= 10;
  mpz_class num = x.get_num() * scale, den = x.get_den();
  bool neg = num < 0;
  if (neg)
    num = -num;
  mpz_class q = (2 * num + den) / (2 * den);
  std::string digits = q.get_str();
  if (decimals > 0) {
    if (digits.size() <= static_cast<std::size_t>(decimals))
      digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
  }
  return (neg && q != 0 ? "-" : "") + digits;
}

namespace detail {

/// Splits one CSV line, honouring double-quoted fields.
inline std::vector<std::string> split_csv_line(std::string_view line,
                                               std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted)
    throw std::invalid_argument("records line " + std::to_string(line_no) +
                                ": unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

inline bool parse_bool(std::string s, std::size_t line_no) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "1" || s == "true" || s == "yes")
    return true;
  if (s == "0" || s == "false" || s == "no")
    return false;
  throw std::invalid_argument("records line " + std::to_string(line_no) +
                              ": bad boolean '" + s + "'");
}

inline std::string csv_quote(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"')
      q += '"';
    q += c;
  }
  return q + "\"";
}

} // namespace detail

/// Records CSV with header manifold_id,group_name,has_cover,has_pos_betti,betti_list.
inline std::vector<SurveyRecord> parse_records_csv(std::string_view text) {
  std::vector<SurveyRecord> out;
  std::size_t line_no = 0;
  bool header = false;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF"))
      line.remove_prefix(3);
    if (line.empty())
      continue;
    auto f = detail::split_csv_line(line, line_no);
    if (!header) {
      const std::vector<std::string> expect{"manifold_id", "group_name", "has_cover",
                                            "has_pos_betti", "betti_list"};
      if (f != expect)
        throw std::invalid_argument("records: missing or wrong header");
      header = true;
      continue;
    }
    if (f.size() != 5)
      throw std::invalid_argument("records line " + std::to_string(line_no) +
                                  ": expected 5 fields");
    SurveyRecord r{f[0], f[1], detail::parse_bool(f[2], line_no),
                   detail::parse_bool(f[3], line_no), {}};
    std::string_view bl = f[4];
    while (!bl.empty()) {
      auto semi = bl.find(';');
      std::string part(bl.substr(0, semi));
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("records line " + std::to_string(line_no) +
                                    ": bad betti value '" + part + "'");
      r.betti_values.push_back(std::stoull(part));
      bl = semi == std::string_view::npos ? std::string_view{} : bl.substr(semi + 1);
    }
    try {
      validate(r);
    } catch (const std::invalid_argument &e) {
      throw std::invalid_argument("records line " + std::to_string(line_no) + ": " +
                                  e.what());
    }
    out.push_back(std::move(r));
  }
  if (!header)
    throw std::invalid_argument("records: missing header");
  return out;
}

/// Orders from named_group where the name is recognized; the rest follow
/// in name order with order 0.
inline GroupOrderTable group_table_for(const std::vector<SurveyRecord> &records) {
  std::set<std::string> names;
  for (const auto &r : records)
    names.insert(r.group_name);
  std::vector<std::pair<std::string, std::uint64_t>> known, unknown;
  for (const auto &n : names) {
    try {
      known.emplace_back(n, named_group(n).order());
    } catch (const std::exception &) {
      unknown.emplace_back(n, 0);
    }
  }
  auto t = GroupOrderTable::from(std::move(known));
  t.groups.insert(t.groups.end(), unknown.begin(), unknown.end());
  return t;
}

/// Report CSV: the rates table, the V-curve table and both correlation
/// matrices, as blocks separated by blank lines. Rates are percentages
/// rounded to one decimal.
inline std::string survey_report_csv(const std::vector<SurveyRecord> &records) {
  auto table = group_table_for(records);
  auto opt = [](const std::optional<mpq_class> &x, int d) {
    return x ? round_decimal(*x, d) : std::string("NA");
  };
  std::ostringstream os;
  os << "group,order,hit,havcov,sucrat1,sucrat2,mean_betti\n";
  for (const auto &[g, order] : table.groups) {
    auto t = table2_rates(records, g);
    os << detail::csv_quote(g) << "," << (order ? std::to_string(order) : "NA")
       << "," << round_decimal(t.hit, 1) << "," << round_decimal(t.havcov, 1) << ","
       << opt(t.sucrat1, 1) << "," << opt(t.sucrat2, 1) << ","
       << opt(mean_betti(records, g), 1) << "\n";
  }
  os << "\nn,group,H,V,E,V_prime,deviation\n";
  auto curves = v_curves(records, table);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto &c = curves[i];
    auto pct = [](const mpq_class &x) { return round_decimal(mpq_class(100 * x), 1); };
    os << i + 1 << "," << detail::csv_quote(c.group) << "," << pct(c.h) << ","
       << pct(c.v) << "," << pct(c.e) << "," << pct(c.v_prime) << ","
       << (c.deviation ? pct(*c.deviation) : std::string("NA")) << "\n";
  }
  if (table.groups.size() >= 2 && detail::manifold_ids(records).size() >= 2) {
    std::vector<std::string> names;
    for (const auto &g : table.groups)
      names.push_back(g.first);
    for (auto ind : {Indicator::has_cover, Indicator::has_positive_betti_cover}) {
      auto m = correlation_matrix(records, ind, names);
      auto cell = [](std::optional<double> v) {
        if (!v)
          return std::string("NA");
        mpq_class q(*v);
        return round_decimal(q, 2);
      };
      os << "\n"
         << (ind == Indicator::has_cover ? "correlation_has_cover"
                                          : "correlation_has_pos_betti");
      for (const auto &n : names)
        os << "," << detail::csv_quote(n);
      os << "\n";
      for (std::size_t i = 0; i < names.size(); ++i) {
        os << detail::csv_quote(names[i]);
        for (std::size_t j = 0; j < names.size(); ++j)
          os << "," << cell(m.r[i][j]);
        os << "\n";
      }
      os << "average_off_diagonal," << cell(m.average_off_diagonal) << "\n";
    }
  }
  return os.str();
}

} // namespace coverhunter
