#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "amalgam.hpp"
#include "orbifold.hpp"
#include "search.hpp"
#include "surgery.hpp"
#include "survey.hpp"

namespace coverhunter {

/// Process exit status; one code per outcome class.
enum ExitCode : int {
  kExitFound = 0,
  kExitNotFound = 1,
  kExitParseError = 2,
  kExitResourceLimit = 3,
};

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes via a temporary file in the same directory and renames it over
/// the target.
inline void write_file_atomic(const std::string &path, const std::string &content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(
                      std::chrono::steady_clock::now().time_since_epoch().count());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out)
      throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

struct SearchConfig {
  std::string input;
  std::optional<std::size_t> max_index;
  std::vector<std::uint64_t> abelian_exponents{2, 3};
  std::optional<std::vector<std::string>> simple_targets;
  std::uint64_t screen_prime = kScreenPrime;
  std::string cert_out; // empty: print to the output stream
  SearchLimits limits;
};

inline Strategy strategy_from(const SearchConfig &cfg) {
  Strategy s;
  for (auto e : cfg.abelian_exponents)
    s.tactics.emplace_back(AbelianCover{e});
  std::size_t k = cfg.max_index.value_or(12);
  s.tactics.emplace_back(LowIndex{std::min<std::size_t>(k, 6), true});
  s.tactics.emplace_back(
      SimpleQuotient{cfg.simple_targets.value_or(default_simple_targets())});
  if (k > 6)
    s.tactics.emplace_back(LowIndex{k, true});
  s.limits = cfg.limits;
  s.limits.screen_prime = cfg.screen_prime;
  return s;
}

/// Outcome of a search with its exit status.
struct SearchRun {
  int status = kExitNotFound;
  std::optional<Certificate> certificate;
  std::vector<std::string> diagnostics;
};

inline SearchRun run_search(const Presentation &p, const SearchConfig &cfg) {
  SearchRun run;
  try {
    auto out = search_pipeline(p, strategy_from(cfg));
    if (auto *c = std::get_if<Certificate>(&out)) {
      run.status = kExitFound;
      run.certificate = std::move(*c);
    } else {
      auto &nf = std::get<NotFound>(out);
      run.diagnostics = nf.diagnostics;
      run.status = nf.hit_limit ? kExitResourceLimit : kExitNotFound;
    }
  } catch (const ResourceLimit &e) {
    run.status = kExitResourceLimit;
    run.diagnostics.emplace_back(e.what());
  }
  return run;
}

inline int cmd_search(const SearchConfig &cfg, std::ostream &out, std::ostream &err) {
  Presentation p;
  try {
    p = parse_presentation(read_file(cfg.input));
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::runtime_error &e) {
    err << e.what() << "\n";
    return kExitParseError;
  }
  if (!is_prime(cfg.screen_prime)) {
    err << "screen prime " << cfg.screen_prime << " is not prime\n";
    return kExitParseError;
  }
  SearchRun run = run_search(p, cfg);
  for (const auto &d : run.diagnostics)
    err << "  " << d << "\n";
  if (!run.certificate) {
    out << (run.status == kExitResourceLimit ? "resource limit reached" : "not found")
        << "\n";
    return run.status;
  }
  const auto &c = *run.certificate;
  std::string text = to_vhc(c);
  if (cfg.cert_out.empty()) {
    out << text;
  } else {
    write_file_atomic(cfg.cert_out, text);
    out << "found: degree " << c.hom.degree << ", betti " << c.betti
        << ", certificate written to " << cfg.cert_out << "\n";
  }
  return kExitFound;
}

inline int cmd_verify(const std::string &path, std::ostream &out, std::ostream &err) {
  Certificate c;
  try {
    c = parse_vhc(read_file(path));
  } catch (const CertificateError &e) {
    err << "FAILED " << e.invariant() << ": " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::runtime_error &e) {
    err << e.what() << "\n";
    return kExitParseError;
  }
  auto rep = verify_certificate(c);
  if (!rep.ok) {
    err << "FAILED " << rep.failed_invariant << ": " << rep.message << "\n";
    return kExitNotFound;
  }
  out << "OK: index " << rep.index << ", betti " << rep.recomputed_betti << "\n";
  return kExitFound;
}

inline void print_slopes(const std::vector<Slope> &slopes, std::ostream &out) {
  for (const auto &s : slopes)
    out << to_string(s) << "\n";
}

inline int cmd_whitehead_scan(std::int64_t bound, std::ostream &out) {
  print_slopes(whitehead_exceptional_set(bound), out);
  return kExitFound;
}

inline int cmd_fig8_scan(std::ostream &out) {
  print_slopes(fig8_exceptional_set(), out);
  return kExitFound;
}

inline int cmd_special_rep(std::size_t n, std::ostream &out, std::ostream &err) {
  SpecialRep r;
  try {
    r = special_rep(n);
  } catch (const std::invalid_argument &e) {
    err << e.what() << "\n";
    return kExitParseError;
  }
  out << "n " << n << " (" << to_string(r.kind) << ")\n";
  out << "a = " << to_cycle_string(r.a) << "\n";
  out << "b = " << to_cycle_string(r.b) << "\n";
  auto rep = verify_special(r);
  for (const auto &c : rep.checks)
    out << (c.passed ? "  pass  " : "  FAIL  ") << c.name << "\n";
  return rep.ok() ? kExitFound : kExitNotFound;
}

inline std::string mat_string(const Mat2ModP &m) {
  return "[[" + std::to_string(m.a) + "," + std::to_string(m.b) + "],[" +
         std::to_string(m.c) + "," + std::to_string(m.d) + "]]";
}

inline int cmd_congruence(long a1, long a2, long a3, const std::string &gamma_text,
                          long n, std::uint64_t prime_bound, std::ostream &out,
                          std::ostream &err) {
  Word gamma;
  try {
    gamma = parse_word(gamma_text, {"x1", "x2"});
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParseError;
  }
  std::optional<CongruenceQuotient> cq;
  try {
    cq = congruence_quotient(a1, a2, a3, gamma, n, prime_bound);
  } catch (const std::invalid_argument &e) {
    err << e.what() << "\n";
    return kExitParseError;
  }
  if (!cq) {
    out << "not found for primes <= " << prime_bound << "\n";
    return kExitNotFound;
  }
  out << "p " << cq->p << "\n";
  out << "traces " << cq->traces[0] << " " << cq->traces[1] << " " << cq->traces[2]
      << "\n";
  out << "X1 = " << mat_string(cq->x1) << "\n";
  out << "X2 = " << mat_string(cq->x2) << "\n";
  out << "x1 = " << to_cycle_string(cq->images.images[0]) << "\n";
  out << "x2 = " << to_cycle_string(cq->images.images[1]) << "\n";
  Mat2ModP x12 = cq->x1 * cq->x2;
  Mat2ModP g = evaluate_word(std::vector<Mat2ModP>{cq->x1, cq->x2}, gamma);
  const std::pair<const char *, std::pair<Mat2ModP, long>> checks[] = {
      {"x1", {cq->x1, a1}}, {"x2", {cq->x2, a2}}, {"x1*x2", {x12, a3}},
      {"gamma", {g, n}}};
  bool ok = true;
  for (const auto &[name, mo] : checks) {
    bool pass = has_projective_order(mo.first, static_cast<std::uint64_t>(mo.second));
    ok = ok && pass;
    out << (pass ? "  pass  " : "  FAIL  ") << "order(" << name << ") = " << mo.second
        << "\n";
  }
  return ok ? kExitFound : kExitNotFound;
}

/// Base group and distinguished word for the gamma-n experiments.
struct GammaBase {
  Presentation presentation;
  Word gamma;
};

inline GammaBase gamma_base(const std::string &name, const std::vector<long> &orders = {}) {
  if (name == "sister")
    return {sister_gamma_presentation(), Word{1, 2}};
  if (name == "hp1")
    return {parse_presentation("<a,b | a^2, b^3, (a*b)^7>"), Word{1, 2, -1, -2}};
  if (name == "hp2")
    return {parse_presentation("<a,b | a^2, b^4, (a*b)^5>"), Word{1, 2, 2}};
  if (name == "hp3")
    return {parse_presentation("<a,b | a^3, b^3, (a*b)^4>"), Word{1, -2}};
  if (name == "triangle") {
    if (orders.size() != 3)
      throw std::invalid_argument("triangle base needs three cone orders");
    return {triangle_presentation(orders[0], orders[1], orders[2]),
            Word{1, 2, -1, -2}};
  }
  throw std::invalid_argument("unknown base '" + name + "'");
}

struct GammaNRow {
  long n = 0;
  bool closed = false;
  std::uint64_t order = 0;
  std::optional<Certificate> certificate;
  std::string note;
};

inline GammaNRow gamma_n_row(const GammaBase &base, long n, const SearchLimits &lim) {
  GammaNRow row;
  row.n = n;
  Presentation pn = quotient_presentation(base.presentation, base.gamma, n);
  auto tc = todd_coxeter(pn, {}, lim.max_cosets);
  if (auto *t = std::get_if<CosetTable>(&tc)) {
    row.closed = true;
    row.order = t->index();
    return row;
  }
  SearchConfig cfg;
  cfg.limits = lim;
  SearchRun run = run_search(pn, cfg);
  row.certificate = std::move(run.certificate);
  if (!row.certificate)
    row.note = run.status == kExitResourceLimit ? "resource limit" : "not found";
  return row;
}

inline int cmd_gamma_n(const std::string &base_name, const std::vector<long> &orders,
                       std::optional<std::string> gamma_text, long from, long to,
                       std::ostream &out, std::ostream &err) {
  GammaBase base;
  try {
    base = gamma_base(base_name, orders);
    if (gamma_text)
      base.gamma = parse_word(*gamma_text, base.presentation.generator_names);
  } catch (const std::exception &e) {
    err << e.what() << "\n";
    return kExitParseError;
  }
  if (from < 1 || to < from) {
    err << "need 1 <= from <= to\n";
    return kExitParseError;
  }
  out << "base " << to_string(base.presentation) << ", gamma "
      << format_word(base.gamma, base.presentation.generator_names) << "\n";
  bool all = true;
  for (long n = from; n <= to; ++n) {
    GammaNRow row = gamma_n_row(base, n, SearchLimits{});
    out << "n " << n << ": ";
    if (row.closed) {
      out << "finite, order " << row.order << "\n";
    } else if (row.certificate) {
      auto rep = verify_certificate(*row.certificate);
      out << "certificate degree " << row.certificate->hom.degree << ", index "
          << rep.index << ", betti " << row.certificate->betti
          << (rep.ok ? ", verified" : ", VERIFICATION FAILED") << "\n";
      all = all && rep.ok;
    } else {
      out << "unresolved (" << row.note << ")\n";
      all = false;
    }
  }
  return all ? kExitFound : kExitNotFound;
}

/// The sister-manifold chain: pi_1(N) -> Gamma -> Gamma_n -> certificate.
inline int cmd_sister(long n, const std::string &cert_out, std::ostream &out,
                      std::ostream &err) {
  if (n < 10) {
    err << "sister: n must be >= 10\n";
    return kExitParseError;
  }
  Presentation pn = sister_manifold_presentation();
  Presentation gamma = sister_gamma_presentation();
  AmalgamNormalizer nz(sister_amalgam_spec());
  out << "pi_1(N) = " << to_string(pn) << "\n";
  out << "Gamma = " << to_string(gamma) << " = S3 *_C2 C4\n";
  bool ok = true;
  for (const auto &r : pn.relators) {
    NormalForm nf = nz.normal_form(r);
    out << "  relator " << format_word(r, pn.generator_names) << " -> "
        << (nf.is_trivial() ? "trivial" : nz.to_string(nf)) << "\n";
    ok = ok && nf.is_trivial();
  }
  out << "  a -> a, b -> b is " << (ok ? "a surjection" : "NOT a homomorphism")
      << "\n";
  out << "mu -> a*b\n";
  if (!ok)
    return kExitNotFound;
  Presentation gn = sister_gamma_n(n);
  out << "Gamma_" << n << " = " << to_string(gn) << "\n";
  if (n >= 12) {
    SpecialRep r = special_rep(static_cast<std::size_t>(n));
    std::uint64_t q = group_order({r.a, r.b});
    out << "special representation of degree " << n << ", |Q| = " << q << "\n";
    if (q % 12 == 0 && q % static_cast<std::uint64_t>(n) == 0)
      out << "relator-count bound on the kernel betti: "
          << gamma_n_relator_bound(q, static_cast<std::uint64_t>(n)) << "\n";
  }
  SearchConfig cfg;
  SearchRun run = run_search(gn, cfg);
  if (!run.certificate) {
    for (const auto &d : run.diagnostics)
      err << "  " << d << "\n";
    out << "no certificate found\n";
    return run.status;
  }
  auto rep = verify_certificate(*run.certificate);
  out << "certificate: degree " << run.certificate->hom.degree << ", index "
      << rep.index << ", betti " << run.certificate->betti
      << (rep.ok ? ", verified" : ", VERIFICATION FAILED") << "\n";
  for (std::size_t i = 0; i < run.certificate->hom.images.size(); ++i)
    out << "  " << gn.generator_names[i] << " -> "
        << to_cycle_string(run.certificate->hom.images[i]) << "\n";
  if (!cert_out.empty())
    write_file_atomic(cert_out, to_vhc(*run.certificate));
  return rep.ok ? kExitFound : kExitNotFound;
}

inline int cmd_survey(const std::string &records_path, const std::string &report_path,
                      std::ostream &out, std::ostream &err) {
  std::vector<SurveyRecord> records;
  try {
    records = parse_records_csv(read_file(records_path));
  } catch (const std::exception &e) {
    err << e.what() << "\n";
    return kExitParseError;
  }
  if (records.empty()) {
    err << "no records\n";
    return kExitParseError;
  }
  std::string report = survey_report_csv(records);
  write_file_atomic(report_path, report);
  out << records.size() << " records, report written to " << report_path << "\n";
  return kExitFound;
}

} // namespace coverhunter
