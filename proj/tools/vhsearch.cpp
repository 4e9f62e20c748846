// vhsearch: command line front end for the coverhunter library.

#include <CLI11.hpp>

#include <coverhunter/driver.hpp>

#include <iostream>

using namespace coverhunter;

namespace {

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos)
      comma = s.size();
    if (comma > start)
      out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Search finitely presented groups for covers with positive betti number"};
  app.require_subcommand(1);

  SearchConfig search;
  std::string abelian = "2,3", simple;
  std::size_t max_index = 12;
  auto *s = app.add_subcommand("search", "Search a presentation file for a certified cover");
  s->add_option("FILE", search.input, "Presentation file")->required();
  s->add_option("--max-index", max_index, "Largest low-index subgroup index");
  s->add_option("--abelian-exp", abelian, "Comma-separated primes for abelian covers");
  s->add_option("--simple", simple, "Comma-separated simple quotient targets, e.g. A5,L2(7)");
  s->add_option("--screen-prime", search.screen_prime, "Prime for the betti screen");
  s->add_option("--cert", search.cert_out, "Write the certificate here");

  std::string cert_path;
  auto *v = app.add_subcommand("verify", "Re-verify a certificate");
  v->add_option("CERT", cert_path, "Certificate file")->required();

  std::int64_t bound = 100;
  auto *w = app.add_subcommand("whitehead-scan", "Exceptional slopes of the Whitehead fillings");
  w->add_option("--bound", bound, "Scan |p|, |q| <= bound")->check(CLI::PositiveNumber);

  auto *f = app.add_subcommand("fig8-scan", "Exceptional slopes of the figure-8 knot");

  std::size_t rep_n = 0;
  auto *sr = app.add_subcommand("special-rep", "Special representation of S3 *_C2 C4");
  sr->add_option("N", rep_n, "Degree")->required();

  long a1 = 0, a2 = 0, a3 = 0, order = 0;
  std::string gamma;
  std::uint64_t prime_bound = 100000;
  auto *cg = app.add_subcommand("congruence", "PSL(2,p) quotient of a triangle group");
  cg->add_option("A1", a1)->required();
  cg->add_option("A2", a2)->required();
  cg->add_option("A3", a3)->required();
  cg->add_option("--gamma", gamma, "Word in x1, x2")->required();
  cg->add_option("--order", order, "Required projective order of gamma")->required();
  cg->add_option("--prime-bound", prime_bound, "Largest prime tried");

  std::vector<std::string> base;
  long from = 1, to = 1;
  std::string gn_gamma;
  auto *gn = app.add_subcommand("gamma-n", "Finiteness or certificates for G/<<gamma^n>>");
  gn->add_option("BASE", base, "sister | hp1 | hp2 | hp3 | triangle A1 A2 A3")->required();
  gn->add_option("--from", from)->required();
  gn->add_option("--to", to)->required();
  gn->add_option("--gamma", gn_gamma, "Override the distinguished word");

  long sister_n = 10;
  std::string sister_cert;
  auto *si = app.add_subcommand("sister", "The sister of the figure-8 complement, end to end");
  si->add_option("--n", sister_n, "Filling order n >= 10");
  si->add_option("--cert", sister_cert, "Write the certificate here");

  std::string records, report;
  auto *sv = app.add_subcommand("survey", "Rates, V-curves and correlations of survey records");
  sv->add_option("RECORDS", records, "Records CSV")->required();
  sv->add_option("--report", report, "Report CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitParseError;
  }

  try {
    if (*s) {
      search.max_index = max_index;
      std::vector<std::uint64_t> exps;
      for (const auto &x : split_list(abelian))
        exps.push_back(std::stoull(x));
      search.abelian_exponents = exps;
      if (!simple.empty())
        search.simple_targets = split_list(simple);
      return cmd_search(search, std::cout, std::cerr);
    }
    if (*v)
      return cmd_verify(cert_path, std::cout, std::cerr);
    if (*w)
      return cmd_whitehead_scan(bound, std::cout);
    if (*f)
      return cmd_fig8_scan(std::cout);
    if (*sr)
      return cmd_special_rep(rep_n, std::cout, std::cerr);
    if (*cg)
      return cmd_congruence(a1, a2, a3, gamma, order, prime_bound, std::cout, std::cerr);
    if (*gn) {
      std::vector<long> orders;
      for (std::size_t i = 1; i < base.size(); ++i)
        orders.push_back(std::stol(base[i]));
      return cmd_gamma_n(base[0], orders,
                         gn_gamma.empty() ? std::nullopt : std::optional(gn_gamma),
                         from, to, std::cout, std::cerr);
    }
    if (*si)
      return cmd_sister(sister_n, sister_cert, std::cout, std::cerr);
    if (*sv)
      return cmd_survey(records, report, std::cout, std::cerr);
  } catch (const ResourceLimit &e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResourceLimit;
  } catch (const std::invalid_argument &e) {
    std::cerr << e.what() << "\n";
    return kExitParseError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  }
  return kExitParseError;
}
