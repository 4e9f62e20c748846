#include <gtest/gtest.h>

#include <coverhunter/driver.hpp>

#include <filesystem>
#include <sstream>

using namespace coverhunter;
namespace fs = std::filesystem;

namespace {

class DriverTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vhsearch_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string &name, const std::string &content) {
    auto p = (dir_ / name).string();
    write_file_atomic(p, content);
    return p;
  }
  std::string path(const std::string &name) { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

} // namespace

TEST_F(DriverTest, SearchThenVerify) {
  SearchConfig cfg;
  cfg.input = file("trefoil.txt", "<a,b | a*b*a*b^-1*a^-1*b^-1>\n");
  cfg.cert_out = path("trefoil.vhc");
  EXPECT_EQ(cmd_search(cfg, out_, err_), kExitFound);
  EXPECT_EQ(cmd_verify(cfg.cert_out, out_, err_), kExitFound);
  EXPECT_NE(out_.str().find("OK: index 2"), std::string::npos) << out_.str();
}

TEST_F(DriverTest, TamperedCertificateNamesInvariant) {
  SearchConfig cfg;
  cfg.input = file("g.txt", "<a,b | a^3, b^3, (a*b)^4, (a*b^-1)^6>");
  cfg.cert_out = path("g.vhc");
  ASSERT_EQ(cmd_search(cfg, out_, err_), kExitFound);
  std::string text = read_file(cfg.cert_out);
  auto at = text.find("betti-q ");
  ASSERT_NE(at, std::string::npos);
  text.insert(at + 8, "1");
  auto bad = file("bad.vhc", text);
  EXPECT_EQ(cmd_verify(bad, out_, err_), kExitNotFound);
  EXPECT_NE(err_.str().find("FAILED betti-q"), std::string::npos) << err_.str();
}

TEST_F(DriverTest, VerifyRejectsGarbage) {
  EXPECT_EQ(cmd_verify(file("x.vhc", "hello\n"), out_, err_), kExitParseError);
  EXPECT_EQ(cmd_verify(path("missing.vhc"), out_, err_), kExitParseError);
}

TEST_F(DriverTest, SearchExitCodes) {
  SearchConfig cfg;
  cfg.input = file("c5.txt", "<a | a^5>");
  EXPECT_EQ(cmd_search(cfg, out_, err_), kExitNotFound);
  cfg.input = file("bad.txt", "<a | a^>");
  EXPECT_EQ(cmd_search(cfg, out_, err_), kExitParseError);
  cfg.input = file("a5.txt", "<a,b | a^2, b^3, (a*b)^5>");
  cfg.limits.time_limit_s = 0;
  EXPECT_EQ(cmd_search(cfg, out_, err_), kExitResourceLimit) << err_.str();
}

TEST_F(DriverTest, Scans) {
  EXPECT_EQ(cmd_whitehead_scan(100, out_), kExitFound);
  auto s = out_.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 28);
  std::ostringstream f8;
  EXPECT_EQ(cmd_fig8_scan(f8), kExitFound);
  EXPECT_EQ(f8.str(), "0\ninf\n1\n-1\n2\n-2\n");
}

TEST_F(DriverTest, SpecialRep) {
  EXPECT_EQ(cmd_special_rep(13, out_, err_), kExitFound);
  EXPECT_EQ(out_.str().find("FAIL"), std::string::npos);
  EXPECT_EQ(cmd_special_rep(9, out_, err_), kExitParseError);
}

TEST_F(DriverTest, Congruence) {
  EXPECT_EQ(cmd_congruence(2, 3, 7, "x1*x2*x1^-1*x2^-1", 7, 100000, out_, err_), kExitFound);
  EXPECT_NE(out_.str().find("13"), std::string::npos);
  EXPECT_EQ(cmd_congruence(2, 3, 7, "x1*x2*x1^-1*x2^-1", 3, 1000, out_, err_), kExitNotFound);
  EXPECT_EQ(cmd_congruence(2, 3, 7, "x1*y", 3, 1000, out_, err_), kExitParseError);
}

TEST_F(DriverTest, GammaN) {
  EXPECT_EQ(cmd_gamma_n("sister", {}, std::nullopt, 1, 6, out_, err_), kExitFound);
  EXPECT_NE(out_.str().find("120"), std::string::npos) << out_.str();
}

TEST_F(DriverTest, Survey) {
  auto in = file("r.csv", "manifold_id,group_name,has_cover,has_pos_betti,betti_list\n"
                          "m1,A5,1,1,1\nm2,A5,0,0,\n");
  auto rep = path("report.csv");
  EXPECT_EQ(cmd_survey(in, rep, out_, err_), kExitFound);
  EXPECT_NE(read_file(rep).find("A5,60,50.0,50.0,100.0,100.0,1.0"), std::string::npos);
  EXPECT_EQ(cmd_survey(file("e.csv", "nope\n"), rep, out_, err_), kExitParseError);
}

TEST_F(DriverTest, AtomicWriteReplaces) {
  auto p = file("a.txt", "one");
  write_file_atomic(p, "two");
  EXPECT_EQ(read_file(p), "two");
  std::size_t n = 0;
  for ([[maybe_unused]] const auto &e : fs::directory_iterator(dir_))
    ++n;
  EXPECT_EQ(n, 1u);
}
