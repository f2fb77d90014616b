#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

/// Runs the CLI through the shell; stderr is folded into out unless split.
Outcome cli(const std::string& args, bool with_stderr = true) {
  const std::string cmd = std::string("'") + ROOFFLOP_CLI + "' " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string script(const std::string& name) { return std::string("'") + ROOFFLOP_SCRIPTS + "/" + name + "'"; }

}  // namespace

TEST(Cli, Cohomology) {
  const Outcome r = cli("cohomology --space E_D4 'O(-4,-4)'");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, "C in degree 9\n");
  EXPECT_EQ(cli("cohomology --space E_D4 'O(-1,0)'").out, "0 in all degrees\n");
}

TEST(Cli, RhomWithAmbient) {
  const Outcome r = cli("rhom --space E_D4 --ambient blowup 'O(1,-1)' 'U+^v'");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, "C in degree 0\n");
}

TEST(Cli, JsonMode) {
  const Outcome r = cli("--format json rhom --space R S S", false);
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("space"), "R");
  EXPECT_EQ(j.at("ambient"), "plain");
  EXPECT_EQ(j.at("value").at("exact"), true);
  EXPECT_EQ(j.at("value").at("dims").at("0"), 1);
}

TEST(Cli, BadExpressionPointsAtTheOffset) {
  const Outcome r = cli("cohomology --space E_D4 'O(1,,2)'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("error:"), std::string::npos);
  EXPECT_NE(r.out.find("  O(1,,2)\n      ^\n"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("cohomology 'O'").code, 2);
  EXPECT_EQ(cli("cohomology --space Nowhere O").code, 2);
  EXPECT_EQ(cli("rhom --space E_D4 O").code, 2);
  EXPECT_EQ(cli("--format yaml cohomology --space E_D4 O").code, 2);
  EXPECT_EQ(cli("verify /nonexistent/x.mut").code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, Lemmas) {
  const Outcome r = cli("lemmas --which all");
  EXPECT_EQ(r.code, 0) << r.out;
  for (int i = 1; i <= 6; ++i) EXPECT_NE(r.out.find("van (" + std::to_string(i) + ") PASS"), std::string::npos) << i;
  EXPECT_NE(r.out.find("van2 (1) PASS"), std::string::npos);
  EXPECT_NE(r.out.find("van2 (2) PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifyWritesTheCertificate) {
  const auto out = std::filesystem::temp_directory_path() / "roofflop_cli_cert.json";
  const Outcome r = cli("verify " + script("g2dagger.mut") + " -o '" + out.string() + "'");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("g2dagger: PASS\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("comparison: AGREE"), std::string::npos);
  std::ifstream in(out);
  const json cert = json::parse(in);
  EXPECT_EQ(cert.at("verdict"), "PASS");
  const Outcome j = cli("--format json verify " + script("g2dagger.mut"), false);
  EXPECT_EQ(json::parse(j.out), cert);
  std::filesystem::remove(out);
}

TEST(Cli, FailingScriptExitsOne) {
  const auto tmp = std::filesystem::temp_directory_path() / "roofflop_cli_bad.mut";
  std::ofstream(tmp) << "space E_D4\nsod O | O(1,0)\nstep exchange 0\n";
  const Outcome r = cli("verify '" + tmp.string() + "'");
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  std::ofstream(tmp) << "space E_D4\nsod O | O(1,\n";
  const Outcome p = cli("verify '" + tmp.string() + "'");
  EXPECT_EQ(p.code, 2) << p.out;
  EXPECT_NE(p.out.find("line 2"), std::string::npos) << p.out;
  EXPECT_NE(p.out.find("^"), std::string::npos);
  std::filesystem::remove(tmp);
}
