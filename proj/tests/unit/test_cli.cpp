#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(RATSOS_CLI) + " " + args + " 2>&1";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ratsos_cli_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Cli, CheckExitCodes) {
  EXPECT_EQ(run("check 'x^4+2*x^3-18*x^2-12*x+117'").code, 0);
  EXPECT_EQ(run("check 'x^2-2*x+1'").code, 10);
  const Outcome neg = run("check 'x^2-3'");
  EXPECT_EQ(neg.code, 20);
  EXPECT_NE(neg.out.find("witness"), std::string::npos);
}

TEST(Cli, CheckStructured) {
  const Outcome r = run("check --output structured 'x^2+1'");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["classification"], "PositiveDefinite");
}

TEST(Cli, ParseErrorIsUsage) {
  const Outcome r = run("check 'x^2+'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("offset 4"), std::string::npos) << r.out;
  EXPECT_EQ(run("check").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("certify --strategy bogus 'x^2+1'").code, 2);
  EXPECT_EQ(run("certify --diag-grid 1,-1 'x^2+1'").code, 2);
}

TEST(Cli, CertifyText) {
  const Outcome r = run("certify 'x^4+2*x^3-18*x^2-12*x+117'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, "(x^2+x-10)^2 + (x+4)^2 + 1\n");
}

TEST(Cli, CertifyPinned) {
  const Outcome r = run("certify --pin '1,1;2:1=-1' 'x^6-2*x^5+4*x^4-6*x^3+6*x^2-4*x+2'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, "(x^3-x^2+x-1)^2 + (x^2-x+1/2)^2 + (x-1/2)^2 + 1/2\n");
  EXPECT_EQ(run("certify --pin '4,4' 'x^6-2*x^5+4*x^4-6*x^3+6*x^2-4*x+2'").code, 31);
  EXPECT_EQ(run("certify --pin '1' 'x^6+1'").code, 2);
}

TEST(Cli, CertifyNegativeAndWitness) {
  EXPECT_EQ(run("certify 'x^4-2*x^2'").code, 20);
  const Outcome w = run("certify --vars x,y 'x^4*y^2+x^2*y^4-3*x^2*y^2+1'");
  EXPECT_EQ(w.code, 30);
  EXPECT_NE(w.out.find("t^12"), std::string::npos) << w.out;
  const Outcome ws = run("certify --output structured --vars x,y 'x^4*y^2+x^2*y^4-3*x^2*y^2+1'");
  EXPECT_EQ(nlohmann::json::parse(ws.out)["forced_value"], "-3/1");
}

TEST(Cli, CertifyExhausted) {
  const Outcome r = run("certify --strategy core_zero 'x^6-2*x^5+4*x^4-6*x^3+6*x^2-4*x+2'");
  EXPECT_EQ(r.code, 31) << r.out;
}

TEST(Cli, FileInputAndVerifyRoundTrip) {
  const auto in = temp_file("in.txt");
  const auto cert = temp_file("cert.json");
  std::ofstream(in) << "x^10 - x + 1\n";
  const Outcome c = run("certify -f " + in.string() + " --out " + cert.string());
  ASSERT_EQ(c.code, 0) << c.out;
  EXPECT_EQ(run("verify " + cert.string()).code, 0);
  EXPECT_EQ(run("verify " + cert.string() + " 'x^10-x+2'").code, 1);

  std::ifstream f(cert);
  auto j = nlohmann::json::parse(f);
  j["constant"] = "1/3";
  std::ofstream(cert) << j.dump();
  EXPECT_EQ(run("verify " + cert.string()).code, 1);

  std::ofstream(cert) << "{ not json";
  EXPECT_EQ(run("verify " + cert.string()).code, 2);
  EXPECT_EQ(run("verify " + temp_file("missing.json").string()).code, 2);
  std::filesystem::remove(in);
  std::filesystem::remove(cert);
}

TEST(Cli, StructuredCertificateVerifiesInProcess) {
  const Outcome r = run("certify --output structured 'x^6+1'");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["constant"], "3807/4096");
  EXPECT_EQ(j["verified"], true);
}

TEST(Cli, LiftPrintsProjection) {
  const Outcome r = run("lift --strategy core_zero --vars x,y,z 'x^4+x^3*z+2*x^2*y^2+z^4'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("powers: (1,5,13)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("projected: t^52+t^16+2*t^12+t^4"), std::string::npos);
  EXPECT_NE(r.out.find("support: {2,6,14,26}"), std::string::npos);
  EXPECT_NE(r.out.find("2*(x*y)^2"), std::string::npos);
}

TEST(Cli, LiftPinned) {
  const Outcome r = run("lift --vars x,y --pin '1,9/4;15:9=1/2' 'x^6+2*x^5*y+5*x^2*y^4+4*x*y^5+y^6'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("1/8*(x^3)^2"), std::string::npos) << r.out;
}

TEST(Cli, Help) {
  const Outcome r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("certify"), std::string::npos);
}
