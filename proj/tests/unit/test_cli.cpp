#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(OVERTURE_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("overture_cli_" + name);
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("cli pmf query") {
  const Result r = cli("pmf otp.ovt --marginal \"m[z]@2\"");
  CHECK(r.code == 0);
  CHECK(r.out == "m[z]@2=0 weight=1/2\nm[z]@2=1 weight=1/2\n");
  const Result c = cli("pmf otp.ovt --marginal \"s[x]@1\" --given \"m[z]@2=0\"");
  CHECK(c.code == 0);
  CHECK(c.out == "s[x]@1=0 weight=1/2\ns[x]@1=1 weight=1/2\n");
}

TEST_CASE("cli run") {
  const Result r = cli("run otp.ovt --inputs \"s[x]@1=1 r[y]@1=0\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("m[z]@2=1") != std::string::npos);
}

TEST_CASE("cli verify exit codes") {
  SUBCASE("pass") {
    const Result r = cli("verify shamir_add3.ovt --property nimo --all-partitions");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("PASS nimo", 0) == 0);
  }
  SUBCASE("fail with a witness") {
    const Result r = cli("verify leaky.ovt --property nimo --corrupt 2");
    CHECK(r.code == 1);
    CHECK(r.out.rfind("FAIL nimo", 0) == 0);
    CHECK(r.out.find("witness") != std::string::npos);
  }
  SUBCASE("usage errors") {
    CHECK(cli("verify otp.ovt --property bogus").code == 2);
    CHECK(cli("verify otp.ovt --property nimo --corrupt 9").code == 2);
    CHECK(cli("--field 5 verify otp.ovt --property nimo --corrupt 2").code == 2);
    CHECK(cli("nosuchcommand").code == 2);
  }
  SUBCASE("parse errors") {
    const auto bad = scratch("bad.ovt", "m[z]@2 := (s[x] xor)@1;");
    const Result r = cli("pmf " + bad.string());
    CHECK(r.code == 2);
    CHECK(r.out.find("1:20") != std::string::npos);
  }
}

TEST_CASE("cli expand and datalog export") {
  const auto out = std::filesystem::temp_directory_path() / "overture_cli_and.ovt";
  CHECK(cli("expand gmw_and.pre --lib gmw.pre -o " + out.string()).code == 0);
  CHECK(cli("verify " + out.string() + " --property correct --functionality and2.fun").code == 0);
  const auto dl = std::filesystem::temp_directory_path() / "overture_cli_otp.dl";
  CHECK(cli("export-datalog otp.ovt -o " + dl.string()).code == 0);
  const Result r = cli("lhm " + dl.string() + " --facts \"s_x_c1=1,r_y_c1=0\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("m[z]@2=1") != std::string::npos);
}
