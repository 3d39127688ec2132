#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "silmarils/cli.hpp"
#include "silmarils/two_party.hpp"

namespace fs = std::filesystem;
using namespace silmarils;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"silmarils"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("silmarils_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("exit code mapping") {
  CHECK(cli::exit_code_for(ErrorCode::IoError) == 3);
  CHECK(cli::exit_code_for(ErrorCode::MalformedSignature) == 4);
  CHECK(cli::exit_code_for(ErrorCode::InvalidHex) == 4);
  CHECK(cli::exit_code_for(ErrorCode::DegenerateExtraction) == 5);
  CHECK(cli::exit_code_for(ErrorCode::UnknownStrategy) == 6);
  CHECK(cli::exit_code_for(ErrorCode::PrimeTooLarge) == 2);
  CHECK(cli::exit_code_for(ErrorCode::Usage) == 2);
  CHECK(cli::profile_prime("toy-251")->value() == U256::from_u64(251));
  CHECK(cli::profile_prime("secure")->bits() == 255);
  CHECK_THROWS_AS(cli::profile_prime("toy-4"), Error);
}

TEST_CASE("keygen, sign, verify on the secure profile") {
  TempDir t;
  auto k = run({"keygen", "--profile", "secure", "--seed", "11", "--out", t / "keys"});
  REQUIRE(k.code == 0);
  CHECK(slurp(t / "keys/sk.hex").size() == 64 + 1);
  CHECK(slurp(t / "keys/pk.hex").size() == 128 + 1);
  CHECK(slurp(t / "keys/ksig.hex").size() == 64 + 1);
  CHECK(slurp(t / "keys/params.txt").starts_with("profile=secure\n"));

  write(t / "msg", "pay 10 to alice");
  REQUIRE(run({"sign", "--keys", t / "keys", "--msg", t / "msg", "--seed", "1", "--out", t / "sig"}).code == 0);
  CHECK(slurp(t / "sig").size() == 320 + 1);
  auto v = run({"verify", "--keys", t / "keys", "--msg", t / "msg", "--sig", t / "sig"});
  CHECK(v.code == 0);
  CHECK(v.out == "accept\n");

  write(t / "other", "pay 11 to alice");
  CHECK(run({"verify", "--keys", t / "keys", "--msg", t / "other", "--sig", t / "sig"}).code == 1);

  std::string hex = slurp(t / "sig");
  write(t / "short", hex.substr(0, 100));
  CHECK(run({"verify", "--keys", t / "keys", "--msg", t / "msg", "--sig", t / "short"}).code == 4);
  write(t / "junk", "zz" + hex.substr(2));
  CHECK(run({"verify", "--keys", t / "keys", "--msg", t / "msg", "--sig", t / "junk"}).code == 4);
  CHECK(run({"verify", "--keys", t / "missing", "--msg", t / "msg", "--sig", t / "sig"}).code == 3);
}

TEST_CASE("forge-dv output verifies, forge-public-r only under the weak verifier") {
  TempDir t;
  REQUIRE(run({"keygen", "--profile", "toy-251", "--seed", "5", "--out", t / "k"}).code == 0);
  write(t / "m", "anything");
  int accepted = 0;
  for (int s = 0; s < 20; ++s) {
    REQUIRE(run({"forge-dv", "--keys", t / "k", "--msg", t / "m", "--seed", std::to_string(s), "--out", t / "f"}).code ==
            0);
    accepted += run({"verify", "--keys", t / "k", "--msg", t / "m", "--sig", t / "f"}).code == 0;
  }
  CHECK(accepted == 20);

  REQUIRE(run({"forge-public-r", "--keys", t / "k", "--msg", t / "m", "--seed", "3", "--out", t / "p"}).code == 0);
  CHECK(run({"verify", "--keys", t / "k", "--msg", t / "m", "--sig", t / "p", "--weak-public-r"}).code == 0);
}

TEST_CASE("toy-13 keys use one-byte elements") {
  TempDir t;
  auto k = run({"keygen", "--profile", "toy-13", "--seed", "2", "--out", t / "k"});
  REQUIRE(k.code == 0);
  CHECK(k.out.find("element_bytes=1") != std::string::npos);
  CHECK(slurp(t / "k/sk.hex").size() == 3);
  CHECK(slurp(t / "k/pk.hex").size() == 5);
  write(t / "m", "x");
  REQUIRE(run({"sign", "--keys", t / "k", "--msg", t / "m", "--seed", "4", "--out", t / "s"}).code == 0);
  CHECK(slurp(t / "s").size() == 11);
}

TEST_CASE("a fixed seed makes every command deterministic") {
  TempDir a, b;
  for (const TempDir* t : {&a, &b}) {
    REQUIRE(run({"keygen", "--profile", "toy-1009", "--seed", "99", "--out", *t / "k"}).code == 0);
    write(*t / "m", "det");
  }
  for (const char* f : {"sk.hex", "pk.hex", "ksig.hex", "params.txt"}) CHECK(slurp(a / "k/" + f) == slurp(b / "k/" + f));
  auto s1 = run({"sign", "--keys", a / "k", "--msg", a / "m", "--seed", "1"});
  auto s2 = run({"sign", "--keys", b / "k", "--msg", b / "m", "--seed", "1"});
  CHECK(s1.out == s2.out);
  auto s3 = run({"sign", "--keys", a / "k", "--msg", a / "m", "--seed", "2"});
  CHECK(s1.out != s3.out);

  auto x1 = run({"sim3p", "--profile", "toy-251", "--adversary", "inconsistent-line", "--trials", "50", "--seed", "7",
                 "--out", a / "log"});
  auto x2 = run({"sim3p", "--profile", "toy-251", "--adversary", "inconsistent-line", "--trials", "50", "--seed", "7",
                 "--out", b / "log"});
  CHECK(x1.code == 0);
  CHECK(slurp(a / "log") == slurp(b / "log"));
  CHECK(slurp(a / "log").find("round=1 sender=P1 channel=private:P2") != std::string::npos);

  auto st1 = run({"stats", "--profile", "toy-13", "--suite", "core", "--trials", "2000", "--seed", "3"});
  auto st2 = run({"stats", "--profile", "toy-13", "--suite", "core", "--trials", "2000", "--seed", "3"});
  CHECK(st1.out == st2.out);
  CHECK(st1.code == 0);
}

TEST_CASE("extract pins the family with a hint") {
  TempDir t;
  REQUIRE(run({"keygen", "--profile", "toy-251", "--seed", "8", "--out", t / "k"}).code == 0);
  write(t / "m", "extract me");
  REQUIRE(run({"sign", "--keys", t / "k", "--msg", t / "m", "--seed", "6", "--out", t / "s"}).code == 0);
  auto free = run({"extract", "--keys", t / "k", "--msg", t / "m", "--sig", t / "s"});
  REQUIRE(free.code == 0);
  CHECK(free.out.find("ratio=") != std::string::npos);
  auto pinned = run({"extract", "--keys", t / "k", "--msg", t / "m", "--sig", t / "s", "--hint-d", "05"});
  REQUIRE(pinned.code == 0);
  CHECK(pinned.out.find("d=05\n") != std::string::npos);
  CHECK(run({"extract", "--keys", t / "k", "--msg", t / "m", "--sig", t / "s", "--hint-d", "05", "--hint-s", "01"})
            .code == 2);
  CHECK(run({"extract", "--keys", t / "k", "--msg", t / "m", "--sig", t / "s", "--hint-d", "00"}).code == 5);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"sim3p", "--profile", "toy-13", "--adversary", "nope"}).code == 6);
  CHECK(run({"sim3p", "--profile", "toy-99"}).code == 2);
  CHECK(run({"stats", "--profile", "secure", "--suite", "secrecy"}).code == 2);
  CHECK(run({"stats", "--profile", "toy-13", "--suite", "bogus", "--seed", "1"}).code == 2);
  CHECK(run({"keygen", "--profile", "toy-13", "--seed", "notaseed", "--out", "/tmp/x"}).code == 2);
  auto list = run({"strategies"});
  CHECK(list.code == 0);
  CHECK(list.out.find("substitute-guess-k1 role=P2") != std::string::npos);
}
