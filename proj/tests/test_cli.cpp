#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "critreg/cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using crg::cli::kFail;
using crg::cli::kPass;
using crg::cli::kUsage;

namespace {

struct Run {
  int rc = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "critreg");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  std::ostringstream o, e;
  auto* ob = std::cout.rdbuf(o.rdbuf());
  auto* eb = std::cerr.rdbuf(e.rdbuf());
  Run r;
  r.rc = crg::cli::run(static_cast<int>(args.size()), argv.data());
  std::cout.rdbuf(ob);
  std::cerr.rdbuf(eb);
  r.out = o.str();
  r.err = e.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// the JSON document printed after the CSV block
nlohmann::json trailing_json(const std::string& out) {
  auto p = out.find("\n{");
  return nlohmann::json::parse(p == std::string::npos ? out : out.substr(p + 1));
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::current_path() / "cli_test_scratch" / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).rc == kUsage);
  CHECK(run({"density", "--bogus"}).rc == kUsage);
  CHECK(run({"no-such-command"}).rc == kUsage);
  CHECK(run({"density", "--set", "primes"}).rc == kUsage);
  CHECK(run({"word"}).rc == kUsage);
  CHECK(run({"word", "--identity", "a q"}).rc == kUsage);
  CHECK(run({"theorem-est", "--mode", "sideways"}).rc == kUsage);
  CHECK(run({"linear-growth", "--imax", "70"}).rc == kUsage);
  Run r = run({"density", "--bogus"});
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("version") {
  Run r = run({"--version"});
  CHECK(r.rc == kPass);
  CHECK(r.out.find(crg::cli::kVersion) != std::string::npos);
}

TEST_CASE("verdicts map to exit codes") {
  CHECK(run({"density", "--set", "evens", "--N", "10000", "--min", "0.4"}).rc == kPass);
  CHECK(run({"density", "--set", "evens", "--N", "10000", "--max", "0.4"}).rc == kFail);
  Run r = run({"density", "--set", "squares", "--N", "1000000"});
  CHECK(r.rc == kPass);
  auto j = trailing_json(r.out);
  CHECK(j.at("verdict") == "none");
  CHECK(j.at("result").at("final_ratio").get<double>() == doctest::Approx(1e-3));
  CHECK(j.at("result").at("trend") == "decreasing");
  CHECK(r.out.rfind("N,count,ratio\n", 0) == 0);
}

TEST_CASE("word subcommand") {
  CHECK(run({"word", "--identity", "a e a^-1 e^-2"}).out == "identity: true\n");
  CHECK(run({"word", "--identity", "b d b^-1 d^-1"}).out == "identity: false\n");
  CHECK(run({"word", "--abelianize", "a b^2 d^-1 e^5"}).out == "abelianization: (1, 2, 0, -1)\n");
  CHECK(run({"word", "--syllable", "a b a"}).out == "syllable length: 3\n");
  Run n = run({"word", "--normalize", "a a^-1 c"});
  CHECK(n.rc == kPass);
  CHECK(n.out.rfind("normal form: ", 0) == 0);
  CHECK(n.out == run({"word", "--normalize", "c"}).out);
  CHECK(n.out != run({"word", "--normalize", "c^2"}).out);
}

TEST_CASE("dry run prints the derived constants") {
  Run r = run({"build-phi", "--dry-run"});
  CHECK(r.rc == kPass);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("subcommand") == "build-phi");
  REQUIRE(j.at("constants").at("bump").contains("delta0"));
  CHECK(j.at("constants").at("bump").at("delta0").get<double>() == doctest::Approx(0.999 / 1.008));
}

TEST_CASE("outputs are deterministic") {
  fs::path a = scratch("a"), b = scratch("b");
  for (const char* cmd : {"compactify-check", "chain-trick"}) {
    CAPTURE(cmd);
    Run ra = run({cmd, "--out", a.string()});
    Run rb = run({cmd, "--out", b.string()});
    CHECK(ra.rc == kPass);
    CHECK(rb.rc == kPass);
    for (const char* ext : {".json", ".csv"}) {
      fs::path fa = a / (std::string(cmd) + ext), fb = b / (std::string(cmd) + ext);
      if (!fs::exists(fa)) continue;
      std::string sa = slurp(fa), sb = slurp(fb);
      CHECK_FALSE(sa.empty());
      // the manifest names its own directory; everything else must match byte for byte
      std::string::size_type p;
      while ((p = sa.find(a.string())) != std::string::npos) sa.replace(p, a.string().size(), "DIR");
      while ((p = sb.find(b.string())) != std::string::npos) sb.replace(p, b.string().size(), "DIR");
      CHECK(sa == sb);
    }
  }
  CHECK(fs::exists(a / "compactify-check.json"));
}

TEST_CASE("config file supplies defaults and flags override it") {
  fs::path d = scratch("cfg");
  fs::create_directories(d);
  fs::path f = d / "density.ini";
  std::ofstream(f) << "[density]\nset=odds\nN=1000\n";
  auto j = trailing_json(run({"--config", f.string(), "density"}).out);
  CHECK(j.at("params").at("set") == "odds");
  CHECK(j.at("params").at("N") == 1000);
  auto k = trailing_json(run({"--config", f.string(), "density", "--set", "evens"}).out);
  CHECK(k.at("params").at("set") == "evens");
}

TEST_CASE("experiments through the CLI") {
  Run te = run({"theorem-est", "--mode", "matched", "--imax", "40", "--grid", "128"});
  CHECK(te.rc == kPass);
  auto j = trailing_json(te.out);
  CHECK(j.at("result").at("matched").at("pass") == true);
  CHECK_FALSE(j.at("result").contains("contrast"));

  Run ks = run({"kernel-search", "--psi", "trivial"});
  CHECK(ks.rc == kPass);
  CHECK(trailing_json(ks.out).at("result").at("found") == true);

  CHECK(run({"compactify-check", "--at-one"}).rc == kPass);
  CHECK(run({"compactify-check", "--tol", "1e-30"}).rc == kFail);
}
