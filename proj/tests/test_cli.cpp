#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + SF_BINARY + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sf_cli_" + std::to_string(getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every CSV in dir with its `#` lines removed.
std::map<std::string, std::string> bodies(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::istringstream in(slurp(e.path()));
    std::string line, body;
    while (std::getline(in, line))
      if (line.empty() || line[0] != '#') body += line + "\n";
    out[e.path().filename().string()] = body;
  }
  return out;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

const std::string kConfigs = SF_CONFIG_DIR;

}  // namespace

TEST_CASE("--list prints the catalog") {
  const auto r = run("--list");
  CHECK(r.status == 0);
  for (const char* name : {"clifford-check", "bw-check", "counting-fit", "heat-fit", "zeta", "eta",
                           "resolvent", "residue", "sub-symbol", "massless", "report"})
    CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("clifford-check runs without a config and writes CSV") {
  const auto dir = scratch("clifford");
  const auto r = run("clifford-check --out " + dir.string());
  CHECK(r.status == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL ") == std::string::npos);
  const auto b = bodies(dir);
  CHECK_FALSE(b.empty());
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string text = slurp(e.path());
    CHECK(text.rfind("# ", 0) == 0);
    CHECK(text.find("# config_hash: ") != std::string::npos);
  }
}

TEST_CASE("reruns produce byte-identical bodies") {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  CHECK(run("bw-check --seed 5 --out " + a.string()).status == 0);
  CHECK(run("bw-check --seed 5 --out " + b.string()).status == 0);
  const auto ba = bodies(a), bb = bodies(b);
  CHECK_FALSE(ba.empty());
  CHECK(ba == bb);
}

TEST_CASE("thread count does not change the output") {
  const auto a = scratch("threads_1"), b = scratch("threads_3");
  const std::string cfg = "--config " + kConfigs + "/t3_free.json";
  CHECK(run("resolvent " + cfg + " --out " + a.string(), "SPECTRA_FORGE_THREADS=1").status == 0);
  CHECK(run("resolvent " + cfg + " --out " + b.string(), "SPECTRA_FORGE_THREADS=3").status == 0);
  const auto ba = bodies(a), bb = bodies(b);
  CHECK_FALSE(ba.empty());
  CHECK(ba == bb);
}

TEST_CASE("a failing check gives exit status 1") {
  const auto dir = scratch("failing");
  const auto cfg = write_config(dir, R"({"experiment": "bw-check", "params": {"trials": 2, "tolerance": {"bw": 1e-300}}})");
  const auto r = run("bw-check --config " + cfg.string() + " --out " + dir.string());
  CHECK(r.status == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("config problems give exit status 2") {
  const auto dir = scratch("bad");
  CHECK(run("zeta").status == 2);
  CHECK(run("zeta --config /nonexistent.json").status == 2);
  const auto bad = write_config(dir, R"({"experiment": "zeta", "spectral": {"lambda": "big"}})");
  CHECK(run("zeta --config " + bad.string()).status == 2);
  CHECK(run("no-such-experiment --config " + bad.string()).status == 2);
  const auto syntax = write_config(dir, "{\"experiment\": ");
  CHECK(run("zeta --config " + syntax.string()).status == 2);
}

TEST_CASE("bad command lines are rejected") {
  CHECK(run("clifford-check --d 12").status != 0);
  CHECK(run("clifford-check --bogus").status != 0);
}
