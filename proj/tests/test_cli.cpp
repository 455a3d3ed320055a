// Runs the poistri executable and checks its output and exit codes.
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef POISTRI_CLI
#error "POISTRI_CLI must name the executable"
#endif

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, bool with_stderr = false) {
  const std::string cmd = std::string(POISTRI_CLI) + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("sample output is byte-identical across runs") {
  const Run a = run("sample --family pinned -n 1000 --seed 7");
  const Run b = run("sample --family pinned -n 1000 --seed 7");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out) == 1001);
  CHECK(a.out.rfind("family,ax,ay,bx,by,cx,cy,a,b,c,alpha,beta,gamma\n", 0) == 0);
  CHECK(run("sample --family pinned -n 1000 --seed 7 --workers 3").out == a.out);
  CHECK(run("--seed 7 sample --family pinned -n 1000").out == a.out);
  CHECK(run("sample --family pinned -n 1000 --seed 8").out != a.out);
}

TEST_CASE("sample to a file and as JSON") {
  const char* path = "cli_sample.json";
  REQUIRE(run(std::string("sample --family uniformT -n 50 --format json --out ") + path).code == 0);
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  std::remove(path);
  REQUIRE(doc.size() == 50);
  for (const auto& row : doc) {
    CHECK(row["family"] == "uniformT");
    CHECK(row["c"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("pdf gamma grid") {
  const Run r = run("pdf --kind pinned_gamma --grid 0:pi:100");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,pdf");
  int rows = 0;
  while (std::getline(in, line)) {
    const double x = std::stod(line.substr(0, line.find(',')));
    const double y = std::stod(line.substr(line.find(',') + 1));
    const double expect = x < M_PI / 2 ? 4 / M_PI * std::cos(x) * std::cos(x) : 0.0;
    CHECK(std::abs(y - expect) < 1e-13);
    ++rows;
  }
  CHECK(rows == 100);
}

TEST_CASE("pdf points, singular rows and empty grids") {
  const Run r = run("pdf --kind uT_side_a --at 1.0 --at 0.5");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\n1,inf\n") != std::string::npos);
  const Run two = run("pdf --kind pair_bc --at 1,0.5");
  REQUIRE(two.code == 0);
  CHECK(two.out.rfind("x,y,pdf\n", 0) == 0);
  const Run empty = run("pdf --kind pinned_a --grid 0:1:0");
  CHECK(empty.code == 0);
  CHECK(empty.out == "x,pdf\n");
  const Run json = run("pdf --kind pinned_c --at 0.5 --format json");
  REQUIRE(json.code == 0);
  const auto doc = nlohmann::json::parse(json.out);
  CHECK(doc["rows"][0]["pdf"].get<double>() == doctest::Approx(M_PI * std::exp(-M_PI / 4)).epsilon(1e-14));
}

TEST_CASE("exit codes") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("sample --family hexagonal -n 10").code == 2);
  CHECK(run("sample --family pinned -n 0").code == 2);
  CHECK(run("sample --family pinned -n ten").code == 2);
  CHECK(run("pdf --kind no_such_kind --at 1").code == 2);
  CHECK(run("pdf --kind pinned_a --at 1,2").code == 2);
  CHECK(run("pdf --kind pinned_a").code == 2);
  CHECK(run("sample --family pinned -n 5 --format xml").code == 2);
  CHECK(run("plot --kind pinned_b -n 0").code == 2);
  CHECK(run("plot --kind pinned_b -n 100 --bins 3").code == 2);
  CHECK(run("sample --family pinned -n 5 --out /nonexistent-dir/x.csv").code == 1);
  CHECK(run("plot --kind pinned_b -n 100 --out /nonexistent-dir/x.svg").code == 1);
  CHECK(run("tables").code == 0);
}

TEST_CASE("moments row counts") {
  struct Expect {
    const char* family;
    std::size_t rows;
  };
  for (const Expect e : {Expect{"pinned", 19}, Expect{"staked", 3}, Expect{"anchored", 3}}) {
    const Run r = run(std::string("moments -n 20000 --family ") + e.family);
    CHECK(r.code == 0);
    CHECK(lines(r.out) == e.rows + 1);
  }
  const Run inf = run("moments -n 20000 --family pinned");
  CHECK(inf.out.find("pinned,b/c,") != std::string::npos);
  CHECK(run("moments --family uniformT").code == 2);
}

TEST_CASE("verify subset and injected fault") {
  const std::string sizes = "verify --criteria 10,11 --n-moments 2000 --n-ac 2000 --n-ks 500 --quiet --format json";
  const Run ok = run(sizes);
  REQUIRE(ok.code == 0);
  const auto doc = nlohmann::json::parse(ok.out);
  CHECK(doc["pass"] == true);
  CHECK(run(sizes).out == ok.out);

  const Run bad = run(sizes + " --inject-fault c10.uT_max.mass", true);
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL c10.uT_max.mass") != std::string::npos);
}

TEST_CASE("plot writes an svg") {
  const char* path = "cli_plot.svg";
  REQUIRE(run(std::string("plot --kind ratio_b_over_c -n 5000 --out ") + path).code == 0);
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  std::remove(path);
  CHECK(s.str().find("<path id=\"density\"") != std::string::npos);
  CHECK(s.str().find("</svg>") != std::string::npos);
}
