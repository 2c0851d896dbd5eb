#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "darboux/report.hpp"
#include "doctest.h"

using namespace darboux;

namespace {

int runCli(const std::string& args, std::string* out = nullptr) {
  const std::string path = "test_report_cli.out";
  const std::string line = std::string("\"") + DARBOUX_CLI + "\" " + args + " > " + path + " 2>/dev/null";
  const int status = std::system(line.c_str());
  if (out) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    *out = ss.str();
  }
  std::remove(path.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("model parsing") {
  const ModelSpec m = parseModel("p1", {"b1=1", "b2=0.5", "b3=-2"}, sweepDefaults(Potential::P1));
  CHECK(m.params == std::vector<double>{1.0, 0.5, -2.0});
  CHECK(parseModel("p3", {}, sweepDefaults(Potential::P3)).params == std::vector<double>{1.0});
  CHECK_THROWS_AS(parseModel("p1", {"b1=-1"}, sweepDefaults(Potential::P1)), UsageError);
  CHECK_THROWS_AS(parseModel("p3", {"b=1"}, sweepDefaults(Potential::P3)), UsageError);
  CHECK_THROWS_AS(parseModel("p3", {"a=x"}, sweepDefaults(Potential::P3)), UsageError);
  CHECK_THROWS_AS(parseModel("p4", {}, sweepDefaults(Potential::P3)), UsageError);
  try {
    parseModel("p1", {"b1=-1"}, sweepDefaults(Potential::P1));
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("b2, b3") != std::string::npos);
  }
}

TEST_CASE("exit codes by error category") {
  CHECK(exitCodeFor(UsageError("x")) == 2);
  CHECK(exitCodeFor(DomainError("x")) == 2);
  CHECK(exitCodeFor(NoConvergence("x")) == 3);
  CHECK(exitCodeFor(NotBracketed("x")) == 3);
  CHECK(exitCodeFor(IoError("x")) == 4);
}

TEST_CASE("json floats use seventeen significant digits") {
  Json j;
  j["x"] = 0.1;
  j["y"] = 1.0 / 3.0;
  j["n"] = 3;
  j["inf"] = 1.0 / 0.0;
  CHECK(dumpJson(j) == "{\n  \"x\": 0.10000000000000001,\n  \"y\": 0.33333333333333331,\n  \"n\": 3,\n  \"inf\": null\n}\n");
}

TEST_CASE("reports are reproducible") {
  AlgebraOptions a;
  a.samples = 50;
  CHECK(dumpJson(algebraReport(ModelSpec::free(), a)) == dumpJson(algebraReport(ModelSpec::free(), a)));
  AlgebraOptions b = a;
  b.seed = 7;
  CHECK(dumpJson(algebraReport(ModelSpec::free(), a)) != dumpJson(algebraReport(ModelSpec::free(), b)));
  CHECK(algebraReport(ModelSpec::free(), a)["relations"].size() == 4);
}

TEST_CASE("unbounded spectra are rejected") {
  CHECK_THROWS_AS(spectrumReport(ModelSpec::free(), {}), SpectrumUnbounded);
  CHECK_THROWS_AS(spectrumReport(ModelSpec::p3(1.0), {}), SpectrumUnbounded);
}

TEST_CASE("trajectory csv") {
  TraceOptions opt;
  opt.start = traceStart(Potential::P3);
  opt.T = 0.002;
  Trajectory t;
  traceReport(ModelSpec::p3(1.0), opt, &t);
  std::ostringstream os;
  writeTrajectoryCsv(t, os);
  const std::string s = os.str();
  CHECK(s.rfind("t,u,v,pu,pv\n0,2,0.5,0.29999999999999999,0.20000000000000001\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
}

TEST_CASE("command line exit codes") {
  std::string out;
  CHECK(runCli("verify-algebra --model free --samples 100", &out) == 0);
  CHECK(out.find("\"passed\": true") != std::string::npos);
  CHECK(runCli("spectrum --model p1 --param b1=-1") == 2);
  CHECK(runCli("trace --model p3 --param a=1 --h 1e-3 --T 10") == 0);
  CHECK(runCli("verify-quantum --model free") == 1);
  CHECK(runCli("verify-algebra --model p5") == 2);
  CHECK(runCli("verify-algebra --format csv") == 2);
  CHECK(runCli("spectrum --model free") == 2);
  CHECK(runCli("hj-check --out /nonexistent-dir/report.json") == 4);
  CHECK(runCli("trace --model p3 --start 0.1 0 0 5 --T 10") == 1);
  CHECK(runCli("") == 2);
}
