#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pssim/commands.hpp"

namespace fs = std::filesystem;
using namespace pssim::cli;

namespace {

const fs::path kData = PSSIM_DATA_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pssim-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + PSSIM_EXE + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t lines(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("golden trace is byte stable") {
  TempDir tmp;
  const fs::path out = tmp.path / "t.csv";
  REQUIRE(run("simulate --tau 7 --n 25 --lambda 2 --pr-lie 0.1 --seed 42 --out " + out.string()) == 0);
  CHECK(slurp(out) == slurp(kData / "golden_trace.csv"));
}

TEST_CASE("simulate to stdout matches the file output") {
  TempDir tmp;
  SimulateOptions o;
  o.n = 40;
  o.seed = 3;
  o.out = "-";
  std::ostringstream log, data;
  REQUIRE(run_simulate(o, log, data) == kExitOk);
  o.out = tmp.path / "t.csv";
  REQUIRE(run_simulate(o, log, data) == kExitOk);
  CHECK(data.str() == slurp(o.out));
  CHECK(log.str().find("false reports: ") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  const std::string out = " --out " + (tmp.path / "x").string();
  CHECK(run("--help") == 0);
  CHECK(run("") == kExitInput);
  CHECK(run("frobnicate") == kExitInput);
  CHECK(run("simulate --tau 0" + out) == kExitInput);
  CHECK(run("simulate --n -3" + out) == kExitInput);
  CHECK(run("simulate --tau abc" + out) == kExitInput);
  CHECK(run("simulate --tau 3" + out) == kExitModel);  // window lacks weekdays the pmf needs
  CHECK(run("simulate --mlog -30" + out) == kExitModel);
  CHECK(run("validate /nonexistent/data.csv" + out) == kExitInput);
  CHECK(run("fit /nonexistent/data.csv" + out) == kExitInput);
  CHECK(run("ingest /nonexistent/raw.csv" + out) == kExitInput);
  CHECK(run("simulate --model /nonexistent/model.json" + out) == kExitInput);
}

TEST_CASE("ingest, fit, simulate, aggregate and validate on the bundled sample") {
  TempDir tmp;
  const fs::path ds = tmp.path / "ds.csv";
  std::ostringstream log;

  IngestOptions in;
  in.input = kData / "sample_reports.csv";
  in.out = ds;
  in.outlierPct.reset();
  REQUIRE(run_ingest(in, log) == kExitOk);
  CHECK(lines(ds) == 1 + 1331);  // header plus every well-formed row
  const std::string meta = slurp(ds.string() + ".rejects.json");
  CHECK(meta.find("\"rejected\": 2") != std::string::npos);
  CHECK(meta.find("\"bad timestamp\": 1") != std::string::npos);

  FitCmdOptions fo;
  fo.dataset = ds;
  fo.out = tmp.path / "model.json";
  fo.plotData = tmp.path / "plots";
  REQUIRE(run_fit(fo, log) == kExitOk);
  for (const char* f : {"fig2.csv", "fig4_qq.csv", "fig5_acf.csv"}) CHECK(fs::exists(tmp.path / "plots" / f));
  CHECK(slurp(tmp.path / "plots" / "fig5_acf.csv").find("\"Cambridge St, Boston\",8,") != std::string::npos);

  SimulateOptions so;
  so.model = fo.out;
  so.out = tmp.path / "sim.csv";
  REQUIRE(run_simulate(so, log) == kExitOk);
  so.loc = "Nowhere";
  CHECK(run_simulate(so, log) == kExitInput);

  AggregateCmdOptions ao;
  ao.out = tmp.path / "ev1.csv";
  ao.workers = 1;
  for (const fs::path& input : {fs::path(so.out), ds, kData / "sample_reports.csv"}) {
    ao.input = input;
    ao.out = tmp.path / "ev1.csv";
    ao.workers = 1;
    REQUIRE(run_aggregate(ao, log) == kExitOk);
    ao.out = tmp.path / "ev8.csv";
    ao.workers = 8;
    REQUIRE(run_aggregate(ao, log) == kExitOk);
    CHECK(slurp(tmp.path / "ev1.csv") == slurp(tmp.path / "ev8.csv"));
  }

  ValidateCmdOptions vo;
  vo.dataset = ds;
  vo.out = tmp.path / "v.csv";
  vo.folds = 2;
  vo.plotData = tmp.path / "plots";
  std::ostringstream summary;
  REQUIRE(run_validate(vo, summary) == kExitOk);
  CHECK(lines(vo.out) == 1 + 2 * 3);
  CHECK(fs::exists(tmp.path / "plots" / "fig6.csv"));
  const std::string text = summary.str();
  CHECK(text.find("Reports per user") != std::string::npos);
  CHECK(text.find("Reports per time bin") != std::string::npos);
}

TEST_CASE("aggregate on an empty trace writes only the header") {
  TempDir tmp;
  const fs::path trace = tmp.path / "empty.csv";
  std::ofstream(trace) << "EventNo,Date,Day,Time,ReportNo,SourceId,EventReported,EventOccurred\n";
  AggregateCmdOptions ao;
  ao.input = trace;
  ao.out = tmp.path / "ev.csv";
  std::ostringstream log;
  CHECK(run_aggregate(ao, log) == kExitOk);
  CHECK(slurp(ao.out) == "Date,DayTime,Loc,IncidentType,SupportCount\n");
}

TEST_CASE("fit on a single-user dataset fails cleanly") {
  TempDir tmp;
  const fs::path ds = tmp.path / "solo.csv";
  std::ofstream(ds) << "Date,Day,Time,SourceId,Loc,IncidentType\n"
                       "2015-02-23,Monday,M,u1,A,Jam\n"
                       "2015-03-03,Tuesday,E,u1,A,Jam\n";
  FitCmdOptions fo;
  fo.dataset = ds;
  fo.out = tmp.path / "m.json";
  std::ostringstream log;
  CHECK(run_fit(fo, log) == kExitInput);
  CHECK(log.str().find("insufficient data") != std::string::npos);
}

TEST_CASE("bench grid covers every point") {
  BenchOptions b;
  b.nMin = 100;
  b.nMax = 300;
  b.nStep = 100;
  b.mMin = 10;
  b.mMax = 30;
  b.mStep = 10;
  b.repeats = 1;
  const BenchResult r = run_bench_grid(b);
  CHECK(r.points.size() == 9);
  for (const auto& p : r.points) CHECK(p.seconds > 0.0);
  b.nStep = 0;
  CHECK_THROWS_AS(run_bench_grid(b), pssim::InputError);
}
