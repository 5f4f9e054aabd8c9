#pragma once

// Subcommand implementations behind the pssim CLI. Each returns the process
// exit code: 0 success, 2 input or usage error, 3 model or runtime error.
// Progress and summaries go to `log`; data files go to the paths given.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pssim/core_types.hpp"

namespace pssim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitModel = 3;

struct IngestOptions {
  std::filesystem::path input;
  std::filesystem::path out;
  std::optional<Date> from;
  std::optional<Date> to;
  std::optional<double> outlierPct = 99.5;
  std::vector<std::string> columnMap;  // "field=column"
};
/// Writes the canonical dataset to `out` and a reject summary to
/// `out` + ".rejects.json".
int run_ingest(const IngestOptions& options, std::ostream& log);

struct FitCmdOptions {
  std::filesystem::path dataset;
  std::filesystem::path out;
  std::optional<Date> from;
  std::optional<Date> to;
  std::optional<double> outlierPct;
  bool perLocation = false;
  std::optional<std::filesystem::path> plotData;
};
int run_fit(const FitCmdOptions& options, std::ostream& log);

struct SimulateOptions {
  std::optional<std::filesystem::path> model;
  std::optional<int> tau;
  std::optional<long long> n;
  std::optional<double> lambda;
  std::optional<double> prLie;
  std::optional<double> mlog;
  std::optional<double> sdlog;
  std::optional<Date> startDate;
  std::optional<std::string> loc;
  std::uint64_t seed = 1;
  std::filesystem::path out;  // "-" writes to `data`
};
int run_simulate(const SimulateOptions& options, std::ostream& log);
/// Same, with "-" as `out` streaming the trace into `data`.
int run_simulate(const SimulateOptions& options, std::ostream& log, std::ostream& data);

struct AggregateCmdOptions {
  std::filesystem::path input;  // trace, canonical dataset or raw ingest CSV
  std::filesystem::path out;
  int workers = 0;  // partitions and threads; 0 means default_worker_count()
  std::uint64_t minSupport = 1;
  std::string loc = "Boylston Street";  // traces carry no location
  bool useOccurred = false;
};
int run_aggregate(const AggregateCmdOptions& options, std::ostream& log);

struct ValidateCmdOptions {
  std::filesystem::path dataset;
  std::filesystem::path out;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::optional<double> outlierPct;
  std::optional<std::filesystem::path> plotData;
};
int run_validate(const ValidateCmdOptions& options, std::ostream& log);

struct BenchOptions {
  long long nMin = 100, nMax = 1000, nStep = 100;
  int mMin = 10, mMax = 100, mStep = 10;
  int repeats = 3;
  std::uint64_t seed = 1;
  int workers = 0;
  std::filesystem::path out;  // empty: no CSV
};

struct BenchPoint {
  long long n = 0;
  int m = 0;
  double seconds = 0.0;  // median over repeats
};

struct BenchResult {
  std::vector<BenchPoint> points;
  /// Least-squares fit of ln T = c + a ln n + b ln m.
  double exponentN = 0.0;
  double exponentM = 0.0;
  double intercept = 0.0;
};

/// Runs the simulator over the (n, m) grid with a three-reports-per-week
/// participation profile. Throws InputError on an empty grid.
BenchResult run_bench_grid(const BenchOptions& options);
int run_bench(const BenchOptions& options, std::ostream& log);

}  // namespace pssim::cli
