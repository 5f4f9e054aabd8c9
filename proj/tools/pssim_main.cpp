// pssim: ingest, fit, simulate, aggregate, validate and bench from the shell.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pssim/commands.hpp"

namespace {

std::optional<pssim::Date> date_opt(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return pssim::Date::parse(text);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pssim::cli;
  CLI::App app{"Participatory sensing data simulator"};
  app.require_subcommand(1);

  // ingest
  IngestOptions ingest;
  std::string ingestFrom, ingestTo;
  double ingestPct = 99.5;
  bool ingestNoOutliers = false;
  auto* cIngest = app.add_subcommand("ingest", "Read a raw report CSV into the canonical dataset");
  cIngest->add_option("input", ingest.input, "Raw CSV (timestamp,sourceId,loc,incidentType)")->required();
  cIngest->add_option("--out", ingest.out, "Dataset CSV to write")->required();
  cIngest->add_option("--from", ingestFrom, "First day kept (YYYY-MM-DD)");
  cIngest->add_option("--to", ingestTo, "Last day kept (YYYY-MM-DD)");
  cIngest->add_option("--outlier-pct", ingestPct, "Drop users above this percentile of peak weekly reports")
      ->capture_default_str();
  cIngest->add_flag("--no-outliers", ingestNoOutliers, "Keep every user");
  cIngest->add_option("--columns", ingest.columnMap, "Column mapping, e.g. timestamp=pubMillis");

  // fit
  FitCmdOptions fit;
  std::string fitFrom, fitTo, fitPlot;
  double fitPct = 0.0;
  auto* cFit = app.add_subcommand("fit", "Fit the participation and event model to a dataset");
  cFit->add_option("dataset", fit.dataset, "Dataset CSV from ingest")->required();
  cFit->add_option("--out", fit.out, "Model file to write")->required();
  cFit->add_option("--from", fitFrom, "First day of the window");
  cFit->add_option("--to", fitTo, "Last day of the window");
  auto* fitPctOpt = cFit->add_option("--outlier-pct", fitPct, "Percentile cut on peak weekly reports");
  cFit->add_flag("--per-location", fit.perLocation, "Also fit participation per location");
  cFit->add_option("--plot-data", fitPlot, "Directory for plot CSVs");

  // simulate
  SimulateOptions sim;
  std::string simModel, simStart, simLoc;
  int simTau = 0;
  long long simN = 0;
  double simLambda = 0, simLie = 0, simMlog = 0, simSdlog = 0;
  auto* cSim = app.add_subcommand("simulate", "Generate a synthetic report trace");
  auto* oModel = cSim->add_option("--model", simModel, "Model file from fit");
  auto* oTau = cSim->add_option("--tau", simTau, "Days to simulate");
  auto* oN = cSim->add_option("--n", simN, "Participants");
  auto* oLambda = cSim->add_option("--lambda", simLambda, "Events per temporal bin");
  auto* oLie = cSim->add_option("--pr-lie", simLie, "Probability a report names the wrong type");
  auto* oMlog = cSim->add_option("--mlog", simMlog, "Weekly log-location of reports per user");
  auto* oSdlog = cSim->add_option("--sdlog", simSdlog, "Weekly log-scale of reports per user");
  auto* oStart = cSim->add_option("--start-date", simStart, "First simulated day");
  auto* oLoc = cSim->add_option("--loc", simLoc, "Location name (selects its rate from a model)");
  cSim->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  cSim->add_option("--out", sim.out, "Trace CSV, or - for stdout")->required();

  // aggregate
  AggregateCmdOptions agg;
  auto* cAgg = app.add_subcommand("aggregate", "Count supporting reports per event key");
  cAgg->add_option("input", agg.input, "Trace, dataset or raw CSV")->required();
  cAgg->add_option("--out", agg.out, "Events CSV to write")->required();
  cAgg->add_option("--workers", agg.workers, "Partitions and threads (default PSSIM_WORKERS or cores)");
  cAgg->add_option("--min-support", agg.minSupport, "Drop events with fewer reports")->capture_default_str();
  cAgg->add_option("--loc", agg.loc, "Location given to trace reports")->capture_default_str();
  cAgg->add_flag("--use-occurred", agg.useOccurred, "Key traces on the occurred type");

  // validate
  ValidateCmdOptions val;
  std::string valPlot;
  double valPct = 0.0;
  auto* cVal = app.add_subcommand("validate", "k-fold validation of simulated against real data");
  cVal->add_option("dataset", val.dataset, "Dataset CSV from ingest")->required();
  cVal->add_option("--out", val.out, "Per-fold validation CSV")->required();
  cVal->add_option("--folds", val.folds, "Number of folds")->capture_default_str();
  cVal->add_option("--seed", val.seed, "Fold and simulation seed")->capture_default_str();
  auto* valPctOpt = cVal->add_option("--outlier-pct", valPct, "Percentile cut applied when fitting");
  cVal->add_option("--plot-data", valPlot, "Directory for plot CSVs");

  // bench
  BenchOptions bench;
  auto* cBench = app.add_subcommand("bench", "Time the simulator over a participants x days grid");
  cBench->add_option("--n-min", bench.nMin)->capture_default_str();
  cBench->add_option("--n-max", bench.nMax)->capture_default_str();
  cBench->add_option("--n-step", bench.nStep)->capture_default_str();
  cBench->add_option("--m-min", bench.mMin)->capture_default_str();
  cBench->add_option("--m-max", bench.mMax)->capture_default_str();
  cBench->add_option("--m-step", bench.mStep)->capture_default_str();
  cBench->add_option("--repeats", bench.repeats, "Runs per point; the median is kept")->capture_default_str();
  cBench->add_option("--seed", bench.seed)->capture_default_str();
  cBench->add_option("--workers", bench.workers, "Threads (default PSSIM_WORKERS or cores)");
  cBench->add_option("--out", bench.out, "Timing CSV (n,m,seconds)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*cIngest) {
      ingest.from = date_opt(ingestFrom);
      ingest.to = date_opt(ingestTo);
      ingest.outlierPct = ingestNoOutliers ? std::nullopt : std::optional<double>(ingestPct);
      return run_ingest(ingest, std::cerr);
    }
    if (*cFit) {
      fit.from = date_opt(fitFrom);
      fit.to = date_opt(fitTo);
      if (*fitPctOpt) fit.outlierPct = fitPct;
      if (!fitPlot.empty()) fit.plotData = fitPlot;
      return run_fit(fit, std::cerr);
    }
    if (*cSim) {
      if (*oModel) sim.model = simModel;
      if (*oTau) sim.tau = simTau;
      if (*oN) sim.n = simN;
      if (*oLambda) sim.lambda = simLambda;
      if (*oLie) sim.prLie = simLie;
      if (*oMlog) sim.mlog = simMlog;
      if (*oSdlog) sim.sdlog = simSdlog;
      if (*oStart) sim.startDate = pssim::Date::parse(simStart);
      if (*oLoc) sim.loc = simLoc;
      return run_simulate(sim, std::cerr, std::cout);
    }
    if (*cAgg) return run_aggregate(agg, std::cerr);
    if (*cVal) {
      if (*valPctOpt) val.outlierPct = valPct;
      if (!valPlot.empty()) val.plotData = valPlot;
      return run_validate(val, std::cerr);
    }
    if (*cBench) return run_bench(bench, std::cerr);
  } catch (const pssim::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
