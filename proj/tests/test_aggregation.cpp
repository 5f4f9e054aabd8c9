#include <map>
#include <sstream>

#include "doctest.h"
#include "pssim/aggregation.hpp"
#include "pssim/io.hpp"
#include "pssim/parallel.hpp"
#include "pssim/random.hpp"

using namespace pssim;

namespace {

std::vector<ReportRecord> random_records(std::size_t n, std::uint64_t seed) {
  RandomSource rng(seed);
  const std::vector<std::string> locs = {"Boylston Street", "Main St", "Elm, North", "Q\"uote"};
  const std::vector<std::string> types = {"Jam", "Accident", "Hazard", "RoadClosure"};
  std::vector<ReportRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    ReportRecord r;
    r.date = Date(2015, 2, 23) + static_cast<int>(rng.uniform_index(5));
    r.time = kAllTemporalBins[rng.uniform_index(8)];
    r.sourceId = "u" + std::to_string(rng.uniform_index(50));
    r.loc = locs[rng.uniform_index(locs.size())];
    r.incidentType = types[rng.uniform_index(types.size())];
    out.push_back(std::move(r));
  }
  return out;
}

std::string events_csv(const AggregateResult& r) {
  std::ostringstream out;
  io::write_events_csv(out, r.events);
  return out.str();
}

}  // namespace

TEST_CASE("canonical key text") {
  const EventKey k{Date(2016, 1, 9), TemporalBin::MD, "Boylston Street", "Jam"};
  CHECK(k.canonical() == "2016-01-09|MD|Boylston Street|Jam");
  CHECK(partition(k, 1) == 0);
  CHECK(partition(k, 16) == partition(k, 16));
  CHECK_THROWS_AS(partition(k, 0), InputError);
}

TEST_CASE("keys order by date, then bin index, then text") {
  const Date d(2015, 3, 1);
  CHECK(EventKey{d, TemporalBin::N, "A", "Jam"} > EventKey{d, TemporalBin::EM, "Z", "Jam"});
  CHECK(EventKey{d, TemporalBin::EM, "A", "Jam"} < EventKey{d + 1, TemporalBin::EM, "A", "Accident"});
  CHECK(EventKey{d, TemporalBin::EM, "A", "Accident"} < EventKey{d, TemporalBin::EM, "A", "Jam"});
}

TEST_CASE("map_report drops incomplete records") {
  ReportRecord r{Date(2015, 2, 23), TemporalBin::M, "u", "A", "Jam"};
  CHECK(map_report(r).has_value());
  r.sourceId.clear();
  CHECK_FALSE(map_report(r).has_value());
  r.sourceId = "u";
  r.loc.clear();
  CHECK_FALSE(map_report(r).has_value());
}

TEST_CASE("reduce counts every value and collects reporters") {
  const EventKey k{Date(2015, 2, 23), TemporalBin::M, "A", "Jam"};
  const std::vector<MappedValue> vs = {{"u1"}, {"u2"}, {"u1"}};
  const AggregatedEvent e = reduce_count(k, vs);
  CHECK(e.supportCount == 3);
  CHECK(e.reporters == std::set<std::string>{"u1", "u2"});
}

TEST_CASE("parallel aggregate equals the dictionary oracle for any partition count") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto records = random_records(1000, seed);
    records[10].sourceId.clear();
    records[20].incidentType.clear();
    const AggregateResult oracle = serial::aggregate(records);
    CHECK(oracle.rejected == 2);
    CHECK(oracle.accepted == 998);
    std::uint64_t total = 0;
    for (const auto& e : oracle.events) total += e.supportCount;
    CHECK(total == 998);
    for (std::size_t p : {1u, 2u, 4u, 7u, 16u, 64u}) {
      for (int workers : {1, 4}) {
        set_worker_count(workers);
        const AggregateResult r = aggregate(records, {p, 1});
        CAPTURE(p);
        REQUIRE(r.events == oracle.events);
        CHECK(r.accepted == oracle.accepted);
        CHECK(r.rejected == oracle.rejected);
        CHECK(events_csv(r) == events_csv(oracle));
      }
    }
  }
  set_worker_count(0);
}

TEST_CASE("minSupport drops thin events") {
  const auto records = random_records(300, 9);
  const auto all = serial::aggregate(records, 1);
  const auto thick = aggregate(records, {4, 2});
  CHECK(thick.events == serial::aggregate(records, 2).events);
  std::size_t singletons = 0;
  for (const auto& e : all.events) singletons += e.supportCount == 1 ? 1 : 0;
  CHECK(thick.events.size() == all.events.size() - singletons);
  for (const auto& e : thick.events) CHECK(e.supportCount >= 2);
}

TEST_CASE("empty input aggregates to nothing") {
  const AggregateResult r = aggregate(std::vector<ReportRecord>{}, {8, 1});
  CHECK(r.events.empty());
  CHECK(events_csv(r) == "Date,DayTime,Loc,IncidentType,SupportCount\n");
}

TEST_CASE("trace reports key on the reported type unless asked otherwise") {
  Report r;
  r.date = Date(2015, 2, 23);
  r.time = TemporalBin::E;
  r.sourceId = "UID000001";
  r.eventReported = "Jam";
  r.eventOccurred = "Accident";
  CHECK(map_report(r, "A").first.incidentType == "Jam");
  CHECK(map_report(r, "A", true).first.incidentType == "Accident");
  const auto recs = records_from_trace(std::vector<Report>{r}, "A");
  CHECK(recs.at(0).loc == "A");
}
