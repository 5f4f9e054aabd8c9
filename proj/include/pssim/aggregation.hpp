#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pssim/analysis.hpp"
#include "pssim/core_types.hpp"

namespace pssim {

/// (date, time slot, location, incident type). Ordered by date, then bin
/// index, then location and type lexicographically.
struct EventKey {
  Date date;
  TemporalBin dayTime = TemporalBin::EM;
  std::string loc;
  EventType incidentType;

  auto operator<=>(const EventKey&) const = default;
  bool operator==(const EventKey&) const = default;

  /// "YYYY-MM-DD|EM|loc|type"; input to the partition hash.
  std::string canonical() const;
};

struct MappedValue {
  std::string sourceId;
};

struct AggregatedEvent {
  EventKey key;
  std::uint64_t supportCount = 0;
  std::set<std::string> reporters;

  bool operator==(const AggregatedEvent&) const = default;
};

/// nullopt when a key field or the source id is empty.
std::optional<std::pair<EventKey, MappedValue>> map_report(const ReportRecord& record);

/// Simulated reports carry no location, so it is supplied. Keys on the
/// reported type unless `useOccurred` is set.
std::pair<EventKey, MappedValue> map_report(const Report& report, const std::string& loc,
                                            bool useOccurred = false);

/// FNV-1a of the canonical key, modulo `partitions` (>= 1).
std::size_t partition(const EventKey& key, std::size_t partitions);

AggregatedEvent reduce_count(const EventKey& key, std::span<const MappedValue> values);

struct AggregateOptions {
  std::size_t partitions = 1;
  std::uint64_t minSupport = 1;
};

struct AggregateResult {
  std::vector<AggregatedEvent> events;  // sorted by key
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
};

/// Parallel map, hash-partitioned reduce and ordered k-way merge. The output
/// does not depend on the partition count or on thread scheduling.
AggregateResult aggregate(std::span<const ReportRecord> records, const AggregateOptions& options);

/// Converts trace rows to records for aggregation and validation.
std::vector<ReportRecord> records_from_trace(std::span<const Report> reports,
                                             const std::string& loc, bool useOccurred = false);

namespace serial {

/// Single-pass dictionary count; the oracle for `pssim::aggregate`.
AggregateResult aggregate(std::span<const ReportRecord> records, std::uint64_t minSupport = 1);

}  // namespace serial
}  // namespace pssim
