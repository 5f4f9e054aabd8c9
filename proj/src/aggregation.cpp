#include "pssim/aggregation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

namespace pssim {
namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

using KeyValue = std::pair<EventKey, MappedValue>;

// Sorts one partition by key and reduces each run of equal keys.
std::vector<AggregatedEvent> reduce_partition(std::vector<KeyValue> pairs,
                                              std::uint64_t minSupport) {
  std::sort(pairs.begin(), pairs.end(),
            [](const KeyValue& a, const KeyValue& b) { return a.first < b.first; });
  std::vector<AggregatedEvent> out;
  std::vector<MappedValue> group;
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    group.clear();
    while (j < pairs.size() && pairs[j].first == pairs[i].first) group.push_back(pairs[j++].second);
    AggregatedEvent e = reduce_count(pairs[i].first, group);
    if (e.supportCount >= minSupport) out.push_back(std::move(e));
    i = j;
  }
  return out;
}

}  // namespace

std::string EventKey::canonical() const {
  std::string s = date.iso();
  s += '|';
  s += short_name(dayTime);
  s += '|';
  s += loc;
  s += '|';
  s += incidentType;
  return s;
}

std::optional<std::pair<EventKey, MappedValue>> map_report(const ReportRecord& record) {
  if (record.loc.empty() || record.incidentType.empty() || record.sourceId.empty()) {
    return std::nullopt;
  }
  return KeyValue{EventKey{record.date, record.time, record.loc, record.incidentType},
                  MappedValue{record.sourceId}};
}

std::pair<EventKey, MappedValue> map_report(const Report& report, const std::string& loc,
                                            bool useOccurred) {
  return {EventKey{report.date, report.time, loc,
                   useOccurred ? report.eventOccurred : report.eventReported},
          MappedValue{report.sourceId}};
}

std::size_t partition(const EventKey& key, std::size_t partitions) {
  if (partitions == 0) throw InputError("partition count must be at least 1");
  return static_cast<std::size_t>(fnv1a(key.canonical()) % partitions);
}

AggregatedEvent reduce_count(const EventKey& key, std::span<const MappedValue> values) {
  if (values.empty()) throw ModelError("reduce called on an empty group");
  AggregatedEvent e;
  e.key = key;
  e.supportCount = values.size();
  for (const auto& v : values) e.reporters.insert(v.sourceId);
  return e;
}

AggregateResult aggregate(std::span<const ReportRecord> records, const AggregateOptions& options) {
  if (options.partitions == 0) throw InputError("partition count must be at least 1");
  const std::size_t parts = options.partitions;
  const auto n = static_cast<std::int64_t>(records.size());

  // Map.
  std::vector<std::optional<KeyValue>> mapped(records.size());
  std::vector<std::uint32_t> target(records.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    mapped[idx] = map_report(records[idx]);
    if (mapped[idx]) target[idx] = static_cast<std::uint32_t>(partition(mapped[idx]->first, parts));
  }

  AggregateResult result;
  std::vector<std::vector<KeyValue>> buckets(parts);
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    if (!mapped[i]) {
      ++result.rejected;
      continue;
    }
    ++result.accepted;
    buckets[target[i]].push_back(std::move(*mapped[i]));
  }

  // Reduce, one partition per task.
  std::vector<std::vector<AggregatedEvent>> reduced(parts);
  const auto np = static_cast<std::int64_t>(parts);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t p = 0; p < np; ++p) {
    const auto idx = static_cast<std::size_t>(p);
    reduced[idx] = reduce_partition(std::move(buckets[idx]), options.minSupport);
  }

  // Ordered k-way merge. Keys are unique across partitions.
  using Cursor = std::pair<std::size_t, std::size_t>;  // (partition, position)
  auto later = [&](const Cursor& a, const Cursor& b) {
    return reduced[b.first][b.second].key < reduced[a.first][a.second].key;
  };
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(later)> heap(later);
  std::size_t total = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    total += reduced[p].size();
    if (!reduced[p].empty()) heap.emplace(p, 0);
  }
  result.events.reserve(total);
  while (!heap.empty()) {
    const auto [p, pos] = heap.top();
    heap.pop();
    result.events.push_back(std::move(reduced[p][pos]));
    if (pos + 1 < reduced[p].size()) heap.emplace(p, pos + 1);
  }
  return result;
}

std::vector<ReportRecord> records_from_trace(std::span<const Report> reports,
                                             const std::string& loc, bool useOccurred) {
  std::vector<ReportRecord> out;
  out.reserve(reports.size());
  for (const auto& r : reports) {
    out.push_back(ReportRecord{r.date, r.time, r.sourceId, loc,
                               useOccurred ? r.eventOccurred : r.eventReported});
  }
  return out;
}

namespace serial {

AggregateResult aggregate(std::span<const ReportRecord> records, std::uint64_t minSupport) {
  std::map<EventKey, AggregatedEvent> table;
  AggregateResult result;
  for (const auto& r : records) {
    if (r.loc.empty() || r.incidentType.empty() || r.sourceId.empty()) {
      ++result.rejected;
      continue;
    }
    ++result.accepted;
    EventKey key{r.date, r.time, r.loc, r.incidentType};
    AggregatedEvent& e = table[key];
    e.key = key;
    ++e.supportCount;
    e.reporters.insert(r.sourceId);
  }
  for (auto& [key, e] : table) {
    if (e.supportCount >= minSupport) result.events.push_back(std::move(e));
  }
  return result;
}

}  // namespace serial
}  // namespace pssim
