#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pssim/aggregation.hpp"
#include "pssim/analysis.hpp"
#include "pssim/simulator.hpp"
#include "pssim/validation.hpp"

namespace pssim::io {

// ---- CSV ---------------------------------------------------------------

/// RFC-4180 reader: comma separated, double-quoted fields may hold commas,
/// quotes ("") and line breaks. Accepts LF or CRLF.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}
  /// False at end of input.
  bool next(std::vector<std::string>& fields);
  /// 1-based line on which the last record started.
  std::size_t line() const { return recordLine_; }

 private:
  std::istream& in_;
  std::size_t lineNo_ = 0;
  std::size_t recordLine_ = 0;
};

/// Quotes the field only when it holds a comma, quote, CR or LF.
std::string csv_field(std::string_view text);
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

/// Shortest text that parses back to the same double.
std::string format_double(double value);

// ---- Timestamps --------------------------------------------------------

/// ISO-8601 date-time ("T" or space separator, optional seconds and
/// fraction, optional "Z" / "+hh:mm" / "+hhmm" offset; no offset means UTC),
/// "DD/MM/YYYY hh:mm[:ss]", or integer epoch milliseconds. Returns UTC.
std::chrono::sys_seconds parse_timestamp(std::string_view text);

// ---- Ingest ------------------------------------------------------------

/// Source column names for the four ingest fields.
struct ColumnMap {
  std::string timestamp = "timestamp";
  std::string sourceId = "sourceId";
  std::string loc = "loc";
  std::string incidentType = "incidentType";

  /// Applies "field=column" overrides, e.g. "timestamp=pubMillis".
  void apply(std::string_view assignment);
};

struct IngestResult {
  std::vector<ReportRecord> accepted;
  std::uint64_t rows = 0;
  std::uint64_t rejected = 0;
  std::map<std::string, std::uint64_t> reasons;  // reason -> rows
  std::uint64_t outsideWindow = 0;
  std::uint64_t dmyDates = 0;  // rows whose date used DD/MM/YYYY
};

/// Header row is mandatory; unknown columns are ignored. Throws InputError
/// when a mapped column is missing from the header. Bad rows are counted
/// with a reason and skipped.
IngestResult read_ingest_csv(std::istream& in, const ColumnMap& columns,
                             const std::optional<DateWindow>& window);

// ---- Canonical dataset (Date,Day,Time,SourceId,Loc,IncidentType) --------

void write_dataset_csv(std::ostream& out, std::span<const ReportRecord> records);
std::vector<ReportRecord> read_dataset_csv(std::istream& in);

// ---- Trace (EventNo,Date,Day,Time,ReportNo,SourceId,EventReported,EventOccurred)

inline constexpr std::string_view kTraceHeader =
    "EventNo,Date,Day,Time,ReportNo,SourceId,EventReported,EventOccurred";

void write_trace_csv(std::ostream& out, std::span<const Report> reports);
/// Accepts ISO or DD/MM/YYYY dates; throws InputError when Day does not
/// match the date.
std::vector<Report> read_trace_csv(std::istream& in);

// ---- Events (Date,DayTime,Loc,IncidentType,SupportCount) ----------------

void write_events_csv(std::ostream& out, std::span<const AggregatedEvent> events);

// ---- Validation --------------------------------------------------------

void write_validation_csv(std::ostream& out, std::span<const ValidationReport> reports);
/// Fixed-width table with one row per axis.
void write_validation_summary(std::ostream& out, std::span<const ValidationReport> reports);

// ---- Model file --------------------------------------------------------

inline constexpr std::string_view kModelSchema = "pssim-model/1";

/// Pretty-printed JSON. Writing, reading and writing again is byte-identical.
void write_model(std::ostream& out, const ModelFit& fit);
/// Pmfs are renormalized if they drift beyond tolerance. Of the Q-Q data
/// only r^2 is persisted; the ACF table is kept whole.
ModelFit read_model(std::istream& in);

}  // namespace pssim::io
