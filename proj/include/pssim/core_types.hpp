#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pssim {

/// Bad input data or arguments (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model or simulation failure on otherwise valid input (CLI exit code 3).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Eight three-hour slots of the day, in order starting at 03:00.
// N wraps around midnight and covers [00:00, 03:00).
enum class TemporalBin : std::uint8_t { EM, M, D, MD, E, LE, MN, N };

inline constexpr std::size_t kTemporalBinCount = 8;
inline constexpr std::array<TemporalBin, kTemporalBinCount> kAllTemporalBins = {
    TemporalBin::EM, TemporalBin::M,  TemporalBin::D,  TemporalBin::MD,
    TemporalBin::E,  TemporalBin::LE, TemporalBin::MN, TemporalBin::N};

// Calendar weekday order, Sunday first.
enum class DayBin : std::uint8_t {
  Sunday,
  Monday,
  Tuesday,
  Wednesday,
  Thursday,
  Friday,
  Saturday
};

inline constexpr std::size_t kDayBinCount = 7;
inline constexpr std::array<DayBin, kDayBinCount> kAllDayBins = {
    DayBin::Sunday,   DayBin::Monday, DayBin::Tuesday, DayBin::Wednesday,
    DayBin::Thursday, DayBin::Friday, DayBin::Saturday};

constexpr std::size_t index_of(TemporalBin bin) { return static_cast<std::size_t>(bin); }
constexpr std::size_t index_of(DayBin day) { return static_cast<std::size_t>(day); }

/// First clock hour covered by a bin.
constexpr int start_hour(TemporalBin bin) { return static_cast<int>((3 + 3 * index_of(bin)) % 24); }

/// Short label ("EM", "MD", ...).
std::string_view short_name(TemporalBin bin);
/// Long label as printed in trace files ("EarlyMorning", "MidDay", ...).
std::string_view long_name(TemporalBin bin);
std::string_view name(DayBin day);

/// Accepts the short or long label, case-insensitively.
std::optional<TemporalBin> parse_temporal_bin(std::string_view text);
/// Accepts full weekday names and three-letter abbreviations, case-insensitively.
std::optional<DayBin> parse_day_bin(std::string_view text);

/// Proleptic-Gregorian calendar date. Canonical text form is YYYY-MM-DD.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::year_month_day ymd);
  Date(int year, unsigned month, unsigned day);

  /// Strict ISO-8601 (YYYY-MM-DD). Throws InputError on malformed or invalid dates.
  static Date parse_iso(std::string_view text);
  /// DD/MM/YYYY, as found in legacy trace exports.
  static Date parse_dmy(std::string_view text);
  /// ISO first, then DD/MM/YYYY.
  static Date parse(std::string_view text);

  std::chrono::sys_days days() const { return days_; }
  std::chrono::year_month_day ymd() const { return std::chrono::year_month_day{days_}; }
  std::string iso() const;

  Date operator+(int ndays) const;
  /// Whole days from `other` to this date.
  int operator-(Date other) const;

  auto operator<=>(const Date&) const = default;

 private:
  std::chrono::sys_days days_{};
};

DayBin weekday_of(Date date);

/// Throws InputError unless 0 <= hour < 24 and 0 <= minute < 60.
TemporalBin bin_of_time(int hour, int minute);

/// Inclusive calendar window [first, last].
struct DateWindow {
  Date first;
  Date last;

  int days() const { return (last - first) + 1; }
  bool contains(Date d) const { return first <= d && d <= last; }
  bool operator==(const DateWindow&) const = default;
};

/// Event type labels are plain strings drawn from the configured list.
using EventType = std::string;

/// One row of a simulated trace.
struct Report {
  std::uint64_t eventNo = 0;
  Date date;
  DayBin day = DayBin::Sunday;
  TemporalBin time = TemporalBin::EM;
  std::uint64_t reportNo = 0;
  std::string sourceId;
  EventType eventReported;
  EventType eventOccurred;

  bool operator==(const Report&) const = default;
};

/// A generated incident. (date, time, loc, incidentType) is the event key.
struct Event {
  std::uint64_t eventNo = 0;
  Date date;
  DayBin day = DayBin::Sunday;
  TemporalBin time = TemporalBin::EM;
  std::string loc;
  EventType incidentType;

  bool operator==(const Event&) const = default;
};

/// "UID" followed by a six-digit, zero-padded participant index (1-based).
std::string participant_id(std::size_t index);

}  // namespace pssim
