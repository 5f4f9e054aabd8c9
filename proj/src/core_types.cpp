#include "pssim/core_types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace pssim {
namespace {

constexpr std::array<std::string_view, kTemporalBinCount> kShortNames = {
    "EM", "M", "D", "MD", "E", "LE", "MN", "N"};
constexpr std::array<std::string_view, kTemporalBinCount> kLongNames = {
    "EarlyMorning", "Morning", "Day", "MidDay", "Evening", "LateEvening", "MidNight", "Night"};
constexpr std::array<std::string_view, kDayBinCount> kDayNames = {
    "Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

int parse_fixed_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("invalid date '" + std::string(whole) + "'");
  }
  return value;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

Date checked(int y, int m, int d, std::string_view text) {
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (m < 1 || d < 1 || !ymd.ok()) {
    throw InputError("invalid date '" + std::string(text) + "'");
  }
  return Date{ymd};
}

}  // namespace

std::string_view short_name(TemporalBin bin) { return kShortNames[index_of(bin)]; }
std::string_view long_name(TemporalBin bin) { return kLongNames[index_of(bin)]; }
std::string_view name(DayBin day) { return kDayNames[index_of(day)]; }

std::optional<TemporalBin> parse_temporal_bin(std::string_view text) {
  for (TemporalBin b : kAllTemporalBins) {
    if (iequals(text, short_name(b)) || iequals(text, long_name(b))) return b;
  }
  return std::nullopt;
}

std::optional<DayBin> parse_day_bin(std::string_view text) {
  for (DayBin d : kAllDayBins) {
    if (iequals(text, name(d)) || iequals(text, name(d).substr(0, 3))) return d;
  }
  return std::nullopt;
}

Date::Date(std::chrono::year_month_day ymd) : days_(ymd) {}

Date::Date(int year, unsigned month, unsigned day)
    : Date(checked(year, static_cast<int>(month), static_cast<int>(day), "")) {}

Date Date::parse_iso(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !all_digits(text.substr(0, 4)) ||
      !all_digits(text.substr(5, 2)) || !all_digits(text.substr(8, 2))) {
    throw InputError("invalid ISO date '" + std::string(text) + "'");
  }
  return checked(parse_fixed_int(text.substr(0, 4), text), parse_fixed_int(text.substr(5, 2), text),
                 parse_fixed_int(text.substr(8, 2), text), text);
}

Date Date::parse_dmy(std::string_view text) {
  if (text.size() != 10 || text[2] != '/' || text[5] != '/' || !all_digits(text.substr(0, 2)) ||
      !all_digits(text.substr(3, 2)) || !all_digits(text.substr(6, 4))) {
    throw InputError("invalid DD/MM/YYYY date '" + std::string(text) + "'");
  }
  return checked(parse_fixed_int(text.substr(6, 4), text), parse_fixed_int(text.substr(3, 2), text),
                 parse_fixed_int(text.substr(0, 2), text), text);
}

Date Date::parse(std::string_view text) {
  if (text.size() == 10 && text[2] == '/') return parse_dmy(text);
  return parse_iso(text);
}

std::string Date::iso() const {
  const auto d = ymd();
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Date Date::operator+(int ndays) const {
  Date out;
  out.days_ = days_ + std::chrono::days{ndays};
  return out;
}

int Date::operator-(Date other) const { return static_cast<int>((days_ - other.days_).count()); }

DayBin weekday_of(Date date) {
  return static_cast<DayBin>(std::chrono::weekday{date.days()}.c_encoding());
}

TemporalBin bin_of_time(int hour, int minute) {
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59) {
    throw InputError("invalid clock time " + std::to_string(hour) + ":" + std::to_string(minute));
  }
  // Shift so that 03:00 is slot 0; 00:00-02:59 lands in slot 7 (N).
  return static_cast<TemporalBin>(((hour + 21) % 24) / 3);
}

std::string participant_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "UID%06zu", index);
  return buf;
}

}  // namespace pssim
