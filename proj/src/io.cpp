#include "pssim/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace pssim::io {
namespace {

using Json = nlohmann::ordered_json;

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

int to_int(std::string_view s, std::string_view whole) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !is_digits(s)) {
    throw InputError("invalid timestamp '" + std::string(whole) + "'");
  }
  return v;
}

std::uint64_t to_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw InputError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// Parses "hh:mm[:ss[.fff]]" into seconds since midnight.
int parse_clock(std::string_view s, std::string_view whole) {
  if (s.size() < 5 || s[2] != ':') throw InputError("invalid timestamp '" + std::string(whole) + "'");
  const int h = to_int(s.substr(0, 2), whole);
  const int m = to_int(s.substr(3, 2), whole);
  int sec = 0;
  if (s.size() > 5) {
    if (s[5] != ':' || s.size() < 8) throw InputError("invalid timestamp '" + std::string(whole) + "'");
    sec = to_int(s.substr(6, 2), whole);
    if (s.size() > 8) {
      if (s[8] != '.' || !is_digits(s.substr(9))) {
        throw InputError("invalid timestamp '" + std::string(whole) + "'");
      }
    }
  }
  if (h > 23 || m > 59 || sec > 60) throw InputError("invalid timestamp '" + std::string(whole) + "'");
  return h * 3600 + m * 60 + sec;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw InputError("missing column '" + name + "' in header");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<std::string> read_header(CsvReader& reader, std::string_view what) {
  std::vector<std::string> header;
  if (!reader.next(header)) throw InputError("missing header row in " + std::string(what));
  for (auto& h : header) h = trim(h);
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);
  return header;
}

TemporalBin parse_bin_or_throw(const std::string& text) {
  const auto b = parse_temporal_bin(text);
  if (!b) throw InputError("unknown temporal bin '" + text + "'");
  return *b;
}

DayBin parse_day_or_throw(const std::string& text) {
  const auto d = parse_day_bin(text);
  if (!d) throw InputError("unknown day '" + text + "'");
  return *d;
}

Json pmf_json(const Pmf& pmf) {
  Json j = Json::object();
  for (std::size_t i = 0; i < pmf.size(); ++i) j[pmf.label(i)] = pmf.prob(i);
  return j;
}

Pmf pmf_from_json(const Json& j, std::string_view what) {
  if (!j.is_object() || j.empty()) throw InputError("model: '" + std::string(what) + "' missing");
  std::vector<std::string> labels;
  std::vector<double> probs;
  for (const auto& [label, p] : j.items()) {
    labels.push_back(label);
    probs.push_back(p.get<double>());
  }
  try {
    return Pmf::from_probs(labels, probs);
  } catch (const InputError&) {
    return Pmf::from_counts(std::move(labels), probs);
  }
}

Json lognormal_json(const LogNormalParams& p) { return Json{{"mlog", p.location}, {"sdlog", p.scale}}; }

LogNormalParams lognormal_from_json(const Json& j) {
  LogNormalParams p{j.at("mlog").get<double>(), j.at("sdlog").get<double>()};
  if (!(p.scale > 0.0)) throw InputError("model: sdlog must be positive");
  return p;
}

}  // namespace

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  // Skip blank lines between records.
  do {
    if (!std::getline(in_, line)) return false;
    ++lineNo_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  } while (line.empty());
  recordLine_ = lineNo_;

  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  for (;;) {
    if (i == line.size()) {
      if (!quoted) break;
      // Quoted field continues on the next physical line.
      if (!std::getline(in_, line)) throw InputError("unterminated quoted field at line " +
                                                     std::to_string(recordLine_));
      ++lineNo_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      field += '\n';
      i = 0;
      continue;
    }
    const char c = line[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

std::string format_double(double value) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, p);
}

std::chrono::sys_seconds parse_timestamp(std::string_view raw) {
  const std::string text = trim(raw);
  const std::string_view s = text;
  using namespace std::chrono;
  if (s.size() >= 9 && is_digits(s)) {
    return sys_seconds{seconds{static_cast<std::int64_t>(to_u64(s, "timestamp") / 1000)}};
  }
  if (s.size() < 16) throw InputError("invalid timestamp '" + text + "'");
  const bool dmy = s[2] == '/';
  const Date date = dmy ? Date::parse_dmy(s.substr(0, 10)) : Date::parse_iso(s.substr(0, 10));
  if (s[10] != 'T' && s[10] != ' ') throw InputError("invalid timestamp '" + text + "'");
  std::string_view rest = s.substr(11);

  int offset = 0;
  std::size_t end = rest.size();
  if (!dmy) {
    if (!rest.empty() && (rest.back() == 'Z' || rest.back() == 'z')) {
      end = rest.size() - 1;
    } else if (const auto pos = rest.find_first_of("+-"); pos != std::string_view::npos) {
      std::string_view off = rest.substr(pos + 1);
      int oh = 0, om = 0;
      if (off.size() == 5 && off[2] == ':') {
        oh = to_int(off.substr(0, 2), text);
        om = to_int(off.substr(3, 2), text);
      } else if (off.size() == 4) {
        oh = to_int(off.substr(0, 2), text);
        om = to_int(off.substr(2, 2), text);
      } else if (off.size() == 2) {
        oh = to_int(off, text);
      } else {
        throw InputError("invalid UTC offset in '" + text + "'");
      }
      if (oh > 18 || om > 59) throw InputError("invalid UTC offset in '" + text + "'");
      offset = (oh * 3600 + om * 60) * (rest[pos] == '-' ? -1 : 1);
      end = pos;
    }
  }
  const int clock = parse_clock(rest.substr(0, end), text);
  return sys_seconds{date.days()} + seconds{clock - offset};
}

void ColumnMap::apply(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw InputError("column mapping must look like field=column, got '" + std::string(assignment) + "'");
  }
  const std::string field = trim(assignment.substr(0, eq));
  const std::string col = trim(assignment.substr(eq + 1));
  if (field == "timestamp") timestamp = col;
  else if (field == "sourceId") sourceId = col;
  else if (field == "loc") loc = col;
  else if (field == "incidentType") incidentType = col;
  else throw InputError("unknown ingest field '" + field + "'");
}

IngestResult read_ingest_csv(std::istream& in, const ColumnMap& columns,
                             const std::optional<DateWindow>& window) {
  CsvReader reader(in);
  const auto header = read_header(reader, "ingest file");
  const std::size_t cTs = column(header, columns.timestamp);
  const std::size_t cSrc = column(header, columns.sourceId);
  const std::size_t cLoc = column(header, columns.loc);
  const std::size_t cType = column(header, columns.incidentType);
  const std::size_t width = std::max({cTs, cSrc, cLoc, cType}) + 1;

  IngestResult result;
  std::vector<std::string> row;
  auto reject = [&](const std::string& reason) {
    ++result.rejected;
    ++result.reasons[reason];
  };
  while (reader.next(row)) {
    ++result.rows;
    if (row.size() < width) {
      reject("too few columns");
      continue;
    }
    const std::string src = trim(row[cSrc]);
    const std::string loc = trim(row[cLoc]);
    const std::string type = trim(row[cType]);
    if (src.empty()) { reject("missing sourceId"); continue; }
    if (loc.empty()) { reject("missing loc"); continue; }
    if (type.empty()) { reject("missing incidentType"); continue; }
    std::chrono::sys_seconds ts;
    try {
      ts = parse_timestamp(row[cTs]);
    } catch (const InputError&) {
      reject("bad timestamp");
      continue;
    }
    ReportRecord rec = record_at(ts, src, loc, type);
    if (window && !window->contains(rec.date)) {
      ++result.outsideWindow;
      continue;
    }
    if (trim(row[cTs]).size() > 2 && trim(row[cTs])[2] == '/') ++result.dmyDates;
    result.accepted.push_back(std::move(rec));
  }
  return result;
}

void write_dataset_csv(std::ostream& out, std::span<const ReportRecord> records) {
  out << "Date,Day,Time,SourceId,Loc,IncidentType\n";
  for (const auto& r : records) {
    const std::string fields[] = {r.date.iso(), std::string(name(weekday_of(r.date))),
                                  std::string(short_name(r.time)), r.sourceId, r.loc,
                                  r.incidentType};
    write_csv_row(out, fields);
  }
}

std::vector<ReportRecord> read_dataset_csv(std::istream& in) {
  CsvReader reader(in);
  const auto header = read_header(reader, "dataset");
  const std::size_t cDate = column(header, "Date");
  const std::size_t cDay = column(header, "Day");
  const std::size_t cTime = column(header, "Time");
  const std::size_t cSrc = column(header, "SourceId");
  const std::size_t cLoc = column(header, "Loc");
  const std::size_t cType = column(header, "IncidentType");
  const std::size_t width = std::max({cDate, cDay, cTime, cSrc, cLoc, cType}) + 1;
  std::vector<ReportRecord> out;
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() < width) {
      throw InputError("dataset line " + std::to_string(reader.line()) + ": too few columns");
    }
    ReportRecord r;
    r.date = Date::parse(row[cDate]);
    if (parse_day_or_throw(row[cDay]) != weekday_of(r.date)) {
      throw InputError("dataset line " + std::to_string(reader.line()) + ": day does not match date");
    }
    r.time = parse_bin_or_throw(row[cTime]);
    r.sourceId = row[cSrc];
    r.loc = row[cLoc];
    r.incidentType = row[cType];
    out.push_back(std::move(r));
  }
  return out;
}

void write_trace_csv(std::ostream& out, std::span<const Report> reports) {
  out << kTraceHeader << '\n';
  for (const auto& r : reports) {
    const std::string fields[] = {std::to_string(r.eventNo), r.date.iso(),
                                  std::string(name(r.day)), std::string(long_name(r.time)),
                                  std::to_string(r.reportNo), r.sourceId, r.eventReported,
                                  r.eventOccurred};
    write_csv_row(out, fields);
  }
}

std::vector<Report> read_trace_csv(std::istream& in) {
  CsvReader reader(in);
  const auto header = read_header(reader, "trace");
  static constexpr std::string_view names[] = {"EventNo",  "Date",     "Day",
                                               "Time",     "ReportNo", "SourceId",
                                               "EventReported", "EventOccurred"};
  std::size_t idx[8];
  for (std::size_t i = 0; i < 8; ++i) idx[i] = column(header, std::string(names[i]));
  const std::size_t width = *std::max_element(idx, idx + 8) + 1;
  std::vector<Report> out;
  std::vector<std::string> row;
  while (reader.next(row)) {
    const std::string where = "trace line " + std::to_string(reader.line());
    if (row.size() < width) throw InputError(where + ": too few columns");
    Report r;
    r.eventNo = to_u64(row[idx[0]], "EventNo");
    r.date = Date::parse(row[idx[1]]);
    r.day = parse_day_or_throw(row[idx[2]]);
    if (r.day != weekday_of(r.date)) throw InputError(where + ": day does not match date");
    r.time = parse_bin_or_throw(row[idx[3]]);
    r.reportNo = to_u64(row[idx[4]], "ReportNo");
    r.sourceId = row[idx[5]];
    r.eventReported = row[idx[6]];
    r.eventOccurred = row[idx[7]];
    out.push_back(std::move(r));
  }
  return out;
}

void write_events_csv(std::ostream& out, std::span<const AggregatedEvent> events) {
  out << "Date,DayTime,Loc,IncidentType,SupportCount\n";
  for (const auto& e : events) {
    const std::string fields[] = {e.key.date.iso(), std::string(short_name(e.key.dayTime)),
                                  e.key.loc, e.key.incidentType, std::to_string(e.supportCount)};
    write_csv_row(out, fields);
  }
}

void write_validation_csv(std::ostream& out, std::span<const ValidationReport> reports) {
  out << "Fold,Axis,Correlation,RMSE,RealReports,SimReports,RealUsers,SimUsers\n";
  for (const auto& r : reports) {
    for (Axis axis : kAllAxes) {
      const std::string fields[] = {std::to_string(r.fold + 1),
                                    std::string(axis_key(axis)),
                                    format_double(r.score(axis).correlation),
                                    format_double(r.score(axis).rmse),
                                    std::to_string(r.realReports),
                                    std::to_string(r.simReports),
                                    std::to_string(r.realUsers),
                                    std::to_string(r.simUsers)};
      write_csv_row(out, fields);
    }
  }
}

void write_validation_summary(std::ostream& out, std::span<const ValidationReport> reports) {
  const auto summary = summarize(reports);
  std::ostringstream table;
  table << std::left << std::setw(24) << "Parameter" << std::setw(22) << "Correlation"
        << "RMSE" << '\n';
  for (Axis axis : kAllAxes) {
    const AxisSummary& s = summary[static_cast<std::size_t>(axis)];
    std::ostringstream corr, err;
    corr << std::fixed << std::setprecision(4) << s.meanCorrelation << " +/- " << s.sdCorrelation;
    err << std::fixed << std::setprecision(4) << s.meanRmse << " +/- " << s.sdRmse;
    table << std::left << std::setw(24) << axis_label(axis) << std::setw(22) << corr.str()
          << err.str() << '\n';
  }
  out << table.str();
}

void write_model(std::ostream& out, const ModelFit& fit) {
  Json j;
  j["schema"] = kModelSchema;
  j["participation"] = lognormal_json(fit.participation);
  Json byLoc = Json::object();
  for (const auto& [loc, p] : fit.participationByLocation) byLoc[loc] = lognormal_json(p);
  j["participation_by_location"] = byLoc;
  Json lambda = Json::object();
  for (const auto& [loc, l] : fit.lambda) lambda[loc] = l;
  j["lambda"] = lambda;
  j["pmf_day"] = pmf_json(fit.pmfDay);
  j["pmf_time"] = pmf_json(fit.pmfTime);
  j["pmf_evtype"] = pmf_json(fit.pmfEvType);
  Json meta;
  meta["window_start"] = fit.window.first.iso();
  meta["window_end"] = fit.window.last.iso();
  meta["reports"] = fit.reports;
  meta["users"] = fit.users;
  meta["weekly_samples"] = fit.weeklySamples;
  meta["outlier_pct"] = fit.outlierPct ? Json(*fit.outlierPct) : Json(nullptr);
  meta["outlier_users"] = fit.outlierUsers;
  j["metadata"] = meta;
  Json diag;
  diag["qq_r2"] = fit.qq.r2;
  Json acf = Json::object();
  for (const auto& [loc, values] : fit.acf) acf[loc] = values;
  diag["acf"] = acf;
  j["diagnostics"] = diag;
  out << j.dump(2) << '\n';
}

ModelFit read_model(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("schema", std::string{}) != kModelSchema) {
      throw InputError("model file schema must be '" + std::string(kModelSchema) + "'");
    }
    ModelFit fit;
    fit.participation = lognormal_from_json(j.at("participation"));
    if (j.contains("participation_by_location")) {
      for (const auto& [loc, p] : j["participation_by_location"].items()) {
        fit.participationByLocation[loc] = lognormal_from_json(p);
      }
    }
    for (const auto& [loc, l] : j.at("lambda").items()) fit.lambda[loc] = l.get<double>();
    fit.pmfDay = pmf_from_json(j.at("pmf_day"), "pmf_day");
    fit.pmfTime = pmf_from_json(j.at("pmf_time"), "pmf_time");
    fit.pmfEvType = pmf_from_json(j.at("pmf_evtype"), "pmf_evtype");
    day_probs(fit.pmfDay);
    time_probs(fit.pmfTime);
    const Json& meta = j.at("metadata");
    fit.window = {Date::parse_iso(meta.at("window_start").get<std::string>()),
                  Date::parse_iso(meta.at("window_end").get<std::string>())};
    fit.reports = meta.value("reports", std::uint64_t{0});
    fit.users = meta.value("users", std::uint64_t{0});
    fit.weeklySamples = meta.value("weekly_samples", std::uint64_t{0});
    if (meta.contains("outlier_pct") && !meta["outlier_pct"].is_null()) {
      fit.outlierPct = meta["outlier_pct"].get<double>();
    }
    fit.outlierUsers = meta.value("outlier_users", std::uint64_t{0});
    if (j.contains("diagnostics")) {
      const Json& diag = j["diagnostics"];
      fit.qq.r2 = diag.value("qq_r2", 0.0);
      if (diag.contains("acf")) {
        for (const auto& [loc, values] : diag["acf"].items()) {
          fit.acf[loc] = values.get<std::vector<double>>();
        }
      }
    }
    return fit;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace pssim::io
