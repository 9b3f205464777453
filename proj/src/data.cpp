#include "boostfuse/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace boostfuse {

namespace {

const char* kCanonicalFields[] = {
    "host_daily_power",     "chiller_pump_daily_power",
    "cooling_tower_daily_power", "room_daily_electricity",
    "system_daily_cooling"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::optional<double> parse_finite(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> parse_int(const std::string& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Date Date::parse(const std::string& iso) {
  const std::string s = trim(iso);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw ValidationError("bad date (expected YYYY-MM-DD): '" + s + "'");
  auto y = parse_int(s.substr(0, 4));
  auto m = parse_int(s.substr(5, 2));
  auto d = parse_int(s.substr(8, 2));
  if (!y || !m || !d || *m < 1 || *m > 12 || *d < 1 || *d > 31)
    throw ValidationError("bad date (expected YYYY-MM-DD): '" + s + "'");
  return {*y, *m, *d};
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

Month Month::parse(const std::string& iso) {
  const std::string s = trim(iso);
  if (s.size() != 7 || s[4] != '-')
    throw ValidationError("bad month (expected YYYY-MM): '" + s + "'");
  auto y = parse_int(s.substr(0, 4));
  auto m = parse_int(s.substr(5, 2));
  if (!y || !m || *m < 1 || *m > 12)
    throw ValidationError("bad month (expected YYYY-MM): '" + s + "'");
  return {*y, *m};
}

bool DailyRecord::is_canonical(const std::string& name) {
  for (const char* f : kCanonicalFields)
    if (name == f) return true;
  return false;
}

double DailyRecord::field(const std::string& name) const {
  if (name == "host_daily_power") return host_daily_power;
  if (name == "chiller_pump_daily_power") return chiller_pump_daily_power;
  if (name == "cooling_tower_daily_power") return cooling_tower_daily_power;
  if (name == "room_daily_electricity") return room_daily_electricity;
  if (name == "system_daily_cooling") return system_daily_cooling;
  auto it = extras.find(name);
  if (it == extras.end()) throw SchemaError("unknown column: " + name);
  return it->second;
}

std::vector<double> DataMatrix::column(std::size_t col) const {
  std::vector<double> out(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) out[i] = at(i, col);
  return out;
}

std::size_t DataMatrix::feature_index(const std::string& name) const {
  auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) throw SchemaError("unknown feature: " + name);
  return static_cast<std::size_t>(it - feature_names.begin());
}

AliasTable parse_alias_table(std::istream& in) {
  AliasTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw RowError(lineno, "expected key=value in alias table");
    table[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return table;
}

namespace {

// Maps header strings to column indices through the alias table.
struct HeaderMap {
  std::map<std::string, std::size_t> index_by_header;
  std::vector<std::string> headers;

  std::optional<std::size_t> find(const std::string& canonical,
                                  const AliasTable& aliases) const {
    std::string header = canonical;
    if (auto it = aliases.find(canonical); it != aliases.end())
      header = it->second;
    if (auto it = index_by_header.find(header); it != index_by_header.end())
      return it->second;
    return std::nullopt;
  }
};

HeaderMap read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty input: no header row");
  HeaderMap hm;
  hm.headers = split_csv_line(line);
  for (std::size_t i = 0; i < hm.headers.size(); ++i)
    hm.index_by_header[hm.headers[i]] = i;
  return hm;
}

double require_numeric(const std::vector<std::string>& cells, std::size_t col,
                       std::size_t lineno, const std::string& header) {
  if (col >= cells.size())
    throw RowError(lineno, "missing value for column '" + header + "'");
  auto v = parse_finite(cells[col]);
  if (!v)
    throw RowError(lineno, "unparseable numeric '" + cells[col] +
                               "' in column '" + header + "'");
  return *v;
}

}  // namespace

std::vector<DailyRecord> parse_daily_csv(std::istream& in,
                                         const CsvOptions& options) {
  const HeaderMap hm = read_header(in);

  auto date_col = hm.find("date", options.aliases);
  if (!date_col) throw SchemaError("missing mapped column: date");

  std::map<std::string, std::size_t> canonical_cols;
  std::set<std::size_t> claimed{*date_col};
  for (const char* f : kCanonicalFields) {
    auto col = hm.find(f, options.aliases);
    if (!col) throw SchemaError(std::string("missing mapped column: ") + f);
    canonical_cols[f] = *col;
    claimed.insert(*col);
  }

  // Any unclaimed column rides along as an extra numeric feature.
  std::vector<std::pair<std::string, std::size_t>> extra_cols;
  for (std::size_t i = 0; i < hm.headers.size(); ++i)
    if (!claimed.count(i)) extra_cols.emplace_back(hm.headers[i], i);

  std::vector<DailyRecord> records;
  std::set<Date> seen;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    try {
      DailyRecord r;
      if (*date_col >= cells.size())
        throw RowError(lineno, "missing date value");
      r.date = Date::parse(cells[*date_col]);
      r.host_daily_power = require_numeric(
          cells, canonical_cols["host_daily_power"], lineno, "host_daily_power");
      r.chiller_pump_daily_power =
          require_numeric(cells, canonical_cols["chiller_pump_daily_power"],
                          lineno, "chiller_pump_daily_power");
      r.cooling_tower_daily_power =
          require_numeric(cells, canonical_cols["cooling_tower_daily_power"],
                          lineno, "cooling_tower_daily_power");
      r.room_daily_electricity =
          require_numeric(cells, canonical_cols["room_daily_electricity"],
                          lineno, "room_daily_electricity");
      r.system_daily_cooling =
          require_numeric(cells, canonical_cols["system_daily_cooling"], lineno,
                          "system_daily_cooling");
      for (const auto& [header, col] : extra_cols)
        r.extras[header] = require_numeric(cells, col, lineno, header);
      if (!seen.insert(r.date).second)
        throw ValidationError("duplicate date: " + r.date.to_string());
      records.push_back(std::move(r));
    } catch (const RowError&) {
      if (!options.lenient) throw;
    } catch (const ValidationError& e) {
      if (!options.lenient) throw;
    }
  }
  return records;
}

std::vector<MinutelyRecord> parse_minutely_csv(std::istream& in,
                                               const CsvOptions& options) {
  const HeaderMap hm = read_header(in);
  const char* fields[] = {"timestamp", "instantaneous_active_power",
                          "daily_cumulative_electricity",
                          "yearly_cumulative_electricity", "yearly_mean_cop"};
  std::map<std::string, std::size_t> cols;
  for (const char* f : fields) {
    auto col = hm.find(f, options.aliases);
    if (!col) throw SchemaError(std::string("missing mapped column: ") + f);
    cols[f] = *col;
  }

  std::vector<MinutelyRecord> records;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    try {
      MinutelyRecord r;
      if (cols["timestamp"] >= cells.size())
        throw RowError(lineno, "missing timestamp");
      // timestamp: "YYYY-MM-DD HH:MM:SS"
      const std::string ts = cells[cols["timestamp"]];
      auto sp = ts.find(' ');
      if (sp == std::string::npos)
        throw RowError(lineno, "bad timestamp '" + ts + "'");
      r.date = Date::parse(ts.substr(0, sp));
      const std::string tod = trim(ts.substr(sp + 1));
      if (tod.size() != 8 || tod[2] != ':' || tod[5] != ':')
        throw RowError(lineno, "bad time of day '" + tod + "'");
      auto h = parse_int(tod.substr(0, 2));
      auto m = parse_int(tod.substr(3, 2));
      auto s = parse_int(tod.substr(6, 2));
      if (!h || !m || !s || *h > 23 || *m > 59 || *s > 59)
        throw RowError(lineno, "bad time of day '" + tod + "'");
      r.hour = *h;
      r.minute = *m;
      r.second = *s;
      r.instantaneous_active_power = require_numeric(
          cells, cols["instantaneous_active_power"], lineno,
          "instantaneous_active_power");
      r.daily_cumulative_electricity = require_numeric(
          cells, cols["daily_cumulative_electricity"], lineno,
          "daily_cumulative_electricity");
      r.yearly_cumulative_electricity = require_numeric(
          cells, cols["yearly_cumulative_electricity"], lineno,
          "yearly_cumulative_electricity");
      r.yearly_mean_cop = require_numeric(cells, cols["yearly_mean_cop"],
                                          lineno, "yearly_mean_cop");
      records.push_back(r);
    } catch (const RowError&) {
      if (!options.lenient) throw;
    }
  }
  return records;
}

void write_daily_csv(const std::vector<DailyRecord>& records,
                     std::ostream& out) {
  std::set<std::string> extra_names;
  for (const auto& r : records)
    for (const auto& [k, v] : r.extras) extra_names.insert(k);

  out << "date,host_daily_power,chiller_pump_daily_power,"
         "cooling_tower_daily_power,room_daily_electricity,"
         "system_daily_cooling";
  for (const auto& name : extra_names) out << ',' << name;
  out << '\n';

  char buf[64];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (const auto& r : records) {
    out << r.date.to_string();
    emit(r.host_daily_power);
    emit(r.chiller_pump_daily_power);
    emit(r.cooling_tower_daily_power);
    emit(r.room_daily_electricity);
    emit(r.system_daily_cooling);
    for (const auto& name : extra_names) {
      auto it = r.extras.find(name);
      if (it == r.extras.end())
        throw ValidationError("record " + r.date.to_string() +
                              " is missing extra column '" + name + "'");
      emit(it->second);
    }
    out << '\n';
  }
}

DailyRecord aggregate_minutely(const std::vector<MinutelyRecord>& records,
                               const Date& day) {
  if (records.empty())
    throw ArgumentError("aggregate_minutely: no records for " + day.to_string());
  for (const auto& r : records)
    if (r.date != day)
      throw ValidationError("aggregate_minutely: record dated " +
                            r.date.to_string() + " is outside " +
                            day.to_string());

  std::vector<MinutelyRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const MinutelyRecord& a, const MinutelyRecord& b) {
                     return a.seconds_of_day() < b.seconds_of_day();
                   });

  std::string offenders;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].daily_cumulative_electricity <
        sorted[i - 1].daily_cumulative_electricity) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", sorted[i].hour,
                    sorted[i].minute, sorted[i].second);
      if (!offenders.empty()) offenders += ", ";
      offenders += buf;
    }
  }
  if (!offenders.empty())
    throw ValidationError(
        "daily_cumulative_electricity decreases at timestamps: " + offenders);

  double power_sum = 0;
  for (const auto& r : sorted) power_sum += r.instantaneous_active_power;

  DailyRecord out;
  out.date = day;
  out.host_daily_power = power_sum / static_cast<double>(sorted.size());
  out.room_daily_electricity = sorted.back().daily_cumulative_electricity;
  return out;
}

std::vector<DailyRecord> filter_operating_days(
    const std::vector<DailyRecord>& records) {
  std::vector<DailyRecord> out;
  out.reserve(records.size());
  for (const auto& r : records)
    if (r.system_daily_cooling != 0.0) out.push_back(r);
  return out;
}

MonthSplit split_by_month(const std::vector<DailyRecord>& records,
                          const Month& train_month, const Month& test_month) {
  if (train_month == test_month)
    throw ArgumentError("split_by_month: train and test month are equal");
  MonthSplit out;
  for (const auto& r : records) {
    const Month m{r.date.year, r.date.month};
    if (m == train_month)
      out.train.push_back(r);
    else if (m == test_month)
      out.test.push_back(r);
  }
  if (out.train.empty()) out.warnings.push_back("train month has no records");
  if (out.test.empty()) out.warnings.push_back("test month has no records");
  return out;
}

DataMatrix to_matrix(const std::vector<DailyRecord>& records,
                     const std::vector<std::string>& feature_names,
                     const std::string& target_name) {
  if (records.empty()) throw ArgumentError("to_matrix: no records");
  if (feature_names.empty()) throw ArgumentError("to_matrix: no features");
  for (const auto& f : feature_names)
    if (f == target_name)
      throw SchemaError("target '" + target_name + "' listed among features");

  DataMatrix m;
  m.feature_names = feature_names;
  m.target_name = target_name;
  m.n_rows = records.size();
  m.values.reserve(records.size() * feature_names.size());
  m.target.reserve(records.size());
  for (const auto& r : records) {
    for (const auto& f : feature_names) m.values.push_back(r.field(f));
    m.target.push_back(r.field(target_name));
  }
  return m;
}

std::vector<std::string> column_names(const std::vector<DailyRecord>& records) {
  std::set<std::string> names;
  for (const char* f : kCanonicalFields) names.insert(f);
  for (const auto& r : records)
    for (const auto& [k, v] : r.extras) names.insert(k);
  return {names.begin(), names.end()};
}

}  // namespace boostfuse
