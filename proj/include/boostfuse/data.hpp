#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "boostfuse/errors.hpp"

namespace boostfuse {

struct Date {
  int year = 0;
  int month = 0;  // 1..12
  int day = 0;    // 1..31

  auto operator<=>(const Date&) const = default;

  static Date parse(const std::string& iso);  // YYYY-MM-DD only
  std::string to_string() const;
};

struct Month {
  int year = 0;
  int month = 0;

  auto operator<=>(const Month&) const = default;

  static Month parse(const std::string& iso);  // YYYY-MM
};

// One gateway reading at 1-minute cadence.
struct MinutelyRecord {
  Date date;
  int hour = 0;
  int minute = 0;
  int second = 0;
  double instantaneous_active_power = 0;    // kW
  double daily_cumulative_electricity = 0;  // kWh, non-decreasing per day
  double yearly_cumulative_electricity = 0;
  double yearly_mean_cop = 0;

  int seconds_of_day() const { return hour * 3600 + minute * 60 + second; }
};

// One day of plant telemetry. The five canonical fields mirror the daily
// database table; extras carries any additional named numeric columns
// (sensor temperatures etc.) so wider datasets flow through unchanged.
struct DailyRecord {
  Date date;
  double host_daily_power = 0;
  double chiller_pump_daily_power = 0;
  double cooling_tower_daily_power = 0;
  double room_daily_electricity = 0;
  double system_daily_cooling = 0;
  std::map<std::string, double> extras;

  // Field lookup by canonical name, falling back to extras.
  // Throws SchemaError for unknown names.
  double field(const std::string& name) const;
  static bool is_canonical(const std::string& name);
};

// Column-named numeric table with one designated target column.
struct DataMatrix {
  std::vector<std::string> feature_names;
  std::string target_name;
  std::size_t n_rows = 0;
  std::vector<double> values;  // row-major, n_rows x feature_names.size()
  std::vector<double> target;  // length n_rows

  std::size_t n_cols() const { return feature_names.size(); }
  double at(std::size_t row, std::size_t col) const {
    return values[row * feature_names.size() + col];
  }
  std::vector<double> column(std::size_t col) const;
  std::size_t feature_index(const std::string& name) const;  // SchemaError if absent
};

// canonical field name -> CSV header string
using AliasTable = std::map<std::string, std::string>;

AliasTable parse_alias_table(std::istream& in);

struct CsvOptions {
  AliasTable aliases;    // empty entry means the canonical name is the header
  bool lenient = false;  // drop bad rows instead of throwing RowError
};

std::vector<DailyRecord> parse_daily_csv(std::istream& in,
                                         const CsvOptions& options = {});
std::vector<MinutelyRecord> parse_minutely_csv(std::istream& in,
                                               const CsvOptions& options = {});

void write_daily_csv(const std::vector<DailyRecord>& records, std::ostream& out);

// Collapses one day of minutely readings: the cumulative-electricity column
// takes its value at the last timestamp; instantaneous power is averaged
// into host_daily_power.
DailyRecord aggregate_minutely(const std::vector<MinutelyRecord>& records,
                               const Date& day);

// Keeps exactly the days on which the refrigeration system ran
// (system_daily_cooling != 0). Order preserved; idempotent.
std::vector<DailyRecord> filter_operating_days(
    const std::vector<DailyRecord>& records);

struct MonthSplit {
  std::vector<DailyRecord> train;
  std::vector<DailyRecord> test;
  std::vector<std::string> warnings;  // set when a bucket comes out empty
};

MonthSplit split_by_month(const std::vector<DailyRecord>& records,
                          const Month& train_month, const Month& test_month);

DataMatrix to_matrix(const std::vector<DailyRecord>& records,
                     const std::vector<std::string>& feature_names,
                     const std::string& target_name);

// All numeric column names present on a record set (canonical + extras).
std::vector<std::string> column_names(const std::vector<DailyRecord>& records);

}  // namespace boostfuse
