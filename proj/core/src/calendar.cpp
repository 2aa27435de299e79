#include "volatext/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "volatext/types.hpp"

namespace volatext {
namespace {

using namespace std::chrono;

// 1970-01-01 was a Thursday; the Monday starting its ISO week is day -3.
constexpr std::int64_t kEpochMondayOffset = 3;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool parse_int(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string format_ymd(const year_month_day& ymd) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d))
    return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

std::string format_date(Date date) { return format_ymd(year_month_day{date}); }

Granularity parse_granularity(std::string_view name) {
  if (name == "year") return Granularity::year;
  if (name == "month") return Granularity::month;
  if (name == "week") return Granularity::week;
  if (name == "day") return Granularity::day;
  if (name == "hour") return Granularity::hour;
  if (name == "minute") return Granularity::minute;
  throw ConfigError("unknown granularity '" + std::string(name) + "'");
}

std::string_view to_string(Granularity granularity) {
  switch (granularity) {
    case Granularity::year: return "year";
    case Granularity::month: return "month";
    case Granularity::week: return "week";
    case Granularity::day: return "day";
    case Granularity::hour: return "hour";
    case Granularity::minute: return "minute";
  }
  return "?";
}

std::int64_t bucket_key(Date date, Granularity granularity) {
  const std::int64_t days_since_epoch = date.time_since_epoch().count();
  const year_month_day ymd{date};
  switch (granularity) {
    case Granularity::year:
      return static_cast<int>(ymd.year());
    case Granularity::month:
      return static_cast<std::int64_t>(static_cast<int>(ymd.year())) * 12 +
             (static_cast<unsigned>(ymd.month()) - 1);
    case Granularity::week:
      return floor_div(days_since_epoch + kEpochMondayOffset, 7);
    case Granularity::day:
      return days_since_epoch;
    case Granularity::hour:
      return days_since_epoch * 24;
    case Granularity::minute:
      return days_since_epoch * 24 * 60;
  }
  return 0;
}

std::string bucket_label(std::int64_t key, Granularity granularity) {
  char buf[64];
  switch (granularity) {
    case Granularity::year:
      std::snprintf(buf, sizeof buf, "%04lld", static_cast<long long>(key));
      return buf;
    case Granularity::month:
      std::snprintf(buf, sizeof buf, "%04lld-%02lld", static_cast<long long>(floor_div(key, 12)),
                    static_cast<long long>(key - floor_div(key, 12) * 12 + 1));
      return buf;
    case Granularity::week: {
      const sys_days monday{days{key * 7 - kEpochMondayOffset}};
      const sys_days thursday = monday + days{3};
      const year_month_day ymd{thursday};
      const sys_days jan1{ymd.year() / January / 1};
      const auto week = (thursday - jan1).count() / 7 + 1;
      std::snprintf(buf, sizeof buf, "%04d-W%02lld", static_cast<int>(ymd.year()),
                    static_cast<long long>(week));
      return buf;
    }
    case Granularity::day:
      return format_date(sys_days{days{key}});
    case Granularity::hour: {
      const auto day_key = floor_div(key, 24);
      std::snprintf(buf, sizeof buf, "%sT%02lld",
                    format_date(sys_days{days{day_key}}).c_str(),
                    static_cast<long long>(key - day_key * 24));
      return buf;
    }
    case Granularity::minute: {
      const auto day_key = floor_div(key, 1440);
      const auto minute_of_day = key - day_key * 1440;
      std::snprintf(buf, sizeof buf, "%sT%02lld:%02lld",
                    format_date(sys_days{days{day_key}}).c_str(),
                    static_cast<long long>(minute_of_day / 60),
                    static_cast<long long>(minute_of_day % 60));
      return buf;
    }
  }
  return {};
}

}  // namespace volatext
