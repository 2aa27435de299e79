#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace volatext {

using Date = std::chrono::sys_days;

enum class Granularity { year, month, week, day, hour, minute };

/// Parses a strict ISO-8601 calendar date `YYYY-MM-DD`.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

Granularity parse_granularity(std::string_view name);
std::string_view to_string(Granularity granularity);

/// Integer key of the calendar bucket containing `date`. Consecutive buckets
/// have consecutive keys, so the difference of two keys is the number of
/// slices between them. Weeks are ISO-8601 weeks (Monday start).
std::int64_t bucket_key(Date date, Granularity granularity);

/// Human-readable label of a bucket: `2016`, `2016-03`, `2016-W09`,
/// `2016-03-01`, `2016-03-01T00`, `2016-03-01T00:00`.
std::string bucket_label(std::int64_t key, Granularity granularity);

}  // namespace volatext
