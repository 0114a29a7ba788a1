#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace imdet {

/// Measurement time at hour granularity (UTC).
using Timestamp = std::chrono::sys_time<std::chrono::hours>;

/// ISO-8601 hour, e.g. "2023-01-01T05:00Z".
std::string format_timestamp(Timestamp t);

/// Parses the format written by format_timestamp. Throws InvalidInput.
Timestamp parse_timestamp(std::string_view s);

}  // namespace imdet
