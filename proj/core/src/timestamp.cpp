#include "imdet/timestamp.hpp"

#include <charconv>
#include <cstdio>

#include "imdet/error.hpp"

namespace imdet {

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const auto hour = (t - day).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:00Z",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(hour));
  return buf;
}

namespace {

int parse_field(std::string_view s, std::size_t pos, std::size_t len,
                std::string_view whole) {
  int v = 0;
  const char* first = s.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, v);
  if (ec != std::errc{} || ptr != first + len)
    throw InvalidInput("malformed timestamp \"" + std::string(whole) + "\"");
  return v;
}

}  // namespace

Timestamp parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  // YYYY-MM-DDTHH:00Z
  if (s.size() != 17 || s[4] != '-' || s[7] != '-' || s[10] != 'T' ||
      s.substr(13) != ":00Z")
    throw InvalidInput("malformed timestamp \"" + std::string(s) + "\"");
  const int y = parse_field(s, 0, 4, s);
  const int mo = parse_field(s, 5, 2, s);
  const int d = parse_field(s, 8, 2, s);
  const int h = parse_field(s, 11, 2, s);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23)
    throw InvalidInput("timestamp out of range \"" + std::string(s) + "\"");
  return sys_days{ymd} + hours{h};
}

}  // namespace imdet
