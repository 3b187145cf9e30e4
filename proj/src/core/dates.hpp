#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace vespa {

struct CalendarDate {
  int year = 0;
  int month = 0;
  int day = 0;
  bool operator==(const CalendarDate&) const = default;
};

/// How a locale tag orders numeric dates: US m/d/y, EU-tagged locales d/m/y.
/// Neutral rejects numeric d/m forms. ISO and month-name forms (either
/// order) parse under every convention.
enum class DateConvention { US, EU, Neutral };

DateConvention convention_for(std::string_view locale);

/// ISO y-m-d is accepted under every convention. Two-digit years map to
/// 2000-2069 and 1970-1999.
std::optional<CalendarDate> parse_date(std::string_view text, DateConvention convention);
std::optional<CalendarDate> parse_date(std::string_view text, std::string_view locale);

/// "Net 30", "30 days", "net 45 days".
bool is_net_terms(std::string_view text);

std::string format_iso(const CalendarDate& d);

bool is_valid_calendar_date(int year, int month, int day);
std::optional<int> month_from_name(std::string_view name);

}  // namespace vespa
