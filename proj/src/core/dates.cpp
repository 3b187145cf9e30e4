#include "core/dates.hpp"

#include <array>
#include <cstdio>
#include <regex>

#include "core/text.hpp"

namespace vespa {

namespace {

int expand_year(const std::string& y) {
  const int v = std::stoi(y);
  if (y.size() != 2) return v;
  return v < 70 ? 2000 + v : 1900 + v;
}

std::optional<CalendarDate> make(int y, int m, int d) {
  if (!is_valid_calendar_date(y, m, d)) return std::nullopt;
  return CalendarDate{y, m, d};
}

std::string region_of(std::string_view locale) {
  std::string tag = text::trim(locale);
  const auto sep = tag.find_last_of("-_");
  if (sep != std::string::npos) tag = tag.substr(sep + 1);
  for (auto& c : tag) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return tag;
}

}  // namespace

bool is_valid_calendar_date(int year, int month, int day) {
  if (year < 1 || month < 1 || month > 12 || day < 1) return false;
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  const int limit = kDays[month - 1] + (month == 2 && leap ? 1 : 0);
  return day <= limit;
}

std::optional<int> month_from_name(std::string_view name) {
  static constexpr std::array<std::string_view, 12> kMonths = {"january", "february", "march",     "april",
                                                               "may",     "june",     "july",      "august",
                                                               "september", "october", "november", "december"};
  auto n = text::to_lower(name);
  if (!n.empty() && n.back() == '.') n.pop_back();
  if (n == "sept") return 9;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (n == kMonths[i]) return static_cast<int>(i + 1);
    if (n.size() == 3 && kMonths[i].substr(0, 3) == n) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

DateConvention convention_for(std::string_view locale) {
  const auto region = region_of(locale);
  if (region == "US") return DateConvention::US;
  static constexpr std::array<std::string_view, 30> kEu = {
      "EU", "GB", "UK", "IE", "DE", "FR", "ES", "IT", "NL", "BE", "PT", "AT", "CH", "SE", "NO",
      "DK", "FI", "PL", "CZ", "GR", "HU", "RO", "LU", "SK", "SI", "HR", "BG", "EE", "LV", "LT"};
  for (const auto r : kEu)
    if (region == r) return DateConvention::EU;
  return DateConvention::Neutral;
}

std::optional<CalendarDate> parse_date(std::string_view input, DateConvention convention) {
  const auto s = text::collapse_whitespace(input);
  std::smatch m;
  static const std::regex iso(R"(^(\d{4})[-/.](\d{1,2})[-/.](\d{1,2})$)");
  if (std::regex_match(s, m, iso)) return make(std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]));

  static const std::regex numeric(R"(^(\d{1,2})[-/.](\d{1,2})[-/.](\d{4}|\d{2})$)");
  if (std::regex_match(s, m, numeric)) {
    const int a = std::stoi(m[1]), b = std::stoi(m[2]);
    const int y = expand_year(m[3]);
    if (convention == DateConvention::US) return make(y, a, b);
    if (convention == DateConvention::EU) return make(y, b, a);
    return std::nullopt;
  }

  static const std::regex month_first(R"(^([A-Za-z]+\.?)\s(\d{1,2})(?:st|nd|rd|th)?,?\s(\d{4}|\d{2})$)",
                                      std::regex::icase);
  if (std::regex_match(s, m, month_first)) {
    const auto month = month_from_name(m[1].str());
    if (month) return make(expand_year(m[3]), *month, std::stoi(m[2]));
  }
  static const std::regex day_first(R"(^(\d{1,2})(?:st|nd|rd|th)?\s(?:of\s)?([A-Za-z]+\.?),?\s(\d{4}|\d{2})$)",
                                    std::regex::icase);
  if (std::regex_match(s, m, day_first)) {
    const auto month = month_from_name(m[2].str());
    if (month) return make(expand_year(m[3]), *month, std::stoi(m[1]));
  }
  return std::nullopt;
}

std::optional<CalendarDate> parse_date(std::string_view text, std::string_view locale) {
  return parse_date(text, convention_for(locale));
}

bool is_net_terms(std::string_view input) {
  static const std::regex net(R"(^(net\s*\d{1,3}(\s*days?)?|\d{1,3}\s*days?)$)", std::regex::icase);
  const auto s = text::collapse_whitespace(input);
  return std::regex_match(s, net);
}

std::string format_iso(const CalendarDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

}  // namespace vespa
