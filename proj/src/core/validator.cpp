#include "core/validator.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>

#include "core/dates.hpp"
#include "core/text.hpp"

namespace vespa {

namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 5> kSymbols = {{
    {"$", "USD"},
    {"\xE2\x82\xAC", "EUR"},  // €
    {"\xC2\xA3", "GBP"},      // £
    {"\xC2\xA5", "JPY"},      // ¥
    {"\xE2\x82\xB9", "INR"},  // ₹
}};

constexpr std::array<std::string_view, 32> kCodes = {
    "USD", "EUR", "GBP", "JPY", "INR", "AUD", "CAD", "CHF", "CNY", "NZD", "SGD", "HKD", "SEK", "NOK", "DKK", "ZAR",
    "MXN", "BRL", "RUB", "KRW", "AED", "SAR", "PLN", "CZK", "HUF", "TRY", "THB", "MYR", "IDR", "PHP", "ILS", "CNH"};

std::string code_alternation() {
  std::string out;
  for (const auto c : kCodes) {
    if (!out.empty()) out += '|';
    out += c;
  }
  return out;
}

const std::string kNumber = R"(\d[\d,]*(?:\.\d+)?)";
const std::string kSymbolAlt = "(?:\\$|\xE2\x82\xAC|\xC2\xA3|\xC2\xA5|\xE2\x82\xB9)";
const std::string kMonthAlt =
    "(?:jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?|aug(?:ust)?|sept?(?:ember)?|"
    "oct(?:ober)?|nov(?:ember)?|dec(?:ember)?)";

class PatternRecognizer final : public RecognizerProvider {
public:
  PatternRecognizer()
      : money_(kSymbolAlt + "\\s?" + kNumber + "|" + kNumber + "\\s?(?:(?:" + code_alternation() + ")\\b|" +
               kSymbolAlt + ")|(?:" + code_alternation() + ")\\s?" + kNumber),
        date_(R"(\b\d{4}[-/.]\d{1,2}[-/.]\d{1,2}\b|\b\d{1,2}[-/.]\d{1,2}[-/.](?:\d{4}|\d{2})\b|\b)" + kMonthAlt +
                  R"(\.?\s+\d{1,2}(?:st|nd|rd|th)?,?\s+\d{4}\b|\b\d{1,2}(?:st|nd|rd|th)?\s+(?:of\s+)?)" + kMonthAlt +
                  R"(\.?,?\s+\d{4}\b)",
              std::regex::icase),
        org_(R"(\b(?:[A-Z][A-Za-z0-9&'.-]*\s+)+(?:Inc|Ltd|LLC|GmbH|Corp|Co)\b\.?)") {}

  std::vector<EntitySpan> recognize(std::string_view input) const override {
    const std::string s(input);
    std::vector<EntitySpan> out;
    collect(s, money_, "MONEY", out, nullptr);
    collect(s, date_, "DATE", out, [](const std::string& m) {
      return parse_date(m, DateConvention::US).has_value() || parse_date(m, DateConvention::EU).has_value();
    });
    collect(s, org_, "ORG", out, nullptr);
    std::sort(out.begin(), out.end(), [](const EntitySpan& a, const EntitySpan& b) {
      return std::tie(a.begin, a.end, a.label) < std::tie(b.begin, b.end, b.label);
    });
    return out;
  }

private:
  template <typename Accept>
  static void collect(const std::string& s, const std::regex& re, const char* label, std::vector<EntitySpan>& out,
                      Accept accept) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
      auto surface = it->str();
      std::size_t begin = static_cast<std::size_t>(it->position());
      // trailing whitespace can be captured by the ORG run pattern
      while (!surface.empty() && std::isspace(static_cast<unsigned char>(surface.back()))) surface.pop_back();
      if constexpr (!std::is_same_v<Accept, std::nullptr_t>) {
        if (!accept(surface)) continue;
      }
      out.push_back({label, begin, begin + surface.size(), surface});
    }
  }

  std::regex money_;
  std::regex date_;
  std::regex org_;
};

bool is_plain_decimal(const std::string& s) {
  static const std::regex re(R"(^[+-]?(\d+(\.\d*)?|\.\d+)$)");
  return std::regex_match(s, re);
}

}  // namespace

std::shared_ptr<const RecognizerProvider> builtin_recognizer() {
  static const auto instance = std::make_shared<const PatternRecognizer>();
  return instance;
}

bool is_currency_code(std::string_view token) {
  return std::any_of(kCodes.begin(), kCodes.end(), [&](std::string_view c) { return c == token; });
}

std::string detect_currency(std::string_view value) {
  for (const auto& [sym, code] : kSymbols)
    if (value.find(sym) != std::string_view::npos) return std::string(code);
  std::string word;
  auto flush = [&]() -> std::string {
    std::string hit;
    if (word.size() == 3 && is_currency_code(word)) hit = word;
    word.clear();
    return hit;
  };
  for (char c : value) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word.push_back(c);
    } else if (auto hit = flush(); !hit.empty()) {
      return hit;
    }
  }
  return flush();
}

std::string strip_amount_decorations(std::string_view value) {
  std::string s(value);
  for (const auto& [sym, _] : kSymbols) {
    for (auto at = s.find(sym); at != std::string::npos; at = s.find(sym)) s.erase(at, sym.size());
  }
  std::string out, word;
  auto flush = [&] {
    if (!(word.size() == 3 && is_currency_code(word))) out += word;
    word.clear();
  };
  for (char c : s) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word.push_back(c);
      continue;
    }
    flush();
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) continue;
    out.push_back(c);
  }
  flush();
  return out;
}

bool check_type(std::string_view answer, ResponseType type, std::string_view locale) {
  if (type == ResponseType::Text) return true;
  const auto trimmed = text::trim(answer);
  if (trimmed.empty()) return false;
  switch (type) {
    case ResponseType::Numeric:
      return is_plain_decimal(strip_amount_decorations(trimmed));
    case ResponseType::Money:
      return is_plain_decimal(strip_amount_decorations(trimmed)) && !detect_currency(trimmed).empty();
    case ResponseType::Date:
      return is_net_terms(trimmed) || parse_date(trimmed, locale).has_value();
    case ResponseType::Alphanum: {
      const bool alnum = std::any_of(trimmed.begin(), trimmed.end(),
                                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
      for (std::size_t i = 0; i + 1 < answer.size(); ++i)
        if (std::isspace(static_cast<unsigned char>(answer[i])) &&
            std::isspace(static_cast<unsigned char>(answer[i + 1])))
          return false;
      return alnum;
    }
    case ResponseType::Entity:
      return true;
    case ResponseType::Text:
      return true;
  }
  return false;
}

ValidationOutcome apply_policies(std::string_view answer, const std::vector<ValidationPolicy>& policies,
                                 const RecognizerProvider& recognizer) {
  ValidationOutcome out;
  std::vector<EntitySpan> entities;
  bool recognized = false;
  std::string recognizer_error;
  const std::string ans(answer);

  for (std::size_t i = 0; i < policies.size(); ++i) {
    if (const auto* ner = std::get_if<NerPolicy>(&policies[i])) {
      if (!recognized) {
        recognized = true;
        try {
          entities = recognizer.recognize(answer);
        } catch (const std::exception& e) {
          recognizer_error = e.what();
        }
      }
      if (!recognizer_error.empty()) {
        out.errors.push_back("policy " + std::to_string(i) + ": recognizer failed: " + recognizer_error);
        continue;
      }
      std::vector<bool> covered(ans.size(), false);
      for (const auto& e : entities) {
        if (e.label != ner->entity_label) continue;
        for (std::size_t b = e.begin; b < std::min(e.end, ans.size()); ++b) covered[b] = true;
      }
      std::size_t total = 0, hit = 0;
      for (std::size_t b = 0; b < ans.size(); ++b) {
        if (std::isspace(static_cast<unsigned char>(ans[b]))) continue;
        ++total;
        if (covered[b]) ++hit;
      }
      if (total > 0 && 2 * hit >= total) out.passed_policies.push_back(i);
    } else {
      const auto& rx = std::get<RegexPolicy>(policies[i]);
      const auto compiled = rx.compiled ? rx.compiled : compile_policy_regex(rx.pattern);
      if (std::regex_search(ans, *compiled)) out.passed_policies.push_back(i);
    }
  }
  return out;
}

double boost(double confidence, double factor) { return std::min(1.0, confidence * factor); }

}  // namespace vespa
