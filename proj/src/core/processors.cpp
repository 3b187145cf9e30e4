#include "core/processors.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "core/dates.hpp"
#include "core/error.hpp"
#include "core/text.hpp"
#include "core/validator.hpp"

namespace vespa {

namespace {

std::string strip_controls(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    const auto uc = static_cast<unsigned char>(c);
    if (uc < 0x20 && uc != '\n' && uc != '\t' && uc != '\r') continue;
    if (uc == 0x7F) continue;
    out.push_back(c);
  }
  return out;
}

template <class F>
bool has_unique(const std::vector<std::pair<std::string, F>>& chain, const std::string& name) {
  return std::none_of(chain.begin(), chain.end(), [&](const auto& p) { return p.first == name; });
}

DocumentTransform builtin_pre(const std::string& name) {
  if (name == "normalize_whitespace") return normalize_whitespace;
  throw ConfigError("unknown pre-processor \"" + name + "\"");
}

ValueTransform builtin_post(const std::string& name) {
  if (name == "date_to_iso")
    return [](const std::string& v, const PostContext& ctx) { return date_to_iso(v, ctx.locale); };
  if (name == "normalize_amount")
    return [](const std::string& v, const PostContext& ctx) { return normalize_amount(v, ctx.locale); };
  if (name == "trim") return [](const std::string& v, const PostContext&) { return text::collapse_whitespace(v); };
  throw ConfigError("unknown post-processor \"" + name + "\"");
}

}  // namespace

void ProcessorRegistry::add_pre(std::string name, DocumentTransform fn) {
  if (!has_unique(pre_, name)) throw ConfigError("duplicate pre-processor \"" + name + "\"");
  pre_.emplace_back(std::move(name), std::move(fn));
}

void ProcessorRegistry::add_post(const std::string& key, std::string name, ValueTransform fn) {
  auto& chain = post_[key];
  if (!has_unique(chain, name)) throw ConfigError("duplicate post-processor \"" + name + "\" for " + key);
  chain.emplace_back(std::move(name), std::move(fn));
}

Document ProcessorRegistry::run_pre(Document doc) const {
  for (const auto& [name, fn] : pre_) {
    try {
      doc = fn(std::move(doc));
    } catch (const std::exception& e) {
      throw PipelineError(Error::Code::Data, "pre-processor " + name + " failed: " + e.what());
    }
  }
  return doc;
}

std::string ProcessorRegistry::run_post(const std::string& value, const PostContext& ctx) const {
  auto it = post_.find(ctx.field_name);
  if (it == post_.end()) it = post_.find(std::string(to_string(ctx.response_type)));
  if (it == post_.end()) return value;
  std::string out = value;
  for (const auto& [name, fn] : it->second) {
    try {
      out = fn(out, ctx);
    } catch (const std::exception& e) {
      throw PipelineError(Error::Code::Data, "post-processor " + name + " failed on \"" + value + "\": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> ProcessorRegistry::pre_names() const {
  std::vector<std::string> out;
  for (const auto& [n, _] : pre_) out.push_back(n);
  return out;
}

std::vector<std::string> ProcessorRegistry::post_names(const std::string& key) const {
  std::vector<std::string> out;
  if (const auto it = post_.find(key); it != post_.end())
    for (const auto& [n, _] : it->second) out.push_back(n);
  return out;
}

ProcessorRegistry ProcessorRegistry::builtin() {
  ProcessorRegistry r;
  r.add_pre("normalize_whitespace", builtin_pre("normalize_whitespace"));
  r.add_post("DATE", "date_to_iso", builtin_post("date_to_iso"));
  r.add_post("NUMERIC", "normalize_amount", builtin_post("normalize_amount"));
  r.add_post("MONEY", "normalize_amount", builtin_post("normalize_amount"));
  return r;
}

ProcessorRegistry ProcessorRegistry::from_profile(const ExtractionProfile& profile) {
  const auto defaults = builtin();
  ProcessorRegistry r;
  if (profile.defaults.pre_processors) {
    for (const auto& name : *profile.defaults.pre_processors) r.add_pre(name, builtin_pre(name));
  } else {
    r.pre_ = defaults.pre_;
  }
  if (profile.defaults.post_processors) {
    for (const auto& [key, names] : *profile.defaults.post_processors)
      for (const auto& name : names) r.add_post(key, name, builtin_post(name));
  } else {
    r.post_ = defaults.post_;
  }
  return r;
}

Document normalize_whitespace(Document doc) {
  for (auto& page : doc.pages) {
    for (auto& section : page.sections) {
      std::vector<std::string> kept;
      for (const auto& para : section.paragraphs) {
        auto t = text::collapse_whitespace(strip_controls(para));
        if (!t.empty()) kept.push_back(std::move(t));
      }
      section.paragraphs = std::move(kept);
    }
  }
  return doc;
}

std::string date_to_iso(const std::string& value, std::string_view locale) {
  const auto trimmed = text::collapse_whitespace(value);
  if (is_net_terms(trimmed)) return trimmed;
  const auto d = parse_date(trimmed, locale);
  if (!d) throw DataError("not a date under locale \"" + std::string(locale) + "\": " + value);
  return format_iso(*d);
}

std::string normalize_amount(const std::string& value, std::string_view locale) {
  static const std::regex canonical(R"(^-?\d+\.\d{2,}( [A-Z]{3})?$)");
  if (std::regex_match(value, canonical)) return value;

  const auto currency = detect_currency(value);
  // The stripper drops commas, so EU separators are swapped first.
  std::string swapped = value;
  if (convention_for(locale) == DateConvention::EU)
    for (auto& c : swapped) c = c == ',' ? '.' : c == '.' ? ',' : c;
  const auto digits = strip_amount_decorations(swapped);
  static const std::regex number(R"(^([+-]?)(\d*)(?:\.(\d*))?$)");
  std::smatch m;
  if (!std::regex_match(digits, m, number) || (m[2].length() == 0 && m[3].length() == 0))
    throw DataError("not an amount: " + value);
  std::string integral = m[2].length() ? m[2].str() : "0";
  std::string fraction = m[3].str();
  while (fraction.size() < 2) fraction.push_back('0');
  std::string out = (m[1].str() == "-" ? "-" : "") + integral + "." + fraction;
  if (!currency.empty()) out += " " + currency;
  return out;
}

}  // namespace vespa
