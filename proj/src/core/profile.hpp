#pragma once

#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vespa {

enum class ResponseType { Numeric, Date, Money, Alphanum, Entity, Text };
enum class PassageLevel { Page, Section, Para };

std::string_view to_string(ResponseType t);
std::string_view to_string(PassageLevel l);
std::optional<ResponseType> parse_response_type(std::string_view s);
std::optional<PassageLevel> parse_passage_level(std::string_view s);

struct NerPolicy {
  std::string entity_label;
  bool operator==(const NerPolicy&) const = default;
};

/// Regex validation policy. The engine's dialect is ECMAScript (std::regex)
/// with backreferences disallowed; the compiled form is shared and immutable.
struct RegexPolicy {
  std::string pattern;
  std::shared_ptr<const std::regex> compiled;

  bool operator==(const RegexPolicy& o) const { return pattern == o.pattern; }
};

using ValidationPolicy = std::variant<NerPolicy, RegexPolicy>;

/// Compiles `pattern` in the engine dialect. Throws ConfigError on failure.
std::shared_ptr<const std::regex> compile_policy_regex(const std::string& pattern);

struct VerbiageEntry {
  std::string phrase;
  double t_reject = 0.0;
  double t_confident = 0.0;
  bool operator==(const VerbiageEntry&) const = default;
};

struct FieldOfInterest {
  std::string name;
  std::string locale;
  std::string domain;
  std::string doc_type;
  PassageLevel passage_level = PassageLevel::Page;
  int top_k_passages = 1;
  std::vector<VerbiageEntry> verbiage;
  std::vector<std::string> prefixes;
  ResponseType response_type = ResponseType::Text;
  std::vector<ValidationPolicy> policies;
  double boost_factor = 1.1;

  const VerbiageEntry* find_verbiage(std::string_view phrase) const;
  bool operator==(const FieldOfInterest&) const = default;
};

struct ProfileDefaults {
  int top_k_passages = 1;
  double boost_factor = 1.1;
  /// Processor names; std::nullopt selects the built-in set.
  std::optional<std::vector<std::string>> pre_processors;
  /// Keyed by response type name (e.g. "DATE") or by field name.
  std::optional<std::map<std::string, std::vector<std::string>>> post_processors;
  bool operator==(const ProfileDefaults&) const = default;
};

struct ExtractionProfile {
  std::vector<FieldOfInterest> fields;
  ProfileDefaults defaults;

  const FieldOfInterest* find_field(std::string_view name) const;
  bool operator==(const ExtractionProfile&) const = default;
};

struct Violation {
  std::string field;  // empty for profile-level rules
  std::string path;
  std::string rule;
};

/// Checks every profile invariant. Never throws; an empty result means valid.
std::vector<Violation> validate_profile(const ExtractionProfile& profile);

/// Parses the JSON profile format. Unknown keys, duplicate keys, syntax
/// errors and invariant violations all raise ConfigError with a location.
ExtractionProfile parse_profile(std::string_view source);
ExtractionProfile load_profile(const std::string& path);

std::string serialize_profile(const ExtractionProfile& profile);

}  // namespace vespa
