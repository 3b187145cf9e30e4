#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/document.hpp"
#include "core/profile.hpp"

namespace vespa {

struct PostContext {
  std::string field_name;
  ResponseType response_type = ResponseType::Text;
  std::string locale;
};

using DocumentTransform = std::function<Document(Document)>;
using ValueTransform = std::function<std::string(const std::string&, const PostContext&)>;

/// Ordered, named document and value transforms. Post-processors are keyed
/// by response type name ("DATE") or by field name; a field-name key takes
/// precedence over the type key.
class ProcessorRegistry {
public:
  /// Throws ConfigError on a duplicate name within the same chain.
  void add_pre(std::string name, DocumentTransform fn);
  void add_post(const std::string& key, std::string name, ValueTransform fn);

  /// Applies pre-processors in registration order. A throwing transform is
  /// reported as PipelineError naming it.
  Document run_pre(Document doc) const;
  std::string run_post(const std::string& value, const PostContext& ctx) const;

  std::vector<std::string> pre_names() const;
  std::vector<std::string> post_names(const std::string& key) const;

  /// Built-ins: pre "normalize_whitespace"; post "date_to_iso" for DATE and
  /// "normalize_amount" for NUMERIC and MONEY.
  static ProcessorRegistry builtin();
  /// Resolves processor names from the profile defaults against the built-in
  /// catalog; unset lists fall back to builtin().
  static ProcessorRegistry from_profile(const ExtractionProfile& profile);

private:
  std::vector<std::pair<std::string, DocumentTransform>> pre_;
  std::map<std::string, std::vector<std::pair<std::string, ValueTransform>>> post_;
};

/// Collapses whitespace runs inside passage text and drops control
/// characters; page structure is kept.
Document normalize_whitespace(Document doc);

/// Net-terms values pass through unchanged. Throws DataError on a value that
/// is not a date under the locale.
std::string date_to_iso(const std::string& value, std::string_view locale);

/// "<digits>.<2+ digits>[ CUR]". The decimal separator is ',' for EU-tagged
/// locales and '.' otherwise. Throws DataError on a malformed amount.
std::string normalize_amount(const std::string& value, std::string_view locale = "");

}  // namespace vespa
