#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "core/profile.hpp"

namespace vespa {

struct EntitySpan {
  std::string label;
  std::size_t begin = 0;  // byte offsets into the recognized text
  std::size_t end = 0;
  std::string surface;
  bool operator==(const EntitySpan&) const = default;
};

/// Named-entity recognizer contract. Must be deterministic and safe to call
/// concurrently.
class RecognizerProvider {
public:
  virtual ~RecognizerProvider() = default;
  virtual std::vector<EntitySpan> recognize(std::string_view text) const = 0;
};

/// Pattern-based recognizer for MONEY, DATE and ORG.
///
/// - MONEY: a number with an adjacent currency symbol ($ € £ ¥ ₹) or an
///   uppercase ISO currency code.
/// - DATE: ISO, numeric d/m/y or m/d/y (valid under either order), and
///   month-name forms in both orders.
/// - ORG: a run of capitalized tokens ending in Inc, Ltd, LLC, GmbH, Corp or Co.
std::shared_ptr<const RecognizerProvider> builtin_recognizer();

struct ValidationOutcome {
  bool type_ok = false;
  std::vector<std::size_t> passed_policies;
  bool boosted = false;
  double final_confidence = 0.0;
  /// Recognizer failures; the affected policy counts as not passed.
  std::vector<std::string> errors;
  bool operator==(const ValidationOutcome&) const = default;
};

bool check_type(std::string_view answer, ResponseType type, std::string_view locale);

/// Evaluates every policy independently. NER passes when spans of the label
/// cover at least half of the answer's non-space characters; REGEX passes on
/// any match. `type_ok`, `boosted` and `final_confidence` are left for the
/// caller.
ValidationOutcome apply_policies(std::string_view answer, const std::vector<ValidationPolicy>& policies,
                                 const RecognizerProvider& recognizer);

/// min(1, confidence * factor)
double boost(double confidence, double factor);

// Currency helpers shared with the amount normalizer.
bool is_currency_code(std::string_view token);
/// ISO code for a leading/trailing currency symbol or code, or empty.
std::string detect_currency(std::string_view value);
/// Strips currency symbols/codes, commas and spaces; what remains of a
/// well-formed amount is a plain decimal literal.
std::string strip_amount_decorations(std::string_view value);

}  // namespace vespa
