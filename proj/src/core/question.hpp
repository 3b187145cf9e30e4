#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/profile.hpp"

namespace vespa {

/// Lexical interrogative classes used to index class weights.
enum class QuestionClass {
  Date,
  During,
  HowAre,
  HowBigSize,
  HowMM,
  HowOld,
  Undefined,
  What,
  WhatTime,
  When,
  Where,
  Who,
  Whom,
  Why,
};

inline constexpr std::size_t kQuestionClassCount = 14;

inline constexpr std::array<QuestionClass, kQuestionClassCount> kAllQuestionClasses = {
    QuestionClass::Date,      QuestionClass::During, QuestionClass::HowAre, QuestionClass::HowBigSize,
    QuestionClass::HowMM,     QuestionClass::HowOld, QuestionClass::Undefined, QuestionClass::What,
    QuestionClass::WhatTime,  QuestionClass::When,   QuestionClass::Where,  QuestionClass::Who,
    QuestionClass::Whom,      QuestionClass::Why,
};

/// Canonical identifier, e.g. "HowMM".
std::string_view to_string(QuestionClass c);
/// Tabular label, e.g. "How m-m".
std::string_view table_label(QuestionClass c);
/// Accepts either the identifier or the tabular label, case-insensitively.
std::optional<QuestionClass> parse_question_class(std::string_view s);

inline std::size_t index_of(QuestionClass c) { return static_cast<std::size_t>(c); }

struct Question {
  std::string text;
  std::string prefix;
  std::string verbiage_phrase;
  QuestionClass qclass = QuestionClass::Undefined;
  std::string field_name;
  bool operator==(const Question&) const = default;
};

/// First matching rule over the leading four tokens wins; Undefined otherwise.
QuestionClass classify(std::string_view question);

/// Builds "Prefix verbiage?" with single spaces and a capitalized first letter.
std::string compose_question(std::string_view prefix, std::string_view phrase);

/// |prefixes| x |verbiage| questions, prefix-major.
std::vector<Question> generate_questions(const FieldOfInterest& foi);

}  // namespace vespa
