#include "core/question.hpp"

#include <algorithm>
#include <cctype>

#include "core/text.hpp"

namespace vespa {

namespace {

struct ClassNames {
  QuestionClass cls;
  std::string_view id;
  std::string_view label;
};

constexpr ClassNames kNames[] = {
    {QuestionClass::Date, "Date", "Date"},
    {QuestionClass::During, "During", "During"},
    {QuestionClass::HowAre, "HowAre", "How are"},
    {QuestionClass::HowBigSize, "HowBigSize", "How big-size"},
    {QuestionClass::HowMM, "HowMM", "How m-m"},
    {QuestionClass::HowOld, "HowOld", "How old"},
    {QuestionClass::Undefined, "Undefined", "Undefined"},
    {QuestionClass::What, "What", "What"},
    {QuestionClass::WhatTime, "WhatTime", "What time"},
    {QuestionClass::When, "When", "When"},
    {QuestionClass::Where, "Where", "Where"},
    {QuestionClass::Who, "Who", "Who"},
    {QuestionClass::Whom, "Whom", "Whom"},
    {QuestionClass::Why, "Why", "Why"},
};

enum class Anchor { Anywhere, Leading };

struct Rule {
  std::vector<std::string_view> phrase;
  Anchor anchor;
  QuestionClass cls;
};

const std::vector<Rule>& rules() {
  static const std::vector<Rule> table = {
      {{"how", "much"}, Anchor::Anywhere, QuestionClass::HowMM},
      {{"how", "many"}, Anchor::Anywhere, QuestionClass::HowMM},
      {{"how", "old"}, Anchor::Anywhere, QuestionClass::HowOld},
      {{"how", "big"}, Anchor::Anywhere, QuestionClass::HowBigSize},
      {{"how", "large"}, Anchor::Anywhere, QuestionClass::HowBigSize},
      {{"what", "size"}, Anchor::Anywhere, QuestionClass::HowBigSize},
      {{"how", "are"}, Anchor::Anywhere, QuestionClass::HowAre},
      {{"what", "time"}, Anchor::Anywhere, QuestionClass::WhatTime},
      {{"on", "what", "date"}, Anchor::Anywhere, QuestionClass::Date},
      {{"what", "date"}, Anchor::Anywhere, QuestionClass::Date},
      {{"which", "date"}, Anchor::Anywhere, QuestionClass::Date},
      {{"during"}, Anchor::Leading, QuestionClass::During},
      {{"when"}, Anchor::Leading, QuestionClass::When},
      {{"where"}, Anchor::Leading, QuestionClass::Where},
      {{"whom"}, Anchor::Leading, QuestionClass::Whom},
      {{"to", "whom"}, Anchor::Leading, QuestionClass::Whom},
      {{"with", "whom"}, Anchor::Leading, QuestionClass::Whom},
      {{"who"}, Anchor::Leading, QuestionClass::Who},
      {{"why"}, Anchor::Leading, QuestionClass::Why},
      {{"what"}, Anchor::Leading, QuestionClass::What},
      {{"which"}, Anchor::Leading, QuestionClass::What},
  };
  return table;
}

bool matches_at(const std::vector<std::string>& toks, std::size_t at, const std::vector<std::string_view>& phrase) {
  if (at + phrase.size() > toks.size()) return false;
  for (std::size_t i = 0; i < phrase.size(); ++i)
    if (toks[at + i] != phrase[i]) return false;
  return true;
}

}  // namespace

std::string_view to_string(QuestionClass c) { return kNames[index_of(c)].id; }
std::string_view table_label(QuestionClass c) { return kNames[index_of(c)].label; }

std::optional<QuestionClass> parse_question_class(std::string_view s) {
  for (const auto& n : kNames)
    if (text::iequals(n.id, s) || text::iequals(n.label, s)) return n.cls;
  return std::nullopt;
}

QuestionClass classify(std::string_view question) {
  auto toks = text::tokenize(question);
  if (toks.size() > 4) toks.resize(4);
  for (const auto& rule : rules()) {
    if (rule.anchor == Anchor::Leading) {
      if (matches_at(toks, 0, rule.phrase)) return rule.cls;
      continue;
    }
    for (std::size_t at = 0; at < toks.size(); ++at)
      if (matches_at(toks, at, rule.phrase)) return rule.cls;
  }
  return QuestionClass::Undefined;
}

std::string compose_question(std::string_view prefix, std::string_view phrase) {
  auto body = text::collapse_whitespace(std::string(prefix) + " " + std::string(phrase));
  while (!body.empty() && body.back() == '?') body.pop_back();
  body = text::trim(body);
  if (!body.empty()) body[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(body[0])));
  return body + "?";
}

std::vector<Question> generate_questions(const FieldOfInterest& foi) {
  std::vector<Question> out;
  out.reserve(foi.prefixes.size() * foi.verbiage.size());
  for (const auto& prefix : foi.prefixes) {
    for (const auto& v : foi.verbiage) {
      Question q;
      q.text = compose_question(prefix, v.phrase);
      q.prefix = prefix;
      q.verbiage_phrase = v.phrase;
      q.qclass = classify(q.text);
      q.field_name = foi.name;
      out.push_back(std::move(q));
    }
  }
  return out;
}

}  // namespace vespa
