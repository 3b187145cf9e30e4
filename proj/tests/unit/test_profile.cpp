#include <string>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/profile.hpp"
#include "core/question.hpp"
#include "doctest.h"

using namespace vespa;

namespace {

const std::string kFixtures = VESPA_FIXTURE_DIR;

std::string field_json(const std::string& extra, const std::string& verbiage = R"({"amount due": [0.7, 0.9]})") {
  return R"({"fields": [{"name": "f", "verbiage": )" + verbiage +
         R"(, "prefixes": ["What is the"], "response_type": "NUMERIC")" + extra + "}]}";
}

std::string error_of(const std::string& src) {
  try {
    parse_profile(src);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

FieldOfInterest minimal_field(const std::string& name) {
  FieldOfInterest f;
  f.name = name;
  f.verbiage = {{"due date", 0.5, 0.8}};
  f.prefixes = {"When is the"};
  f.response_type = ResponseType::Date;
  return f;
}

}  // namespace

TEST_CASE("total amount profile parses into one field with six questions") {
  const auto p = load_profile(kFixtures + "/total_amount_profile.json");
  REQUIRE(p.fields.size() == 1);
  const auto& f = p.fields[0];
  CHECK(f.name == "Total Amount");
  CHECK(f.locale == "US");
  CHECK(f.domain == "Finance");
  CHECK(f.doc_type == "Invoice");
  CHECK(f.passage_level == PassageLevel::Page);
  CHECK(f.response_type == ResponseType::Numeric);
  REQUIRE(f.verbiage.size() == 3);
  CHECK(f.verbiage[0].phrase == "amount due");
  CHECK(f.verbiage[1].t_reject == 0.85);
  CHECK(f.verbiage[2].t_confident == 0.8);
  CHECK(f.prefixes.size() == 2);
  REQUIRE(f.policies.size() == 2);
  CHECK(std::get<NerPolicy>(f.policies[0]).entity_label == "MONEY");
  CHECK(std::get<RegexPolicy>(f.policies[1]).pattern == "[0-9.,]+s*USD");
  CHECK(f.boost_factor == 1.1);
  CHECK(generate_questions(f).size() == 6);
  CHECK(validate_profile(p).empty());
}

TEST_CASE("inverted thresholds name the ordering rule") {
  const auto msg = error_of(field_json("", R"({"amount due": [0.9, 0.7]})"));
  CHECK(msg.find("t_reject <= t_confident") != std::string::npos);
  CHECK(msg.find("amount due") != std::string::npos);
}

TEST_CASE("thresholds outside the unit interval are rejected") {
  CHECK_FALSE(error_of(field_json("", R"({"amount due": [-0.1, 0.7]})")).empty());
  CHECK_FALSE(error_of(field_json("", R"({"amount due": [0.1, 1.5]})")).empty());
  CHECK_FALSE(error_of(field_json("", R"({"amount due": [0.1]})")).empty());
}

TEST_CASE("serialize then parse is the identity") {
  const auto p = load_profile(kFixtures + "/total_amount_profile.json");
  const auto again = parse_profile(serialize_profile(p));
  CHECK(again == p);
  CHECK(serialize_profile(again) == serialize_profile(p));
}

TEST_CASE("unknown keys are reported with their path") {
  auto msg = error_of(field_json(R"(, "colour": "red")"));
  CHECK(msg.find("fields[0]") != std::string::npos);
  CHECK(msg.find("colour") != std::string::npos);
  msg = error_of(R"({"fields": [], "extra": 1})");
  CHECK(msg.find("extra") != std::string::npos);
  msg = error_of(field_json(R"(, "policies": [{"type": "NER", "entity": "DATE", "confidence": 2}])"));
  CHECK(msg.find("policies[0]") != std::string::npos);
}

TEST_CASE("syntax errors carry a location") {
  const auto msg = error_of("{\n  \"fields\": [\n    {\"name\": }\n]}");
  CHECK(msg.find(":3:") != std::string::npos);
}

TEST_CASE("duplicate keys are rejected") {
  CHECK_FALSE(error_of(field_json(R"(, "name": "g")")).empty());
}

TEST_CASE("an invalid regex is a configuration error") {
  const auto msg = error_of(field_json(R"(, "policies": [{"type": "REGEX", "pattern": "([0-9"}])"));
  CHECK(msg.find("policies[0]") != std::string::npos);
  CHECK_FALSE(error_of(field_json(R"(, "policies": [{"type": "REGEX", "pattern": "(a)\\1"}])")).empty());
}

TEST_CASE("defaults fill per-field knobs and fields override them") {
  const auto p = parse_profile(R"({"defaults": {"top_k_passages": 3, "boost_factor": 1.5},
    "fields": [
      {"name": "a", "verbiage": {"x": [0, 1]}, "prefixes": ["What is the"], "response_type": "TEXT"},
      {"name": "b", "verbiage": {"y": [0, 1]}, "prefixes": ["What is the"], "response_type": "TEXT",
       "top_k_passages": 2, "boost_factor": 1.2}]})");
  CHECK(p.fields[0].top_k_passages == 3);
  CHECK(p.fields[0].boost_factor == 1.5);
  CHECK(p.fields[1].top_k_passages == 2);
  CHECK(p.fields[1].boost_factor == 1.2);
  const auto bare = parse_profile(field_json(""));
  CHECK(bare.fields[0].top_k_passages == 1);
  CHECK(bare.fields[0].boost_factor == 1.1);
}

TEST_CASE("enum spellings are case-insensitive") {
  const auto p = parse_profile(field_json(R"(, "passage_level": "para")"));
  CHECK(p.fields[0].passage_level == PassageLevel::Para);
  CHECK(parse_response_type("alphanum") == ResponseType::Alphanum);
  CHECK_FALSE(parse_response_type("CURRENCY").has_value());
  CHECK_FALSE(error_of(field_json(R"(, "passage_level": "chapter")")).empty());
}

TEST_CASE("duplicate field names give one violation") {
  ExtractionProfile p;
  p.fields = {minimal_field("due_date"), minimal_field("due_date")};
  const auto v = validate_profile(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "due_date");
}

TEST_CASE("empty prefixes give one violation") {
  ExtractionProfile p;
  p.fields = {minimal_field("due_date")};
  p.fields[0].prefixes.clear();
  const auto v = validate_profile(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].path.find("prefixes") != std::string::npos);
}

TEST_CASE("other invariants are checked programmatically") {
  ExtractionProfile empty;
  CHECK(validate_profile(empty).size() == 1);

  ExtractionProfile p;
  p.fields = {minimal_field("f")};
  p.fields[0].verbiage.push_back({"due date", 0.1, 0.2});
  p.fields[0].boost_factor = 0.9;
  p.fields[0].top_k_passages = 0;
  p.fields[0].policies.push_back(NerPolicy{""});
  CHECK(validate_profile(p).size() == 4);
}

TEST_CASE("a field without policies is valid") {
  ExtractionProfile p;
  p.fields = {minimal_field("f")};
  CHECK(validate_profile(p).empty());
}
