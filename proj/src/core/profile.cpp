#include "core/profile.hpp"

#include <cmath>
#include <set>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/text.hpp"

namespace vespa {

using jsonutil::ojson;

namespace {

constexpr std::pair<ResponseType, std::string_view> kResponseTypes[] = {
    {ResponseType::Numeric, "NUMERIC"}, {ResponseType::Date, "DATE"},     {ResponseType::Money, "MONEY"},
    {ResponseType::Alphanum, "ALPHANUM"}, {ResponseType::Entity, "ENTITY"}, {ResponseType::Text, "TEXT"},
};

constexpr std::pair<PassageLevel, std::string_view> kLevels[] = {
    {PassageLevel::Page, "PAGE"}, {PassageLevel::Section, "SECTION"}, {PassageLevel::Para, "PARA"}};

bool has_backreference(const std::string& pattern) {
  for (std::size_t i = 0; i + 1 < pattern.size(); ++i) {
    if (pattern[i] != '\\') continue;
    const char n = pattern[i + 1];
    if ((n >= '1' && n <= '9') || n == 'k') return true;
    ++i;  // skip the escaped character
  }
  return false;
}

std::string field_path(std::size_t i) { return "fields[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

std::string get_string(const ojson& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected string");
  return j.get<std::string>();
}

double get_number(const ojson& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected number");
  return j.get<double>();
}

int get_int(const ojson& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected integer");
  return j.get<int>();
}

std::vector<std::string> get_string_list(const ojson& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

ValidationPolicy parse_policy(const ojson& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected object");
  if (!j.contains("type")) fail(path, "missing key \"type\"");
  const auto type = get_string(j["type"], path + ".type");
  if (type == "NER") {
    jsonutil::reject_unknown_keys(j, path, {"type", "entity"});
    if (!j.contains("entity")) fail(path, "missing key \"entity\"");
    return NerPolicy{get_string(j["entity"], path + ".entity")};
  }
  if (type == "REGEX") {
    jsonutil::reject_unknown_keys(j, path, {"type", "pattern"});
    if (!j.contains("pattern")) fail(path, "missing key \"pattern\"");
    RegexPolicy p{get_string(j["pattern"], path + ".pattern"), nullptr};
    try {
      p.compiled = compile_policy_regex(p.pattern);
    } catch (const ConfigError& e) {
      fail(path + ".pattern", e.what());
    }
    return p;
  }
  fail(path + ".type", "unknown policy type \"" + type + "\"");
}

FieldOfInterest parse_field(const ojson& j, const std::string& path, const ProfileDefaults& defaults) {
  if (!j.is_object()) fail(path, "expected object");
  jsonutil::reject_unknown_keys(j, path,
                                {"name", "locale", "domain", "doc_type", "passage_level", "top_k_passages", "verbiage",
                                 "prefixes", "response_type", "policies", "boost_factor"});
  for (const char* required : {"name", "verbiage", "prefixes", "response_type"})
    if (!j.contains(required)) fail(path, std::string("missing key \"") + required + "\"");

  FieldOfInterest f;
  f.name = get_string(j["name"], path + ".name");
  if (j.contains("locale")) f.locale = get_string(j["locale"], path + ".locale");
  if (j.contains("domain")) f.domain = get_string(j["domain"], path + ".domain");
  if (j.contains("doc_type")) f.doc_type = get_string(j["doc_type"], path + ".doc_type");
  if (j.contains("passage_level")) {
    const auto s = get_string(j["passage_level"], path + ".passage_level");
    const auto lvl = parse_passage_level(s);
    if (!lvl) fail(path + ".passage_level", "unknown passage level \"" + s + "\"");
    f.passage_level = *lvl;
  }
  f.top_k_passages = j.contains("top_k_passages") ? get_int(j["top_k_passages"], path + ".top_k_passages")
                                                  : defaults.top_k_passages;
  f.boost_factor =
      j.contains("boost_factor") ? get_number(j["boost_factor"], path + ".boost_factor") : defaults.boost_factor;

  const auto& verb = j["verbiage"];
  if (!verb.is_object()) fail(path + ".verbiage", "expected object of phrase -> [t_reject, t_confident]");
  for (const auto& [phrase, th] : verb.items()) {
    const auto vpath = path + ".verbiage." + phrase;
    if (!th.is_array() || th.size() != 2) fail(vpath, "expected two-element threshold array");
    f.verbiage.push_back({phrase, get_number(th[0], vpath + "[0]"), get_number(th[1], vpath + "[1]")});
  }
  f.prefixes = get_string_list(j["prefixes"], path + ".prefixes");

  const auto rt_s = get_string(j["response_type"], path + ".response_type");
  const auto rt = parse_response_type(rt_s);
  if (!rt) fail(path + ".response_type", "unknown response type \"" + rt_s + "\"");
  f.response_type = *rt;

  if (j.contains("policies")) {
    const auto& pols = j["policies"];
    if (!pols.is_array()) fail(path + ".policies", "expected array");
    for (std::size_t i = 0; i < pols.size(); ++i)
      f.policies.push_back(parse_policy(pols[i], path + ".policies[" + std::to_string(i) + "]"));
  }
  return f;
}

ProfileDefaults parse_defaults(const ojson& j) {
  ProfileDefaults d;
  if (!j.is_object()) fail("defaults", "expected object");
  jsonutil::reject_unknown_keys(j, "defaults", {"top_k_passages", "boost_factor", "pre_processors", "post_processors"});
  if (j.contains("top_k_passages")) d.top_k_passages = get_int(j["top_k_passages"], "defaults.top_k_passages");
  if (j.contains("boost_factor")) d.boost_factor = get_number(j["boost_factor"], "defaults.boost_factor");
  if (j.contains("pre_processors"))
    d.pre_processors = get_string_list(j["pre_processors"], "defaults.pre_processors");
  if (j.contains("post_processors")) {
    const auto& pp = j["post_processors"];
    if (!pp.is_object()) fail("defaults.post_processors", "expected object");
    std::map<std::string, std::vector<std::string>> m;
    for (const auto& [key, names] : pp.items())
      m[key] = get_string_list(names, "defaults.post_processors." + key);
    d.post_processors = std::move(m);
  }
  return d;
}

}  // namespace

std::string_view to_string(ResponseType t) {
  for (const auto& [v, s] : kResponseTypes)
    if (v == t) return s;
  return "TEXT";
}

std::string_view to_string(PassageLevel l) {
  for (const auto& [v, s] : kLevels)
    if (v == l) return s;
  return "PAGE";
}

std::optional<ResponseType> parse_response_type(std::string_view s) {
  for (const auto& [v, name] : kResponseTypes)
    if (text::iequals(name, s)) return v;
  return std::nullopt;
}

std::optional<PassageLevel> parse_passage_level(std::string_view s) {
  for (const auto& [v, name] : kLevels)
    if (text::iequals(name, s)) return v;
  return std::nullopt;
}

std::shared_ptr<const std::regex> compile_policy_regex(const std::string& pattern) {
  if (has_backreference(pattern)) throw ConfigError("backreferences are not supported: " + pattern);
  try {
    return std::make_shared<const std::regex>(pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw ConfigError("invalid regex \"" + pattern + "\": " + e.what());
  }
}

const VerbiageEntry* FieldOfInterest::find_verbiage(std::string_view phrase) const {
  for (const auto& v : verbiage)
    if (v.phrase == phrase) return &v;
  return nullptr;
}

const FieldOfInterest* ExtractionProfile::find_field(std::string_view name) const {
  for (const auto& f : fields)
    if (f.name == name) return &f;
  return nullptr;
}

std::vector<Violation> validate_profile(const ExtractionProfile& profile) {
  std::vector<Violation> out;
  if (profile.fields.empty()) out.push_back({"", "fields", "profile must declare at least one field"});
  if (profile.defaults.top_k_passages < 1)
    out.push_back({"", "defaults.top_k_passages", "top_k_passages must be >= 1"});
  if (!(profile.defaults.boost_factor >= 1.0) || !std::isfinite(profile.defaults.boost_factor))
    out.push_back({"", "defaults.boost_factor", "boost_factor must be a finite value >= 1"});

  std::set<std::string> names;
  for (std::size_t i = 0; i < profile.fields.size(); ++i) {
    const auto& f = profile.fields[i];
    const auto path = field_path(i);
    if (text::trim(f.name).empty()) out.push_back({f.name, path + ".name", "name must be non-empty"});
    if (!names.insert(f.name).second) out.push_back({f.name, path + ".name", "field name must be unique"});
    if (f.top_k_passages < 1) out.push_back({f.name, path + ".top_k_passages", "top_k_passages must be >= 1"});
    if (!(f.boost_factor >= 1.0) || !std::isfinite(f.boost_factor))
      out.push_back({f.name, path + ".boost_factor", "boost_factor must be a finite value >= 1"});
    if (f.verbiage.empty()) out.push_back({f.name, path + ".verbiage", "verbiage must be non-empty"});
    if (f.prefixes.empty()) out.push_back({f.name, path + ".prefixes", "prefixes must be non-empty"});

    std::set<std::string> phrases;
    for (const auto& v : f.verbiage) {
      const auto vpath = path + ".verbiage." + v.phrase;
      if (text::trim(v.phrase).empty()) out.push_back({f.name, vpath, "verbiage phrase must be non-empty"});
      if (!phrases.insert(v.phrase).second) out.push_back({f.name, vpath, "verbiage phrase must be unique"});
      const bool in_range = v.t_reject >= 0.0 && v.t_reject <= 1.0 && v.t_confident >= 0.0 && v.t_confident <= 1.0;
      if (!in_range) out.push_back({f.name, vpath, "thresholds must lie in [0,1]"});
      else if (v.t_reject > v.t_confident) out.push_back({f.name, vpath, "t_reject <= t_confident"});
    }
    for (std::size_t p = 0; p < f.prefixes.size(); ++p)
      if (text::trim(f.prefixes[p]).empty())
        out.push_back({f.name, path + ".prefixes[" + std::to_string(p) + "]", "prefix must be non-empty"});

    for (std::size_t p = 0; p < f.policies.size(); ++p) {
      const auto ppath = path + ".policies[" + std::to_string(p) + "]";
      if (const auto* ner = std::get_if<NerPolicy>(&f.policies[p])) {
        if (text::trim(ner->entity_label).empty()) out.push_back({f.name, ppath, "NER entity label must be non-empty"});
      } else {
        const auto& rx = std::get<RegexPolicy>(f.policies[p]);
        try {
          if (!rx.compiled) compile_policy_regex(rx.pattern);
        } catch (const ConfigError& e) {
          out.push_back({f.name, ppath + ".pattern", e.what()});
        }
      }
    }
  }
  return out;
}

ExtractionProfile parse_profile(std::string_view source) {
  ojson root;
  try {
    root = jsonutil::parse_strict(source, "profile");
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  if (!root.is_object()) fail("profile", "expected top-level object");
  try {
    jsonutil::reject_unknown_keys(root, "", {"defaults", "fields"});
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }

  ExtractionProfile profile;
  try {
    if (root.contains("defaults")) profile.defaults = parse_defaults(root["defaults"]);
    if (!root.contains("fields") || !root["fields"].is_array()) fail("fields", "expected array");
    const auto& fields = root["fields"];
    for (std::size_t i = 0; i < fields.size(); ++i)
      profile.fields.push_back(parse_field(fields[i], field_path(i), profile.defaults));
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }

  const auto violations = validate_profile(profile);
  if (!violations.empty()) {
    std::string msg = "invalid profile:";
    for (const auto& v : violations) msg += " [" + v.path + ": " + v.rule + "]";
    throw ConfigError(msg);
  }
  return profile;
}

ExtractionProfile load_profile(const std::string& path) {
  std::string src;
  try {
    src = jsonutil::read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_profile(src);
}

std::string serialize_profile(const ExtractionProfile& profile) {
  ojson root;
  ojson d;
  d["top_k_passages"] = profile.defaults.top_k_passages;
  d["boost_factor"] = profile.defaults.boost_factor;
  if (profile.defaults.pre_processors) d["pre_processors"] = *profile.defaults.pre_processors;
  if (profile.defaults.post_processors) {
    ojson pp = ojson::object();
    for (const auto& [k, v] : *profile.defaults.post_processors) pp[k] = v;
    d["post_processors"] = pp;
  }
  root["defaults"] = d;
  ojson fields = ojson::array();
  for (const auto& f : profile.fields) {
    ojson j;
    j["name"] = f.name;
    j["locale"] = f.locale;
    j["domain"] = f.domain;
    j["doc_type"] = f.doc_type;
    j["passage_level"] = std::string(to_string(f.passage_level));
    j["top_k_passages"] = f.top_k_passages;
    ojson verb = ojson::object();
    for (const auto& v : f.verbiage) verb[v.phrase] = ojson::array({v.t_reject, v.t_confident});
    j["verbiage"] = verb;
    j["prefixes"] = f.prefixes;
    j["response_type"] = std::string(to_string(f.response_type));
    ojson pols = ojson::array();
    for (const auto& p : f.policies) {
      if (const auto* ner = std::get_if<NerPolicy>(&p))
        pols.push_back({{"type", "NER"}, {"entity", ner->entity_label}});
      else
        pols.push_back({{"type", "REGEX"}, {"pattern", std::get<RegexPolicy>(p).pattern}});
    }
    j["policies"] = pols;
    j["boost_factor"] = f.boost_factor;
    fields.push_back(std::move(j));
  }
  root["fields"] = std::move(fields);
  return root.dump(2);
}

}  // namespace vespa
