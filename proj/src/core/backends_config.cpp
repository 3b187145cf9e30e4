#include "core/backends_config.hpp"

#include <filesystem>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/question.hpp"
#include "core/text.hpp"

namespace vespa {

namespace {

void reject_keys(const jsonutil::ojson& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  try {
    jsonutil::reject_unknown_keys(obj, path, allowed);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
}

using jsonutil::ojson;

double unit(const ojson& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  const double d = v.get<double>();
  if (!(d >= 0.0 && d <= 1.0)) throw ConfigError(path + ": must lie in [0, 1]");
  return d;
}

ConfidenceBand band(const ojson& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path + ": expected [lo, hi]");
  ConfidenceBand b{unit(v[0], path + "[0]"), unit(v[1], path + "[1]")};
  if (b.lo > b.hi) throw ConfigError(path + ": lo > hi");
  return b;
}

std::string str(const ojson& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty())
    throw ConfigError(path + "." + key + ": expected a non-empty string");
  return it->get<std::string>();
}

void add_gold(MockSpec& spec, const ojson& g, const std::string& path) {
  if (!g.is_object()) throw ConfigError(path + ": expected an object");
  reject_keys(g, path, {"scope", "field", "answer"});
  const auto scope = g.contains("scope") ? str(g, "scope", path) : std::string("*");
  spec.gold_table[{scope, str(g, "field", path)}] = str(g, "answer", path);
}

MockSpec parse_mock(const ojson& m, const std::string& path, const std::string& base_dir) {
  if (!m.is_object()) throw ConfigError(path + ": expected an object");
  reject_keys(m, path,
                                {"seed", "default_accuracy", "per_class_accuracy", "gold", "gold_file",
                                 "confidence_bands", "absent_policy", "distractor_kinds"});
  MockSpec spec;
  if (m.contains("seed")) {
    if (!m["seed"].is_number_unsigned()) throw ConfigError(path + ".seed: expected a non-negative integer");
    spec.seed = m["seed"].get<std::uint64_t>();
  }
  if (m.contains("default_accuracy")) spec.default_accuracy = unit(m["default_accuracy"], path + ".default_accuracy");
  if (m.contains("per_class_accuracy")) {
    const auto& pca = m["per_class_accuracy"];
    if (!pca.is_object()) throw ConfigError(path + ".per_class_accuracy: expected an object");
    for (const auto& [k, v] : pca.items()) {
      const auto c = parse_question_class(k);
      if (!c) throw ConfigError(path + ".per_class_accuracy: unknown question class \"" + k + "\"");
      spec.per_class_accuracy[index_of(*c)] = unit(v, path + ".per_class_accuracy." + k);
    }
  }
  if (m.contains("gold")) {
    if (!m["gold"].is_array()) throw ConfigError(path + ".gold: expected a list");
    for (std::size_t i = 0; i < m["gold"].size(); ++i)
      add_gold(spec, m["gold"][i], path + ".gold[" + std::to_string(i) + "]");
  }
  if (m.contains("gold_file")) {
    if (!m["gold_file"].is_string()) throw ConfigError(path + ".gold_file: expected a path");
    std::filesystem::path p = m["gold_file"].get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    std::istringstream in(jsonutil::read_file(p.string()));
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
      if (text::trim(line).empty()) continue;
      const auto where = p.string() + ":" + std::to_string(n);
      add_gold(spec, jsonutil::parse_strict(line, where), where);
    }
  }
  if (m.contains("confidence_bands")) {
    const auto& cb = m["confidence_bands"];
    if (!cb.is_object()) throw ConfigError(path + ".confidence_bands: expected an object");
    reject_keys(cb, path + ".confidence_bands", {"correct", "wrong"});
    if (cb.contains("correct")) spec.correct = band(cb["correct"], path + ".confidence_bands.correct");
    if (cb.contains("wrong")) spec.wrong = band(cb["wrong"], path + ".confidence_bands.wrong");
  }
  if (m.contains("absent_policy")) {
    const auto s = m["absent_policy"].is_string() ? text::to_lower(m["absent_policy"].get<std::string>()) : "";
    if (s == "abstain") spec.absent_policy = AbsentPolicy::Abstain;
    else if (s == "distract") spec.absent_policy = AbsentPolicy::Distract;
    else throw ConfigError(path + ".absent_policy: expected ABSTAIN or DISTRACT");
  }
  if (m.contains("distractor_kinds")) {
    if (!m["distractor_kinds"].is_object()) throw ConfigError(path + ".distractor_kinds: expected an object");
    for (const auto& [field, v] : m["distractor_kinds"].items()) {
      const auto s = v.is_string() ? text::to_lower(v.get<std::string>()) : "";
      if (s == "any") spec.distractor_kinds[field] = DistractorKind::Any;
      else if (s == "numeric") spec.distractor_kinds[field] = DistractorKind::Numeric;
      else if (s == "word") spec.distractor_kinds[field] = DistractorKind::Word;
      else throw ConfigError(path + ".distractor_kinds." + field + ": expected ANY, NUMERIC or WORD");
    }
  }
  validate_mock_spec(spec);
  return spec;
}

int positive_int(const ojson& b, const char* key, int fallback, const std::string& path, int min) {
  if (!b.contains(key)) return fallback;
  if (!b[key].is_number_integer() || b[key].get<long long>() < min || b[key].get<long long>() > 1000000)
    throw ConfigError(path + "." + key + ": expected an integer >= " + std::to_string(min));
  return b[key].get<int>();
}

}  // namespace

std::vector<BackendDescriptor> parse_backends(std::string_view json, const std::string& base_dir,
                                              std::optional<std::uint64_t> seed_override) {
  ojson root;
  try {
    root = jsonutil::parse_strict(json, "backends");
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  if (!root.is_object() || !root.contains("backends") || !root["backends"].is_array())
    throw ConfigError("backends: expected {\"backends\": [...]}");
  reject_keys(root, "backends", {"backends"});
  std::vector<BackendDescriptor> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < root["backends"].size(); ++i) {
    const auto& b = root["backends"][i];
    const auto path = "backends[" + std::to_string(i) + "]";
    if (!b.is_object()) throw ConfigError(path + ": expected an object");
    reject_keys(b, path,
                                  {"name", "kind", "endpoint", "timeout_ms", "max_retries", "max_in_flight",
                                   "backoff_ms", "mock"});
    BackendDescriptor d;
    d.name = str(b, "name", path);
    if (!names.insert(d.name).second) throw ConfigError(path + ": duplicate backend name \"" + d.name + "\"");
    const auto kind = text::to_lower(str(b, "kind", path));
    if (kind == "mock") {
      d.kind = BackendKind::Mock;
      d.mock = parse_mock(b.contains("mock") ? b["mock"] : ojson::object(), path + ".mock", base_dir);
      if (seed_override) d.mock->seed = *seed_override;
    } else if (kind == "remote") {
      d.kind = BackendKind::Remote;
      d.endpoint = str(b, "endpoint", path);
      if (b.contains("mock")) throw ConfigError(path + ".mock: only valid for MOCK backends");
    } else {
      throw ConfigError(path + ".kind: expected MOCK or REMOTE");
    }
    d.timeout = std::chrono::milliseconds(positive_int(b, "timeout_ms", 10000, path, 1));
    d.max_retries = positive_int(b, "max_retries", 2, path, 0);
    d.max_in_flight = positive_int(b, "max_in_flight", 4, path, 1);
    d.backoff_base = std::chrono::milliseconds(positive_int(b, "backoff_ms", 100, path, 0));
    out.push_back(std::move(d));
  }
  if (out.empty()) throw ConfigError("backends: the ensemble is empty");
  return out;
}

std::vector<BackendDescriptor> load_backends(const std::string& path, std::optional<std::uint64_t> seed_override) {
  const auto base = std::filesystem::path(path).parent_path().string();
  return parse_backends(jsonutil::read_file(path), base.empty() ? "." : base, seed_override);
}

}  // namespace vespa
