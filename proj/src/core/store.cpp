#include "core/store.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/log.hpp"

namespace vespa {

using jsonutil::ojson;

namespace {

ojson validation_to_json(const ValidationOutcome& v) {
  ojson j;
  j["type_ok"] = v.type_ok;
  j["passed_policies"] = v.passed_policies;
  j["boosted"] = v.boosted;
  j["final_confidence"] = v.final_confidence;
  j["errors"] = v.errors;
  return j;
}

ValidationOutcome validation_from_json(const ojson& j) {
  ValidationOutcome v;
  v.type_ok = j.at("type_ok").get<bool>();
  v.passed_policies = j.at("passed_policies").get<std::vector<std::size_t>>();
  v.boosted = j.at("boosted").get<bool>();
  v.final_confidence = j.at("final_confidence").get<double>();
  v.errors = j.at("errors").get<std::vector<std::string>>();
  return v;
}

/// Splits into complete lines. A trailing fragment without a newline is
/// returned separately.
std::pair<std::vector<std::string>, std::string> split_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (true) {
    const auto nl = content.find('\n', pos);
    if (nl == std::string::npos) break;
    lines.push_back(content.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return {std::move(lines), content.substr(pos)};
}

template <typename T, typename Parse>
std::vector<T> scan_jsonl(const std::string& path, Parse parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  auto [lines, tail] = split_lines(ss.str());
  std::vector<T> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse(lines[i]));
    } catch (const std::exception& e) {
      throw DataError(path + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (tail.find_first_not_of(" \t\r") != std::string::npos) {
    try {
      out.push_back(parse(tail));
    } catch (const std::exception&) {
      log::warn(path + ": skipping incomplete trailing line");
    }
  }
  return out;
}

void append_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw DataError("cannot open " + path + " for append");
  for (const auto& l : lines) {
    const auto line = l + "\n";
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.flush();
  }
  if (!out) throw DataError("append failed for " + path);
}

void check_version(const ojson& j) {
  if (!j.contains("v") || j["v"] != kStoreSchemaVersion)
    throw DataError("unsupported schema version (expected \"v\": " + std::to_string(kStoreSchemaVersion) + ")");
}

}  // namespace

std::string record_to_json(const ExtractionRecord& r) {
  ojson j;
  j["v"] = kStoreSchemaVersion;
  j["doc_id"] = r.doc_id;
  j["field"] = r.field_name;
  j["value"] = r.value ? ojson(*r.value) : ojson(nullptr);
  j["raw_value"] = r.raw_value;
  j["confidence"] = r.confidence;
  j["total_score"] = r.total_score;
  j["source"] = r.source;
  ojson sup = ojson::array();
  for (const auto& s : r.supporters) {
    ojson e;
    e["model"] = s.model;
    e["question"] = s.question;
    e["class"] = s.question_class;
    e["class_weight"] = s.class_weight;
    e["passage_id"] = s.passage_id;
    e["raw_confidence"] = s.raw_confidence;
    e["weighted_confidence"] = s.weighted_confidence;
    e["vote_confidence"] = s.vote_confidence;
    e["answer"] = s.answer_text;
    e["validation"] = validation_to_json(s.validation);
    e["source"] = s.source;
    sup.push_back(std::move(e));
  }
  j["supporters"] = std::move(sup);
  ojson rej = ojson::object();
  for (const auto& [k, v] : r.rejected) rej[k] = v;
  j["rejected"] = std::move(rej);
  ojson fails = ojson::object();
  for (const auto& [k, v] : r.backend_failures) fails[k] = v;
  j["backend_failures"] = std::move(fails);
  j["notes"] = r.notes;
  j["timestamp"] = r.timestamp;
  return j.dump();
}

ExtractionRecord record_from_json(std::string_view line) {
  const auto j = ojson::parse(line);
  check_version(j);
  ExtractionRecord r;
  r.doc_id = j.at("doc_id").get<std::string>();
  r.field_name = j.at("field").get<std::string>();
  if (!j.at("value").is_null()) r.value = j["value"].get<std::string>();
  r.raw_value = j.value("raw_value", "");
  r.confidence = j.at("confidence").get<double>();
  r.total_score = j.value("total_score", r.confidence);
  r.source = j.value("source", "");
  for (const auto& e : j.value("supporters", ojson::array())) {
    SupporterProvenance s;
    s.model = e.at("model").get<std::string>();
    s.question = e.at("question").get<std::string>();
    s.question_class = e.at("class").get<std::string>();
    s.class_weight = e.at("class_weight").get<double>();
    s.passage_id = e.at("passage_id").get<std::string>();
    s.raw_confidence = e.at("raw_confidence").get<double>();
    s.weighted_confidence = e.at("weighted_confidence").get<double>();
    s.vote_confidence = e.at("vote_confidence").get<double>();
    s.answer_text = e.at("answer").get<std::string>();
    s.validation = validation_from_json(e.at("validation"));
    s.source = e.at("source").get<std::string>();
    r.supporters.push_back(std::move(s));
  }
  const auto rejected = j.value("rejected", ojson::object());
  for (const auto& [k, v] : rejected.items()) r.rejected[k] = v.get<int>();
  const auto failures = j.value("backend_failures", ojson::object());
  for (const auto& [k, v] : failures.items()) r.backend_failures[k] = v.get<int>();
  r.notes = j.value("notes", std::vector<std::string>{});
  r.timestamp = j.value("timestamp", "");
  if (r.value.has_value() == r.supporters.empty())
    throw DataError("record for " + r.doc_id + "/" + r.field_name + " violates ABSTAIN <=> no supporters");
  return r;
}

std::string edit_to_json(const EditRecord& e) {
  ojson j;
  j["v"] = kStoreSchemaVersion;
  j["doc_id"] = e.doc_id;
  j["field"] = e.field_name;
  j["old_value"] = e.old_value;
  j["new_value"] = e.new_value;
  j["editor"] = e.editor;
  j["timestamp"] = e.timestamp;
  return j.dump();
}

EditRecord edit_from_json(std::string_view line) {
  const auto j = ojson::parse(line);
  check_version(j);
  EditRecord e;
  e.doc_id = j.at("doc_id").get<std::string>();
  e.field_name = j.at("field").get<std::string>();
  e.old_value = j.at("old_value").get<std::string>();
  e.new_value = j.at("new_value").get<std::string>();
  e.editor = j.at("editor").get<std::string>();
  e.timestamp = j.at("timestamp").get<std::string>();
  return e;
}

void store_append(const std::string& path, const std::vector<ExtractionRecord>& records) {
  std::vector<std::string> lines;
  for (const auto& r : records) lines.push_back(record_to_json(r));
  append_lines(path, lines);
}

std::vector<ExtractionRecord> store_scan(const std::string& path) {
  return scan_jsonl<ExtractionRecord>(path, [](const std::string& l) { return record_from_json(l); });
}

std::string edit_log_path(const std::string& store_path) {
  constexpr std::string_view ext = ".jsonl";
  if (store_path.size() > ext.size() && store_path.compare(store_path.size() - ext.size(), ext.size(), ext) == 0)
    return store_path.substr(0, store_path.size() - ext.size()) + ".edits.jsonl";
  return store_path + ".edits.jsonl";
}

void edit_append(const std::string& edit_log, const EditRecord& edit) { append_lines(edit_log, {edit_to_json(edit)}); }

std::vector<EditRecord> edit_scan(const std::string& edit_log) {
  return scan_jsonl<EditRecord>(edit_log, [](const std::string& l) { return edit_from_json(l); });
}

EditLogProvider::EditLogProvider(const std::vector<EditRecord>& edits) {
  for (const auto& e : edits) {
    auto& slot = latest_[{e.doc_id, e.field_name}];
    if (slot.first.empty() || e.timestamp >= slot.first) slot = {e.timestamp, e.new_value};
  }
}

EditLogProvider EditLogProvider::from_file(const std::string& edit_log) { return EditLogProvider(edit_scan(edit_log)); }

std::optional<std::string> EditLogProvider::lookup(std::string_view doc_id, std::string_view field_name) const {
  const auto it = latest_.find({std::string(doc_id), std::string(field_name)});
  if (it == latest_.end()) return std::nullopt;
  return it->second.second;
}

EditRecord record_edit(const std::string& store_path, EditRecord edit) {
  const ExtractionRecord* found = nullptr;
  const auto records = store_scan(store_path);
  for (const auto& r : records)
    if (r.doc_id == edit.doc_id && r.field_name == edit.field_name) found = &r;
  if (!found) throw DataError("no extraction record for document " + edit.doc_id + ", field " + edit.field_name);
  edit.old_value = found->value.value_or("");
  if (edit.timestamp.empty()) edit.timestamp = utc_timestamp_now();
  edit_append(edit_log_path(store_path), edit);
  return edit;
}

std::string utc_timestamp_now() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto secs = system_clock::to_time_t(now);
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

}  // namespace vespa
