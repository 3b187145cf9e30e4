#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/validator.hpp"

namespace vespa {

struct SupporterProvenance {
  std::string model;
  std::string question;
  std::string question_class;
  double class_weight = 0.0;
  std::string passage_id;
  double raw_confidence = 0.0;
  double weighted_confidence = 0.0;
  double vote_confidence = 0.0;
  std::string answer_text;
  ValidationOutcome validation;
  std::string source;  // "ensemble" or "eitl"
  bool operator==(const SupporterProvenance&) const = default;
};

struct ExtractionRecord {
  std::string doc_id;
  std::string field_name;
  std::optional<std::string> value;  // nullopt = ABSTAIN
  std::string raw_value;             // winning display text before post-processing
  double confidence = 0.0;           // min(1, total_score)
  double total_score = 0.0;
  std::string source;                // "ensemble", "eitl" or "" when abstaining
  std::vector<SupporterProvenance> supporters;
  std::map<std::string, int> rejected;         // reason -> count
  std::map<std::string, int> backend_failures;  // backend -> failed calls
  std::vector<std::string> notes;
  std::string timestamp;
  bool operator==(const ExtractionRecord&) const = default;
};

struct EditRecord {
  std::string doc_id;
  std::string field_name;
  std::string old_value;
  std::string new_value;
  std::string editor;
  std::string timestamp;
  bool operator==(const EditRecord&) const = default;
};

inline constexpr int kStoreSchemaVersion = 1;

std::string record_to_json(const ExtractionRecord& r);
ExtractionRecord record_from_json(std::string_view line);
std::string edit_to_json(const EditRecord& e);
EditRecord edit_from_json(std::string_view line);

/// Appends one JSON object per line; each line goes out in a single write.
void store_append(const std::string& path, const std::vector<ExtractionRecord>& records);
/// Records in append order. An incomplete trailing line is skipped with a
/// warning; a missing file reads as empty.
std::vector<ExtractionRecord> store_scan(const std::string& path);

/// "<store>.jsonl" -> "<store>.edits.jsonl"
std::string edit_log_path(const std::string& store_path);
void edit_append(const std::string& edit_log, const EditRecord& edit);
std::vector<EditRecord> edit_scan(const std::string& edit_log);

/// Expert-provided candidate values for a field.
class EitlCandidateProvider {
public:
  virtual ~EitlCandidateProvider() = default;
  virtual std::optional<std::string> lookup(std::string_view doc_id, std::string_view field_name) const = 0;
};

/// Exact (doc, field) override replay; the latest timestamp wins, later
/// lines break timestamp ties.
class EditLogProvider final : public EitlCandidateProvider {
public:
  explicit EditLogProvider(const std::vector<EditRecord>& edits);
  static EditLogProvider from_file(const std::string& edit_log);
  std::optional<std::string> lookup(std::string_view doc_id, std::string_view field_name) const override;

private:
  std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>> latest_;  // -> (ts, value)
};

/// Appends `edit` to the store's edit log after checking that the store holds
/// a record for (doc, field); fills old_value from the latest such record and
/// the timestamp when empty. Throws DataError on an unknown (doc, field).
EditRecord record_edit(const std::string& store_path, EditRecord edit);

/// UTC, millisecond precision: 2026-10-15T08:30:00.123Z
std::string utc_timestamp_now();

}  // namespace vespa
