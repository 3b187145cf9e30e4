#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vespa {

struct ExtractionRecord;

struct QaEvalRecord {
  std::string id;
  std::string question;
  std::vector<std::string> gold_answers;  // empty = unanswerable
};

struct FieldGoldLabel {
  std::string doc_id;
  std::string field_name;
  std::optional<std::string> gold_value;  // nullopt = ABSENT
};

/// SQuAD answer normalization: lowercase, drop punctuation, drop the
/// articles a/an/the, collapse whitespace.
std::string squad_normalize(std::string_view s);

/// Token-multiset F1, maximized over golds. An empty gold list is the
/// unanswerable case: 1 iff the prediction normalizes to empty.
double squad_f1(std::string_view prediction, const std::vector<std::string>& golds);
int exact_match(std::string_view prediction, const std::vector<std::string>& golds);

struct FieldScore {
  std::string field;
  double f1 = 0.0;  // percent
  std::size_t documents = 0;
};

struct FieldReport {
  std::vector<FieldScore> fields;  // order of first appearance in the gold labels
  double average = 0.0;            // unweighted mean of the field column, percent
};

/// Macro F1 per field over documents. When several records exist for one
/// (doc, field) the last one wins. Throws DataError on a missing record.
FieldReport field_report(const std::vector<FieldGoldLabel>& golds, const std::vector<ExtractionRecord>& records);

/// TSV with one row per field and a trailing "Avg. F1" row, 2 decimals.
/// Several reports render side by side as columns.
std::string render_field_report_tsv(const std::vector<std::pair<std::string, FieldReport>>& columns);
std::string render_field_report_json(const FieldReport& report);

// File formats.
std::vector<QaEvalRecord> parse_eval_set(std::string_view json);
std::vector<QaEvalRecord> load_eval_set(const std::string& path);
/// JSON map id -> answer string.
std::map<std::string, std::string> parse_predictions(std::string_view json);
std::vector<FieldGoldLabel> parse_gold_labels(std::string_view jsonl);
std::vector<FieldGoldLabel> load_gold_labels(const std::string& path);
std::string serialize_gold_labels(const std::vector<FieldGoldLabel>& labels);

}  // namespace vespa
