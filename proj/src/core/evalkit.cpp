#include "core/evalkit.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/store.hpp"
#include "core/text.hpp"

namespace vespa {

using jsonutil::ojson;

namespace {

bool is_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

std::vector<std::string> normalized_tokens(std::string_view s) { return text::split_whitespace(squad_normalize(s)); }

double f1_single(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() || gold.empty()) return pred == gold ? 1.0 : 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : gold) ++counts[t];
  int same = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++same;
    }
  }
  if (same == 0) return 0.0;
  const double precision = static_cast<double>(same) / static_cast<double>(pred.size());
  const double recall = static_cast<double>(same) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string squad_normalize(std::string_view s) {
  std::string lowered;
  lowered.reserve(s.size());
  for (char c : s) {
    const auto uc = static_cast<unsigned char>(c);
    if (is_punct(uc)) continue;
    lowered.push_back(static_cast<char>(std::tolower(uc)));
  }
  std::vector<std::string> kept;
  for (auto& tok : text::split_whitespace(lowered))
    if (tok != "a" && tok != "an" && tok != "the") kept.push_back(std::move(tok));
  return text::join(kept, " ");
}

double squad_f1(std::string_view prediction, const std::vector<std::string>& golds) {
  const auto pred = normalized_tokens(prediction);
  if (golds.empty()) return pred.empty() ? 1.0 : 0.0;
  double best = 0.0;
  for (const auto& g : golds) best = std::max(best, f1_single(pred, normalized_tokens(g)));
  return best;
}

int exact_match(std::string_view prediction, const std::vector<std::string>& golds) {
  const auto pred = squad_normalize(prediction);
  if (golds.empty()) return pred.empty() ? 1 : 0;
  for (const auto& g : golds)
    if (squad_normalize(g) == pred) return 1;
  return 0;
}

FieldReport field_report(const std::vector<FieldGoldLabel>& golds, const std::vector<ExtractionRecord>& records) {
  std::map<std::pair<std::string, std::string>, const ExtractionRecord*> latest;
  for (const auto& r : records) latest[{r.doc_id, r.field_name}] = &r;

  std::vector<std::string> order;
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& g : golds) {
    const auto it = latest.find({g.doc_id, g.field_name});
    if (it == latest.end())
      throw DataError("no extraction record for document " + g.doc_id + ", field " + g.field_name);
    const std::string prediction = it->second->value.value_or("");
    std::vector<std::string> gold_list;
    if (g.gold_value) gold_list.push_back(*g.gold_value);
    if (!sums.count(g.field_name)) order.push_back(g.field_name);
    auto& [sum, n] = sums[g.field_name];
    sum += squad_f1(prediction, gold_list);
    ++n;
  }

  FieldReport report;
  double total = 0.0;
  for (const auto& f : order) {
    const auto& [sum, n] = sums[f];
    report.fields.push_back({f, 100.0 * sum / static_cast<double>(n), n});
    total += report.fields.back().f1;
  }
  report.average = report.fields.empty() ? 0.0 : total / static_cast<double>(report.fields.size());
  return report;
}

std::string render_field_report_tsv(const std::vector<std::pair<std::string, FieldReport>>& columns) {
  std::ostringstream out;
  out << "Fields";
  for (const auto& [name, _] : columns) out << '\t' << name;
  out << '\n';
  std::vector<std::string> rows;
  for (const auto& [_, rep] : columns)
    for (const auto& f : rep.fields)
      if (std::find(rows.begin(), rows.end(), f.field) == rows.end()) rows.push_back(f.field);
  for (const auto& row : rows) {
    out << row;
    for (const auto& [_, rep] : columns) {
      const auto it = std::find_if(rep.fields.begin(), rep.fields.end(), [&](const FieldScore& f) { return f.field == row; });
      out << '\t' << (it == rep.fields.end() ? std::string("NS") : fmt2(it->f1));
    }
    out << '\n';
  }
  out << "Avg. F1";
  for (const auto& [_, rep] : columns) out << '\t' << fmt2(rep.average);
  out << '\n';
  return out.str();
}

std::string render_field_report_json(const FieldReport& report) {
  ojson j;
  ojson fields = ojson::array();
  for (const auto& f : report.fields) fields.push_back({{"field", f.field}, {"f1", f.f1}, {"documents", f.documents}});
  j["fields"] = fields;
  j["avg_f1"] = report.average;
  return j.dump(2);
}

std::vector<QaEvalRecord> parse_eval_set(std::string_view json) {
  const auto root = jsonutil::parse_strict(json, "eval set");
  if (!root.is_array()) throw DataError("eval set: expected a JSON list of records");
  std::vector<QaEvalRecord> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const auto path = "eval[" + std::to_string(i) + "]";
    const auto& r = root[i];
    if (!r.is_object()) throw DataError(path + ": expected object");
    jsonutil::reject_unknown_keys(r, path, {"id", "question", "gold_answers"});
    if (!r.contains("id") || !r["id"].is_string() || !r.contains("question") || !r["question"].is_string() ||
        !r.contains("gold_answers") || !r["gold_answers"].is_array())
      throw DataError(path + ": requires string id, string question and gold_answers list");
    QaEvalRecord rec;
    rec.id = r["id"].get<std::string>();
    rec.question = r["question"].get<std::string>();
    for (const auto& g : r["gold_answers"]) {
      if (!g.is_string()) throw DataError(path + ".gold_answers: expected strings");
      rec.gold_answers.push_back(g.get<std::string>());
    }
    if (!ids.insert(rec.id).second) throw DataError(path + ": duplicate id " + rec.id);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<QaEvalRecord> load_eval_set(const std::string& path) { return parse_eval_set(jsonutil::read_file(path)); }

std::map<std::string, std::string> parse_predictions(std::string_view json) {
  const auto root = jsonutil::parse_strict(json, "predictions");
  if (!root.is_object()) throw DataError("predictions: expected a JSON object id -> answer");
  std::map<std::string, std::string> out;
  for (const auto& [id, ans] : root.items()) {
    if (!ans.is_string()) throw DataError("predictions: answer for " + id + " must be a string");
    out[id] = ans.get<std::string>();
  }
  return out;
}

std::vector<FieldGoldLabel> parse_gold_labels(std::string_view jsonl) {
  std::vector<FieldGoldLabel> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line_no = 0;
  std::istringstream in{std::string(jsonl)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto where = "gold labels line " + std::to_string(line_no);
    const auto j = jsonutil::parse_strict(line, where);
    if (!j.is_object()) throw DataError(where + ": expected object");
    jsonutil::reject_unknown_keys(j, "", {"doc_id", "field_name", "gold_value"});
    if (!j.contains("doc_id") || !j["doc_id"].is_string() || !j.contains("field_name") || !j["field_name"].is_string())
      throw DataError(where + ": requires doc_id and field_name strings");
    FieldGoldLabel g;
    g.doc_id = j["doc_id"].get<std::string>();
    g.field_name = j["field_name"].get<std::string>();
    if (j.contains("gold_value") && !j["gold_value"].is_null()) {
      if (!j["gold_value"].is_string()) throw DataError(where + ": gold_value must be a string or null");
      g.gold_value = j["gold_value"].get<std::string>();
    }
    if (!seen.insert({g.doc_id, g.field_name}).second)
      throw DataError(where + ": duplicate label for " + g.doc_id + "/" + g.field_name);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<FieldGoldLabel> load_gold_labels(const std::string& path) {
  return parse_gold_labels(jsonutil::read_file(path));
}

std::string serialize_gold_labels(const std::vector<FieldGoldLabel>& labels) {
  std::string out;
  for (const auto& g : labels) {
    ojson j;
    j["doc_id"] = g.doc_id;
    j["field_name"] = g.field_name;
    j["gold_value"] = g.gold_value ? ojson(*g.gold_value) : ojson(nullptr);
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace vespa
