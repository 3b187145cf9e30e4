#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/evalkit.hpp"
#include "core/question.hpp"

namespace vespa {

/// W[class][model] in percent ([0,100]) plus the per-class question counts the
/// weights were calibrated on.
class ClassWeightTable {
public:
  ClassWeightTable() = default;
  explicit ClassWeightTable(std::vector<std::string> models);

  const std::vector<std::string>& models() const { return models_; }
  std::optional<std::size_t> model_index(std::string_view model) const;
  bool has_model(std::string_view model) const { return model_index(model).has_value(); }

  /// Throws ConfigError for an unknown model.
  double weight(QuestionClass c, std::string_view model) const;
  double weight(QuestionClass c, std::size_t model_index) const { return weights_[index_of(c)][model_index]; }
  void set_weight(QuestionClass c, std::string_view model, double value);

  int question_count(QuestionClass c) const { return counts_[index_of(c)]; }
  void set_question_count(QuestionClass c, int n) { counts_[index_of(c)] = n; }

  /// Same weights restricted to (and reordered as) `models`.
  ClassWeightTable select(const std::vector<std::string>& models) const;

  bool operator==(const ClassWeightTable&) const = default;

private:
  std::vector<std::string> models_;
  std::array<std::vector<double>, kQuestionClassCount> weights_{};
  std::array<int, kQuestionClassCount> counts_{};
};

/// Human-readable rule violations (weights outside [0,100], duplicate models).
std::vector<std::string> validate_weights(const ClassWeightTable& table);

/// JSON: {"models": [...], "classes": {"<Class>": {"count": n, "weights": {"<model>": w}}}}.
/// Every class must list every model.
ClassWeightTable parse_weights_json(std::string_view json);
/// TSV: header "Class<TAB>Question count<TAB><model>...", one row per class.
ClassWeightTable parse_weights_tsv(std::string_view tsv);
/// Picks the JSON or TSV reader from the first non-blank character.
ClassWeightTable load_weights(const std::string& path);
std::string serialize_weights_json(const ClassWeightTable& table);

/// 14 rows x (count + models), weights to two decimals.
std::string class_report(const ClassWeightTable& table);

struct ModelPredictions {
  std::string model;
  std::map<std::string, std::string> answers;  // eval id -> answer ("" = no answer)
};

/// W[c][m] = 100 * mean squad_f1 of model m over eval questions of class c.
/// Classes without questions get weight 0 and count 0.
ClassWeightTable calibrate_weights(const std::vector<QaEvalRecord>& eval_set,
                                   const std::vector<ModelPredictions>& predictions);

/// Loads every "<model>.json" file in `dir`, sorted by model name.
std::vector<ModelPredictions> load_predictions_dir(const std::string& dir);

}  // namespace vespa
