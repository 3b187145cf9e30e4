#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/class_weights.hpp"
#include "core/evalkit.hpp"
#include "core/profile.hpp"
#include "core/qa_backend.hpp"
#include "core/question.hpp"
#include "core/validator.hpp"

namespace vespa {

enum class CandidateSource { Ensemble, Eitl };

struct Candidate {
  std::string answer_text;
  std::string normalized_text;
  std::string model;
  Question question;
  std::string passage_id;
  double raw_confidence = 0.0;
  /// raw_confidence * W[class][model] / 100, never rescaled afterwards.
  double weighted_confidence = 0.0;
  /// W[class][model] in percent.
  double class_weight = 0.0;
  /// Score the candidate carries into the vote: weighted_confidence, boosted
  /// once if validation passed, or 1.0 for an expert-provided value.
  double vote_confidence = 0.0;
  ValidationOutcome validation;
  CandidateSource source = CandidateSource::Ensemble;
  bool operator==(const Candidate&) const = default;
};

/// Trim, collapse internal whitespace, casefold, strip leading/trailing
/// punctuation.
std::string normalize_answer(std::string_view answer);

/// Throws ConfigError when `model` is not a column of `table`.
Candidate weigh(const QaResponse& response, const Question& question, const std::string& passage_id,
                const std::string& model, const ClassWeightTable& table);

enum class RejectReason { BelowThreshold, FailedValidation, FailedType };
std::string_view to_string(RejectReason r);

struct RejectedCandidate {
  Candidate candidate;
  RejectReason reason;
};

struct ThresholdPartition {
  std::vector<Candidate> survived;
  std::vector<RejectedCandidate> rejected;
};

/// Partitions by the verbiage thresholds of each candidate's question:
///   w <  t_reject                                     -> BelowThreshold
///   t_reject <= w < t_confident, type or policy fail  -> FailedValidation
///   w >= t_confident, type fails                      -> FailedType
/// Survivors get the field boost when they passed a policy (or the field has
/// no policies and the type check passed). `validation[i]` belongs to
/// `candidates[i]`; its `type_ok` and `passed_policies` are inputs.
ThresholdPartition apply_thresholds(std::vector<Candidate> candidates, const FieldOfInterest& foi,
                                    const std::vector<ValidationOutcome>& validation);

struct VoteGroup {
  std::string normalized_text;
  std::string display_text;
  double total_score = 0.0;
  double best_single = 0.0;
  std::vector<Candidate> supporters;  // canonical order, highest vote_confidence first
};

struct VoteResult {
  std::vector<VoteGroup> groups;
  bool empty() const { return groups.empty(); }
  const VoteGroup* winner() const { return groups.empty() ? nullptr : &groups.front(); }
};

/// Accumulative vote: groups by normalized text, total = sum of supporters'
/// vote_confidence, ordered by (total desc, best single desc, text asc). The
/// result does not depend on the order of `candidates`.
VoteResult vote(std::vector<Candidate> candidates);

/// Canonical candidate order used for summation and display selection.
bool canonical_less(const Candidate& a, const Candidate& b);

struct SubsetScore {
  std::vector<std::string> models;  // in table model order
  double mean_f1 = 0.0;  // in [0,1]
};

struct EnsembleSearchResult {
  std::vector<std::string> best;
  double best_score = 0.0;
  /// All 2^n - 1 subsets, ordered by size then model names.
  std::vector<SubsetScore> table;
};

inline constexpr std::size_t kMaxEnsembleModels = 20;

/// Exhaustive subset search. Each subset votes per question with confidence
/// 1.0 weighted by W[class][model]; the winner is scored with squad_f1. Ties
/// prefer the smaller subset, then the lexicographically smaller name list.
/// Throws DataError above kMaxEnsembleModels models or on missing predictions.
EnsembleSearchResult ensemble_search(const std::vector<std::string>& models, const std::vector<QaEvalRecord>& eval_set,
                                     const std::vector<ModelPredictions>& predictions, const ClassWeightTable& weights,
                                     unsigned threads = 0);

/// Winner text of one voted question; the reference path ensemble_search is
/// checked against.
std::string vote_on_predictions(const QaEvalRecord& record, QuestionClass qclass,
                                const std::vector<std::pair<std::string, std::string>>& model_answers,
                                const ClassWeightTable& weights);

}  // namespace vespa
