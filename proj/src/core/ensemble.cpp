#include "core/ensemble.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "core/error.hpp"
#include "core/text.hpp"

namespace vespa {

namespace {

bool is_ascii_punct(char c) {
  const auto uc = static_cast<unsigned char>(c);
  return uc < 0x80 && std::ispunct(uc) != 0;
}

}  // namespace

std::string normalize_answer(std::string_view answer) {
  std::string s = text::to_lower(text::collapse_whitespace(answer));
  std::size_t b = 0, e = s.size();
  while (true) {
    const auto b0 = b, e0 = e;
    while (b < e && (is_ascii_punct(s[b]) || s[b] == ' ')) ++b;
    while (e > b && (is_ascii_punct(s[e - 1]) || s[e - 1] == ' ')) --e;
    if (b == b0 && e == e0) break;
  }
  return s.substr(b, e - b);
}

Candidate weigh(const QaResponse& response, const Question& question, const std::string& passage_id,
                const std::string& model, const ClassWeightTable& table) {
  Candidate c;
  c.answer_text = response.answer_text;
  c.normalized_text = normalize_answer(response.answer_text);
  c.model = model;
  c.question = question;
  c.passage_id = passage_id;
  c.raw_confidence = response.raw_confidence;
  c.class_weight = table.weight(question.qclass, model);
  c.weighted_confidence = response.raw_confidence * c.class_weight / 100.0;
  c.vote_confidence = c.weighted_confidence;
  return c;
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::BelowThreshold: return "below_threshold";
    case RejectReason::FailedValidation: return "failed_validation";
    case RejectReason::FailedType: return "failed_type";
  }
  return "unknown";
}

ThresholdPartition apply_thresholds(std::vector<Candidate> candidates, const FieldOfInterest& foi,
                                    const std::vector<ValidationOutcome>& validation) {
  if (validation.size() != candidates.size())
    throw std::invalid_argument("apply_thresholds: one validation outcome per candidate required");
  ThresholdPartition out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& c = candidates[i];
    const auto* verb = foi.find_verbiage(c.question.verbiage_phrase);
    if (!verb)
      throw std::invalid_argument("apply_thresholds: question verbiage \"" + c.question.verbiage_phrase +
                                  "\" is not configured on field " + foi.name);
    c.validation = validation[i];
    c.validation.boosted = false;
    c.validation.final_confidence = c.weighted_confidence;
    const double w = c.weighted_confidence;
    const bool policies_ok = foi.policies.empty() || !c.validation.passed_policies.empty();

    if (w < verb->t_reject) {
      out.rejected.push_back({std::move(c), RejectReason::BelowThreshold});
      continue;
    }
    if (w < verb->t_confident) {
      if (!c.validation.type_ok || !policies_ok) {
        out.rejected.push_back({std::move(c), RejectReason::FailedValidation});
        continue;
      }
    } else if (!c.validation.type_ok) {
      out.rejected.push_back({std::move(c), RejectReason::FailedType});
      continue;
    }
    const bool earned = !c.validation.passed_policies.empty() || (foi.policies.empty() && c.validation.type_ok);
    if (earned) {
      c.validation.boosted = true;
      c.validation.final_confidence = boost(w, foi.boost_factor);
    }
    c.vote_confidence = c.validation.final_confidence;
    out.survived.push_back(std::move(c));
  }
  return out;
}

bool canonical_less(const Candidate& a, const Candidate& b) {
  if (a.vote_confidence != b.vote_confidence) return a.vote_confidence > b.vote_confidence;
  const auto ka = std::tie(a.model, a.question.text, a.passage_id, a.answer_text);
  const auto kb = std::tie(b.model, b.question.text, b.passage_id, b.answer_text);
  if (ka != kb) return ka < kb;
  if (a.raw_confidence != b.raw_confidence) return a.raw_confidence > b.raw_confidence;
  if (a.weighted_confidence != b.weighted_confidence) return a.weighted_confidence > b.weighted_confidence;
  return a.source < b.source;
}

VoteResult vote(std::vector<Candidate> candidates) {
  std::sort(candidates.begin(), candidates.end(), canonical_less);
  VoteResult result;
  std::map<std::string, std::size_t> index;
  for (auto& c : candidates) {
    auto [it, inserted] = index.try_emplace(c.normalized_text, result.groups.size());
    if (inserted) {
      VoteGroup g;
      g.normalized_text = c.normalized_text;
      g.display_text = c.answer_text;
      g.best_single = c.vote_confidence;
      result.groups.push_back(std::move(g));
    }
    auto& g = result.groups[it->second];
    g.total_score += c.vote_confidence;
    g.supporters.push_back(std::move(c));
  }
  std::sort(result.groups.begin(), result.groups.end(), [](const VoteGroup& a, const VoteGroup& b) {
    if (a.total_score != b.total_score) return a.total_score > b.total_score;
    if (a.best_single != b.best_single) return a.best_single > b.best_single;
    return a.normalized_text < b.normalized_text;
  });
  return result;
}

std::string vote_on_predictions(const QaEvalRecord& record, QuestionClass qclass,
                                const std::vector<std::pair<std::string, std::string>>& model_answers,
                                const ClassWeightTable& weights) {
  Question q;
  q.text = record.question;
  q.qclass = qclass;
  std::vector<Candidate> candidates;
  for (const auto& [model, answer] : model_answers) {
    QaResponse r;
    r.answer_text = answer;
    r.raw_confidence = 1.0;
    candidates.push_back(weigh(r, q, "", model, weights));
  }
  const auto result = vote(std::move(candidates));
  return result.empty() ? std::string() : result.winner()->display_text;
}

namespace {

struct PreparedQuestion {
  std::vector<std::size_t> order;  // model indices in canonical vote order
  std::vector<double> weight;      // per model, W/100
  std::vector<int> group;          // per model
  std::vector<std::string> group_text;
  std::vector<double> f1;          // per model, F1 of its own answer
};

PreparedQuestion prepare(const QaEvalRecord& rec, const std::vector<std::string>& models,
                         const std::vector<const std::map<std::string, std::string>*>& answers,
                         const ClassWeightTable& weights) {
  PreparedQuestion p;
  const auto qclass = classify(rec.question);
  const auto n = models.size();
  p.weight.resize(n);
  p.group.resize(n);
  p.f1.resize(n);
  std::vector<std::string> texts(n);
  std::map<std::string, int> gid;
  for (std::size_t m = 0; m < n; ++m) {
    const auto it = answers[m]->find(rec.id);
    if (it == answers[m]->end())
      throw DataError("ensemble search: model " + models[m] + " has no prediction for question " + rec.id);
    texts[m] = it->second;
    p.weight[m] = 1.0 * weights.weight(qclass, models[m]) / 100.0;
    p.f1[m] = squad_f1(texts[m], rec.gold_answers);
  }
  p.order.resize(n);
  for (std::size_t m = 0; m < n; ++m) p.order[m] = m;
  std::sort(p.order.begin(), p.order.end(), [&](std::size_t a, std::size_t b) {
    if (p.weight[a] != p.weight[b]) return p.weight[a] > p.weight[b];
    return std::tie(models[a], texts[a]) < std::tie(models[b], texts[b]);
  });
  for (std::size_t m = 0; m < n; ++m) {
    const auto norm = normalize_answer(texts[m]);
    auto [it, inserted] = gid.try_emplace(norm, static_cast<int>(p.group_text.size()));
    if (inserted) p.group_text.push_back(norm);
    p.group[m] = it->second;
  }
  return p;
}

double score_subset(std::uint32_t mask, const std::vector<PreparedQuestion>& questions) {
  double sum = 0.0;
  std::vector<double> total, best;
  std::vector<int> first;
  for (const auto& q : questions) {
    const auto groups = q.group_text.size();
    total.assign(groups, 0.0);
    best.assign(groups, 0.0);
    first.assign(groups, -1);
    for (const auto m : q.order) {
      if (!(mask & (1u << m))) continue;
      const auto g = q.group[m];
      if (first[g] < 0) {
        first[g] = static_cast<int>(m);
        best[g] = q.weight[m];
      }
      total[g] += q.weight[m];
    }
    int win = -1;
    for (std::size_t g = 0; g < groups; ++g) {
      if (first[g] < 0) continue;
      if (win < 0) {
        win = static_cast<int>(g);
        continue;
      }
      const auto w = static_cast<std::size_t>(win);
      if (total[g] != total[w] ? total[g] > total[w]
                               : best[g] != best[w] ? best[g] > best[w] : q.group_text[g] < q.group_text[w])
        win = static_cast<int>(g);
    }
    if (win >= 0) sum += q.f1[static_cast<std::size_t>(first[static_cast<std::size_t>(win)])];
  }
  return questions.empty() ? 0.0 : sum / static_cast<double>(questions.size());
}

std::vector<std::string> sorted_names(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

EnsembleSearchResult ensemble_search(const std::vector<std::string>& models, const std::vector<QaEvalRecord>& eval_set,
                                     const std::vector<ModelPredictions>& predictions, const ClassWeightTable& weights,
                                     unsigned threads) {
  if (models.empty()) throw DataError("ensemble search: no models");
  if (models.size() > kMaxEnsembleModels)
    throw DataError("ensemble search: " + std::to_string(models.size()) + " models exceed the ceiling of " +
                    std::to_string(kMaxEnsembleModels) + " (2^" + std::to_string(kMaxEnsembleModels) +
                    " - 1 subsets)");
  std::vector<const std::map<std::string, std::string>*> answers;
  for (const auto& m : models) {
    const auto it = std::find_if(predictions.begin(), predictions.end(),
                                 [&](const ModelPredictions& p) { return p.model == m; });
    if (it == predictions.end()) throw DataError("ensemble search: no predictions for model " + m);
    if (!weights.has_model(m)) throw DataError("ensemble search: model " + m + " missing from the weight table");
    answers.push_back(&it->answers);
  }
  std::vector<PreparedQuestion> prepared;
  prepared.reserve(eval_set.size());
  for (const auto& rec : eval_set) prepared.push_back(prepare(rec, models, answers, weights));

  const std::uint32_t subsets = (1u << models.size()) - 1;
  std::vector<double> scores(subsets);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, subsets);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint32_t mask = 1 + t; mask <= subsets; mask += threads)
          scores[mask - 1] = score_subset(mask, prepared);
      });
    }
  }

  EnsembleSearchResult result;
  result.table.reserve(subsets);
  for (std::uint32_t mask = 1; mask <= subsets; ++mask) {
    SubsetScore s;
    for (std::size_t m = 0; m < models.size(); ++m)
      if (mask & (1u << m)) s.models.push_back(models[m]);
    s.mean_f1 = scores[mask - 1];
    result.table.push_back(std::move(s));
  }
  std::sort(result.table.begin(), result.table.end(), [](const SubsetScore& a, const SubsetScore& b) {
    if (a.models.size() != b.models.size()) return a.models.size() < b.models.size();
    return sorted_names(a.models) < sorted_names(b.models);
  });
  const SubsetScore* best = nullptr;
  for (const auto& s : result.table) {
    if (!best || s.mean_f1 > best->mean_f1) best = &s;
    // the table is already ordered by the tie-break, so ">" keeps the first
  }
  result.best = best->models;
  result.best_score = best->mean_f1;
  return result;
}

}  // namespace vespa
