#include "core/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "core/ensemble.hpp"
#include "core/error.hpp"
#include "core/log.hpp"
#include "core/question.hpp"

namespace vespa {

namespace {

struct Call {
  std::size_t field = 0;
  const Question* question = nullptr;
  const Passage* passage = nullptr;
  std::size_t backend = 0;
};

struct Outcome {
  std::optional<QaResponse> response;
  std::string failure;
};

struct FieldPlan {
  std::vector<Passage> passages;
  std::vector<const Passage*> top;
  std::vector<Question> questions;
  std::size_t first_call = 0;
  std::size_t call_count = 0;
  std::vector<std::string> notes;
};

void run_calls(const std::vector<Call>& calls, std::vector<Outcome>& out, const Ensemble& ensemble,
               unsigned threads) {
  auto one = [&](std::size_t i) {
    const Call& c = calls[i];
    QaRequest req{c.question->text, c.question->qclass, c.passage->id, c.passage->text, c.question->field_name};
    try {
      out[i].response = ensemble[c.backend]->ask(req);
    } catch (const std::exception& e) {
      out[i].failure = e.what();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, calls.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < calls.size(); ++i) one(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < calls.size(); i = next++) one(i);
    });
}

SupporterProvenance provenance_of(const Candidate& c) {
  SupporterProvenance p;
  p.model = c.model;
  p.question = c.question.text;
  p.question_class = std::string(to_string(c.question.qclass));
  p.class_weight = c.class_weight;
  p.passage_id = c.passage_id;
  p.raw_confidence = c.raw_confidence;
  p.weighted_confidence = c.weighted_confidence;
  p.vote_confidence = c.vote_confidence;
  p.answer_text = c.answer_text;
  p.validation = c.validation;
  p.source = c.source == CandidateSource::Eitl ? "eitl" : "ensemble";
  return p;
}

Candidate eitl_candidate(const std::string& value, const FieldOfInterest& foi) {
  Candidate c;
  c.answer_text = value;
  c.normalized_text = normalize_answer(value);
  c.model = kEitlModel;
  c.question.field_name = foi.name;
  c.raw_confidence = 1.0;
  c.weighted_confidence = 1.0;
  c.class_weight = 100.0;
  c.vote_confidence = 1.0;
  c.validation.type_ok = check_type(value, foi.response_type, foi.locale);
  c.validation.final_confidence = 1.0;
  c.source = CandidateSource::Eitl;
  return c;
}

}  // namespace

Ensemble make_ensemble(const std::vector<BackendDescriptor>& descriptors) {
  Ensemble out;
  for (const auto& d : descriptors) out.push_back(make_backend(d));
  return out;
}

std::vector<ExtractionRecord> extract_document(const Document& input, const ExtractionProfile& profile,
                                               const Ensemble& ensemble, const ClassWeightTable& weights,
                                               const ProcessorRegistry& registry, const ExtractOptions& options) {
  {
    std::set<std::string> seen;
    for (const auto& b : ensemble) {
      if (!seen.insert(b->name()).second) throw ConfigError("duplicate backend name \"" + b->name() + "\"");
      if (!weights.has_model(b->name()))
        throw ConfigError("backend \"" + b->name() + "\" has no column in the class weight table");
    }
  }
  const auto recognizer = options.recognizer ? options.recognizer : builtin_recognizer();
  const Document doc = registry.run_pre(input);

  std::vector<FieldPlan> plans(profile.fields.size());
  std::vector<Call> calls;
  for (std::size_t f = 0; f < profile.fields.size(); ++f) {
    const auto& foi = profile.fields[f];
    auto& plan = plans[f];
    plan.passages = segment(doc, foi.passage_level);
    plan.questions = generate_questions(foi);
    plan.first_call = calls.size();
    if (plan.passages.empty()) {
      plan.notes.push_back("no passages");
      continue;
    }
    std::vector<std::string> query;
    for (const auto& v : foi.verbiage) query.push_back(v.phrase);
    // The index owns copies of the passages; keep ours stable for the calls.
    const auto index = build_index(plan.passages, options.embedder);
    for (const auto& sp : retrieve(index, query, static_cast<std::size_t>(foi.top_k_passages), options.embedder)) {
      const auto it = std::find_if(plan.passages.begin(), plan.passages.end(),
                                   [&](const Passage& p) { return p.id == sp.passage->id; });
      plan.top.push_back(&*it);
    }
    for (const auto& q : plan.questions)
      for (const Passage* p : plan.top)
        for (std::size_t b = 0; b < ensemble.size(); ++b) calls.push_back({f, &q, p, b});
    plan.call_count = calls.size() - plan.first_call;
  }

  std::vector<Outcome> outcomes(calls.size());
  run_calls(calls, outcomes, ensemble, options.threads);

  const bool all_failed = !calls.empty() && std::all_of(outcomes.begin(), outcomes.end(),
                                                        [](const Outcome& o) { return !o.response; });
  if (all_failed && !ensemble.empty())
    throw PipelineError(Error::Code::BackendUnavailable,
                        "document " + doc.id + ": all backends unavailable (" + outcomes.front().failure + ")");

  const std::string timestamp = options.clock ? options.clock() : utc_timestamp_now();
  std::vector<ExtractionRecord> records;
  records.reserve(profile.fields.size());

  for (std::size_t f = 0; f < profile.fields.size(); ++f) {
    const auto& foi = profile.fields[f];
    const auto& plan = plans[f];
    ExtractionRecord rec;
    rec.doc_id = doc.id;
    rec.field_name = foi.name;
    rec.timestamp = timestamp;
    rec.notes = plan.notes;

    std::vector<Candidate> candidates;
    std::vector<ValidationOutcome> validation;
    int abstained = 0;
    for (std::size_t i = plan.first_call; i < plan.first_call + plan.call_count; ++i) {
      const Call& call = calls[i];
      const auto& backend = ensemble[call.backend]->name();
      const auto& o = outcomes[i];
      if (!o.response) {
        ++rec.backend_failures[backend];
        log::warn(backend + " failed on " + call.passage->id + ": " + o.failure);
        continue;
      }
      if (o.response->clamped || !o.response->note.empty()) {
        std::string note = backend + " on " + call.passage->id + ":";
        if (o.response->clamped) note += " score clamped";
        if (!o.response->note.empty()) note += " " + o.response->note;
        rec.notes.push_back(note);
      }
      if (o.response->abstained() || normalize_answer(o.response->answer_text).empty()) {
        ++abstained;
        continue;
      }
      auto cand = weigh(*o.response, *call.question, call.passage->id, backend, weights);
      auto outcome = apply_policies(cand.answer_text, foi.policies, *recognizer);
      outcome.type_ok = check_type(cand.answer_text, foi.response_type, foi.locale);
      candidates.push_back(std::move(cand));
      validation.push_back(std::move(outcome));
    }
    if (abstained > 0) rec.notes.push_back("abstentions: " + std::to_string(abstained));

    auto partition = apply_thresholds(std::move(candidates), foi, validation);
    for (const auto& r : partition.rejected) ++rec.rejected[std::string(to_string(r.reason))];

    std::optional<std::string> override;
    if (options.eitl) override = options.eitl->lookup(doc.id, foi.name);
    if (override && !normalize_answer(*override).empty())
      partition.survived.push_back(eitl_candidate(*override, foi));
    else
      override.reset();

    const auto result = vote(std::move(partition.survived));
    const VoteGroup* winner = result.winner();
    if (override) {
      // An expert value is replayed as-is: its group wins whatever the tally.
      const auto key = normalize_answer(*override);
      for (const auto& g : result.groups)
        if (g.normalized_text == key) winner = &g;
    }

    if (winner) {
      const bool expert = override.has_value();
      rec.source = expert ? "eitl" : "ensemble";
      rec.raw_value = expert ? *override : winner->display_text;
      rec.total_score = winner->total_score;
      rec.confidence = std::min(1.0, winner->total_score);
      for (const auto& s : winner->supporters) rec.supporters.push_back(provenance_of(s));
      PostContext ctx{foi.name, foi.response_type, foi.locale};
      if (expert) {
        try {
          rec.value = registry.run_post(rec.raw_value, ctx);
        } catch (const Error& e) {
          rec.value = rec.raw_value;
          rec.notes.push_back(std::string("expert value kept verbatim: ") + e.what());
        }
      } else {
        rec.value = registry.run_post(rec.raw_value, ctx);
      }
      if (rec.value->empty()) throw PipelineError(Error::Code::Data, "field " + foi.name + ": post-processing produced an empty value");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ExtractionRecord> extract_document(const Document& doc, const ExtractionProfile& profile,
                                               const std::vector<BackendDescriptor>& ensemble,
                                               const ClassWeightTable& weights, const ProcessorRegistry& registry,
                                               const ExtractOptions& options) {
  return extract_document(doc, profile, make_ensemble(ensemble), weights, registry, options);
}

}  // namespace vespa
