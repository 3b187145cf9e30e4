#include "vespa/vespa.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <memory>
#include <stdexcept>
#include <string>

#include "core/backends_config.hpp"
#include "core/class_weights.hpp"
#include "core/document.hpp"
#include "core/ensemble.hpp"
#include "core/error.hpp"
#include "core/evalkit.hpp"
#include "core/json_util.hpp"
#include "core/pipeline.hpp"
#include "core/profile.hpp"
#include "core/question.hpp"
#include "core/retrieval.hpp"
#include "core/store.hpp"

struct vespa_profile {
  vespa::ExtractionProfile p;
};
struct vespa_weights {
  vespa::ClassWeightTable t;
};
struct vespa_ensemble {
  std::vector<vespa::BackendDescriptor> descriptors;
  vespa::Ensemble backends;
};
struct vespa_document {
  vespa::Document d;
};

namespace {

thread_local std::string g_last_error;

vespa_status fail(vespa_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

vespa_status status_of(vespa::Error::Code c) {
  switch (c) {
    case vespa::Error::Code::Usage: return VESPA_E_USAGE;
    case vespa::Error::Code::BackendUnavailable: return VESPA_E_BACKEND_UNAVAILABLE;
    default: return VESPA_E_DATA;
  }
}

template <class F>
vespa_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return VESPA_OK;
  } catch (const vespa::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::invalid_argument& e) {
    return fail(VESPA_E_USAGE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VESPA_E_DATA, "out of memory");
  } catch (const std::exception& e) {
    return fail(VESPA_E_DATA, std::string("internal: ") + e.what());
  } catch (...) {
    return fail(VESPA_E_DATA, "internal: unknown exception");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " is required");
}

vespa::DocumentFormat format_of(const char* f) {
  const std::string s = f ? f : "plain";
  if (s == "plain") return vespa::DocumentFormat::Plain;
  if (s == "structured") return vespa::DocumentFormat::Structured;
  throw std::invalid_argument("unknown document format \"" + s + "\" (plain|structured)");
}

}  // namespace

extern "C" {

const char* vespa_version(void) { return "0.3.0"; }

const char* vespa_last_error(void) { return g_last_error.c_str(); }

void vespa_free_string(char* s) { std::free(s); }

vespa_status vespa_profile_load(const char* path, vespa_profile** out) {
  return guarded([&] {
    need(path, "profile path");
    need(out, "out");
    *out = new vespa_profile{vespa::load_profile(path)};
  });
}

vespa_status vespa_profile_parse(const char* json, vespa_profile** out) {
  return guarded([&] {
    need(json, "profile json");
    need(out, "out");
    *out = new vespa_profile{vespa::parse_profile(json)};
  });
}

void vespa_profile_free(vespa_profile* p) { delete p; }

vespa_status vespa_weights_load(const char* path, vespa_weights** out) {
  return guarded([&] {
    need(path, "weights path");
    need(out, "out");
    *out = new vespa_weights{vespa::load_weights(path)};
  });
}

vespa_status vespa_weights_calibrate(const char* eval_path, const char* preds_dir, vespa_weights** out) {
  return guarded([&] {
    need(eval_path, "eval path");
    need(preds_dir, "predictions directory");
    need(out, "out");
    const auto eval = vespa::load_eval_set(eval_path);
    const auto preds = vespa::load_predictions_dir(preds_dir);
    *out = new vespa_weights{vespa::calibrate_weights(eval, preds)};
  });
}

vespa_status vespa_weights_save(const vespa_weights* w, const char* path) {
  return guarded([&] {
    need(w, "weights");
    need(path, "output path");
    vespa::jsonutil::write_file(path, vespa::serialize_weights_json(w->t));
  });
}

vespa_status vespa_weights_report(const vespa_weights* w, char** out_tsv) {
  return guarded([&] {
    need(w, "weights");
    need(out_tsv, "out");
    *out_tsv = dup(vespa::class_report(w->t));
  });
}

void vespa_weights_free(vespa_weights* w) { delete w; }

vespa_status vespa_ensemble_load(const char* path, int has_seed, uint64_t seed, vespa_ensemble** out) {
  return guarded([&] {
    need(path, "backends path");
    need(out, "out");
    auto e = std::make_unique<vespa_ensemble>();
    e->descriptors = vespa::load_backends(path, has_seed ? std::optional<std::uint64_t>(seed) : std::nullopt);
    e->backends = vespa::make_ensemble(e->descriptors);
    *out = e.release();
  });
}

void vespa_ensemble_free(vespa_ensemble* e) { delete e; }

vespa_status vespa_document_load(const char* path, const char* format, vespa_document** out) {
  return guarded([&] {
    need(path, "document path");
    need(out, "out");
    *out = new vespa_document{vespa::ingest_file(path, format_of(format))};
  });
}

vespa_status vespa_document_parse(const char* bytes, uint64_t len, const char* format, const char* doc_id,
                                  vespa_document** out) {
  return guarded([&] {
    need(bytes, "document bytes");
    need(doc_id, "document id");
    need(out, "out");
    *out = new vespa_document{vespa::ingest(std::string_view(bytes, len), format_of(format), doc_id)};
  });
}

void vespa_document_free(vespa_document* d) { delete d; }

vespa_status vespa_extract(const vespa_document* doc, const vespa_profile* profile, const vespa_ensemble* ensemble,
                           const vespa_weights* weights, const char* embedder, const char* store_path,
                           char** out_json) {
  return guarded([&] {
    need(doc, "document");
    need(profile, "profile");
    need(ensemble, "ensemble");
    need(weights, "weights");
    const std::string emb = embedder ? embedder : "none";
    std::unique_ptr<vespa::HashEmbedder> hash;
    if (emb == "test-hash") hash = std::make_unique<vespa::HashEmbedder>();
    else if (emb != "none") throw std::invalid_argument("unknown embedder \"" + emb + "\" (none|test-hash)");

    std::optional<vespa::EditLogProvider> eitl;
    vespa::ExtractOptions opts;
    opts.embedder = hash.get();
    if (store_path) {
      eitl.emplace(vespa::EditLogProvider::from_file(vespa::edit_log_path(store_path)));
      opts.eitl = &*eitl;
    }
    const auto registry = vespa::ProcessorRegistry::from_profile(profile->p);
    const auto records =
        vespa::extract_document(doc->d, profile->p, ensemble->backends, weights->t, registry, opts);
    if (store_path) vespa::store_append(store_path, records);
    if (out_json) {
      std::string json = "[";
      for (std::size_t i = 0; i < records.size(); ++i) json += (i ? "," : "") + vespa::record_to_json(records[i]);
      *out_json = dup(json + "]");
    }
  });
}

vespa_status vespa_ensemble_search(const char* eval_path, const char* preds_dir, const vespa_weights* w,
                                   char** out_json) {
  return guarded([&] {
    need(eval_path, "eval path");
    need(preds_dir, "predictions directory");
    need(w, "weights");
    need(out_json, "out");
    const auto eval = vespa::load_eval_set(eval_path);
    const auto preds = vespa::load_predictions_dir(preds_dir);
    std::vector<std::string> models;
    for (const auto& p : preds) models.push_back(p.model);
    const auto result = vespa::ensemble_search(models, eval, preds, w->t);
    vespa::jsonutil::ojson j;
    j["best"] = result.best;
    j["best_score"] = result.best_score;
    j["table"] = vespa::jsonutil::ojson::array();
    for (const auto& s : result.table) j["table"].push_back({{"models", s.models}, {"mean_f1", s.mean_f1}});
    *out_json = dup(j.dump(2) + "\n");
  });
}

vespa_status vespa_evaluate(const char* gold_path, const char* store_path, char** out_tsv, char** out_json) {
  return guarded([&] {
    need(gold_path, "gold path");
    need(store_path, "store path");
    const auto report = vespa::field_report(vespa::load_gold_labels(gold_path), vespa::store_scan(store_path));
    if (out_tsv) *out_tsv = dup(vespa::render_field_report_tsv({{"F1", report}}));
    if (out_json) *out_json = dup(vespa::render_field_report_json(report));
  });
}

vespa_status vespa_classify_question(const char* text, char** out_class) {
  return guarded([&] {
    need(text, "question text");
    need(out_class, "out");
    *out_class = dup(std::string(vespa::table_label(vespa::classify(text))));
  });
}

vespa_status vespa_record_edit(const char* store_path, const char* doc_id, const char* field, const char* value,
                               const char* editor, char** out_json) {
  return guarded([&] {
    need(store_path, "store path");
    need(doc_id, "document id");
    need(field, "field");
    need(value, "value");
    need(editor, "editor");
    vespa::EditRecord e;
    e.doc_id = doc_id;
    e.field_name = field;
    e.new_value = value;
    e.editor = editor;
    const auto stored = vespa::record_edit(store_path, e);
    if (out_json) *out_json = dup(vespa::edit_to_json(stored));
  });
}

}  // extern "C"
