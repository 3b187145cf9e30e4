// Batch front end over the C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vespa/vespa.h"

namespace {

const char* kDefaultStore = "vespa-store.jsonl";

struct CString {
  char* p = nullptr;
  ~CString() { vespa_free_string(p); }
  std::string str() const { return p ? p : ""; }
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
};

int report(vespa_status s) {
  if (s != VESPA_OK) std::cerr << "E:" << static_cast<int>(s) << ": " << vespa_last_error() << "\n";
  return static_cast<int>(s);
}

bool write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << body;
  out.flush();
  if (!out) {
    std::cerr << "E:" << VESPA_E_DATA << ": cannot write " << path << "\n";
    return false;
  }
  return true;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct ExtractArgs {
  std::string doc, format = "plain", profile, backends, weights, embedder = "none", store = kDefaultStore;
  std::optional<std::uint64_t> seed;
};

int run_extract(const ExtractArgs& a) {
  Handle<vespa_profile, vespa_profile_free> profile;
  Handle<vespa_weights, vespa_weights_free> weights;
  Handle<vespa_ensemble, vespa_ensemble_free> ensemble;
  Handle<vespa_document, vespa_document_free> doc;
  if (auto s = vespa_profile_load(a.profile.c_str(), &profile.p)) return report(s);
  if (auto s = vespa_weights_load(a.weights.c_str(), &weights.p)) return report(s);
  if (auto s = vespa_ensemble_load(a.backends.c_str(), a.seed.has_value(), a.seed.value_or(0), &ensemble.p))
    return report(s);
  if (auto s = vespa_document_load(a.doc.c_str(), a.format.c_str(), &doc.p)) return report(s);
  CString json;
  if (auto s = vespa_extract(doc.p, profile.p, ensemble.p, weights.p, a.embedder.c_str(), a.store.c_str(), &json.p))
    return report(s);
  // Printed only after the store append succeeded.
  for (const auto& r : nlohmann::ordered_json::parse(json.str())) {
    std::cout << r["doc_id"].get<std::string>() << "\t" << r["field"].get<std::string>() << "\t"
              << (r["value"].is_null() ? std::string("ABSTAIN") : r["value"].get<std::string>()) << "\t";
    char conf[32];
    std::snprintf(conf, sizeof conf, "%.4f", r["confidence"].get<double>());
    std::cout << conf << "\t" << r["source"].get<std::string>() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vespa: class-aware ensemble extraction over documents"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vespa_version()));

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Extract every profile field from one document");
  extract->add_option("--doc", ex.doc, "Document path")->required();
  extract->add_option("--format", ex.format, "plain|structured")->check(CLI::IsMember({"plain", "structured"}));
  extract->add_option("--profile", ex.profile, "Extraction profile (JSON)")->required();
  extract->add_option("--backends", ex.backends, "Ensemble file (JSON)")->required();
  extract->add_option("--weights", ex.weights, "Class weight table (JSON or TSV)")->required();
  extract->add_option("--embedder", ex.embedder, "none|test-hash")->check(CLI::IsMember({"none", "test-hash"}));
  extract->add_option("--store", ex.store, "Record store (JSONL)")->capture_default_str();
  extract->add_option("--seed", ex.seed, "Replaces every mock seed");

  std::string eval, preds, out, weights_path, gold, store = kDefaultStore;
  auto* calibrate = app.add_subcommand("calibrate", "Per-class model weights from an eval set and predictions");
  calibrate->add_option("--eval", eval, "Eval set (JSON list)")->required();
  calibrate->add_option("--preds", preds, "Directory of <model>.json prediction maps")->required();
  calibrate->add_option("--out", out, "Output weights.json")->required();

  auto* search = app.add_subcommand("ensemble-search", "Exhaustive search for the best model subset");
  search->add_option("--eval", eval, "Eval set (JSON list)")->required();
  search->add_option("--preds", preds, "Directory of <model>.json prediction maps")->required();
  search->add_option("--weights", weights_path, "Class weight table")->required();
  search->add_option("--out", out, "Output JSON")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Per-field F1 report of a store against gold labels");
  evaluate->add_option("--gold", gold, "Gold labels (JSONL)")->required();
  evaluate->add_option("--store", store, "Record store (JSONL)")->capture_default_str();
  evaluate->add_option("--out", out, "Report path; .json selects JSON, anything else TSV")->required();

  std::string question;
  auto* classify = app.add_subcommand("classify-question", "Print the question class");
  classify->add_option("text", question, "Question text")->required();

  std::string doc_id, field, value, editor;
  auto* edit = app.add_subcommand("record-edit", "Record an expert correction");
  edit->add_option("--store", store, "Record store (JSONL)")->capture_default_str();
  edit->add_option("--doc", doc_id, "Document id")->required();
  edit->add_option("--field", field, "Field name")->required();
  edit->add_option("--value", value, "Corrected value")->required();
  edit->add_option("--editor", editor, "Editor name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "E:" << VESPA_E_USAGE << ": " << e.what() << "\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return VESPA_E_USAGE;
  }

  try {
    if (*extract) return run_extract(ex);

    if (*calibrate) {
      Handle<vespa_weights, vespa_weights_free> w;
      if (auto s = vespa_weights_calibrate(eval.c_str(), preds.c_str(), &w.p)) return report(s);
      if (auto s = vespa_weights_save(w.p, out.c_str())) return report(s);
      CString tsv;
      if (auto s = vespa_weights_report(w.p, &tsv.p)) return report(s);
      std::cout << tsv.str();
      return 0;
    }

    if (*search) {
      Handle<vespa_weights, vespa_weights_free> w;
      if (auto s = vespa_weights_load(weights_path.c_str(), &w.p)) return report(s);
      CString json;
      if (auto s = vespa_ensemble_search(eval.c_str(), preds.c_str(), w.p, &json.p)) return report(s);
      if (!write_text(out, json.str())) return VESPA_E_DATA;
      const auto j = nlohmann::ordered_json::parse(json.str());
      std::cout << "best";
      for (const auto& m : j["best"]) std::cout << "\t" << m.get<std::string>();
      std::cout << "\nscore\t" << j["best_score"].get<double>() << "\n";
      return 0;
    }

    if (*evaluate) {
      CString tsv, json;
      if (auto s = vespa_evaluate(gold.c_str(), store.c_str(), &tsv.p, &json.p)) return report(s);
      if (!write_text(out, ends_with(out, ".json") ? json.str() : tsv.str())) return VESPA_E_DATA;
      std::cout << tsv.str();
      return 0;
    }

    if (*classify) {
      CString cls;
      if (auto s = vespa_classify_question(question.c_str(), &cls.p)) return report(s);
      std::cout << cls.str() << "\n";
      return 0;
    }

    if (*edit) {
      CString json;
      if (auto s = vespa_record_edit(store.c_str(), doc_id.c_str(), field.c_str(), value.c_str(), editor.c_str(),
                                     &json.p))
        return report(s);
      std::cout << json.str() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "E:" << VESPA_E_DATA << ": " << e.what() << "\n";
    return VESPA_E_DATA;
  }
  return VESPA_E_USAGE;
}
