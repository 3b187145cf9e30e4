#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "core/class_weights.hpp"
#include "core/document.hpp"
#include "core/processors.hpp"
#include "core/profile.hpp"
#include "core/qa_backend.hpp"
#include "core/retrieval.hpp"
#include "core/store.hpp"
#include "core/validator.hpp"

namespace vespa {

struct ExtractOptions {
  const EmbeddingProvider* embedder = nullptr;
  const EitlCandidateProvider* eitl = nullptr;
  /// Defaults to builtin_recognizer().
  std::shared_ptr<const RecognizerProvider> recognizer;
  /// Worker threads for the backend fan-out; 0 picks one per pending call up
  /// to the hardware concurrency, 1 runs inline.
  unsigned threads = 0;
  /// Record timestamp source; defaults to utc_timestamp_now().
  std::function<std::string()> clock;
};

using Ensemble = std::vector<std::shared_ptr<const QaBackend>>;

Ensemble make_ensemble(const std::vector<BackendDescriptor>& descriptors);

/// One record per profile field, in profile order. Questions are asked
/// outer, passages middle, backends inner; responses are buffered in that
/// order before anything is combined, so the result does not depend on
/// scheduling.
///
/// Throws ConfigError when a backend is not a weights column or two backends
/// share a name, and PipelineError(BackendUnavailable) when every call to
/// every backend failed.
std::vector<ExtractionRecord> extract_document(const Document& doc, const ExtractionProfile& profile,
                                               const Ensemble& ensemble, const ClassWeightTable& weights,
                                               const ProcessorRegistry& registry, const ExtractOptions& options = {});

std::vector<ExtractionRecord> extract_document(const Document& doc, const ExtractionProfile& profile,
                                               const std::vector<BackendDescriptor>& ensemble,
                                               const ClassWeightTable& weights, const ProcessorRegistry& registry,
                                               const ExtractOptions& options = {});

inline constexpr const char* kEitlModel = "EITL";

}  // namespace vespa
