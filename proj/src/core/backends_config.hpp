#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/qa_backend.hpp"

namespace vespa {

/// Ensemble file:
///
///   {"backends": [
///     {"name": "A", "kind": "MOCK", "mock": {
///        "seed": 7, "default_accuracy": 0.5, "per_class_accuracy": {"When": 1.0},
///        "gold": [{"scope": "inv-001", "field": "due_date", "answer": "April 5, 2020"}],
///        "gold_file": "gold.jsonl",
///        "confidence_bands": {"correct": [0.8, 1.0], "wrong": [0.0, 0.4]},
///        "absent_policy": "ABSTAIN", "distractor_kinds": {"due_date": "NUMERIC"}}},
///     {"name": "B", "kind": "REMOTE", "endpoint": "http://127.0.0.1:8080",
///      "timeout_ms": 10000, "max_retries": 2, "max_in_flight": 4, "backoff_ms": 100}]}
///
/// A relative gold_file resolves against `base_dir`. `seed_override`
/// replaces every mock seed.
std::vector<BackendDescriptor> parse_backends(std::string_view json, const std::string& base_dir = ".",
                                              std::optional<std::uint64_t> seed_override = std::nullopt);
std::vector<BackendDescriptor> load_backends(const std::string& path,
                                             std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace vespa
