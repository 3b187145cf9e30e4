#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/document.hpp"

namespace vespa {

/// Dense text encoder. Implementations must be deterministic and return
/// vectors of exactly `dimension()` entries.
class EmbeddingProvider {
public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<double> embed(const std::string& text) const = 0;
};

/// Feature-hashing embedder: each token adds 1 to bucket fnv1a(token) % dim,
/// then the vector is L2-normalized. Intended for tests and offline runs.
class HashEmbedder final : public EmbeddingProvider {
public:
  explicit HashEmbedder(std::size_t dim = 8) : dim_(dim) {}
  std::size_t dimension() const override { return dim_; }
  std::vector<double> embed(const std::string& text) const override;

private:
  std::size_t dim_;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Immutable lexical (and optionally dense) index over a passage set.
class PassageIndex {
public:
  const std::vector<Passage>& passages() const { return passages_; }
  std::size_t size() const { return passages_.size(); }
  std::size_t document_frequency(const std::string& term) const;
  std::size_t term_frequency(std::size_t passage, const std::string& term) const;
  std::size_t length(std::size_t passage) const { return lengths_[passage]; }
  double average_length() const { return avg_length_; }
  bool has_vectors() const { return !vectors_.empty(); }
  std::size_t vector_dimension() const { return dim_; }
  const std::vector<double>& vector(std::size_t passage) const { return vectors_[passage]; }

  /// BM25 score of every passage for the distinct terms of `query_terms`.
  std::vector<double> bm25(const std::vector<std::string>& query_terms, Bm25Params params = {}) const;

private:
  friend PassageIndex build_index(std::vector<Passage>, const EmbeddingProvider*);

  std::vector<Passage> passages_;
  std::vector<std::map<std::string, std::size_t>> tf_;
  std::map<std::string, std::size_t> df_;
  std::vector<std::size_t> lengths_;
  double avg_length_ = 0.0;
  std::vector<std::vector<double>> vectors_;
  std::size_t dim_ = 0;
};

/// Throws std::invalid_argument on an empty passage list and DataError when
/// the embedder returns a vector of the wrong dimension.
PassageIndex build_index(std::vector<Passage> passages, const EmbeddingProvider* embedder = nullptr);

struct ScoredPassage {
  const Passage* passage = nullptr;
  double score = 0.0;
};

/// Top-k passages for the concatenated query phrases. Lexical scores are
/// min-max normalized over the index; with an embedder (and an index built
/// with vectors) the score is 0.5 * lexical + 0.5 * max(0, cosine(query
/// centroid, passage vector)). Ties break by passage id ascending.
std::vector<ScoredPassage> retrieve(const PassageIndex& index, const std::vector<std::string>& query_phrases,
                                    std::size_t k, const EmbeddingProvider* embedder = nullptr);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace vespa
