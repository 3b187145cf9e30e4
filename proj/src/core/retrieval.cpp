#include "core/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "core/error.hpp"
#include "core/text.hpp"

namespace vespa {

std::vector<double> HashEmbedder::embed(const std::string& input) const {
  std::vector<double> v(dim_, 0.0);
  for (const auto& tok : text::tokenize(input)) v[text::fnv1a(tok) % dim_] += 1.0;
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  if (norm > 0)
    for (auto& x : v) x /= norm;
  return v;
}

std::size_t PassageIndex::document_frequency(const std::string& term) const {
  const auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

std::size_t PassageIndex::term_frequency(std::size_t passage, const std::string& term) const {
  const auto& m = tf_[passage];
  const auto it = m.find(term);
  return it == m.end() ? 0 : it->second;
}

std::vector<double> PassageIndex::bm25(const std::vector<std::string>& query_terms, Bm25Params params) const {
  const std::set<std::string> terms(query_terms.begin(), query_terms.end());
  const double n = static_cast<double>(passages_.size());
  std::vector<double> scores(passages_.size(), 0.0);
  for (const auto& term : terms) {
    const double df = static_cast<double>(document_frequency(term));
    if (df == 0) continue;
    // Non-negative idf variant so a matching term never lowers a score.
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    for (std::size_t i = 0; i < passages_.size(); ++i) {
      const double tf = static_cast<double>(term_frequency(i, term));
      if (tf == 0) continue;
      const double norm = avg_length_ > 0 ? static_cast<double>(lengths_[i]) / avg_length_ : 0.0;
      scores[i] += idf * tf * (params.k1 + 1.0) / (tf + params.k1 * (1.0 - params.b + params.b * norm));
    }
  }
  return scores;
}

PassageIndex build_index(std::vector<Passage> passages, const EmbeddingProvider* embedder) {
  if (passages.empty()) throw std::invalid_argument("build_index: empty passage list");
  PassageIndex idx;
  idx.tf_.resize(passages.size());
  idx.lengths_.resize(passages.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < passages.size(); ++i) {
    const auto tokens = text::tokenize(passages[i].text);
    for (const auto& t : tokens) ++idx.tf_[i][t];
    for (const auto& [t, _] : idx.tf_[i]) ++idx.df_[t];
    idx.lengths_[i] = tokens.size();
    total += tokens.size();
  }
  idx.avg_length_ = static_cast<double>(total) / static_cast<double>(passages.size());
  if (embedder) {
    idx.dim_ = embedder->dimension();
    for (const auto& p : passages) {
      auto v = embedder->embed(p.text);
      if (v.size() != idx.dim_)
        throw DataError("embedder returned dimension " + std::to_string(v.size()) + ", declared " +
                        std::to_string(idx.dim_));
      idx.vectors_.push_back(std::move(v));
    }
  }
  idx.passages_ = std::move(passages);
  return idx;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  const double dot = std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  const double na = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
  const double nb = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  if (na == 0 || nb == 0) return 0.0;
  return dot / (na * nb);
}

std::vector<ScoredPassage> retrieve(const PassageIndex& index, const std::vector<std::string>& query_phrases,
                                    std::size_t k, const EmbeddingProvider* embedder) {
  if (k == 0) throw std::invalid_argument("retrieve: k must be >= 1");
  std::vector<std::string> terms;
  for (const auto& phrase : query_phrases)
    for (auto& t : text::tokenize(phrase)) terms.push_back(std::move(t));

  auto lexical = index.bm25(terms);
  const auto [lo_it, hi_it] = std::minmax_element(lexical.begin(), lexical.end());
  const double lo = *lo_it, hi = *hi_it;
  for (auto& s : lexical) s = hi > lo ? (s - lo) / (hi - lo) : (hi > 0 ? 1.0 : 0.0);

  std::vector<double> combined = lexical;
  if (embedder && index.has_vectors()) {
    if (embedder->dimension() != index.vector_dimension())
      throw std::invalid_argument("retrieve: embedder dimension differs from index");
    std::vector<double> centroid(index.vector_dimension(), 0.0);
    for (const auto& phrase : query_phrases) {
      const auto v = embedder->embed(phrase);
      for (std::size_t d = 0; d < centroid.size(); ++d) centroid[d] += v[d];
    }
    for (auto& x : centroid) x /= static_cast<double>(std::max<std::size_t>(1, query_phrases.size()));
    for (std::size_t i = 0; i < combined.size(); ++i)
      combined[i] = 0.5 * lexical[i] + 0.5 * std::clamp(cosine(centroid, index.vector(i)), 0.0, 1.0);
  }

  std::vector<ScoredPassage> ranked;
  ranked.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) ranked.push_back({&index.passages()[i], combined[i]});
  std::sort(ranked.begin(), ranked.end(), [](const ScoredPassage& a, const ScoredPassage& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.passage->id < b.passage->id;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

}  // namespace vespa
