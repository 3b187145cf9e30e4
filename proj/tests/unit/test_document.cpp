#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "core/document.hpp"
#include "core/error.hpp"
#include "core/retrieval.hpp"
#include "core/text.hpp"
#include "doctest.h"
#include "synth.hpp"

using namespace vespa;

namespace {

const std::string kFixtures = VESPA_FIXTURE_DIR;

// Straight from the formula, with no sharing of the index code.
std::vector<double> oracle_bm25(const std::vector<std::string>& texts, const std::vector<std::string>& query) {
  const double k1 = 1.2, b = 0.75;
  std::vector<std::vector<std::string>> docs;
  for (const auto& t : texts) docs.push_back(text::tokenize(t));
  double avg = 0;
  for (const auto& d : docs) avg += static_cast<double>(d.size());
  avg /= static_cast<double>(docs.size());
  std::set<std::string> terms;
  for (const auto& q : query)
    for (const auto& t : text::tokenize(q)) terms.insert(t);
  std::vector<double> out;
  for (const auto& d : docs) {
    double s = 0;
    for (const auto& t : terms) {
      const double tf = static_cast<double>(std::count(d.begin(), d.end(), t));
      double df = 0;
      for (const auto& e : docs) df += std::find(e.begin(), e.end(), t) != e.end() ? 1 : 0;
      const double N = static_cast<double>(docs.size());
      const double idf = std::log(1 + (N - df + 0.5) / (df + 0.5));
      s += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * static_cast<double>(d.size()) / avg));
    }
    out.push_back(s);
  }
  return out;
}

std::vector<Passage> passages_of(const std::vector<std::string>& texts) {
  std::vector<Passage> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Passage p;
    p.id = "d/p0/A" + std::to_string(i);
    p.doc_id = "d";
    p.level = PassageLevel::Para;
    p.ordinal = static_cast<int>(i);
    p.text = texts[i];
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("plain ingest splits pages on form feed and paragraphs on blank lines") {
  const auto doc = ingest("Acme Inc\n\nInvoice 7\n\nTotal: $5\f\nPage two\n", DocumentFormat::Plain, "d1");
  REQUIRE(doc.pages.size() == 2);
  CHECK(doc.pages[0].index == 0);
  CHECK(doc.pages[1].index == 1);
  const auto paras = segment(doc, PassageLevel::Para);
  CHECK(std::count_if(paras.begin(), paras.end(), [](const Passage& p) { return p.page_index == 0; }) == 3);
  CHECK(paras[0].id == "d1/p0/A0");
  CHECK(paras[3].id == "d1/p1/A0");
  CHECK(segment(doc, PassageLevel::Page).size() == 2);
  CHECK(segment(doc, PassageLevel::Page)[1].id == "d1/p1/P0");
}

TEST_CASE("empty and malformed input is rejected") {
  CHECK_THROWS_AS(ingest("", DocumentFormat::Plain, "d"), DataError);
  CHECK_THROWS_AS(ingest(" \n\n \f ", DocumentFormat::Plain, "d"), DataError);
  CHECK_THROWS_AS(ingest("bad \xC3( bytes", DocumentFormat::Plain, "d"), DataError);
  CHECK_THROWS_AS(ingest("{\"id\": \"x\"}", DocumentFormat::Structured, "d"), DataError);
  CHECK_THROWS_AS(ingest("{\"id\": \"x\", \"pages\": [{\"index\": 1, \"sections\": []}]}", DocumentFormat::Structured, "d"),
                  DataError);
  CHECK_THROWS_AS(ingest("not json", DocumentFormat::Structured, "d"), DataError);
}

TEST_CASE("structured sections become section passages") {
  const auto doc = ingest_file(kFixtures + "/structured_invoice.json", DocumentFormat::Structured);
  CHECK(doc.id == "struct-001");
  const auto sections = segment(doc, PassageLevel::Section);
  // Hand count: page 0 declares 2 sections, page 1 declares 1.
  REQUIRE(sections.size() == 3);
  CHECK(sections[0].id == "struct-001/p0/S0");
  CHECK(sections[1].id == "struct-001/p0/S1");
  CHECK(sections[2].id == "struct-001/p1/S0");
  CHECK(sections[1].text.find("Total Due") != std::string::npos);
  CHECK(segment(doc, PassageLevel::Para).size() == 5);
}

TEST_CASE("plain documents fall back to paragraphs at section level") {
  const auto doc = ingest("a b\n\nc d\n\ne", DocumentFormat::Plain, "d");
  auto sec = segment(doc, PassageLevel::Section);
  auto para = segment(doc, PassageLevel::Para);
  CHECK(sec == para);
}

TEST_CASE("paragraph passages reassemble the page text") {
  for (std::size_t i = 0; i < 10; ++i) {
    const auto inv = synth::make_invoice(3, i);
    const auto doc = synth::to_document(inv);
    std::string joined;
    for (const auto& p : segment(doc, PassageLevel::Para)) joined += p.text + " ";
    CHECK(text::collapse_whitespace(joined) == text::collapse_whitespace(inv.text));
  }
}

TEST_CASE("index statistics match hand counts") {
  const auto idx = build_index(passages_of({"Invoice number 7", "Invoice date today", "Total due"}));
  CHECK(idx.size() == 3);
  CHECK(idx.document_frequency("invoice") == 2);
  CHECK(idx.document_frequency("total") == 1);
  CHECK(idx.document_frequency("absent") == 0);
  CHECK_FALSE(idx.has_vectors());
  CHECK(idx.length(0) == 3);
  CHECK(idx.average_length() == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("hash embedder fills vectors of the declared dimension") {
  HashEmbedder emb(8);
  const auto idx = build_index(passages_of({"a b", "c", "d e f"}), &emb);
  REQUIRE(idx.has_vectors());
  CHECK(idx.vector_dimension() == 8);
  for (std::size_t i = 0; i < 3; ++i) CHECK(idx.vector(i).size() == 8);
  CHECK(emb.embed("same text") == emb.embed("same text"));
}

TEST_CASE("an embedder with the wrong dimension is rejected") {
  struct Liar : EmbeddingProvider {
    std::size_t dimension() const override { return 4; }
    std::vector<double> embed(const std::string&) const override { return {1, 0, 0}; }
  } liar;
  CHECK_THROWS_AS(build_index(passages_of({"a"}), &liar), DataError);
  CHECK_THROWS_AS(build_index({}), std::invalid_argument);
}

TEST_CASE("single passage is always returned") {
  const auto idx = build_index(passages_of({"nothing relevant"}));
  const auto r = retrieve(idx, {"amount due"}, 1);
  REQUIRE(r.size() == 1);
  CHECK(r[0].passage->id == "d/p0/A0");
}

TEST_CASE("a passage with the query terms outranks one without") {
  const auto idx = build_index(passages_of({"shipping address", "the amount due is $5"}));
  const auto r = retrieve(idx, {"amount due"}, 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0].passage->id == "d/p0/A1");
  CHECK(r[0].score == 1.0);
  CHECK(r[1].score == 0.0);
}

TEST_CASE("bm25 ranking equals the brute-force computation") {
  const std::vector<std::string> texts = {
      "Acme Widgets Inc 12 Market Street", "Invoice Number INV-4411 Invoice Date March 3 2021",
      "Amount due on receipt. Amount due in dollars.", "Total due $120.00 amount due", "Thank you for your business"};
  const auto idx = build_index(passages_of(texts));
  for (const auto& query : std::vector<std::vector<std::string>>{{"amount due"}, {"invoice date", "date"}, {"total"}}) {
    const auto expect = oracle_bm25(texts, query);
    const auto got = idx.bm25([&] {
      std::vector<std::string> terms;
      for (const auto& q : query)
        for (const auto& t : text::tokenize(q)) terms.push_back(t);
      return terms;
    }());
    for (std::size_t i = 0; i < texts.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    std::vector<std::size_t> order(texts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return expect[a] > expect[b]; });
    const auto ranked = retrieve(idx, query, texts.size());
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(ranked[i].passage->id == "d/p0/A" + std::to_string(order[i]));
  }
}

TEST_CASE("ties break by passage id and k caps the result") {
  const auto idx = build_index(passages_of({"x", "x", "x"}));
  const auto r = retrieve(idx, {"x"}, 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0].passage->id == "d/p0/A0");
  CHECK(r[1].passage->id == "d/p0/A1");
  CHECK(retrieve(idx, {"x"}, 10).size() == 3);
  CHECK_THROWS(retrieve(idx, {"x"}, 0));
}

TEST_CASE("retrieval scores are finite, bounded and deterministic") {
  std::mt19937_64 rng(5);
  HashEmbedder emb(8);
  const std::vector<std::string> vocab = {"amount", "due", "invoice", "date", "total", "tax", "net", "acme", "x"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> texts;
    const auto n = 1 + rng() % 6;
    for (std::size_t i = 0; i < n; ++i) {
      std::string t;
      for (std::size_t w = 0, len = 1 + rng() % 8; w < len; ++w) t += vocab[rng() % vocab.size()] + " ";
      texts.push_back(t);
    }
    const std::vector<std::string> q = {vocab[rng() % vocab.size()] + " " + vocab[rng() % vocab.size()]};
    for (const EmbeddingProvider* e : {static_cast<const EmbeddingProvider*>(nullptr),
                                       static_cast<const EmbeddingProvider*>(&emb)}) {
      const auto idx = build_index(passages_of(texts), e);
      const auto a = retrieve(idx, q, 3, e);
      const auto b = retrieve(idx, q, 3, e);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::isfinite(a[i].score));
        CHECK(a[i].score >= 0.0);
        CHECK(a[i].score <= 1.0);
        CHECK(a[i].passage->id == b[i].passage->id);
        CHECK(a[i].score == b[i].score);
      }
    }
  }
}

TEST_CASE("dense blend can lift a passage with no lexical match") {
  HashEmbedder emb(8);
  const auto idx = build_index(passages_of({"payable amount", "amount due"}), &emb);
  const auto r = retrieve(idx, {"amount due"}, 2, &emb);
  CHECK(r[0].passage->id == "d/p0/A1");
  CHECK(r[0].score == doctest::Approx(1.0));
  CHECK(r[1].score > 0.0);
  CHECK(r[1].score <= 0.5);
}

// Adding a passage without query terms shifts both N and the average length,
// so the order is only guaranteed when the length average is preserved and
// the query has one term (the idf factor is then common to every passage).
TEST_CASE("a zero-match passage keeps the lexical order for single-term queries") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> vocab = {"amount", "due", "invoice", "total"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> texts;
    std::size_t total_len = 0;
    const std::size_t n = 2 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i) {
      std::string t;
      const std::size_t len = 1 + rng() % 3;
      for (std::size_t w = 0; w < len; ++w) t += vocab[rng() % vocab.size()] + " ";
      total_len += len;
      texts.push_back(t);
    }
    if (total_len % n != 0) continue;
    const auto term = vocab[rng() % vocab.size()];
    const auto before = build_index(passages_of(texts)).bm25({term});
    auto more = texts;
    std::string filler;
    for (std::size_t w = 0; w < total_len / n; ++w) filler += "zz ";
    more.push_back(filler);
    const auto after = build_index(passages_of(more)).bm25({term});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (before[i] < before[j]) CHECK(after[i] < after[j]);
  }
}
