#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/profile.hpp"

namespace vespa {

struct Section {
  int ordinal = 0;
  std::vector<std::string> paragraphs;
  bool operator==(const Section&) const = default;
};

struct Page {
  int index = 0;
  std::vector<Section> sections;
  /// False for plain-text input, where the single section is implicit.
  bool declared_sections = false;

  /// Paragraphs joined with blank lines.
  std::string text() const;
  bool operator==(const Page&) const = default;
};

struct Document {
  std::string id;
  std::vector<Page> pages;
  std::string source_path;
  std::map<std::string, std::string> metadata;
  bool operator==(const Document&) const = default;
};

struct Passage {
  std::string id;
  std::string doc_id;
  PassageLevel level = PassageLevel::Page;
  int page_index = 0;
  int ordinal = 0;
  std::string text;
  bool operator==(const Passage&) const = default;
};

enum class DocumentFormat { Plain, Structured };

/// Plain: UTF-8 text, form feed separates pages, blank lines separate
/// paragraphs. Structured: {"id", "pages": [{"index", "sections":
/// [{"ordinal", "paragraphs": [...]}]}]}. `doc_id` names plain documents and
/// is ignored when the structured input carries its own id.
Document ingest(std::string_view bytes, DocumentFormat format, const std::string& doc_id);
Document ingest_file(const std::string& path, DocumentFormat format);

/// Passage ids are "{doc_id}/p{page}/{P|S|A}{ordinal}". SECTION on a document
/// without declared sections yields the PARA segmentation.
std::vector<Passage> segment(const Document& doc, PassageLevel level);

}  // namespace vespa
