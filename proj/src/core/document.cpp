#include "core/document.hpp"

#include <filesystem>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/text.hpp"

namespace vespa {

namespace {

std::vector<std::string> split_paragraphs(std::string_view page) {
  std::vector<std::string> out;
  std::string current;
  std::size_t pos = 0;
  while (pos <= page.size()) {
    const auto nl = page.find('\n', pos);
    const auto line = page.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (text::trim(line).empty()) {
      if (!text::trim(current).empty()) out.push_back(text::trim(current));
      current.clear();
    } else {
      if (!current.empty()) current.push_back('\n');
      current.append(line);
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!text::trim(current).empty()) out.push_back(text::trim(current));
  return out;
}

Document ingest_plain(std::string_view bytes, const std::string& doc_id) {
  Document doc;
  doc.id = doc_id;
  std::vector<std::string_view> raw_pages;
  std::size_t pos = 0;
  while (true) {
    const auto ff = bytes.find('\f', pos);
    raw_pages.push_back(bytes.substr(pos, ff == std::string_view::npos ? std::string_view::npos : ff - pos));
    if (ff == std::string_view::npos) break;
    pos = ff + 1;
  }
  // A trailing form feed does not open a new page.
  if (raw_pages.size() > 1 && text::trim(raw_pages.back()).empty()) raw_pages.pop_back();
  for (std::size_t i = 0; i < raw_pages.size(); ++i) {
    Page page;
    page.index = static_cast<int>(i);
    page.sections.push_back(Section{0, split_paragraphs(raw_pages[i])});
    doc.pages.push_back(std::move(page));
  }
  return doc;
}

Document ingest_structured(std::string_view bytes, const std::string& doc_id) {
  const auto root = jsonutil::parse_strict(bytes, "document");
  if (!root.is_object()) throw DataError("document: expected top-level object");
  jsonutil::reject_unknown_keys(root, "", {"id", "pages", "metadata"});
  Document doc;
  doc.id = root.contains("id") ? root["id"].get<std::string>() : doc_id;
  if (root.contains("metadata")) {
    for (const auto& [k, v] : root["metadata"].items()) {
      if (!v.is_string()) throw DataError("document: metadata." + k + " must be a string");
      doc.metadata[k] = v.get<std::string>();
    }
  }
  if (!root.contains("pages") || !root["pages"].is_array()) throw DataError("document: \"pages\" must be an array");
  const auto& pages = root["pages"];
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const auto path = "pages[" + std::to_string(i) + "]";
    const auto& pj = pages[i];
    if (!pj.is_object()) throw DataError("document: " + path + " must be an object");
    jsonutil::reject_unknown_keys(pj, path, {"index", "sections"});
    Page page;
    page.index = pj.contains("index") ? pj["index"].get<int>() : static_cast<int>(i);
    if (page.index != static_cast<int>(i))
      throw DataError("document: " + path + ".index must be " + std::to_string(i) + " (contiguous from 0)");
    page.declared_sections = true;
    if (!pj.contains("sections") || !pj["sections"].is_array())
      throw DataError("document: " + path + ".sections must be an array");
    const auto& sections = pj["sections"];
    for (std::size_t s = 0; s < sections.size(); ++s) {
      const auto spath = path + ".sections[" + std::to_string(s) + "]";
      const auto& sj = sections[s];
      if (!sj.is_object()) throw DataError("document: " + spath + " must be an object");
      jsonutil::reject_unknown_keys(sj, spath, {"ordinal", "paragraphs"});
      Section sec;
      sec.ordinal = sj.contains("ordinal") ? sj["ordinal"].get<int>() : static_cast<int>(s);
      if (!sj.contains("paragraphs") || !sj["paragraphs"].is_array())
        throw DataError("document: " + spath + ".paragraphs must be an array");
      for (const auto& para : sj["paragraphs"]) {
        if (!para.is_string()) throw DataError("document: " + spath + ".paragraphs must hold strings");
        auto t = text::trim(para.get<std::string>());
        if (!t.empty()) sec.paragraphs.push_back(std::move(t));
      }
      page.sections.push_back(std::move(sec));
    }
    doc.pages.push_back(std::move(page));
  }
  return doc;
}

bool has_content(const Document& doc) {
  for (const auto& p : doc.pages)
    for (const auto& s : p.sections)
      if (!s.paragraphs.empty()) return true;
  return false;
}

char level_letter(PassageLevel level) {
  switch (level) {
    case PassageLevel::Page: return 'P';
    case PassageLevel::Section: return 'S';
    case PassageLevel::Para: return 'A';
  }
  return 'P';
}

Passage make_passage(const Document& doc, PassageLevel level, int page, int ordinal, std::string text) {
  Passage p;
  p.id = doc.id + "/p" + std::to_string(page) + "/" + level_letter(level) + std::to_string(ordinal);
  p.doc_id = doc.id;
  p.level = level;
  p.page_index = page;
  p.ordinal = ordinal;
  p.text = std::move(text);
  return p;
}

}  // namespace

std::string Page::text() const {
  std::vector<std::string> paras;
  for (const auto& s : sections)
    for (const auto& p : s.paragraphs) paras.push_back(p);
  return text::join(paras, "\n\n");
}

Document ingest(std::string_view bytes, DocumentFormat format, const std::string& doc_id) {
  if (!text::is_valid_utf8(bytes)) throw DataError("document " + doc_id + ": input is not valid UTF-8");
  if (text::trim(bytes).empty()) throw DataError("document " + doc_id + ": empty document");
  Document doc;
  if (format == DocumentFormat::Plain) {
    doc = ingest_plain(bytes, doc_id);
  } else {
    try {
      doc = ingest_structured(bytes, doc_id);
    } catch (const jsonutil::ojson::exception& e) {
      throw DataError("document " + doc_id + ": schema violation: " + e.what());
    }
  }
  if (doc.id.empty()) throw DataError("document: missing id");
  if (doc.pages.empty() || !has_content(doc)) throw DataError("document " + doc.id + ": empty document");
  return doc;
}

Document ingest_file(const std::string& path, DocumentFormat format) {
  const auto bytes = jsonutil::read_file(path);
  auto doc = ingest(bytes, format, std::filesystem::path(path).stem().string());
  doc.source_path = path;
  return doc;
}

std::vector<Passage> segment(const Document& doc, PassageLevel level) {
  std::vector<Passage> out;
  for (const auto& page : doc.pages) {
    const bool sections = level == PassageLevel::Section && page.declared_sections;
    if (level == PassageLevel::Page) {
      auto t = page.text();
      if (!t.empty()) out.push_back(make_passage(doc, PassageLevel::Page, page.index, 0, std::move(t)));
    } else if (sections) {
      for (const auto& s : page.sections) {
        auto t = text::join(s.paragraphs, "\n\n");
        if (!t.empty()) out.push_back(make_passage(doc, PassageLevel::Section, page.index, s.ordinal, std::move(t)));
      }
    } else {
      int ordinal = 0;
      for (const auto& s : page.sections)
        for (const auto& para : s.paragraphs)
          out.push_back(make_passage(doc, PassageLevel::Para, page.index, ordinal++, para));
    }
  }
  return out;
}

}  // namespace vespa
