#include "core/json_util.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "core/error.hpp"

namespace vespa::jsonutil {

namespace {

std::string location(std::string_view src, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

ojson parse_strict(std::string_view source, std::string_view what) {
  std::vector<std::set<std::string>> seen;
  std::string duplicate;
  ojson::parser_callback_t cb = [&](int, ojson::parse_event_t ev, ojson& parsed) {
    switch (ev) {
      case ojson::parse_event_t::object_start:
        seen.emplace_back();
        break;
      case ojson::parse_event_t::object_end:
        if (!seen.empty()) seen.pop_back();
        break;
      case ojson::parse_event_t::key:
        if (!seen.empty() && !seen.back().insert(parsed.get<std::string>()).second && duplicate.empty())
          duplicate = parsed.get<std::string>();
        break;
      default:
        break;
    }
    return true;
  };
  ojson out;
  try {
    out = ojson::parse(source.begin(), source.end(), cb);
  } catch (const ojson::parse_error& e) {
    const auto byte = e.byte > 0 ? e.byte - 1 : 0;
    throw DataError(std::string(what) + ":" + location(source, byte) + ": syntax error: " + e.what());
  }
  if (!duplicate.empty()) throw DataError(std::string(what) + ": duplicate key \"" + duplicate + "\"");
  return out;
}

void reject_unknown_keys(const ojson& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw DataError("unknown key at " + (path.empty() ? key : path + "." + key));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace vespa::jsonutil
