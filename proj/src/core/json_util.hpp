#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

namespace vespa::jsonutil {

using ojson = nlohmann::ordered_json;

/// Parses JSON keeping key order. Syntax errors are reported as
/// "<what>:<line>:<col>: ..." and duplicate object keys are rejected.
ojson parse_strict(std::string_view source, std::string_view what);

/// Rejects any key of `obj` not in `allowed`, naming the offending path.
void reject_unknown_keys(const ojson& obj, const std::string& path, std::initializer_list<std::string_view> allowed);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace vespa::jsonutil
