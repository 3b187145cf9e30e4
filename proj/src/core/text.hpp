#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vespa::text {

bool is_valid_utf8(std::string_view s);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Collapses every run of ASCII whitespace to a single space and trims.
std::string collapse_whitespace(std::string_view s);

/// Lowercased tokens split on non-alphanumeric ASCII bytes. Bytes >= 0x80 are
/// kept inside tokens so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view s);

/// Splits on ASCII whitespace, dropping empties.
std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool iequals(std::string_view a, std::string_view b);
bool starts_with_icase(std::string_view s, std::string_view prefix);

// 64-bit FNV-1a; stable across platforms.
std::uint64_t fnv1a(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t x);

/// Uniform double in [0,1) from a 64-bit hash.
double unit_interval(std::uint64_t h);

}  // namespace vespa::text
