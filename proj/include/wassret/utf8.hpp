#pragma once

#include <string>
#include <string_view>

// Minimal UTF-8 handling for tokenization, case folding and edit distances.
// Decoding is lenient: a byte that does not start a valid sequence is taken
// as a single code point, so malformed input degrades instead of failing.
// Case folding covers ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic;
// code points outside those ranges pass through unchanged.

namespace wassret::utf8 {

std::u32string decode(std::string_view text);
std::string encode(std::u32string_view points);

char32_t to_lower(char32_t cp);
std::string lowercase(std::string_view text);

bool is_space(char32_t cp);
bool is_strippable_punct(char32_t cp);

}  // namespace wassret::utf8
