// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace mude {

// Strict UTF-8 decode; throws DataError on malformed input. Words are
// handled as codepoint sequences so that noising a multi-byte character
// cannot produce invalid text.
std::u32string utf8_decode(const std::string& s);

std::string utf8_encode(const std::u32string& s);
std::string utf8_encode(char32_t c);

}  // namespace mude
