// Copyright 2026 The Declutter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECLUTTER_UNICODE_HPP_
#define DECLUTTER_UNICODE_HPP_

#include <cstddef>
#include <string>
#include <string_view>

// Thin wrappers over ICU. Every offset in the library counts Unicode scalar
// values, so texts are decoded to UTF-32 before any span arithmetic.
namespace declutter::unicode {

// Throws declutter::Error on ill-formed UTF-8 (including encoded surrogates).
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);

// Number of scalar values in a well-formed UTF-8 string.
std::size_t length(std::string_view utf8);

// Unicode White_Space property.
bool is_space(char32_t c);
// General category P* or S*. Covers every ASCII punctuation character.
bool is_punct(char32_t c);
// Simple (1:1) lowercase mapping.
char32_t to_lower(char32_t c);

std::u32string_view trim(std::u32string_view text);

}  // namespace declutter::unicode

#endif  // DECLUTTER_UNICODE_HPP_
