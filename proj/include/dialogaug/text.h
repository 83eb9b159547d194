//
// Copyright 2026 The DialogAug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// String helpers shared by every module: ASCII case folding, whitespace
// handling, the word/punctuation tokenizer, and stable hashing used to
// derive per-task seeds.

#ifndef DIALOGAUG_TEXT_H_
#define DIALOGAUG_TEXT_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dialogaug {

std::string ToLower(std::string_view s);
std::string Trim(std::string_view s);

// Collapses runs of whitespace to a single space and trims both ends.
std::string NormalizeWhitespace(std::string_view s);

// Splits on whitespace; punctuation characters become tokens of their own.
// Apostrophes, hyphens, underscores and ampersands stay inside words so that
// "couldn't" and "b&b" survive as single tokens.
std::vector<std::string> Tokenize(std::string_view text);

std::string JoinTokens(std::span<const std::string> tokens);

// Tokenize followed by JoinTokens.
std::string TokenizedForm(std::string_view text);

bool IsPunctuationToken(std::string_view token);

// 64-bit FNV-1a over the bytes of `s`, continuing from `seed`. Stable across
// platforms and runs.
uint64_t Fnv1a64(std::string_view s, uint64_t seed = 0xcbf29ce484222325ULL);

// splitmix64 finalizer.
uint64_t Mix64(uint64_t x);

// Hashes an ordered list of parts under a master seed. Parts are length
// prefixed so ("ab", "c") and ("a", "bc") differ.
uint64_t DeriveSeed(uint64_t master, std::span<const std::string_view> parts);

// Uniform index in [0, n) drawn from a 64-bit engine by rejection sampling.
// std::uniform_int_distribution is implementation-defined, this is not.
size_t UniformIndex(std::mt19937_64& rng, size_t n);

std::string ToHex(uint64_t v);

}  // namespace dialogaug

#endif  // DIALOGAUG_TEXT_H_
