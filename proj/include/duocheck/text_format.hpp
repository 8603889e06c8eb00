/*
 * Copyright 2026 The duocheck Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duocheck/history.hpp"

namespace duocheck {

// One event per line, whitespace separated, '#' to end of line is a comment:
//
//   inv <T> read <obj>          res <T> read (<int>|A)
//   inv <T> write <obj> <int>   res <T> write (ok|A)
//   inv <T> tryc                res <T> tryc (C|A)
//   inv <T> trya                res <T> trya A
//
// <T> is T1, T2, ...; a response names no object, it answers the transaction's pending
// invocation.

struct ParseError {
    std::size_t line = 0;
    std::size_t column = 0;  // 0 for well-formedness errors, which concern the whole line
    std::string message;
};

std::string to_string(const ParseError& e);

struct ParseResult {
    std::optional<History> history;
    std::vector<ParseError> errors;

    bool ok() const noexcept { return history.has_value(); }
};

ParseResult parse_history(std::string_view text);

/// Inverse of parse_history: parse_history(format_history(h)).history == h.
std::string format_history(const History& h);

}  // namespace duocheck
