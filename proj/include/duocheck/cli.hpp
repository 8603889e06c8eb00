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

#include <iosfwd>
#include <string>
#include <vector>

#include "duocheck/history.hpp"
#include "duocheck/search.hpp"

namespace duocheck::cli {

inline constexpr int kSatisfied = 0;
inline constexpr int kRefuted = 1;
inline constexpr int kUsageError = 2;

/// args excludes the program name. Output is written to `out` only after the command has
/// finished, so partial results never interleave with errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "corpus:<name>" or a path to a history text file. Throws Error with a printable message.
History load_input(const std::string& input);

/// "T2,T3,T1".
std::vector<TxnId> parse_order(const std::string& text);
/// "T5:C,T7:A".
CompletionChoice parse_commits(const std::string& text);

}  // namespace duocheck::cli
