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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "duocheck/criteria.hpp"

namespace duocheck {

/// Machine-readable verdict for one (input, criterion) pair.
struct Report {
    std::string input;
    NamedCriterion criterion = NamedCriterion::du_opacity;
    bool satisfied = false;
    std::optional<Witness> witness;
    std::vector<std::size_t> prefix_failures;
    std::uint64_t nodes = 0;
    std::uint64_t completions = 0;
    double ms = 0.0;

    bool operator==(const Report&) const = default;
};

Report make_report(const std::string& input, const CriterionReport& r);

/// Schema: {input, criterion, satisfied, witness{order, commits}|null, prefix_failures[],
/// stats{nodes, completions, ms}}.
std::string to_json(const Report& r, int indent = 2);
/// Throws Error on malformed documents.
Report report_from_json(const std::string& text);

/// Validates a document against the schema above; returns the problems found.
std::vector<std::string> schema_problems(const std::string& text);

}  // namespace duocheck
