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
#include <vector>

#include "duocheck/history.hpp"
#include "duocheck/search.hpp"

namespace duocheck {

/// The user-facing criteria. Opacity is derived (final-state opacity of every prefix).
enum class NamedCriterion { final_state, opacity, du_opacity, ghs, tms2 };

std::string to_string(NamedCriterion c);
/// Parses the CLI spelling: final-state, opacity, du-opacity, ghs, tms2.
std::optional<NamedCriterion> parse_criterion(const std::string& name);

/// Which search decides each underlying final-state/du/... question.
enum class Engine { pruned, naive };

struct PrefixVerdict {
    std::size_t length = 0;
    Verdict verdict;
};

struct CriterionReport {
    NamedCriterion criterion = NamedCriterion::du_opacity;
    Verdict verdict;
    /// Opacity only: one entry per prefix length 0..size.
    std::vector<PrefixVerdict> prefixes;

    bool satisfied() const noexcept { return verdict.satisfied; }
    /// Opacity only: shortest prefix that is not final-state opaque.
    std::optional<std::size_t> first_failing_prefix() const;
    /// Opacity only: every prefix length that is not final-state opaque.
    std::vector<std::size_t> prefix_failures() const;
};

struct CheckOptions {
    Engine engine = Engine::pruned;
    std::optional<std::uint64_t> node_budget;
};

CriterionReport final_state_opaque(const History& h, const CheckOptions& opts = {});
CriterionReport opaque(const History& h, const CheckOptions& opts = {});
CriterionReport du_opaque(const History& h, const CheckOptions& opts = {});
/// Throws NotSequential.
CriterionReport ghs_opaque(const History& h, const CheckOptions& opts = {});
CriterionReport tms2_order(const History& h, const CheckOptions& opts = {});

/// Dispatches on c.
CriterionReport check(const History& h, NamedCriterion c, const CheckOptions& opts = {});

/// No two distinct transactions write the same value to the same t-object, and nobody writes
/// the initial value.
bool unique_writes(const History& h);

}  // namespace duocheck
