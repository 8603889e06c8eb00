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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "duocheck/criteria.hpp"
#include "duocheck/history.hpp"

namespace duocheck {

struct ExpectedVerdict {
    NamedCriterion criterion;
    bool satisfied;
};

/// A named reference history and the verdicts it is known to produce.
struct CorpusEntry {
    std::string name;
    std::string caption;
    History history;
    std::vector<ExpectedVerdict> expected;
    /// For entries expected to fail opacity: the shortest failing prefix length.
    std::optional<std::size_t> first_failing_prefix;
};

/// fig1, fig3_full, fig3_prefix, fig4, fig5, fig6.
const std::vector<std::string>& corpus_names();
/// Throws UnknownName.
CorpusEntry corpus_entry(const std::string& name);
History paper_history(const std::string& name);

/// T1 writes X and leaves tryC pending, T2 reads 1 from it, then n readers T3..T(n+2) each read 0.
History fig2_prefix(std::size_t n);

/// Mismatches between the expected table of an entry and what the checkers report.
std::vector<std::string> corpus_mismatches(const CorpusEntry& entry, const CheckOptions& opts = {});

// ---------------------------------------------------------------------------------------------
// Random histories

enum class ValueMode { from_writes, unique_writes };

struct HistoryConfig {
    std::size_t txn_count = 4;
    std::size_t object_count = 2;
    std::size_t max_ops_per_txn = 3;
    ValueMode value_mode = ValueMode::from_writes;
    double abort_probability = 0.1;
    double incomplete_probability = 0.15;
    /// from_writes only: written values are drawn from [0, value_range).
    std::int64_t value_range = 3;
};

/// Throws Error when a field is out of range.
void check_config(const HistoryConfig& cfg);

/// Parses "k=v,k=v" over the HistoryConfig field names; unknown keys throw UnknownName.
HistoryConfig parse_config(const std::string& text, HistoryConfig base = {});

using Seed = std::uint64_t;

/// Deterministic in (cfg, seed) across platforms; the result always validates.
History random_history(const HistoryConfig& cfg, Seed seed);

// ---------------------------------------------------------------------------------------------
// Exhaustive small instances

struct SmallBounds {
    std::size_t max_txns = 3;
    std::size_t max_ops = 2;
    std::size_t objects = 1;
    std::int64_t values = 2;
};

/// Histories with up to max_txns transactions, each issuing up to max_ops t-operations
/// (tryC included) over `objects` t-objects and values in [0, values). Reads and writes
/// answer immediately unless they are the transaction's last, still pending, event; tryC
/// invocation and response are separate events. Transactions are numbered by first event.
/// Above this many histories enumerate_small throws BoundsTooLarge.
inline constexpr std::uint64_t kSmallHistoryCap = 2'000'000;

/// Closed-form size of the enumeration.
std::uint64_t count_small(const SmallBounds& b);

/// Calls visit on every history; returns how many were produced.
std::uint64_t enumerate_small(const SmallBounds& b, const std::function<void(const History&)>& visit);

// ---------------------------------------------------------------------------------------------
// Differential comparison

struct CriteriaRow {
    bool final_state = false;
    bool opaque = false;
    bool du_opaque = false;
    std::optional<bool> ghs;  // sequential histories only
    bool tms2 = false;
    bool unique_writes = false;
};

struct PropertyViolation {
    std::size_t index = 0;
    std::string property;
};

struct ComparisonReport {
    std::vector<CriteriaRow> rows;
    std::vector<PropertyViolation> violations;
    /// tms2-order holds while du-opacity does not; reported, never a violation.
    std::vector<std::size_t> tms2_conjecture_counterexamples;

    bool ok() const noexcept { return violations.empty(); }
};

struct CompareOptions {
    CheckOptions check;
    /// Also check du-opacity of every prefix of every du-opaque history.
    bool prefix_closure = true;
};

CriteriaRow evaluate_all(const History& h, const CheckOptions& opts = {});
ComparisonReport compare_criteria(const std::vector<History>& histories, const CompareOptions& opts = {});

}  // namespace duocheck
