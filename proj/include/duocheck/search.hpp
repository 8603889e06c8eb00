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

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "duocheck/history.hpp"
#include "duocheck/sequential.hpp"

namespace duocheck {

/// Constraint sets understood by the serialization search.
enum class Criterion {
    final_state_opacity,  // equivalence to a completion, real-time order, legality
    du_opacity,           // ... plus legality of every read in its local serialization
    ghs_order,            // final-state plus read-commit order (sequential histories only)
    tms2_order,           // final-state plus the conflict order between committed writers and readers
};

std::string to_string(Criterion c);

/// A candidate serialization: commit choices for commit-pending transactions plus a total order.
struct Witness {
    CompletionChoice choice;
    std::vector<TxnId> order;

    bool operator==(const Witness&) const = default;
};

/// "order: T2,T3,T1,T4" followed by "commits: {T5:C,T7:A}" when choices exist.
std::string render(const Witness& w);

/// The t-complete t-sequential history S induced by w over the completion of h.
/// Throws MalformedWitness.
History materialize(const History& h, const Witness& w);

enum class ConstraintKind {
    equivalence,
    real_time,
    legality,
    local_legality,
    read_commit_order,
    conflict_order,
};

std::string to_string(ConstraintKind k);

struct Diagnostic {
    ConstraintKind kind;
    std::string message;
};

struct WitnessCheck {
    bool ok = true;
    std::vector<Diagnostic> diagnostics;  // every violated constraint, in check order
};

/// Checks w against every constraint of c by materializing S over the chosen completion.
/// Throws MalformedWitness, and NotSequential for ghs_order on a non-sequential history.
WitnessCheck verify_witness(const History& h, const Witness& w, Criterion c);

/// Ordering pairs (before, after) that c adds on top of the real-time order under choice.
std::vector<std::pair<TxnId, TxnId>> criterion_edges(const History& h, const CompletionChoice& choice,
                                                     Criterion c);

struct SearchStats {
    std::uint64_t nodes = 0;        // transaction placements attempted
    std::uint64_t completions = 0;  // completion choices examined
    std::chrono::microseconds elapsed{0};

    bool same_counts(const SearchStats& o) const { return nodes == o.nodes && completions == o.completions; }
};

/// Why one completion choice admits no serialization.
struct CompletionFailure {
    CompletionChoice choice;
    std::vector<TxnId> deepest_prefix;  // longest partial order reached
    std::string reason;                 // first failing constraint at that depth
};

struct Refutation {
    std::vector<CompletionFailure> failures;  // one per completion, canonical order

    /// Reason reported for the first completion.
    std::string summary() const;
};

struct Verdict {
    bool satisfied = false;
    std::optional<Witness> witness;
    std::optional<Refutation> refutation;
    SearchStats stats;

    /// Identity of the decision: satisfied bit, witness, refutation and node counts.
    bool same_decision(const Verdict& o) const;
};

struct SearchOptions {
    std::optional<std::uint64_t> node_budget;
    /// Extra (before, after) ordering requirements applied to every completion.
    std::vector<std::pair<TxnId, TxnId>> extra_order{};
    /// Restrict the search to one completion choice.
    std::optional<CompletionChoice> only_choice{};
};

/// Backtracking search over completion choices (outer) and transaction orders (inner).
/// Throws BudgetExceeded, and NotSequential for ghs_order on a non-sequential history.
Verdict search(const History& h, Criterion c, const SearchOptions& opts = {});

/// Visits every satisfying witness in search order. Return false from the visitor to stop.
/// Returns the number of witnesses visited.
std::uint64_t for_each_witness(const History& h, Criterion c, const std::function<bool(const Witness&)>& visit,
                               const SearchOptions& opts = {});

inline constexpr std::size_t kDefaultNaiveBound = 7;

/// Unpruned enumeration of every permutation under every completion. Oracle for search().
/// Throws TooLarge when h has more than max_txns transactions.
Verdict naive_search(const History& h, Criterion c, std::size_t max_txns = kDefaultNaiveBound);

/// Witness for prefix(h, i) whose order is the subsequence of w.order over txns(prefix).
/// Throws InvalidWitness unless w is a du-opaque witness of h, OutOfRange when i > size.
Witness project_witness(const History& h, const Witness& w, std::size_t i);

/// Reorders w so that T_k precedes T_m whenever ls_precedes(h, k, m), keeping it du-opaque.
/// Throws InvalidWitness, HypothesisViolated (h has an incomplete transaction), or
/// LiveSetOrderUnattainable when no such serialization exists for w's completion.
Witness live_set_normalize(const History& h, const Witness& w);

}  // namespace duocheck
