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

// Brute-force oracle: every permutation under every completion, each checked from scratch
// straight off the definitions. Shares no ordering or legality code with search().

#include <algorithm>
#include <map>

#include "duocheck/errors.hpp"
#include "duocheck/search.hpp"

namespace duocheck {
namespace {

struct Candidate {
    const History& h;
    const CompletionChoice& choice;
    Criterion criterion;
    std::map<TxnId, TxnBlock> blocks;

    // Last write to x by a committed transaction placed before position end, optionally
    // restricted to transactions whose tryC was invoked before visible_before.
    std::int64_t value_before(const std::vector<TxnId>& order, std::size_t end, const TObjectId& x,
                              std::optional<std::size_t> visible_before) const {
        std::int64_t value = kInitialValue;
        for (std::size_t i = 0; i < end; ++i) {
            const TxnBlock& b = blocks.at(order[i]);
            if (!b.committed) continue;
            if (visible_before) {
                const TxnInfo& t = h.txn(order[i]);
                if (!t.tryc_invocation || *t.tryc_invocation >= *visible_before) continue;
            }
            auto it = b.final_writes.find(x);
            if (it != b.final_writes.end()) value = it->second;
        }
        return value;
    }

    bool accepts(const std::vector<TxnId>& order) const {
        std::map<TxnId, std::size_t> pos;
        for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

        for (TxnId k : order) {
            for (TxnId m : order) {
                if (k != m && real_time_precedes(h, k, m) && pos[k] > pos[m]) return false;
            }
        }

        for (std::size_t i = 0; i < order.size(); ++i) {
            for (const BlockRead& r : blocks.at(order[i]).reads) {
                if (r.own_write) {
                    if (*r.own_write != r.value) return false;
                    continue;
                }
                if (value_before(order, i, r.object, std::nullopt) != r.value) return false;
                if (criterion == Criterion::du_opacity &&
                    value_before(order, i, r.object, r.response_index) != r.value)
                    return false;
            }
        }

        if (criterion == Criterion::ghs_order) {
            // T_k before T_m when T_k's read of X answers before T_m, which commits X, invokes tryC.
            for (const TxnInfo& reader : h.txn_infos()) {
                for (const Operation& op : reader.ops) {
                    if (op.action.kind != OpKind::read || !op.response_index) continue;
                    for (const TxnInfo& w : h.txn_infos()) {
                        if (w.id == reader.id || !blocks.at(w.id).committed) continue;
                        if (!w.write_set.contains(op.action.object)) continue;
                        if (*op.response_index < *w.tryc_invocation && pos[reader.id] > pos[w.id]) return false;
                    }
                }
            }
        }

        if (criterion == Criterion::tms2_order) {
            for (const TxnInfo& a : h.txn_infos()) {
                if (a.status != TxnStatus::committed) continue;
                for (const TxnInfo& b : h.txn_infos()) {
                    if (a.id == b.id || !b.tryc_invocation || *a.tryc_response >= *b.tryc_invocation) continue;
                    bool conflict = false;
                    for (const TObjectId& x : a.write_set) conflict = conflict || b.read_set.contains(x);
                    if (conflict && pos[a.id] > pos[b.id]) return false;
                }
            }
        }
        return true;
    }
};

}  // namespace

Verdict naive_search(const History& h, Criterion c, std::size_t max_txns) {
    const auto start = std::chrono::steady_clock::now();
    if (h.txn_count() > max_txns) {
        throw TooLarge("naive search is bounded to " + std::to_string(max_txns) + " transactions, history has " +
                       std::to_string(h.txn_count()));
    }
    if (c == Criterion::ghs_order && !h.is_sequential())
        throw NotSequential("read-commit order is only defined on sequential histories");

    Verdict v;
    Refutation refutation;
    for (const CompletionChoice& choice : completion_choices(h)) {
        ++v.stats.completions;
        Candidate cand{h, choice, c, {}};
        for (TxnBlock& b : completion_blocks(h, choice)) {
            TxnId id = b.txn;
            cand.blocks.emplace(id, std::move(b));
        }
        std::vector<TxnId> order = h.txns();
        do {
            ++v.stats.nodes;
            if (cand.accepts(order)) {
                v.satisfied = true;
                v.witness = Witness{choice, order};
                break;
            }
        } while (std::next_permutation(order.begin(), order.end()));
        if (v.satisfied) break;
        refutation.failures.push_back({choice, {}, "every order violates a constraint"});
    }
    if (!v.satisfied) v.refutation = std::move(refutation);
    v.stats.elapsed =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
    return v;
}

}  // namespace duocheck
