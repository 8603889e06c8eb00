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
#include <algorithm>
#include <map>
#include <set>

#include "duocheck/errors.hpp"
#include "duocheck/search.hpp"
#include "history_access.hpp"

namespace duocheck {

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::final_state_opacity: return "final-state";
        case Criterion::du_opacity: return "du-opacity";
        case Criterion::ghs_order: return "ghs";
        case Criterion::tms2_order: return "tms2";
    }
    return "?";
}

std::string to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::equivalence: return "equivalence";
        case ConstraintKind::real_time: return "real-time";
        case ConstraintKind::legality: return "legality";
        case ConstraintKind::local_legality: return "local-legality";
        case ConstraintKind::read_commit_order: return "read-commit-order";
        case ConstraintKind::conflict_order: return "conflict-order";
    }
    return "?";
}

std::string render(const Witness& w) {
    std::string s = "order: ";
    for (std::size_t i = 0; i < w.order.size(); ++i) {
        if (i) s += ",";
        s += to_string(w.order[i]);
    }
    if (!w.choice.empty()) {
        s += "\ncommits: {";
        bool first = true;
        for (const auto& [id, r] : w.choice) {
            if (!first) s += ",";
            first = false;
            s += to_string(id) + (r == Resolution::commit ? ":C" : ":A");
        }
        s += "}";
    }
    return s;
}

std::string Refutation::summary() const {
    if (failures.empty()) return "no completion admits a serialization";
    return failures.front().reason;
}

bool Verdict::same_decision(const Verdict& o) const {
    if (satisfied != o.satisfied || witness != o.witness || !stats.same_counts(o.stats)) return false;
    if (refutation.has_value() != o.refutation.has_value()) return false;
    if (!refutation) return true;
    const auto& a = refutation->failures;
    const auto& b = o.refutation->failures;
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].choice != b[i].choice || a[i].deepest_prefix != b[i].deepest_prefix || a[i].reason != b[i].reason)
            return false;
    }
    return true;
}

namespace {

void check_order_shape(const History& h, const Witness& w) {
    if (w.order.size() != h.txn_count())
        throw MalformedWitness("order has " + std::to_string(w.order.size()) + " entries for " +
                               std::to_string(h.txn_count()) + " transactions");
    std::set<TxnId> seen;
    for (TxnId id : w.order) {
        if (!h.participates(id)) throw MalformedWitness(to_string(id) + " does not participate");
        if (!seen.insert(id).second) throw MalformedWitness(to_string(id) + " appears twice in the order");
    }
    check_choice_domain(h, w.choice);
}

}  // namespace

History materialize(const History& h, const Witness& w) {
    check_order_shape(h, w);
    History done = complete(h, w.choice);
    std::vector<Event> events;
    events.reserve(done.size());
    for (TxnId id : w.order) {
        for (std::size_t i : done.txn(id).event_indices) events.push_back(done[i]);
    }
    return HistoryAccess::trusted(std::move(events));
}

std::vector<std::pair<TxnId, TxnId>> criterion_edges(const History& h, const CompletionChoice& choice,
                                                     Criterion c) {
    std::vector<std::pair<TxnId, TxnId>> out;
    if (c == Criterion::ghs_order) {
        if (!h.is_sequential()) throw NotSequential("read-commit order is only defined on sequential histories");
        for (const TxnInfo& reader : h.txn_infos()) {
            for (const Operation& op : reader.ops) {
                if (op.action.kind != OpKind::read || !op.response_index) continue;
                for (const TxnInfo& writer : h.txn_infos()) {
                    if (writer.id == reader.id || !writer.tryc_invocation) continue;
                    if (!writer.write_set.contains(op.action.object)) continue;
                    if (!committed_in_completion(h, choice, writer.id)) continue;
                    if (*op.response_index < *writer.tryc_invocation) out.emplace_back(reader.id, writer.id);
                }
            }
        }
    } else if (c == Criterion::tms2_order) {
        for (const TxnInfo& a : h.txn_infos()) {
            if (!a.tryc_response || !committed_in_completion(h, choice, a.id)) continue;
            for (const TxnInfo& b : h.txn_infos()) {
                if (b.id == a.id || !b.tryc_invocation || *a.tryc_response >= *b.tryc_invocation) continue;
                bool conflict = std::any_of(a.write_set.begin(), a.write_set.end(),
                                            [&](const TObjectId& x) { return b.read_set.contains(x); });
                if (conflict) out.emplace_back(a.id, b.id);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

WitnessCheck verify_witness(const History& h, const Witness& w, Criterion c) {
    check_order_shape(h, w);
    if (c == Criterion::ghs_order && !h.is_sequential())
        throw NotSequential("read-commit order is only defined on sequential histories");

    WitnessCheck out;
    auto fail = [&](ConstraintKind kind, std::string msg) {
        out.ok = false;
        out.diagnostics.push_back({kind, std::move(msg)});
    };

    const History completed = complete(h, w.choice);
    const History s = materialize(h, w);
    if (!equivalent(s, completed)) fail(ConstraintKind::equivalence, "serialization is not equivalent to the completion");

    std::map<TxnId, std::size_t> pos;
    for (std::size_t i = 0; i < w.order.size(); ++i) pos[w.order[i]] = i;

    for (TxnId k : h.txns()) {
        for (TxnId m : h.txns()) {
            if (k != m && real_time_precedes(h, k, m) && pos[k] > pos[m])
                fail(ConstraintKind::real_time, to_string(k) + " precedes " + to_string(m) + " in real time");
        }
    }

    for (const IllegalRead& r : illegal_reads(s)) fail(ConstraintKind::legality, to_string(r));

    if (c == Criterion::du_opacity) {
        for (const ReadVisibility& rv : visible_writers(h)) {
            History local = local_serialization(s, h, rv.reader, rv.object);
            std::int64_t expected = latest_written_value(local, rv.reader, rv.object);
            if (expected != rv.value) {
                fail(ConstraintKind::local_legality,
                     "read(" + rv.object.name + ") of " + to_string(rv.reader) + " returned " +
                         std::to_string(rv.value) + " but its local serialization yields " + std::to_string(expected));
            }
        }
    }

    if (c == Criterion::ghs_order || c == Criterion::tms2_order) {
        const ConstraintKind kind =
            c == Criterion::ghs_order ? ConstraintKind::read_commit_order : ConstraintKind::conflict_order;
        for (const auto& [before, after] : criterion_edges(h, w.choice, c)) {
            if (pos[before] > pos[after])
                fail(kind, to_string(before) + " must precede " + to_string(after));
        }
    }
    return out;
}

}  // namespace duocheck
