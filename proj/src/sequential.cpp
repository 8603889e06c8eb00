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
#include "duocheck/sequential.hpp"

#include <algorithm>

#include "duocheck/errors.hpp"
#include "history_access.hpp"

namespace duocheck {

std::vector<CompletionChoice> completion_choices(const History& h) {
    std::vector<TxnId> pending;
    for (const TxnInfo& t : h.txn_infos())
        if (t.status == TxnStatus::commit_pending) pending.push_back(t.id);
    if (pending.size() >= 63) throw TooLarge("too many commit-pending transactions");

    std::vector<CompletionChoice> out;
    const std::uint64_t count = std::uint64_t{1} << pending.size();
    out.reserve(count);
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        CompletionChoice c;
        for (std::size_t i = 0; i < pending.size(); ++i)
            c[pending[i]] = ((bits >> i) & 1U) ? Resolution::commit : Resolution::abort;
        out.push_back(std::move(c));
    }
    return out;
}

void check_choice_domain(const History& h, const CompletionChoice& choice) {
    std::size_t pending = 0;
    for (const TxnInfo& t : h.txn_infos()) {
        if (t.status != TxnStatus::commit_pending) continue;
        ++pending;
        if (!choice.contains(t.id))
            throw MalformedWitness("no commit/abort choice for commit-pending " + to_string(t.id));
    }
    if (choice.size() != pending) {
        for (const auto& [id, r] : choice) {
            if (!h.participates(id) || h.txn(id).status != TxnStatus::commit_pending)
                throw MalformedWitness("choice given for " + to_string(id) + ", which is not commit-pending");
        }
    }
}

bool committed_in_completion(const History& h, const CompletionChoice& choice, TxnId k) {
    const TxnInfo& t = h.txn(k);
    switch (t.status) {
        case TxnStatus::committed: return true;
        case TxnStatus::commit_pending: {
            auto it = choice.find(k);
            return it != choice.end() && it->second == Resolution::commit;
        }
        default: return false;
    }
}

History complete(const History& h, const CompletionChoice& choice) {
    check_choice_domain(h, choice);
    auto src = h.events();
    std::vector<Event> events(src.begin(), src.end());
    for (const TxnInfo& t : h.txn_infos()) {
        const Operation& last = t.ops.back();
        switch (t.status) {
            case TxnStatus::committed:
            case TxnStatus::aborted:
                break;
            case TxnStatus::op_incomplete:
                events.push_back(Event{t.id, Phase::response, last.action, Value::abort()});
                break;
            case TxnStatus::complete_not_t_complete:
                events.push_back(Event{t.id, Phase::invocation, Action::try_commit(), std::nullopt});
                events.push_back(Event{t.id, Phase::response, Action::try_commit(), Value::abort()});
                break;
            case TxnStatus::commit_pending:
                events.push_back(Event{t.id, Phase::response, Action::try_commit(),
                                       choice.at(t.id) == Resolution::commit ? Value::commit() : Value::abort()});
                break;
        }
    }
    return HistoryAccess::trusted(std::move(events));
}

std::vector<Completion> completions(const History& h) {
    std::vector<Completion> out;
    for (CompletionChoice& c : completion_choices(h)) {
        History done = complete(h, c);
        out.push_back({std::move(c), std::move(done)});
    }
    return out;
}

void require_t_sequential(const History& s) {
    // Blocks must be contiguous and every block but the last must be t-complete.
    const auto& infos = s.txn_infos();
    for (const TxnInfo& t : infos) {
        if (t.last_event() - t.first_event() + 1 != t.event_indices.size())
            throw NotTSequential(to_string(t.id) + " is not a contiguous block");
        if (!t.t_complete() && t.last_event() + 1 != s.size())
            throw NotTSequential(to_string(t.id) + " is t-incomplete but not the last block");
    }
}

namespace {

// Latest value of x visible to a read in block order [0, upto) of s, committed blocks only.
std::int64_t committed_value_before(const History& s, std::size_t block_start, const TObjectId& x) {
    std::int64_t value = kInitialValue;
    bool found = false;
    // Walk backwards over earlier blocks; the first committed one that writes x decides.
    std::size_t i = block_start;
    while (i > 0 && !found) {
        const TxnId owner = s[i - 1].txn;
        const TxnInfo& t = s.txn(owner);
        if (t.status == TxnStatus::committed) {
            for (const Operation& op : t.ops) {
                if (op.action.kind == OpKind::write && op.action.object == x) {
                    value = op.action.value;
                    found = true;
                }
            }
        }
        i = t.first_event();
    }
    return value;
}

struct ReadRef {
    TxnId reader;
    const Operation* op;
    std::optional<std::int64_t> own_write;
};

std::vector<ReadRef> reads_of(const History& s) {
    std::vector<ReadRef> out;
    for (const TxnInfo& t : s.txn_infos()) {
        std::map<TObjectId, std::int64_t> own;
        for (const Operation& op : t.ops) {
            if (op.action.kind == OpKind::write) own[op.action.object] = op.action.value;
            if (op.action.kind != OpKind::read || !op.result || !op.result->is_integer()) continue;
            auto it = own.find(op.action.object);
            out.push_back({t.id, &op, it == own.end() ? std::nullopt : std::optional(it->second)});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const ReadRef& a, const ReadRef& b) { return a.op->invocation_index < b.op->invocation_index; });
    return out;
}

std::int64_t expected_value(const History& s, const ReadRef& r) {
    if (r.own_write) return *r.own_write;
    return committed_value_before(s, s.txn(r.reader).first_event(), r.op->action.object);
}

}  // namespace

std::string to_string(const IllegalRead& r) {
    return "read(" + r.object.name + ") of " + to_string(r.reader) + " returned " + std::to_string(r.returned) +
           " but the latest written value is " + std::to_string(r.expected);
}

std::int64_t latest_written_value(const History& s, TxnId k, const TObjectId& x) {
    require_t_sequential(s);
    if (s.participates(k)) {
        std::optional<std::int64_t> own;
        for (const Operation& op : s.txn(k).ops) {
            if (op.action.kind == OpKind::write && op.action.object == x) own = op.action.value;
            if (op.action.kind == OpKind::read && op.action.object == x) {
                if (own) return *own;
                return committed_value_before(s, s.txn(k).first_event(), x);
            }
        }
    }
    throw NoSuchRead("no read of " + x.name + " by " + to_string(k));
}

std::vector<IllegalRead> illegal_reads(const History& s) {
    require_t_sequential(s);
    std::vector<IllegalRead> out;
    for (const ReadRef& r : reads_of(s)) {
        std::int64_t expected = expected_value(s, r);
        std::int64_t got = r.op->result->as_integer();
        if (got != expected) out.push_back({r.reader, r.op->action.object, got, expected});
    }
    return out;
}

LegalityResult is_legal(const History& s) {
    std::vector<IllegalRead> bad = illegal_reads(s);
    if (bad.empty()) return {};
    return {false, bad.front()};
}

bool equivalent(const History& a, const History& b) {
    if (a.txns() != b.txns()) return false;
    for (TxnId k : a.txns())
        if (projection(a, k) != projection(b, k)) return false;
    return true;
}

History local_serialization(const History& s, const History& h, TxnId k, const TObjectId& x) {
    ReadVisibility vis = visibility_of(h, k, x);
    require_t_sequential(s);
    if (!s.participates(k)) throw NoSuchRead(to_string(k) + " is not part of the serialization");

    std::vector<Event> out;
    const TxnInfo& reader = s.txn(k);
    std::size_t i = 0;
    while (i < reader.first_event()) {
        const TxnInfo& block = s.txn(s[i].txn);
        if (vis.writers.contains(block.id))
            for (std::size_t j : block.event_indices) out.push_back(s[j]);
        i = block.last_event() + 1;
    }
    for (const Operation& op : reader.ops) {
        out.push_back(s[op.invocation_index]);
        if (op.response_index) out.push_back(s[*op.response_index]);
        if (op.action.kind == OpKind::read && op.action.object == x) {
            return HistoryAccess::trusted(std::move(out));
        }
    }
    throw NoSuchRead("serialization lacks read of " + x.name + " by " + to_string(k));
}

std::vector<TxnBlock> completion_blocks(const History& h, const CompletionChoice& choice) {
    std::vector<TxnBlock> out;
    out.reserve(h.txn_count());
    for (const TxnInfo& t : h.txn_infos()) {
        TxnBlock b;
        b.txn = t.id;
        b.committed = committed_in_completion(h, choice, t.id);
        for (const Operation& op : t.ops) {
            if (op.action.kind == OpKind::write) {
                // A write that did not return ok ends the transaction aborted; it never matters.
                b.final_writes[op.action.object] = op.action.value;
            } else if (op.action.kind == OpKind::read && op.result && op.result->is_integer()) {
                BlockRead r{op.action.object, op.result->as_integer(), std::nullopt, *op.response_index};
                auto it = b.final_writes.find(op.action.object);
                if (it != b.final_writes.end()) r.own_write = it->second;
                b.reads.push_back(std::move(r));
            }
        }
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace duocheck
