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
#include "duocheck/history.hpp"

#include <algorithm>
#include <sstream>

#include "duocheck/errors.hpp"
#include "history_access.hpp"

namespace duocheck {

std::string to_string(TxnId id) { return "T" + std::to_string(id.value); }

std::ostream& operator<<(std::ostream& os, TxnId id) { return os << to_string(id); }

std::ostream& operator<<(std::ostream& os, const TObjectId& obj) { return os << obj.name; }

std::string to_string(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::integer: return std::to_string(v.as_integer());
        case Value::Kind::ok: return "ok";
        case Value::Kind::commit: return "C";
        case Value::Kind::abort: return "A";
    }
    return "?";
}

std::string to_string(const Action& a) {
    switch (a.kind) {
        case OpKind::read: return "read(" + a.object.name + ")";
        case OpKind::write: return "write(" + a.object.name + "," + std::to_string(a.value) + ")";
        case OpKind::try_commit: return "tryC";
        case OpKind::try_abort: return "tryA";
    }
    return "?";
}

std::string to_string(const Event& e) {
    std::string s = (e.is_invocation() ? "inv " : "res ") + to_string(e.txn) + " " + to_string(e.action);
    if (e.result) s += " -> " + to_string(*e.result);
    return s;
}

std::string to_string(TxnStatus s) {
    switch (s) {
        case TxnStatus::committed: return "committed";
        case TxnStatus::aborted: return "aborted";
        case TxnStatus::commit_pending: return "commit-pending";
        case TxnStatus::complete_not_t_complete: return "complete-not-t-complete";
        case TxnStatus::op_incomplete: return "op-incomplete";
    }
    return "?";
}

namespace ev {
namespace {
Event inv(std::uint32_t txn, Action a) { return Event{TxnId{txn}, Phase::invocation, std::move(a), std::nullopt}; }
Event res(std::uint32_t txn, Action a, Value v) { return Event{TxnId{txn}, Phase::response, std::move(a), v}; }
}  // namespace

Event inv_read(std::uint32_t txn, const std::string& obj) { return inv(txn, Action::read({obj})); }
Event res_read(std::uint32_t txn, const std::string& obj, std::int64_t v) {
    return res(txn, Action::read({obj}), Value::integer(v));
}
Event res_read_abort(std::uint32_t txn, const std::string& obj) {
    return res(txn, Action::read({obj}), Value::abort());
}
Event inv_write(std::uint32_t txn, const std::string& obj, std::int64_t v) {
    return inv(txn, Action::write({obj}, v));
}
Event res_write(std::uint32_t txn, const std::string& obj, std::int64_t v) {
    return res(txn, Action::write({obj}, v), Value::ok());
}
Event res_write_abort(std::uint32_t txn, const std::string& obj, std::int64_t v) {
    return res(txn, Action::write({obj}, v), Value::abort());
}
Event inv_tryc(std::uint32_t txn) { return inv(txn, Action::try_commit()); }
Event res_commit(std::uint32_t txn) { return res(txn, Action::try_commit(), Value::commit()); }
Event res_tryc_abort(std::uint32_t txn) { return res(txn, Action::try_commit(), Value::abort()); }
Event inv_trya(std::uint32_t txn) { return inv(txn, Action::try_abort()); }
Event res_trya(std::uint32_t txn) { return res(txn, Action::try_abort(), Value::abort()); }
}  // namespace ev

History::History(std::vector<Event> events) : events_(std::move(events)) {
    std::map<TxnId, TxnInfo> by_id;
    for (std::size_t i = 0; i < events_.size(); ++i) {
        const Event& e = events_[i];
        TxnInfo& info = by_id[e.txn];
        info.id = e.txn;
        info.event_indices.push_back(i);
        if (e.is_invocation()) {
            info.ops.push_back(Operation{e.action, i, std::nullopt, std::nullopt});
            if (e.action.kind == OpKind::read) info.read_set.insert(e.action.object);
            if (e.action.kind == OpKind::write) info.write_set.insert(e.action.object);
            if (e.action.kind == OpKind::try_commit) info.tryc_invocation = i;
        } else {
            Operation& op = info.ops.back();
            op.response_index = i;
            op.result = e.result;
            if (e.action.kind == OpKind::try_commit) info.tryc_response = i;
        }
    }
    txns_.reserve(by_id.size());
    for (auto& [id, info] : by_id) {
        const Operation& last = info.ops.back();
        if (!last.complete()) {
            info.status = last.action.kind == OpKind::try_commit ? TxnStatus::commit_pending
                                                                 : TxnStatus::op_incomplete;
        } else if (last.result->is_commit()) {
            info.status = TxnStatus::committed;
        } else if (last.result->is_abort()) {
            info.status = TxnStatus::aborted;
        } else {
            info.status = TxnStatus::complete_not_t_complete;
        }
        txns_.push_back(std::move(info));
    }
}

std::vector<TxnId> History::txns() const {
    std::vector<TxnId> out;
    out.reserve(txns_.size());
    for (const auto& t : txns_) out.push_back(t.id);
    return out;
}

bool History::participates(TxnId k) const {
    auto it = std::lower_bound(txns_.begin(), txns_.end(), k,
                               [](const TxnInfo& a, TxnId b) { return a.id < b; });
    return it != txns_.end() && it->id == k;
}

const TxnInfo& History::txn(TxnId k) const {
    auto it = std::lower_bound(txns_.begin(), txns_.end(), k,
                               [](const TxnInfo& a, TxnId b) { return a.id < b; });
    if (it == txns_.end() || it->id != k) throw UnknownTxn("transaction " + to_string(k) + " does not participate");
    return *it;
}

bool History::is_sequential() const {
    for (std::size_t i = 0; i < events_.size(); ++i) {
        if (!events_[i].is_invocation()) continue;
        if (i + 1 == events_.size()) continue;
        const Event& next = events_[i + 1];
        if (!next.is_response() || next.txn != events_[i].txn) return false;
    }
    return true;
}

bool History::is_t_complete() const {
    return std::all_of(txns_.begin(), txns_.end(), [](const TxnInfo& t) { return t.t_complete(); });
}

bool History::is_complete() const {
    return std::all_of(txns_.begin(), txns_.end(), [](const TxnInfo& t) { return t.complete(); });
}

namespace {

bool result_matches(OpKind kind, const Value& v) {
    switch (kind) {
        case OpKind::read: return v.is_integer() || v.is_abort();
        case OpKind::write: return v.kind() == Value::Kind::ok || v.is_abort();
        case OpKind::try_commit: return v.is_commit() || v.is_abort();
        case OpKind::try_abort: return v.is_abort();
    }
    return false;
}

struct TxnCursor {
    std::optional<Action> pending;
    bool finished = false;
    std::set<TObjectId> read_objects;
};

}  // namespace

ValidationResult validate(std::vector<Event> events) {
    std::vector<Violation> violations;
    std::map<TxnId, TxnCursor> cursors;
    auto report = [&](std::size_t i, std::string reason) { violations.push_back({i, std::move(reason)}); };

    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        if (e.txn.value == 0) {
            report(i, "T0 is implicit and cannot appear in a history");
            continue;
        }
        TxnCursor& cur = cursors[e.txn];
        if (cur.finished) {
            report(i, "event of " + to_string(e.txn) + " after its commit/abort");
            continue;
        }
        if (e.is_invocation()) {
            if (e.result) report(i, "invocation carries a result");
            if ((e.action.kind == OpKind::read || e.action.kind == OpKind::write) && e.action.object.name.empty())
                report(i, "empty t-object name");
            if (cur.pending) {
                report(i, "pending response: " + to_string(e.txn) + " invoked " + to_string(e.action) +
                              " while " + to_string(*cur.pending) + " is unanswered");
                continue;
            }
            if (e.action.kind == OpKind::read && !cur.read_objects.insert(e.action.object).second) {
                report(i, to_string(e.txn) + " reads " + e.action.object.name + " more than once");
            }
            cur.pending = e.action;
        } else {
            if (!cur.pending) {
                report(i, "response of " + to_string(e.txn) + " without a matching invocation");
                continue;
            }
            if (!(*cur.pending == e.action)) {
                report(i, "response " + to_string(e.action) + " does not match pending invocation " +
                              to_string(*cur.pending));
            }
            if (!e.result) {
                report(i, "response without a result");
            } else if (!result_matches(cur.pending->kind, *e.result)) {
                report(i, "result " + to_string(*e.result) + " is not allowed for " + to_string(*cur.pending));
            } else if (e.result->is_commit() || e.result->is_abort()) {
                cur.finished = true;
            }
            cur.pending.reset();
        }
    }

    ValidationResult out;
    if (violations.empty()) {
        out.history = HistoryAccess::trusted(std::move(events));
    } else {
        out.violations = std::move(violations);
    }
    return out;
}

History make_history(std::vector<Event> events) {
    ValidationResult r = validate(std::move(events));
    if (!r.ok()) {
        const Violation& v = r.violations.front();
        throw Error("malformed history at event " + std::to_string(v.index) + ": " + v.reason);
    }
    return std::move(*r.history);
}

History prefix(const History& h, std::size_t i) {
    if (i > h.size()) {
        throw OutOfRange("prefix length " + std::to_string(i) + " exceeds history length " + std::to_string(h.size()));
    }
    auto ev = h.events();
    return HistoryAccess::trusted(std::vector<Event>(ev.begin(), ev.begin() + static_cast<std::ptrdiff_t>(i)));
}

std::vector<Event> projection(const History& h, TxnId k) {
    std::vector<Event> out;
    for (const Event& e : h.events())
        if (e.txn == k) out.push_back(e);
    return out;
}

TxnStatus status(const History& h, TxnId k) { return h.txn(k).status; }

bool real_time_precedes(const History& h, TxnId k, TxnId m) {
    const TxnInfo& a = h.txn(k);
    const TxnInfo& b = h.txn(m);
    return a.t_complete() && a.last_event() < b.first_event();
}

bool overlap(const History& h, TxnId k, TxnId m) {
    return !real_time_precedes(h, k, m) && !real_time_precedes(h, m, k);
}

ReadWriteSets read_write_sets(const History& h, TxnId k) {
    const TxnInfo& t = h.txn(k);
    return {t.read_set, t.write_set};
}

std::set<TxnId> live_set(const History& h, TxnId k) {
    const TxnInfo& t = h.txn(k);
    std::set<TxnId> out;
    for (const TxnInfo& other : h.txn_infos()) {
        bool before = other.last_event() < t.first_event();
        bool after = t.last_event() < other.first_event();
        if (!before && !after) out.insert(other.id);
    }
    return out;
}

bool ls_precedes(const History& h, TxnId k, TxnId m) {
    const TxnInfo& target = h.txn(m);
    for (TxnId member : live_set(h, k)) {
        const TxnInfo& t = h.txn(member);
        if (!t.complete() || t.last_event() >= target.first_event()) return false;
    }
    return true;
}

std::vector<ReadVisibility> visible_writers(const History& h) {
    std::vector<ReadVisibility> out;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Event& e = h[i];
        if (!e.is_response() || e.action.kind != OpKind::read || !e.result->is_integer()) continue;
        ReadVisibility rv{e.txn, e.action.object, i, e.result->as_integer(), {}};
        for (const TxnInfo& t : h.txn_infos()) {
            if (t.tryc_invocation && *t.tryc_invocation < i) rv.writers.insert(t.id);
        }
        out.push_back(std::move(rv));
    }
    return out;
}

ReadVisibility visibility_of(const History& h, TxnId k, const TObjectId& x) {
    if (h.participates(k)) {
        for (const Operation& op : h.txn(k).ops) {
            if (op.action.kind != OpKind::read || op.action.object != x) continue;
            if (!op.result || !op.result->is_integer()) break;
            ReadVisibility rv{k, x, *op.response_index, op.result->as_integer(), {}};
            for (const TxnInfo& t : h.txn_infos()) {
                if (t.tryc_invocation && *t.tryc_invocation < *op.response_index) rv.writers.insert(t.id);
            }
            return rv;
        }
    }
    throw NoSuchRead("no non-aborted read of " + x.name + " by " + to_string(k));
}

}  // namespace duocheck
