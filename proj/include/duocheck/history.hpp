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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace duocheck {

/// Transaction identifier. T0 (the initializing transaction) is implicit and never stored.
struct TxnId {
    std::uint32_t value = 0;

    auto operator<=>(const TxnId&) const = default;
};

std::string to_string(TxnId id);
std::ostream& operator<<(std::ostream& os, TxnId id);

/// Name of a t-object. Case-sensitive, compared by exact string match.
struct TObjectId {
    std::string name;

    auto operator<=>(const TObjectId&) const = default;
};

std::ostream& operator<<(std::ostream& os, const TObjectId& obj);

/// Every t-object starts with this value.
inline constexpr std::int64_t kInitialValue = 0;

enum class OpKind { read, write, try_commit, try_abort };

/// Result of a t-operation: an integer from V, or one of the markers ok / C_k / A_k.
class Value {
public:
    enum class Kind { integer, ok, commit, abort };

    static Value integer(std::int64_t v) { return Value(Kind::integer, v); }
    static Value ok() { return Value(Kind::ok, 0); }
    static Value commit() { return Value(Kind::commit, 0); }
    static Value abort() { return Value(Kind::abort, 0); }

    Kind kind() const noexcept { return kind_; }
    bool is_integer() const noexcept { return kind_ == Kind::integer; }
    bool is_abort() const noexcept { return kind_ == Kind::abort; }
    bool is_commit() const noexcept { return kind_ == Kind::commit; }
    /// Only meaningful when is_integer().
    std::int64_t as_integer() const noexcept { return v_; }

    bool operator==(const Value&) const = default;

private:
    Value(Kind k, std::int64_t v) : kind_(k), v_(v) {}

    Kind kind_;
    std::int64_t v_;
};

std::string to_string(const Value& v);

struct Action {
    OpKind kind = OpKind::read;
    TObjectId object;          // read / write only
    std::int64_t value = 0;    // write only

    static Action read(TObjectId x) { return {OpKind::read, std::move(x), 0}; }
    static Action write(TObjectId x, std::int64_t v) { return {OpKind::write, std::move(x), v}; }
    static Action try_commit() { return {OpKind::try_commit, {}, 0}; }
    static Action try_abort() { return {OpKind::try_abort, {}, 0}; }

    bool operator==(const Action&) const = default;
};

std::string to_string(const Action& a);

enum class Phase { invocation, response };

struct Event {
    TxnId txn;
    Phase phase = Phase::invocation;
    Action action;
    std::optional<Value> result;  // present iff phase == response

    bool is_invocation() const noexcept { return phase == Phase::invocation; }
    bool is_response() const noexcept { return phase == Phase::response; }

    bool operator==(const Event&) const = default;
};

std::string to_string(const Event& e);

/// Shorthand constructors used by the corpus and by tests.
namespace ev {
Event inv_read(std::uint32_t txn, const std::string& obj);
Event res_read(std::uint32_t txn, const std::string& obj, std::int64_t v);
Event res_read_abort(std::uint32_t txn, const std::string& obj);
Event inv_write(std::uint32_t txn, const std::string& obj, std::int64_t v);
Event res_write(std::uint32_t txn, const std::string& obj, std::int64_t v);
Event res_write_abort(std::uint32_t txn, const std::string& obj, std::int64_t v);
Event inv_tryc(std::uint32_t txn);
Event res_commit(std::uint32_t txn);
Event res_tryc_abort(std::uint32_t txn);
Event inv_trya(std::uint32_t txn);
Event res_trya(std::uint32_t txn);
}  // namespace ev

enum class TxnStatus {
    committed,
    aborted,
    commit_pending,           // tryC invoked, not yet responded
    complete_not_t_complete,  // last event is a response other than C/A
    op_incomplete,            // read/write/tryA invoked, not yet responded
};

std::string to_string(TxnStatus s);

/// One t-operation of a transaction as it appears in a history.
struct Operation {
    Action action;
    std::size_t invocation_index = 0;
    std::optional<std::size_t> response_index;
    std::optional<Value> result;

    bool complete() const noexcept { return response_index.has_value(); }
};

/// Per-transaction index computed once when a History is built.
struct TxnInfo {
    TxnId id;
    std::vector<std::size_t> event_indices;
    std::vector<Operation> ops;
    TxnStatus status = TxnStatus::complete_not_t_complete;
    std::set<TObjectId> read_set;
    std::set<TObjectId> write_set;
    std::optional<std::size_t> tryc_invocation;
    std::optional<std::size_t> tryc_response;

    std::size_t first_event() const { return event_indices.front(); }
    std::size_t last_event() const { return event_indices.back(); }
    bool t_complete() const noexcept {
        return status == TxnStatus::committed || status == TxnStatus::aborted;
    }
    /// Complete in the model's sense: the last event is a response.
    bool complete() const noexcept {
        return status != TxnStatus::commit_pending && status != TxnStatus::op_incomplete;
    }
};

/// A finite well-formed history. Only validate() and prefix() construct one.
class History {
public:
    History() = default;

    std::span<const Event> events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }
    const Event& operator[](std::size_t i) const { return events_[i]; }

    /// Participating transactions in ascending id order.
    std::vector<TxnId> txns() const;
    std::size_t txn_count() const noexcept { return txns_.size(); }
    bool participates(TxnId k) const;
    /// Throws UnknownTxn.
    const TxnInfo& txn(TxnId k) const;
    const std::vector<TxnInfo>& txn_infos() const noexcept { return txns_; }

    /// True when every invocation is the last event or immediately followed by its response.
    bool is_sequential() const;
    /// True when every transaction is t-complete.
    bool is_t_complete() const;
    /// True when every transaction's last event is a response.
    bool is_complete() const;

    bool operator==(const History& other) const { return events_ == other.events_; }

private:
    friend struct HistoryAccess;
    explicit History(std::vector<Event> events);

    std::vector<Event> events_;
    std::vector<TxnInfo> txns_;  // sorted by id
};

struct Violation {
    std::size_t index = 0;
    std::string reason;
};

/// Either a valid History or every well-formedness violation found.
struct ValidationResult {
    std::optional<History> history;
    std::vector<Violation> violations;

    bool ok() const noexcept { return history.has_value(); }
};

ValidationResult validate(std::vector<Event> events);

/// validate() that throws Error with the first violation. For callers holding known-good input.
History make_history(std::vector<Event> events);

/// First i events. Throws OutOfRange when i > size.
History prefix(const History& h, std::size_t i);

/// H|k; empty when k does not participate.
std::vector<Event> projection(const History& h, TxnId k);

TxnStatus status(const History& h, TxnId k);

/// T_k precedes T_m in real time: T_k is t-complete and its last event precedes T_m's first.
bool real_time_precedes(const History& h, TxnId k, TxnId m);
bool overlap(const History& h, TxnId k, TxnId m);

struct ReadWriteSets {
    std::set<TObjectId> read_set;
    std::set<TObjectId> write_set;
};

/// Sets are taken from invocations, so a pending write counts.
ReadWriteSets read_write_sets(const History& h, TxnId k);

/// Transactions neither wholly before nor wholly after T_k by event position, T_k included.
std::set<TxnId> live_set(const History& h, TxnId k);

/// Every member of T_k's live set is complete and ends before T_m's first event.
bool ls_precedes(const History& h, TxnId k, TxnId m);

/// A non-aborted read together with the transactions whose tryC was invoked before its response.
struct ReadVisibility {
    TxnId reader;
    TObjectId object;
    std::size_t response_index = 0;
    std::int64_t value = 0;
    /// Never contains the reader. The reader is always retained in its own local serialization.
    std::set<TxnId> writers;
};

/// One entry per read with an integer result, in response order.
std::vector<ReadVisibility> visible_writers(const History& h);

/// Visibility of a single read; throws NoSuchRead when absent or aborted.
ReadVisibility visibility_of(const History& h, TxnId k, const TObjectId& x);

}  // namespace duocheck
