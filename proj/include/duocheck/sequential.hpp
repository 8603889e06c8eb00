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
#include <map>
#include <optional>
#include <vector>

#include "duocheck/history.hpp"

namespace duocheck {

enum class Resolution { commit, abort };

/// Commit/abort resolution for the commit-pending transactions of a history.
/// Every other transaction's fate in a completion is forced.
using CompletionChoice = std::map<TxnId, Resolution>;

/// All choices for h, ordered by ascending binary encoding (bit i = i-th commit-pending
/// transaction by id, 1 = commit). The first entry aborts everything.
std::vector<CompletionChoice> completion_choices(const History& h);

/// Throws MalformedWitness unless the domain of choice is exactly the commit-pending set.
void check_choice_domain(const History& h, const CompletionChoice& choice);

/// Whether T_k ends committed in the completion selected by choice.
bool committed_in_completion(const History& h, const CompletionChoice& choice, TxnId k);

/// The completion of h under choice. Appended events go at the end in ascending id order.
History complete(const History& h, const CompletionChoice& choice);

struct Completion {
    CompletionChoice choice;
    History history;
};

/// Exactly 2^p completions, p = number of commit-pending transactions.
std::vector<Completion> completions(const History& h);

/// Throws NotTSequential when two transactions of s overlap.
void require_t_sequential(const History& s);

/// Latest written value for read_k(X) in the t-sequential history s: own preceding write,
/// else the last write of the latest committed transaction before T_k, else the initial value.
/// Throws NoSuchRead when T_k has no read of X.
std::int64_t latest_written_value(const History& s, TxnId k, const TObjectId& x);

struct IllegalRead {
    TxnId reader;
    TObjectId object;
    std::int64_t returned = 0;
    std::int64_t expected = 0;
};

std::string to_string(const IllegalRead& r);

struct LegalityResult {
    bool legal = true;
    std::optional<IllegalRead> first_illegal;
};

/// Legality of a t-sequential history. Reads returning A_k are exempt.
/// Only the last block may be t-incomplete, which lets local serializations be judged too.
LegalityResult is_legal(const History& s);

/// Every illegal read in s, in event order.
std::vector<IllegalRead> illegal_reads(const History& s);

/// Same transaction set and identical per-transaction projections.
bool equivalent(const History& a, const History& b);

/// S_H^{k,X}: s up to the response of read_k(X), keeping only T_k and the transactions whose
/// tryC was invoked in h before that response. Throws NoSuchRead.
History local_serialization(const History& s, const History& h, TxnId k, const TObjectId& x);

/// A non-aborted read of a completed transaction, in the block form used by the searches.
struct BlockRead {
    TObjectId object;
    std::int64_t value = 0;
    std::optional<std::int64_t> own_write;  // latest own write to the object before the read
    std::size_t response_index = 0;         // position of the response in the original history
};

/// A transaction as a block of the completion selected by a choice.
struct TxnBlock {
    TxnId txn;
    bool committed = false;
    std::vector<BlockRead> reads;
    std::map<TObjectId, std::int64_t> final_writes;  // last value written per object
};

/// Blocks of every transaction of h (ascending id) under choice.
std::vector<TxnBlock> completion_blocks(const History& h, const CompletionChoice& choice);

}  // namespace duocheck
