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
#include <tuple>

#include "duocheck/errors.hpp"
#include "duocheck/search.hpp"

namespace duocheck {
namespace {

void require_du_witness(const History& h, const Witness& w) {
    WitnessCheck check;
    try {
        check = verify_witness(h, w, Criterion::du_opacity);
    } catch (const MalformedWitness& e) {
        throw InvalidWitness(std::string("not a witness: ") + e.what());
    }
    if (!check.ok) throw InvalidWitness("not a du-opaque witness: " + check.diagnostics.front().message);
}

std::vector<std::pair<TxnId, TxnId>> live_set_pairs(const History& h) {
    std::vector<std::pair<TxnId, TxnId>> out;
    for (TxnId k : h.txns())
        for (TxnId m : h.txns())
            if (k != m && ls_precedes(h, k, m)) out.emplace_back(k, m);
    return out;
}

bool respects(const std::vector<TxnId>& order, const std::vector<std::pair<TxnId, TxnId>>& pairs) {
    std::map<TxnId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    return std::all_of(pairs.begin(), pairs.end(), [&](const auto& p) { return pos[p.first] < pos[p.second]; });
}

}  // namespace

Witness project_witness(const History& h, const Witness& w, std::size_t i) {
    if (i > h.size()) throw OutOfRange("prefix index " + std::to_string(i) + " beyond history length");
    require_du_witness(h, w);

    const History hp = prefix(h, i);
    Witness out;
    for (const TxnInfo& t : hp.txn_infos()) {
        // A tryC pending in the prefix keeps the fate it has in w's completion of h.
        if (t.status == TxnStatus::commit_pending) {
            out.choice[t.id] =
                committed_in_completion(h, w.choice, t.id) ? Resolution::commit : Resolution::abort;
        }
    }
    for (TxnId id : w.order)
        if (hp.participates(id)) out.order.push_back(id);
    return out;
}

Witness live_set_normalize(const History& h, const Witness& w) {
    require_du_witness(h, w);
    for (const TxnInfo& t : h.txn_infos()) {
        if (!t.complete())
            throw HypothesisViolated(to_string(t.id) + " is incomplete; live sets must contain complete transactions");
    }

    std::map<TxnId, std::size_t> pos;
    for (std::size_t i = 0; i < w.order.size(); ++i) pos[w.order[i]] = i;

    // Move every T_k that sits after the earliest T_l with T_k <LS T_l to just before T_l.
    // Moved transactions sharing a target keep first-event order, which is consistent with <LS.
    std::vector<std::tuple<std::size_t, int, std::size_t, TxnId>> keys;
    for (TxnId k : w.order) {
        std::optional<std::size_t> target;
        for (TxnId l : h.txns()) {
            if (l != k && ls_precedes(h, k, l) && (!target || pos[l] < *target)) target = pos[l];
        }
        if (target && *target < pos[k]) {
            keys.emplace_back(*target, 0, h.txn(k).first_event(), k);
        } else {
            keys.emplace_back(pos[k], 1, 0, k);
        }
    }
    std::sort(keys.begin(), keys.end());

    Witness out{w.choice, {}};
    for (const auto& key : keys) out.order.push_back(std::get<3>(key));

    const auto pairs = live_set_pairs(h);
    if (respects(out.order, pairs) && verify_witness(h, out, Criterion::du_opacity).ok) return out;

    // The move can expose a different committed write when values repeat; search the
    // constrained space for the same completion instead.
    SearchOptions opts;
    opts.extra_order = pairs;
    opts.only_choice = w.choice;
    Verdict v = search(h, Criterion::du_opacity, opts);
    if (!v.satisfied) {
        throw LiveSetOrderUnattainable("no du-opaque serialization respects the live-set order: " +
                                       v.refutation->summary());
    }
    return *v.witness;
}

}  // namespace duocheck
