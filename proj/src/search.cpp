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
#include "duocheck/search.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_set>

#include "duocheck/errors.hpp"

namespace duocheck {
namespace {

using Mask = std::uint64_t;

struct ReadCheck {
    std::size_t object = 0;
    std::int64_t value = 0;
    Mask visible = 0;  // transactions whose tryC was invoked before the read's response
    std::string object_name;
};

struct Placement {
    bool committed = false;
    std::vector<std::pair<std::size_t, std::int64_t>> writes;  // (object, final value)
    std::vector<ReadCheck> reads;                              // reads not answered by own writes
    Mask preds = 0;
};

// One completion choice turned into bitmask form.
struct Problem {
    std::vector<TxnId> ids;
    std::vector<Placement> txns;
    std::size_t object_count = 0;
    std::optional<std::string> static_failure;
};

struct VectorHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (std::int64_t x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

Problem build_problem(const History& h, const CompletionChoice& choice, Criterion c,
                      const std::vector<std::pair<TxnId, TxnId>>& extra) {
    Problem p;
    p.ids = h.txns();
    const std::size_t n = p.ids.size();
    if (n > 64) throw TooLarge("search supports at most 64 transactions");
    std::map<TxnId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[p.ids[i]] = i;

    std::map<TObjectId, std::size_t> objects;
    auto object_index = [&](const TObjectId& x) {
        auto [it, inserted] = objects.try_emplace(x, objects.size());
        return it->second;
    };

    std::vector<TxnBlock> blocks = completion_blocks(h, choice);
    p.txns.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const TxnBlock& b = blocks[i];
        Placement& t = p.txns[i];
        t.committed = b.committed;
        for (const auto& [x, v] : b.final_writes) t.writes.emplace_back(object_index(x), v);
        for (const BlockRead& r : b.reads) {
            if (r.own_write) {
                if (*r.own_write != r.value && !p.static_failure) {
                    p.static_failure = "read(" + r.object.name + ") of " + to_string(b.txn) + " returned " +
                                       std::to_string(r.value) + " but its own latest write is " +
                                       std::to_string(*r.own_write);
                }
                continue;
            }
            ReadCheck rc{object_index(r.object), r.value, 0, r.object.name};
            for (std::size_t j = 0; j < n; ++j) {
                const TxnInfo& w = h.txn(p.ids[j]);
                if (w.tryc_invocation && *w.tryc_invocation < r.response_index) rc.visible |= Mask{1} << j;
            }
            t.reads.push_back(std::move(rc));
        }
    }
    p.object_count = objects.size();

    for (std::size_t i = 0; i < n; ++i) {
        const TxnInfo& a = h.txn(p.ids[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const TxnInfo& b = h.txn(p.ids[j]);
            if (a.t_complete() && a.last_event() < b.first_event()) p.txns[j].preds |= Mask{1} << i;
        }
    }
    auto add_edge = [&](TxnId before, TxnId after) {
        auto bi = index.find(before);
        auto ai = index.find(after);
        if (bi == index.end() || ai == index.end()) return;
        p.txns[ai->second].preds |= Mask{1} << bi->second;
    };
    for (const auto& [before, after] : criterion_edges(h, choice, c)) add_edge(before, after);
    for (const auto& [before, after] : extra) add_edge(before, after);
    return p;
}

class OrderSearch {
public:
    OrderSearch(const Problem& p, Criterion c, SearchStats& stats, std::optional<std::uint64_t> budget,
                const std::function<bool(const std::vector<std::size_t>&)>* visit)
        : p_(p), local_(c == Criterion::du_opacity), stats_(stats), budget_(budget), visit_(visit) {
        latest_.assign(p.object_count, kInitialValue);
    }

    // Returns true when the search should stop (a witness was accepted).
    bool run() {
        if (p_.static_failure) {
            best_reason_ = *p_.static_failure;
            return false;
        }
        return dfs(0);
    }

    const std::vector<std::size_t>& order() const { return order_; }
    std::uint64_t found() const { return found_; }
    const std::vector<std::size_t>& deepest() const { return best_prefix_; }
    const std::string& reason() const { return best_reason_; }

private:
    std::int64_t local_value(const ReadCheck& r) const {
        for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
            const Placement& t = p_.txns[*it];
            if (!t.committed || !(r.visible & (Mask{1} << *it))) continue;
            for (const auto& [obj, v] : t.writes)
                if (obj == r.object) return v;
        }
        return kInitialValue;
    }

    std::optional<std::string> check_reads(std::size_t t) const {
        for (const ReadCheck& r : p_.txns[t].reads) {
            if (latest_[r.object] != r.value) {
                return "read(" + r.object_name + ") of " + to_string(p_.ids[t]) + " returned " +
                       std::to_string(r.value) + " but the latest committed value is " +
                       std::to_string(latest_[r.object]);
            }
            if (local_) {
                std::int64_t lv = local_value(r);
                if (lv != r.value) {
                    return "read(" + r.object_name + ") of " + to_string(p_.ids[t]) + " returned " +
                           std::to_string(r.value) + " but its local serialization yields " + std::to_string(lv);
                }
            }
        }
        return std::nullopt;
    }

    std::vector<std::int64_t> state_key() const {
        std::vector<std::int64_t> key;
        key.push_back(static_cast<std::int64_t>(placed_));
        key.insert(key.end(), latest_.begin(), latest_.end());
        if (local_) {
            for (std::size_t t = 0; t < p_.txns.size(); ++t) {
                if (placed_ & (Mask{1} << t)) continue;
                for (const ReadCheck& r : p_.txns[t].reads) key.push_back(local_value(r));
            }
        }
        return key;
    }

    void note_failure(std::string reason) {
        if (!have_best_ || order_.size() > best_prefix_.size()) {
            have_best_ = true;
            best_prefix_ = order_;
            best_reason_ = std::move(reason);
        }
    }

    std::string waiting_reason() const {
        for (std::size_t t = 0; t < p_.txns.size(); ++t) {
            if (placed_ & (Mask{1} << t)) continue;
            Mask missing = p_.txns[t].preds & ~placed_;
            if (missing) {
                return to_string(p_.ids[t]) + " must follow unplaced " +
                       to_string(p_.ids[static_cast<std::size_t>(std::countr_zero(missing))]);
            }
        }
        return "no placeable transaction";
    }

    bool dfs(std::size_t depth) {
        const std::size_t n = p_.txns.size();
        if (depth == n) {
            ++found_;
            if (!visit_) return true;
            return !(*visit_)(order_);
        }
        const std::size_t found_before = found_;
        std::vector<std::int64_t> key = state_key();
        if (dead_.contains(key)) return false;

        bool any_placeable = false;
        for (std::size_t t = 0; t < n; ++t) {
            const Mask bit = Mask{1} << t;
            if ((placed_ & bit) || (p_.txns[t].preds & ~placed_)) continue;
            any_placeable = true;
            ++stats_.nodes;
            if (budget_ && stats_.nodes > *budget_) throw BudgetExceeded(stats_.nodes);
            if (auto why = check_reads(t)) {
                note_failure("cannot append " + to_string(p_.ids[t]) + ": " + *why);
                continue;
            }
            std::vector<std::int64_t> saved = latest_;
            if (p_.txns[t].committed)
                for (const auto& [obj, v] : p_.txns[t].writes) latest_[obj] = v;
            placed_ |= bit;
            order_.push_back(t);
            if (dfs(depth + 1)) return true;  // keep order_ intact for the caller
            order_.pop_back();
            placed_ &= ~bit;
            latest_ = std::move(saved);
        }
        if (!any_placeable) note_failure(waiting_reason());
        if (found_ == found_before) dead_.insert(std::move(key));
        return false;
    }

    const Problem& p_;
    bool local_;
    SearchStats& stats_;
    std::optional<std::uint64_t> budget_;
    const std::function<bool(const std::vector<std::size_t>&)>* visit_;

    Mask placed_ = 0;
    std::vector<std::size_t> order_;
    std::vector<std::int64_t> latest_;
    std::unordered_set<std::vector<std::int64_t>, VectorHash> dead_;
    std::uint64_t found_ = 0;

    bool have_best_ = false;
    std::vector<std::size_t> best_prefix_;
    std::string best_reason_;
};

std::vector<TxnId> to_ids(const Problem& p, const std::vector<std::size_t>& order) {
    std::vector<TxnId> out;
    out.reserve(order.size());
    for (std::size_t i : order) out.push_back(p.ids[i]);
    return out;
}

std::vector<CompletionChoice> choices_for(const History& h, const SearchOptions& opts) {
    if (opts.only_choice) {
        check_choice_domain(h, *opts.only_choice);
        return {*opts.only_choice};
    }
    return completion_choices(h);
}

}  // namespace

Verdict search(const History& h, Criterion c, const SearchOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    if (c == Criterion::ghs_order && !h.is_sequential())
        throw NotSequential("read-commit order is only defined on sequential histories");

    Verdict v;
    Refutation refutation;
    for (const CompletionChoice& choice : choices_for(h, opts)) {
        ++v.stats.completions;
        Problem p = build_problem(h, choice, c, opts.extra_order);
        OrderSearch s(p, c, v.stats, opts.node_budget, nullptr);
        if (s.run()) {
            v.satisfied = true;
            v.witness = Witness{choice, to_ids(p, s.order())};
            break;
        }
        refutation.failures.push_back({choice, to_ids(p, s.deepest()), s.reason()});
    }
    if (!v.satisfied) v.refutation = std::move(refutation);
    v.stats.elapsed =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
    return v;
}

std::uint64_t for_each_witness(const History& h, Criterion c, const std::function<bool(const Witness&)>& visit,
                               const SearchOptions& opts) {
    if (c == Criterion::ghs_order && !h.is_sequential())
        throw NotSequential("read-commit order is only defined on sequential histories");
    SearchStats stats;
    std::uint64_t total = 0;
    for (const CompletionChoice& choice : choices_for(h, opts)) {
        Problem p = build_problem(h, choice, c, opts.extra_order);
        std::function<bool(const std::vector<std::size_t>&)> adapter = [&](const std::vector<std::size_t>& order) {
            return visit(Witness{choice, to_ids(p, order)});
        };
        OrderSearch s(p, c, stats, opts.node_budget, &adapter);
        bool stopped = s.run();
        total += s.found();
        if (stopped) break;
    }
    return total;
}

}  // namespace duocheck
