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
#include "duocheck/corpus.hpp"

#include <map>
#include <random>
#include <sstream>

#include "duocheck/errors.hpp"

namespace duocheck {

using namespace ev;

// Reference histories. Where the source ordering of two events is ambiguous the comment says which
// order was picked.

namespace {

CorpusEntry fig1() {
    // T2 commits a write of 1. T1 reads X while T3 writes 1; T3's tryC starts only after
    // T1's read has returned, so T1 can only have read T2's value. T1 then writes 2 and
    // commits after T3, and T4 reads 2 last.
    return {"fig1",
            "du-opaque history with overlapping writers",
            make_history({
                inv_write(2, "X", 1), res_write(2, "X", 1),
                inv_tryc(2), res_commit(2),
                inv_read(1, "X"),
                inv_write(3, "X", 1),
                res_read(1, "X", 1),
                res_write(3, "X", 1),
                inv_write(1, "X", 2),
                inv_tryc(3),
                res_write(1, "X", 2),
                res_commit(3),
                inv_tryc(1), res_commit(1),
                inv_read(4, "X"), res_read(4, "X", 2),
                inv_tryc(4), res_commit(4),
            }),
            {{NamedCriterion::final_state, true},
             {NamedCriterion::du_opacity, true},
             {NamedCriterion::opacity, true}},
            std::nullopt};
}

std::vector<Event> fig3_events(bool full) {
    // T2 reads T1's write before T1 invokes tryC. The full history then has both commit,
    // T1's tryC answered first.
    std::vector<Event> e = {
        inv_write(1, "X", 1), res_write(1, "X", 1),
        inv_read(2, "X"), res_read(2, "X", 1),
    };
    if (full) {
        e.insert(e.end(), {inv_tryc(1), inv_tryc(2), res_commit(1), res_commit(2)});
    }
    return e;
}

CorpusEntry fig3_full() {
    return {"fig3_full",
            "final-state opaque history with a prefix that is not",
            make_history(fig3_events(true)),
            {{NamedCriterion::final_state, true}, {NamedCriterion::opacity, false}},
            4};
}

CorpusEntry fig3_prefix() {
    return {"fig3_prefix",
            "the four-event prefix of fig3_full",
            make_history(fig3_events(false)),
            {{NamedCriterion::final_state, false}},
            std::nullopt};
}

CorpusEntry fig4() {
    // T1 and T3 both write 1 to X. T2 reads 1 after T1 invoked tryC but before T3 did;
    // T1 is then aborted and T3 committed (A1 drawn before C3).
    return {"fig4",
            "opaque history that is not du-opaque",
            make_history({
                inv_write(1, "X", 1), res_write(1, "X", 1),
                inv_write(3, "X", 1), res_write(3, "X", 1),
                inv_tryc(1),
                inv_read(2, "X"), res_read(2, "X", 1),
                inv_tryc(3),
                res_tryc_abort(1),
                res_commit(3),
            }),
            {{NamedCriterion::final_state, true},
             {NamedCriterion::opacity, true},
             {NamedCriterion::du_opacity, false}},
            std::nullopt};
}

CorpusEntry fig5() {
    // Sequential: T1 commits X=1, T2 reads X, T3 writes X and Y and commits, T2 reads Y=1.
    return {"fig5",
            "sequential du-opaque history rejected by the read-commit order",
            make_history({
                inv_write(1, "X", 1), res_write(1, "X", 1),
                inv_tryc(1), res_commit(1),
                inv_read(2, "X"), res_read(2, "X", 1),
                inv_write(3, "X", 1), res_write(3, "X", 1),
                inv_write(3, "Y", 1), res_write(3, "Y", 1),
                inv_tryc(3), res_commit(3),
                inv_read(2, "Y"), res_read(2, "Y", 1),
            }),
            {{NamedCriterion::du_opacity, true}, {NamedCriterion::ghs, false}},
            std::nullopt};
}

CorpusEntry fig6() {
    // Both read X=0, T1 writes X, T2 writes Y; T1 commits before T2 invokes tryC.
    return {"fig6",
            "du-opaque history rejected by the conflict order",
            make_history({
                inv_read(1, "X"), res_read(1, "X", 0),
                inv_read(2, "X"), res_read(2, "X", 0),
                inv_write(1, "X", 1), res_write(1, "X", 1),
                inv_write(2, "Y", 1), res_write(2, "Y", 1),
                inv_tryc(1), res_commit(1),
                inv_tryc(2), res_commit(2),
            }),
            {{NamedCriterion::du_opacity, true}, {NamedCriterion::tms2, false}},
            std::nullopt};
}

}  // namespace

const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names = {"fig1", "fig3_full", "fig3_prefix", "fig4", "fig5", "fig6"};
    return names;
}

CorpusEntry corpus_entry(const std::string& name) {
    if (name == "fig1") return fig1();
    if (name == "fig3_full") return fig3_full();
    if (name == "fig3_prefix") return fig3_prefix();
    if (name == "fig4") return fig4();
    if (name == "fig5") return fig5();
    if (name == "fig6") return fig6();
    throw UnknownName("unknown corpus history '" + name + "'");
}

History paper_history(const std::string& name) { return corpus_entry(name).history; }

History fig2_prefix(std::size_t n) {
    std::vector<Event> e = {
        inv_write(1, "X", 1), res_write(1, "X", 1),
        inv_tryc(1),
        inv_read(2, "X"), res_read(2, "X", 1),
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = static_cast<std::uint32_t>(i + 3);
        e.push_back(inv_read(t, "X"));
        e.push_back(res_read(t, "X", 0));
    }
    return make_history(std::move(e));
}

std::vector<std::string> corpus_mismatches(const CorpusEntry& entry, const CheckOptions& opts) {
    std::vector<std::string> out;
    for (const ExpectedVerdict& want : entry.expected) {
        CriterionReport r = check(entry.history, want.criterion, opts);
        if (r.satisfied() != want.satisfied) {
            out.push_back(entry.name + ": " + to_string(want.criterion) + " expected " +
                          (want.satisfied ? "satisfied" : "refuted") + ", got " +
                          (r.satisfied() ? "satisfied" : "refuted"));
        }
        if (want.criterion == NamedCriterion::opacity && entry.first_failing_prefix &&
            r.first_failing_prefix() != entry.first_failing_prefix) {
            out.push_back(entry.name + ": first failing prefix expected " +
                          std::to_string(*entry.first_failing_prefix) + ", got " +
                          (r.first_failing_prefix() ? std::to_string(*r.first_failing_prefix()) : "none"));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------------------------

namespace {

// Hand-rolled bounded draws keep sequences identical across standard libraries.
class Rng {
public:
    explicit Rng(Seed seed) : g_(seed) {}

    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do x = g_();
        while (x >= limit);
        return x % n;
    }

    bool chance(double p) { return static_cast<double>(g_() >> 11) * 0x1.0p-53 < p; }

private:
    std::mt19937_64 g_;
};

struct PlannedOp {
    Action action;
    bool abort_response = false;  // responds A and ends the transaction
    bool pending = false;         // invocation only, ends the transaction
};

struct Plan {
    std::uint32_t id = 0;
    std::vector<PlannedOp> ops;
    std::vector<Event> events;  // filled lazily: read results are picked at emission time
    std::size_t next_op = 0;
    bool awaiting_response = false;
    bool done = false;
    std::map<std::string, std::int64_t> own;
};

std::string object_name(std::size_t i) {
    static const char* names[] = {"X", "Y", "Z", "W", "V", "U"};
    if (i < std::size(names)) return names[i];
    return "X" + std::to_string(i);
}

}  // namespace

void check_config(const HistoryConfig& cfg) {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(cfg.abort_probability)) throw Error("abort_probability must lie in [0,1]");
    if (!prob(cfg.incomplete_probability)) throw Error("incomplete_probability must lie in [0,1]");
    if (cfg.txn_count > 0 && cfg.object_count == 0) throw Error("object_count must be positive");
    if (cfg.txn_count > 0 && cfg.max_ops_per_txn == 0) throw Error("max_ops_per_txn must be positive");
    if (cfg.value_range < 1) throw Error("value_range must be positive");
    if (cfg.txn_count > 64) throw Error("txn_count must not exceed 64");
}

HistoryConfig parse_config(const std::string& text, HistoryConfig cfg) {
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("config item '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
            if (key == "txn_count") cfg.txn_count = std::stoul(value);
            else if (key == "object_count") cfg.object_count = std::stoul(value);
            else if (key == "max_ops_per_txn") cfg.max_ops_per_txn = std::stoul(value);
            else if (key == "abort_probability") cfg.abort_probability = std::stod(value);
            else if (key == "incomplete_probability") cfg.incomplete_probability = std::stod(value);
            else if (key == "value_range") cfg.value_range = std::stoll(value);
            else if (key == "value_mode") {
                if (value == "from_writes") cfg.value_mode = ValueMode::from_writes;
                else if (value == "unique_writes") cfg.value_mode = ValueMode::unique_writes;
                else throw UnknownName("unknown value_mode '" + value + "'");
            } else {
                throw UnknownName("unknown config key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw Error("bad value for " + key + ": '" + value + "'");
        } catch (const std::out_of_range&) {
            throw Error("value out of range for " + key + ": '" + value + "'");
        }
    }
    check_config(cfg);
    return cfg;
}

History random_history(const HistoryConfig& cfg, Seed seed) {
    check_config(cfg);
    Rng rng(seed);
    std::int64_t next_unique = 1;
    std::map<std::string, std::vector<std::int64_t>> written;

    std::vector<Plan> plans(cfg.txn_count);
    for (std::size_t i = 0; i < cfg.txn_count; ++i) {
        Plan& p = plans[i];
        p.id = static_cast<std::uint32_t>(i + 1);
        const std::size_t n = 1 + rng.below(cfg.max_ops_per_txn);
        std::vector<bool> read(cfg.object_count, false);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t x = rng.below(cfg.object_count);
            if (rng.chance(0.5) && !read[x]) {
                read[x] = true;
                p.ops.push_back({Action::read(TObjectId{object_name(x)}), false, false});
            } else {
                std::int64_t v = cfg.value_mode == ValueMode::unique_writes
                                     ? next_unique++
                                     : static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cfg.value_range)));
                written[object_name(x)].push_back(v);
                p.ops.push_back({Action::write(TObjectId{object_name(x)}, v), false, false});
            }
        }

        if (rng.chance(cfg.incomplete_probability)) {
            switch (rng.below(3)) {
                case 0: p.ops.back().pending = true; break;                              // op-incomplete
                case 1: break;                                                           // no tryC yet
                default: p.ops.push_back({Action::try_commit(), false, true}); break;    // commit-pending
            }
        } else if (rng.chance(cfg.abort_probability)) {
            switch (rng.below(3)) {
                case 0: {
                    // An earlier operation is answered with A; drop the rest.
                    std::size_t at = rng.below(p.ops.size());
                    p.ops.resize(at + 1);
                    p.ops.back().abort_response = true;
                    break;
                }
                case 1: p.ops.push_back({Action::try_abort(), true, false}); break;
                default: p.ops.push_back({Action::try_commit(), true, false}); break;
            }
        } else {
            p.ops.push_back({Action::try_commit(), false, false});
        }
    }

    // Committed state so far, used to bias reads toward plausible values.
    std::map<std::string, std::int64_t> committed;
    std::vector<Event> events;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < plans.size(); ++i) active.push_back(i);

    while (!active.empty()) {
        const std::size_t slot = rng.below(active.size());
        Plan& p = plans[active[slot]];
        const PlannedOp& op = p.ops[p.next_op];
        if (!p.awaiting_response) {
            events.push_back(Event{TxnId{p.id}, Phase::invocation, op.action, std::nullopt});
            p.awaiting_response = true;
            if (op.pending) p.done = true;
        } else {
            Value result = Value::ok();
            if (op.abort_response) {
                result = Value::abort();
            } else if (op.action.kind == OpKind::read) {
                const std::string& x = op.action.object.name;
                auto own = p.own.find(x);
                if (own != p.own.end() && rng.chance(0.9)) {
                    result = Value::integer(own->second);
                } else if (rng.chance(0.6)) {
                    auto c = committed.find(x);
                    result = Value::integer(c == committed.end() ? kInitialValue : c->second);
                } else {
                    const auto& pool = written[x];
                    const std::uint64_t pick = rng.below(pool.size() + 1);
                    result = Value::integer(pick == pool.size() ? kInitialValue : pool[pick]);
                }
            } else if (op.action.kind == OpKind::write) {
                p.own[op.action.object.name] = op.action.value;
            } else if (op.action.kind == OpKind::try_commit) {
                result = Value::commit();
                for (const auto& [x, v] : p.own) committed[x] = v;
            }
            events.push_back(Event{TxnId{p.id}, Phase::response, op.action, result});
            p.awaiting_response = false;
            ++p.next_op;
            if (op.abort_response || p.next_op == p.ops.size()) p.done = true;
        }
        if (p.done) active.erase(active.begin() + static_cast<std::ptrdiff_t>(slot));
    }
    return make_history(std::move(events));
}

// ---------------------------------------------------------------------------------------------

namespace {

using Unit = std::vector<Event>;
using UnitSeq = std::vector<Unit>;

// Every per-transaction unit sequence within the bounds, written for transaction T1.
std::vector<UnitSeq> unit_sequences(const SmallBounds& b) {
    std::vector<UnitSeq> out;
    UnitSeq cur;
    std::vector<bool> read(b.objects, false);

    std::function<void(std::size_t)> extend = [&](std::size_t ops) {
        if (!cur.empty()) out.push_back(cur);
        if (ops == b.max_ops) return;
        for (std::size_t x = 0; x < b.objects; ++x) {
            const std::string obj = object_name(x);
            if (!read[x]) {
                read[x] = true;
                for (std::int64_t v = 0; v < b.values; ++v) {
                    cur.push_back({inv_read(1, obj), res_read(1, obj, v)});
                    extend(ops + 1);
                    cur.pop_back();
                }
                cur.push_back({inv_read(1, obj)});
                out.push_back(cur);
                cur.pop_back();
                read[x] = false;
            }
            for (std::int64_t v = 0; v < b.values; ++v) {
                cur.push_back({inv_write(1, obj, v), res_write(1, obj, v)});
                extend(ops + 1);
                cur.pop_back();
                cur.push_back({inv_write(1, obj, v)});
                out.push_back(cur);
                cur.pop_back();
            }
        }
        cur.push_back({inv_tryc(1)});
        out.push_back(cur);
        for (Event e : {res_commit(1), res_tryc_abort(1)}) {
            cur.push_back({e});
            out.push_back(cur);
            cur.pop_back();
        }
        cur.pop_back();
    };
    extend(0);
    return out;
}

using u128 = unsigned __int128;

u128 factorial(std::size_t n) {
    u128 f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

std::uint64_t count_small(const SmallBounds& b) {
    std::map<std::size_t, u128> by_length;
    for (const UnitSeq& s : unit_sequences(b)) ++by_length[s.size()];
    std::vector<std::pair<std::size_t, u128>> lengths(by_length.begin(), by_length.end());

    u128 total = 1;  // the empty history
    for (std::size_t k = 1; k <= b.max_txns; ++k) {
        // Sum over length tuples of prod(count) * multinomial(sum; lengths), divided by k!.
        u128 sum = 0;
        std::vector<std::size_t> pick(k, 0);
        while (true) {
            u128 ways = 1;
            std::size_t units = 0;
            u128 denom = 1;
            for (std::size_t i : pick) {
                ways *= lengths[i].second;
                units += lengths[i].first;
                denom *= factorial(lengths[i].first);
            }
            sum += ways * (factorial(units) / denom);
            std::size_t d = 0;
            while (d < k && ++pick[d] == lengths.size()) pick[d++] = 0;
            if (d == k) break;
        }
        total += sum / factorial(k);
        if (total > (u128{1} << 63)) return ~std::uint64_t{0};
    }
    return static_cast<std::uint64_t>(total);
}

std::uint64_t enumerate_small(const SmallBounds& b, const std::function<void(const History&)>& visit) {
    const std::uint64_t expected = count_small(b);
    if (expected > kSmallHistoryCap) {
        throw BoundsTooLarge("enumeration would produce " + std::to_string(expected) + " histories (cap " +
                             std::to_string(kSmallHistoryCap) + ")");
    }
    const std::vector<UnitSeq> seqs = unit_sequences(b);
    std::uint64_t produced = 0;

    visit(make_history({}));
    ++produced;

    std::vector<Event> events;
    for (std::size_t k = 1; k <= b.max_txns; ++k) {
        std::vector<std::size_t> pick(k, 0);
        std::vector<std::size_t> next(k, 0);
        std::function<void()> interleave = [&]() {
            bool finished = true;
            for (std::size_t i = 0; i < k; ++i) {
                const UnitSeq& s = seqs[pick[i]];
                if (next[i] == s.size()) continue;
                finished = false;
                // Transactions are numbered by first appearance.
                if (next[i] == 0 && i > 0 && next[i - 1] == 0) break;
                const std::size_t mark = events.size();
                for (Event e : s[next[i]]) {
                    e.txn = TxnId{static_cast<std::uint32_t>(i + 1)};
                    events.push_back(std::move(e));
                }
                ++next[i];
                interleave();
                --next[i];
                events.resize(mark);
            }
            if (finished) {
                visit(make_history(events));
                ++produced;
            }
        };
        while (true) {
            interleave();
            std::size_t d = 0;
            while (d < k && ++pick[d] == seqs.size()) pick[d++] = 0;
            if (d == k) break;
        }
    }
    return produced;
}

// ---------------------------------------------------------------------------------------------

CriteriaRow evaluate_all(const History& h, const CheckOptions& opts) {
    CriteriaRow row;
    row.final_state = final_state_opaque(h, opts).satisfied();
    row.opaque = opaque(h, opts).satisfied();
    row.du_opaque = du_opaque(h, opts).satisfied();
    if (h.is_sequential()) row.ghs = ghs_opaque(h, opts).satisfied();
    row.tms2 = tms2_order(h, opts).satisfied();
    row.unique_writes = unique_writes(h);
    return row;
}

ComparisonReport compare_criteria(const std::vector<History>& histories, const CompareOptions& opts) {
    ComparisonReport report;
    for (std::size_t i = 0; i < histories.size(); ++i) {
        const History& h = histories[i];
        CriteriaRow row = evaluate_all(h, opts.check);
        auto flag = [&](std::string what) { report.violations.push_back({i, std::move(what)}); };

        if (row.du_opaque && !row.opaque) flag("containment: du-opaque but not opaque");
        if (row.opaque && !row.final_state) flag("opaque but not final-state opaque");
        if (row.unique_writes && row.opaque != row.du_opaque) flag("unique writes: opacity and du-opacity disagree");
        if (row.ghs && *row.ghs && !row.du_opaque) flag("ghs-opaque but not du-opaque");
        if (row.du_opaque && opts.prefix_closure) {
            for (std::size_t len = 0; len < h.size(); ++len) {
                if (!du_opaque(prefix(h, len), opts.check).satisfied()) {
                    flag("prefix closure: prefix of length " + std::to_string(len) + " is not du-opaque");
                    break;
                }
            }
        }
        if (row.tms2 && !row.du_opaque) report.tms2_conjecture_counterexamples.push_back(i);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace duocheck
