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
#include "duocheck/criteria.hpp"

#include <map>
#include <set>

#include "duocheck/errors.hpp"

namespace duocheck {

std::string to_string(NamedCriterion c) {
    switch (c) {
        case NamedCriterion::final_state: return "final-state";
        case NamedCriterion::opacity: return "opacity";
        case NamedCriterion::du_opacity: return "du-opacity";
        case NamedCriterion::ghs: return "ghs";
        case NamedCriterion::tms2: return "tms2";
    }
    return "?";
}

std::optional<NamedCriterion> parse_criterion(const std::string& name) {
    static const std::map<std::string, NamedCriterion> names = {
        {"final-state", NamedCriterion::final_state}, {"opacity", NamedCriterion::opacity},
        {"du-opacity", NamedCriterion::du_opacity},   {"ghs", NamedCriterion::ghs},
        {"tms2", NamedCriterion::tms2},
    };
    auto it = names.find(name);
    if (it == names.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> CriterionReport::first_failing_prefix() const {
    for (const PrefixVerdict& p : prefixes)
        if (!p.verdict.satisfied) return p.length;
    return std::nullopt;
}

std::vector<std::size_t> CriterionReport::prefix_failures() const {
    std::vector<std::size_t> out;
    for (const PrefixVerdict& p : prefixes)
        if (!p.verdict.satisfied) out.push_back(p.length);
    return out;
}

namespace {

Verdict decide(const History& h, Criterion c, const CheckOptions& opts) {
    if (opts.engine == Engine::naive) return naive_search(h, c, h.txn_count());
    SearchOptions so;
    so.node_budget = opts.node_budget;
    return search(h, c, so);
}

CriterionReport single(const History& h, NamedCriterion name, Criterion c, const CheckOptions& opts) {
    CriterionReport r;
    r.criterion = name;
    r.verdict = decide(h, c, opts);
    return r;
}

}  // namespace

CriterionReport final_state_opaque(const History& h, const CheckOptions& opts) {
    return single(h, NamedCriterion::final_state, Criterion::final_state_opacity, opts);
}

CriterionReport du_opaque(const History& h, const CheckOptions& opts) {
    return single(h, NamedCriterion::du_opacity, Criterion::du_opacity, opts);
}

CriterionReport ghs_opaque(const History& h, const CheckOptions& opts) {
    return single(h, NamedCriterion::ghs, Criterion::ghs_order, opts);
}

CriterionReport tms2_order(const History& h, const CheckOptions& opts) {
    return single(h, NamedCriterion::tms2, Criterion::tms2_order, opts);
}

CriterionReport opaque(const History& h, const CheckOptions& opts) {
    CriterionReport r;
    r.criterion = NamedCriterion::opacity;
    r.verdict.satisfied = true;
    for (std::size_t i = 0; i <= h.size(); ++i) {
        Verdict v = decide(prefix(h, i), Criterion::final_state_opacity, opts);
        r.verdict.stats.nodes += v.stats.nodes;
        r.verdict.stats.completions += v.stats.completions;
        r.verdict.stats.elapsed += v.stats.elapsed;
        if (!v.satisfied && r.verdict.satisfied) {
            r.verdict.satisfied = false;
            r.verdict.refutation = v.refutation;
        }
        if (i == h.size() && r.verdict.satisfied) r.verdict.witness = v.witness;
        r.prefixes.push_back({i, std::move(v)});
    }
    return r;
}

CriterionReport check(const History& h, NamedCriterion c, const CheckOptions& opts) {
    switch (c) {
        case NamedCriterion::final_state: return final_state_opaque(h, opts);
        case NamedCriterion::opacity: return opaque(h, opts);
        case NamedCriterion::du_opacity: return du_opaque(h, opts);
        case NamedCriterion::ghs: return ghs_opaque(h, opts);
        case NamedCriterion::tms2: return tms2_order(h, opts);
    }
    throw Error("unknown criterion");
}

bool unique_writes(const History& h) {
    std::map<std::pair<TObjectId, std::int64_t>, TxnId> writer;
    for (const TxnInfo& t : h.txn_infos()) {
        for (const Operation& op : t.ops) {
            if (op.action.kind != OpKind::write) continue;
            if (op.action.value == kInitialValue) return false;
            auto [it, inserted] = writer.try_emplace({op.action.object, op.action.value}, t.id);
            if (!inserted && it->second != t.id) return false;
        }
    }
    return true;
}

}  // namespace duocheck
