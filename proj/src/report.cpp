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
#include "duocheck/report.hpp"

#include <json.hpp>

#include "duocheck/errors.hpp"

namespace duocheck {

using nlohmann::json;

namespace {

TxnId txn_from(const std::string& s) {
    if (s.size() < 2 || s[0] != 'T') throw Error("bad transaction name '" + s + "'");
    std::size_t used = 0;
    unsigned long v = std::stoul(s.substr(1), &used);
    if (used != s.size() - 1 || v == 0) throw Error("bad transaction name '" + s + "'");
    return TxnId{static_cast<std::uint32_t>(v)};
}

}  // namespace

Report make_report(const std::string& input, const CriterionReport& r) {
    Report out;
    out.input = input;
    out.criterion = r.criterion;
    out.satisfied = r.satisfied();
    out.witness = r.verdict.witness;
    out.prefix_failures = r.prefix_failures();
    out.nodes = r.verdict.stats.nodes;
    out.completions = r.verdict.stats.completions;
    out.ms = static_cast<double>(r.verdict.stats.elapsed.count()) / 1000.0;
    return out;
}

std::string to_json(const Report& r, int indent) {
    json j;
    j["input"] = r.input;
    j["criterion"] = to_string(r.criterion);
    j["satisfied"] = r.satisfied;
    if (r.witness) {
        json order = json::array();
        for (TxnId id : r.witness->order) order.push_back(to_string(id));
        json commits = json::object();
        for (const auto& [id, res] : r.witness->choice) commits[to_string(id)] = res == Resolution::commit ? "C" : "A";
        j["witness"] = {{"order", order}, {"commits", commits}};
    } else {
        j["witness"] = nullptr;
    }
    j["prefix_failures"] = r.prefix_failures;
    j["stats"] = {{"nodes", r.nodes}, {"completions", r.completions}, {"ms", r.ms}};
    return j.dump(indent);
}

std::vector<std::string> schema_problems(const std::string& text) {
    std::vector<std::string> out;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) return {"not valid JSON"};
    if (!j.is_object()) return {"top level is not an object"};
    auto need = [&](const json& obj, const char* key, auto pred, const char* what) {
        if (!obj.contains(key)) {
            out.push_back(std::string("missing ") + key);
        } else if (!pred(obj[key])) {
            out.push_back(std::string(key) + " is not " + what);
        }
    };
    need(j, "input", [](const json& v) { return v.is_string(); }, "a string");
    need(j, "criterion", [](const json& v) { return v.is_string() && parse_criterion(v.get<std::string>()); },
         "a known criterion");
    need(j, "satisfied", [](const json& v) { return v.is_boolean(); }, "a boolean");
    need(j, "prefix_failures", [](const json& v) {
        if (!v.is_array()) return false;
        for (const json& e : v)
            if (!e.is_number_unsigned()) return false;
        return true;
    }, "an array of prefix lengths");
    need(j, "witness", [](const json& v) {
        if (v.is_null()) return true;
        if (!v.is_object() || !v.contains("order") || !v.contains("commits")) return false;
        if (!v["order"].is_array() || !v["commits"].is_object()) return false;
        for (const json& e : v["order"])
            if (!e.is_string()) return false;
        for (const auto& [k, c] : v["commits"].items())
            if (!c.is_string() || (c != "C" && c != "A")) return false;
        return true;
    }, "null or {order, commits}");
    need(j, "stats", [](const json& v) {
        return v.is_object() && v.contains("nodes") && v["nodes"].is_number_unsigned() && v.contains("completions") &&
               v["completions"].is_number_unsigned() && v.contains("ms") && v["ms"].is_number();
    }, "{nodes, completions, ms}");
    for (const auto& [k, v] : j.items()) {
        static const std::vector<std::string> known = {"input",  "criterion",       "satisfied",
                                                       "witness", "prefix_failures", "stats"};
        if (std::find(known.begin(), known.end(), k) == known.end()) out.push_back("unexpected field " + k);
    }
    return out;
}

Report report_from_json(const std::string& text) {
    if (auto problems = schema_problems(text); !problems.empty()) throw Error("bad report: " + problems.front());
    json j = json::parse(text);
    Report r;
    r.input = j["input"].get<std::string>();
    r.criterion = *parse_criterion(j["criterion"].get<std::string>());
    r.satisfied = j["satisfied"].get<bool>();
    if (!j["witness"].is_null()) {
        Witness w;
        for (const json& t : j["witness"]["order"]) w.order.push_back(txn_from(t.get<std::string>()));
        for (const auto& [k, c] : j["witness"]["commits"].items())
            w.choice[txn_from(k)] = c == "C" ? Resolution::commit : Resolution::abort;
        r.witness = std::move(w);
    }
    r.prefix_failures = j["prefix_failures"].get<std::vector<std::size_t>>();
    r.nodes = j["stats"]["nodes"].get<std::uint64_t>();
    r.completions = j["stats"]["completions"].get<std::uint64_t>();
    r.ms = j["stats"]["ms"].get<double>();
    return r;
}

}  // namespace duocheck
