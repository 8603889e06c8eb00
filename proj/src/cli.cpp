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
#include "duocheck/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "duocheck/corpus.hpp"
#include "duocheck/criteria.hpp"
#include "duocheck/errors.hpp"
#include "duocheck/report.hpp"
#include "duocheck/text_format.hpp"

namespace duocheck::cli {

namespace {

constexpr const char* kCorpusPrefix = "corpus:";

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

TxnId parse_txn_token(const std::string& s) {
    if (s.size() < 2 || s[0] != 'T' || s[1] < '1' || s[1] > '9' ||
        s.find_first_not_of("0123456789", 1) != std::string::npos) {
        throw Error("bad transaction '" + s + "', expected T<n>");
    }
    return TxnId{static_cast<std::uint32_t>(std::stoul(s.substr(1)))};
}

struct Common {
    std::string criterion = "du-opacity";
    std::string input;
    bool json = false;
    bool witness = false;
    std::optional<std::uint64_t> budget;
};

NamedCriterion criterion_of(const Common& c) {
    auto parsed = parse_criterion(c.criterion);
    if (!parsed) throw Error("unknown criterion '" + c.criterion + "'");
    return *parsed;
}

Criterion search_criterion(NamedCriterion c) {
    switch (c) {
        case NamedCriterion::final_state: return Criterion::final_state_opacity;
        case NamedCriterion::du_opacity: return Criterion::du_opacity;
        case NamedCriterion::ghs: return Criterion::ghs_order;
        case NamedCriterion::tms2: return Criterion::tms2_order;
        case NamedCriterion::opacity: break;
    }
    throw Error("opacity has no single witness; verify against final-state on each prefix instead");
}

void print_human(std::ostream& os, const std::string& input, const CriterionReport& r, bool show_witness) {
    os << "input: " << input << "\n";
    os << "criterion: " << to_string(r.criterion) << "\n";
    os << "verdict: " << (r.satisfied() ? "satisfied" : "refuted") << "\n";
    if (!r.prefixes.empty()) {
        os << "prefixes:\n";
        for (const PrefixVerdict& p : r.prefixes)
            os << "  " << p.length << "\t" << (p.verdict.satisfied ? "final-state opaque" : "not final-state opaque")
               << "\n";
        if (auto first = r.first_failing_prefix()) os << "first failing prefix: " << *first << "\n";
    }
    if (!r.satisfied() && r.verdict.refutation) {
        for (const CompletionFailure& f : r.verdict.refutation->failures) {
            Witness partial{f.choice, f.deepest_prefix};
            std::string rendered = render(partial);
            for (char& ch : rendered)
                if (ch == '\n') ch = ' ';
            os << "  " << rendered << " | " << f.reason << "\n";
        }
    }
    if (show_witness && r.verdict.witness) os << "witness:\n" << render(*r.verdict.witness) << "\n";
    os << "stats: nodes=" << r.verdict.stats.nodes << " completions=" << r.verdict.stats.completions << "\n";
}

int cmd_check(const Common& c, std::ostream& out) {
    const NamedCriterion crit = criterion_of(c);
    const History h = load_input(c.input);
    CheckOptions opts;
    opts.node_budget = c.budget;
    CriterionReport r = check(h, crit, opts);
    if (c.json) {
        out << to_json(make_report(c.input, r)) << "\n";
    } else {
        print_human(out, c.input, r, c.witness);
    }
    return r.satisfied() ? kSatisfied : kRefuted;
}

int cmd_verify(const Common& c, const std::string& order, const std::string& commits, std::ostream& out) {
    const Criterion crit = search_criterion(criterion_of(c));
    const History h = load_input(c.input);
    Witness w{parse_commits(commits), parse_order(order)};
    WitnessCheck result = verify_witness(h, w, crit);
    if (c.json) {
        nlohmann::json j;
        j["input"] = c.input;
        j["criterion"] = c.criterion;
        j["valid"] = result.ok;
        j["diagnostics"] = nlohmann::json::array();
        for (const Diagnostic& d : result.diagnostics)
            j["diagnostics"].push_back({{"kind", to_string(d.kind)}, {"message", d.message}});
        out << j.dump(2) << "\n";
    } else {
        out << render(w) << "\n" << (result.ok ? "valid" : "invalid") << " " << c.criterion << " witness\n";
        for (const Diagnostic& d : result.diagnostics) out << "  " << to_string(d.kind) << ": " << d.message << "\n";
    }
    return result.ok ? kSatisfied : kRefuted;
}

int cmd_prefixes(const Common& c, std::ostream& out) {
    const NamedCriterion crit = criterion_of(c);
    const History h = load_input(c.input);
    CheckOptions opts;
    opts.node_budget = c.budget;
    nlohmann::json rows = nlohmann::json::array();
    bool all = true;
    std::ostringstream table;
    for (std::size_t i = 0; i <= h.size(); ++i) {
        bool ok = check(prefix(h, i), crit, opts).satisfied();
        all = all && ok;
        rows.push_back({{"length", i}, {"satisfied", ok}});
        table << "  " << i << "\t" << (ok ? "satisfied" : "refuted") << "\n";
    }
    if (c.json) {
        out << nlohmann::json{{"input", c.input}, {"criterion", c.criterion}, {"satisfied", all}, {"prefixes", rows}}
                   .dump(2)
            << "\n";
    } else {
        out << "input: " << c.input << "\ncriterion: " << c.criterion << "\n" << table.str();
        out << "verdict: " << (all ? "every prefix satisfied" : "some prefix refuted") << "\n";
    }
    return all ? kSatisfied : kRefuted;
}

int cmd_corpus(const Common& c, const std::vector<std::string>& names, std::ostream& out) {
    const std::vector<std::string>& selected = names.empty() ? corpus_names() : names;
    CheckOptions opts;
    opts.node_budget = c.budget;
    nlohmann::json entries = nlohmann::json::array();
    std::vector<History> histories;
    std::size_t mismatches = 0;
    for (const std::string& name : selected) {
        CorpusEntry e = corpus_entry(name);
        histories.push_back(e.history);
        std::vector<std::string> bad = corpus_mismatches(e, opts);
        mismatches += bad.size();
        nlohmann::json verdicts = nlohmann::json::object();
        for (const ExpectedVerdict& want : e.expected) verdicts[to_string(want.criterion)] = want.satisfied;
        entries.push_back({{"name", name}, {"expected", verdicts}, {"mismatches", bad}});
        if (!c.json) {
            out << name << ": " << e.caption << "\n";
            for (const ExpectedVerdict& want : e.expected)
                out << "  " << to_string(want.criterion) << " " << (want.satisfied ? "satisfied" : "refuted") << "\n";
            for (const std::string& m : bad) out << "  MISMATCH " << m << "\n";
        }
    }
    CompareOptions copts;
    copts.check = opts;
    ComparisonReport cmp = compare_criteria(histories, copts);
    if (c.json) {
        nlohmann::json violations = nlohmann::json::array();
        for (const PropertyViolation& v : cmp.violations)
            violations.push_back({{"name", selected[v.index]}, {"property", v.property}});
        out << nlohmann::json{{"entries", entries}, {"property_violations", violations}}.dump(2) << "\n";
    } else {
        for (const PropertyViolation& v : cmp.violations)
            out << "VIOLATION " << selected[v.index] << ": " << v.property << "\n";
        out << selected.size() << " histories, " << mismatches << " mismatches, " << cmp.violations.size()
            << " property violations\n";
    }
    return mismatches == 0 && cmp.ok() ? kSatisfied : kRefuted;
}

int cmd_fuzz(const Common& c, const std::string& config, Seed seed, std::size_t count, std::ostream& out) {
    const HistoryConfig cfg = parse_config(config);
    std::vector<History> histories;
    for (std::size_t i = 0; i < count; ++i) histories.push_back(random_history(cfg, seed + i));
    CompareOptions copts;
    copts.check.node_budget = c.budget;
    ComparisonReport cmp = compare_criteria(histories, copts);

    std::size_t du = 0, op = 0;
    for (const CriteriaRow& row : cmp.rows) {
        du += row.du_opaque;
        op += row.opaque;
    }
    if (c.json) {
        nlohmann::json violations = nlohmann::json::array();
        for (const PropertyViolation& v : cmp.violations)
            violations.push_back({{"seed", seed + v.index}, {"property", v.property}});
        nlohmann::json tms2 = nlohmann::json::array();
        for (std::size_t i : cmp.tms2_conjecture_counterexamples) tms2.push_back(seed + i);
        out << nlohmann::json{{"histories", count},
                              {"du_opaque", du},
                              {"opaque", op},
                              {"property_violations", violations},
                              {"tms2_conjecture_counterexamples", tms2}}
                   .dump(2)
            << "\n";
    } else {
        out << count << " histories from seed " << seed << ": " << du << " du-opaque, " << op << " opaque\n";
        for (const PropertyViolation& v : cmp.violations)
            out << "VIOLATION seed " << seed + v.index << ": " << v.property << "\n";
        for (std::size_t i : cmp.tms2_conjecture_counterexamples)
            out << "tms2-order without du-opacity: seed " << seed + i << "\n";
        out << cmp.violations.size() << " property violations\n";
    }
    return cmp.ok() ? kSatisfied : kRefuted;
}

}  // namespace

std::vector<TxnId> parse_order(const std::string& text) {
    std::vector<TxnId> out;
    for (const std::string& t : split(text, ',')) out.push_back(parse_txn_token(t));
    return out;
}

CompletionChoice parse_commits(const std::string& text) {
    std::string body = text;
    if (!body.empty() && body.front() == '{') body.erase(body.begin());
    if (!body.empty() && body.back() == '}') body.pop_back();
    CompletionChoice out;
    for (const std::string& item : split(body, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error("bad commit choice '" + item + "', expected T<n>:C or T<n>:A");
        const std::string r = item.substr(colon + 1);
        if (r != "C" && r != "A") throw Error("bad resolution '" + r + "', expected C or A");
        out[parse_txn_token(item.substr(0, colon))] = r == "C" ? Resolution::commit : Resolution::abort;
    }
    return out;
}

History load_input(const std::string& input) {
    if (input.rfind(kCorpusPrefix, 0) == 0) return paper_history(input.substr(std::string(kCorpusPrefix).size()));
    std::ifstream f(input);
    if (!f) throw Error("cannot open " + input);
    std::stringstream buf;
    buf << f.rdbuf();
    ParseResult r = parse_history(buf.str());
    if (!r.ok()) {
        std::string msg = input + ": ";
        for (std::size_t i = 0; i < r.errors.size(); ++i) msg += (i ? "\n" : "") + to_string(r.errors[i]);
        throw Error(msg);
    }
    return std::move(*r.history);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Checks transactional memory histories against opacity-style criteria", "duocheck"};
    app.require_subcommand(1);

    Common common;
    std::string order, commits, config;
    Seed seed = 1;
    std::size_t count = 100;
    std::vector<std::string> names;

    auto add_common = [&](CLI::App* sub, bool with_input) {
        sub->add_option("--criterion", common.criterion, "final-state, opacity, du-opacity, ghs or tms2")
            ->capture_default_str();
        sub->add_flag("--json", common.json, "emit a JSON report");
        sub->add_option("--budget", common.budget, "give up after this many search nodes");
        if (with_input) sub->add_option("input", common.input, "history file or corpus:<name>")->required();
    };

    CLI::App* check_cmd = app.add_subcommand("check", "decide a criterion");
    add_common(check_cmd, true);
    check_cmd->add_flag("--witness", common.witness, "print the witness serialization");

    CLI::App* verify_cmd = app.add_subcommand("verify", "check a supplied serialization");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--order", order, "T2,T3,T1")->required();
    verify_cmd->add_option("--commits", commits, "fate of commit-pending transactions, T5:C,T7:A");

    CLI::App* prefixes_cmd = app.add_subcommand("prefixes", "decide a criterion on every prefix");
    add_common(prefixes_cmd, true);

    CLI::App* corpus_cmd = app.add_subcommand("corpus", "check the reference histories");
    add_common(corpus_cmd, false);
    corpus_cmd->add_option("names", names, "subset of entries");

    CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "compare criteria on random histories");
    add_common(fuzz_cmd, false);
    fuzz_cmd->add_option("--seed", seed, "first seed")->capture_default_str();
    fuzz_cmd->add_option("--count", count, "number of histories")->capture_default_str();
    fuzz_cmd->add_option("--config", config, "k=v,... over txn_count, object_count, max_ops_per_txn, value_mode, "
                                             "abort_probability, incomplete_probability, value_range");

    std::vector<std::string> argv_store = {"duocheck"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    std::ostringstream buffer;
    try {
        int code = kUsageError;
        if (check_cmd->parsed()) code = cmd_check(common, buffer);
        else if (verify_cmd->parsed()) code = cmd_verify(common, order, commits, buffer);
        else if (prefixes_cmd->parsed()) code = cmd_prefixes(common, buffer);
        else if (corpus_cmd->parsed()) code = cmd_corpus(common, names, buffer);
        else if (fuzz_cmd->parsed()) code = cmd_fuzz(common, config, seed, count, buffer);
        out << buffer.str();
        return code;
    } catch (const BudgetExceeded& e) {
        err << "undecided: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kUsageError;
}

}  // namespace duocheck::cli
