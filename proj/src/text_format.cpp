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
#include "duocheck/text_format.hpp"

#include <charconv>
#include <map>
#include <sstream>

namespace duocheck {

std::string to_string(const ParseError& e) {
    std::string s = "line " + std::to_string(e.line);
    if (e.column) s += ":" + std::to_string(e.column);
    return s + ": " + e.message;
}

namespace {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

std::optional<std::uint32_t> parse_txn(std::string_view s) {
    if (s.size() < 2 || s[0] != 'T' || s[1] < '1' || s[1] > '9') return std::nullopt;
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::optional<OpKind> parse_kind(std::string_view s) {
    if (s == "read") return OpKind::read;
    if (s == "write") return OpKind::write;
    if (s == "tryc") return OpKind::try_commit;
    if (s == "trya") return OpKind::try_abort;
    return std::nullopt;
}

const char* keyword(OpKind k) {
    switch (k) {
        case OpKind::read: return "read";
        case OpKind::write: return "write";
        case OpKind::try_commit: return "tryc";
        case OpKind::try_abort: return "trya";
    }
    return "?";
}

class LineParser {
public:
    LineParser(std::size_t line, std::vector<Token> tokens, std::vector<ParseError>& errors)
        : line_(line), t_(std::move(tokens)), errors_(errors) {}

    // The pending invocation of each transaction is needed to fill in a response's action.
    std::optional<Event> parse(std::map<std::uint32_t, Action>& pending) {
        if (t_.size() < 3) return fail(t_.empty() ? 1 : t_.back().column + t_.back().text.size(), "incomplete event");
        const bool inv = t_[0].text == "inv";
        if (!inv && t_[0].text != "res") return fail(t_[0].column, "expected 'inv' or 'res'");
        auto txn = parse_txn(t_[1].text);
        if (!txn) return fail(t_[1].column, "expected a transaction T<n> with n >= 1");
        auto kind = parse_kind(t_[2].text);
        if (!kind) return fail(t_[2].column, "expected read, write, tryc or trya");
        return inv ? invocation(*txn, *kind, pending) : response(*txn, *kind, pending);
    }

private:
    std::optional<Event> invocation(std::uint32_t txn, OpKind kind, std::map<std::uint32_t, Action>& pending) {
        Action a;
        switch (kind) {
            case OpKind::read:
                if (!arity(4)) return std::nullopt;
                a = Action::read(TObjectId{std::string(t_[3].text)});
                break;
            case OpKind::write: {
                if (!arity(5)) return std::nullopt;
                auto v = parse_int(t_[4].text);
                if (!v) return fail(t_[4].column, "expected an integer value");
                a = Action::write(TObjectId{std::string(t_[3].text)}, *v);
                break;
            }
            case OpKind::try_commit:
                if (!arity(3)) return std::nullopt;
                a = Action::try_commit();
                break;
            case OpKind::try_abort:
                if (!arity(3)) return std::nullopt;
                a = Action::try_abort();
                break;
        }
        pending[txn] = a;
        return Event{TxnId{txn}, Phase::invocation, std::move(a), std::nullopt};
    }

    std::optional<Event> response(std::uint32_t txn, OpKind kind, std::map<std::uint32_t, Action>& pending) {
        if (!arity(4)) return std::nullopt;
        const Token& r = t_[3];
        std::optional<Value> result;
        if (r.text == "A") {
            result = Value::abort();
        } else {
            switch (kind) {
                case OpKind::read:
                    if (auto v = parse_int(r.text)) result = Value::integer(*v);
                    break;
                case OpKind::write:
                    if (r.text == "ok") result = Value::ok();
                    break;
                case OpKind::try_commit:
                    if (r.text == "C") result = Value::commit();
                    break;
                case OpKind::try_abort: break;
            }
        }
        if (!result) {
            static const std::map<OpKind, std::string> allowed = {
                {OpKind::read, "an integer or A"}, {OpKind::write, "ok or A"},
                {OpKind::try_commit, "C or A"},    {OpKind::try_abort, "A"}};
            return fail(r.column, std::string("expected ") + allowed.at(kind));
        }
        auto it = pending.find(txn);
        if (it == pending.end()) {
            errors_.push_back({line_, 0, "response of T" + std::to_string(txn) + " without a pending invocation"});
            return std::nullopt;
        }
        if (it->second.kind != kind) {
            errors_.push_back({line_, 0,
                               std::string("response '") + keyword(kind) + "' does not match pending '" +
                                   keyword(it->second.kind) + "' of T" + std::to_string(txn)});
            return std::nullopt;
        }
        Event e{TxnId{txn}, Phase::response, it->second, result};
        pending.erase(it);
        return e;
    }

    bool arity(std::size_t n) {
        if (t_.size() == n) return true;
        if (t_.size() > n) {
            fail(t_[n].column, "unexpected token '" + std::string(t_[n].text) + "'");
        } else {
            fail(t_.back().column + t_.back().text.size(), "missing operand");
        }
        return false;
    }

    std::optional<Event> fail(std::size_t column, std::string message) {
        errors_.push_back({line_, column, std::move(message)});
        return std::nullopt;
    }

    std::size_t line_;
    std::vector<Token> t_;
    std::vector<ParseError>& errors_;
};

}  // namespace

ParseResult parse_history(std::string_view text) {
    ParseResult out;
    std::vector<Event> events;
    std::vector<std::size_t> lines;
    std::map<std::uint32_t, Action> pending;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::vector<Token> tokens = tokenize(text.substr(pos, end - pos));
        if (!tokens.empty()) {
            LineParser p(line_no, std::move(tokens), out.errors);
            if (auto e = p.parse(pending)) {
                events.push_back(std::move(*e));
                lines.push_back(line_no);
            }
        }
        pos = end + 1;
    }
    if (!out.errors.empty()) return out;

    ValidationResult v = validate(std::move(events));
    for (const Violation& bad : v.violations) out.errors.push_back({lines[bad.index], 0, bad.reason});
    if (out.errors.empty()) out.history = std::move(v.history);
    return out;
}

std::string format_history(const History& h) {
    std::ostringstream os;
    for (const Event& e : h.events()) {
        os << (e.is_invocation() ? "inv " : "res ") << to_string(e.txn) << ' ' << keyword(e.action.kind);
        if (e.is_invocation()) {
            if (e.action.kind == OpKind::read || e.action.kind == OpKind::write) os << ' ' << e.action.object.name;
            if (e.action.kind == OpKind::write) os << ' ' << e.action.value;
        } else {
            os << ' ' << to_string(*e.result);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace duocheck
