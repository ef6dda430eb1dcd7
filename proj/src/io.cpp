#include "prcause/io.hpp"

#include "prcause/error.hpp"
#include "prcause/graph.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

namespace prcause {

namespace detail {

std::vector<Token> tokenize(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
    }
    return out;
}

}  // namespace detail

namespace {

using detail::Token;

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    return lines;
}

Rat fraction_at(const Token& t, int line) {
    try {
        return parse_rational(t.text);
    } catch (const InputError& e) {
        throw InputError(e.what(), line, t.column);
    }
}

}  // namespace

Mdp parse_mdp(std::string_view text, Unreachable policy, std::vector<std::string>* warnings) {
    struct PendingTrans {
        int line;
        int column;
        StateId source;
        std::string action;
        StateId target;
        Rat prob;
    };
    Mdp m;
    bool chain = false;
    bool header = false;
    std::optional<StateId> init;
    std::vector<char> declared_terminal;
    std::vector<PendingTrans> trans;

    auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        int line = static_cast<int>(ln) + 1;
        auto tok = detail::tokenize(lines[ln]);
        if (tok.empty()) continue;
        const std::string& kw = tok[0].text;
        if (!header) {
            if (kw != "mdp" && kw != "mc") throw InputError("expected header 'mdp' or 'mc'", line, tok[0].column);
            if (tok.size() != 1) throw InputError("unexpected token after header", line, tok[1].column);
            chain = kw == "mc";
            header = true;
            continue;
        }
        if (kw == "state") {
            if (tok.size() < 2) throw InputError("state needs a name", line, tok[0].column);
            StateId s;
            try {
                s = m.add_state(tok[1].text);
            } catch (const InputError& e) {
                throw InputError(e.what(), line, tok[1].column);
            }
            declared_terminal.push_back(0);
            for (std::size_t i = 2; i < tok.size(); ++i) {
                if (tok[i].text == "init") {
                    if (init) throw InputError("second initial state", line, tok[i].column);
                    init = s;
                } else if (tok[i].text == "terminal") {
                    declared_terminal[s] = 1;
                } else {
                    throw InputError("unknown state flag '" + tok[i].text + "'", line, tok[i].column);
                }
            }
        } else if (kw == "trans") {
            if (!(tok.size() == 5 || (chain && tok.size() == 4)))
                throw InputError("trans expects " + std::string(chain ? "[ACTION] " : "ACTION ") + "and STATE TARGET P/Q",
                                 line, tok[0].column);
            bool has_action = tok.size() == 5;
            const Token& src = tok[1];
            const Token& tgt = tok[has_action ? 3 : 2];
            const Token& prob = tok[has_action ? 4 : 3];
            auto s = m.find(src.text);
            if (!s) throw InputError("unknown state '" + src.text + "'", line, src.column);
            auto t = m.find(tgt.text);
            if (!t) throw InputError("unknown state '" + tgt.text + "'", line, tgt.column);
            trans.push_back({line, tok[0].column, *s, has_action ? tok[2].text : std::string("step"), *t,
                             fraction_at(prob, line)});
        } else {
            throw InputError("unknown keyword '" + kw + "'", line, tok[0].column);
        }
    }
    if (!header) throw InputError("empty model", 1, 1);
    if (m.size() == 0) throw InputError("model declares no states", 1, 1);
    if (!init) throw InputError("no initial state declared", 1, 1);
    m.set_init(*init);

    // Group rows by (state, action) in order of first appearance.
    std::vector<std::tuple<StateId, std::string, int, std::vector<Transition>>> rows;
    std::map<std::pair<StateId, std::string>, std::size_t> row_of;
    for (auto& t : trans) {
        if (declared_terminal[t.source])
            throw InputError("terminal state '" + m.name(t.source) + "' has a transition", t.line, t.column);
        auto key = std::make_pair(t.source, t.action);
        auto it = row_of.find(key);
        if (it == row_of.end()) {
            it = row_of.emplace(key, rows.size()).first;
            rows.emplace_back(t.source, t.action, t.line, std::vector<Transition>{});
        }
        std::get<3>(rows[it->second]).push_back({t.target, t.prob});
    }
    for (auto& [s, action, line, dist] : rows) {
        if (chain && m.choices(s).size() == 1)
            throw InputError("state '" + m.name(s) + "' has two actions in a Markov chain", line, 1);
        try {
            m.add_choice(s, action, dist);
        } catch (const InputError& e) {
            throw InputError(e.what(), line, 1);
        }
    }
    auto reach = reachable_from(m, m.init());
    for (StateId s = 0; s < m.size(); ++s) {
        if (reach[s]) continue;
        std::string msg = "state '" + m.name(s) + "' is unreachable from the initial state";
        if (policy == Unreachable::Error) throw InputError(msg);
        if (warnings) warnings->push_back(msg);
    }
    return m;
}

std::string write_mdp(const Mdp& m) {
    std::ostringstream out;
    bool chain = m.is_markov_chain();
    out << (chain ? "mc" : "mdp") << "\n";
    for (StateId s = 0; s < m.size(); ++s) {
        out << "state " << m.name(s);
        if (s == m.init()) out << " init";
        if (m.is_terminal(s)) out << " terminal";
        out << "\n";
    }
    for (StateId s = 0; s < m.size(); ++s)
        for (const auto& c : m.choices(s))
            for (const auto& t : c.dist)
                out << "trans " << m.name(s) << " " << c.action << " " << m.name(t.target) << " "
                    << to_string(t.prob) << "\n";
    return out.str();
}

MrScheduler parse_scheduler(std::string_view text, const Mdp& m) {
    MrScheduler out;
    out.weights.resize(m.size());
    std::vector<char> seen(m.size(), 0);
    for (StateId s = 0; s < m.size(); ++s) out.weights[s].assign(m.choices(s).size(), Rat(0));
    bool header = false;
    auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        int line = static_cast<int>(ln) + 1;
        auto tok = detail::tokenize(lines[ln]);
        if (tok.empty()) continue;
        if (!header) {
            if (tok[0].text != "scheduler" || tok.size() != 1)
                throw InputError("expected header 'scheduler'", line, tok[0].column);
            header = true;
            continue;
        }
        if (tok[0].text != "choose" || tok.size() != 4)
            throw InputError("expected 'choose STATE ACTION P/Q'", line, tok[0].column);
        auto s = m.find(tok[1].text);
        if (!s) throw InputError("unknown state '" + tok[1].text + "'", line, tok[1].column);
        auto a = m.choice_index(*s, tok[2].text);
        if (!a) throw InputError("action '" + tok[2].text + "' not enabled at '" + tok[1].text + "'", line, tok[2].column);
        out.weights[*s][*a] += fraction_at(tok[3], line);
        seen[*s] = 1;
    }
    if (!header) throw InputError("empty scheduler file", 1, 1);
    for (StateId s = 0; s < m.size(); ++s) {
        if (m.is_terminal(s)) continue;
        if (!seen[s]) {
            out.weights[s][0] = 1;
            continue;
        }
        Rat sum = 0;
        for (const auto& w : out.weights[s]) sum += w;
        if (sum != 1) throw InputError("scheduler weights at state '" + m.name(s) + "' sum to " + to_string(sum));
    }
    return out;
}

std::string write_scheduler(const Mdp& m, const MrScheduler& s) {
    std::ostringstream out;
    out << "scheduler\n";
    for (StateId st = 0; st < m.size(); ++st)
        for (std::size_t i = 0; i < m.choices(st).size(); ++i)
            if (s.weights[st][i] != 0)
                out << "choose " << m.name(st) << " " << m.choices(st)[i].action << " " << to_string(s.weights[st][i])
                    << "\n";
    return out.str();
}

}  // namespace prcause
