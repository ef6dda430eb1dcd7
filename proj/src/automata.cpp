#include "prcause/automata.hpp"

#include "prcause/error.hpp"
#include "prcause/io.hpp"

#include <deque>
#include <map>
#include <optional>

namespace prcause {

namespace {

void validate_delta(const std::vector<std::string>& states, std::size_t initial,
                    const std::vector<std::vector<std::size_t>>& delta, std::size_t alphabet_size) {
    if (states.empty()) throw InputError("automaton has no states");
    if (initial >= states.size()) throw InputError("automaton initial state out of range");
    if (delta.size() != states.size()) throw InputError("automaton transition table has wrong size");
    for (std::size_t q = 0; q < delta.size(); ++q) {
        if (delta[q].size() != alphabet_size)
            throw InputError("automaton alphabet does not match the model at state '" + states[q] + "'");
        for (auto r : delta[q])
            if (r >= states.size()) throw InputError("automaton transition from '" + states[q] + "' is undefined");
    }
}

struct AutomatonText {
    std::vector<std::string> states;
    std::optional<std::size_t> initial;
    std::vector<std::vector<std::size_t>> delta;
    std::vector<std::size_t> fallback;
    std::vector<std::pair<std::set<std::size_t>, std::set<std::size_t>>> pairs;
    std::set<std::size_t> accepting;
    bool has_accepting = false;
};

std::set<std::size_t> parse_set(const std::string& text, const std::map<std::string, std::size_t>& index, int line,
                                int column) {
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
        throw InputError("expected a set {q,...}", line, column);
    std::set<std::size_t> out;
    std::string body = text.substr(1, text.size() - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto comma = body.find(',', pos);
        std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!item.empty()) {
            auto it = index.find(item);
            if (it == index.end()) throw InputError("unknown automaton state '" + item + "'", line, column);
            out.insert(it->second);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

AutomatonText parse_automaton(std::string_view text, const Mdp& alphabet, std::string_view header) {
    AutomatonText a;
    std::map<std::string, std::size_t> index;
    bool seen_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        int line = static_cast<int>(++line_no);
        auto tok = detail::tokenize(raw);
        if (tok.empty()) continue;
        if (!seen_header) {
            if (tok[0].text != header || tok.size() != 1)
                throw InputError("expected header '" + std::string(header) + "'", line, tok[0].column);
            seen_header = true;
            continue;
        }
        const std::string& kw = tok[0].text;
        if (kw == "state") {
            if (tok.size() < 2 || tok.size() > 3) throw InputError("expected 'state NAME [init]'", line, tok[0].column);
            if (index.count(tok[1].text)) throw InputError("duplicate automaton state", line, tok[1].column);
            std::size_t q = a.states.size();
            index[tok[1].text] = q;
            a.states.push_back(tok[1].text);
            a.delta.emplace_back(alphabet.size(), npos);
            a.fallback.push_back(npos);
            if (tok.size() == 3) {
                if (tok[2].text != "init") throw InputError("unknown flag '" + tok[2].text + "'", line, tok[2].column);
                if (a.initial) throw InputError("second initial automaton state", line, tok[2].column);
                a.initial = q;
            }
        } else if (kw == "edge") {
            if (tok.size() != 4) throw InputError("expected 'edge FROM LETTER TO'", line, tok[0].column);
            auto from = index.find(tok[1].text);
            if (from == index.end()) throw InputError("unknown automaton state '" + tok[1].text + "'", line, tok[1].column);
            auto to = index.find(tok[3].text);
            if (to == index.end()) throw InputError("unknown automaton state '" + tok[3].text + "'", line, tok[3].column);
            if (tok[2].text == "*") {
                if (a.fallback[from->second] != npos) throw InputError("second default edge", line, tok[2].column);
                a.fallback[from->second] = to->second;
            } else {
                auto letter = alphabet.find(tok[2].text);
                if (!letter) throw InputError("letter '" + tok[2].text + "' is not a model state", line, tok[2].column);
                auto& slot = a.delta[from->second][*letter];
                if (slot != npos) throw InputError("nondeterministic edge", line, tok[2].column);
                slot = to->second;
            }
        } else if (kw == "pair" && header == "dra") {
            if (tok.size() != 3 || tok[1].text.rfind("L=", 0) != 0 || tok[2].text.rfind("K=", 0) != 0)
                throw InputError("expected 'pair L={...} K={...}'", line, tok[0].column);
            a.pairs.emplace_back(parse_set(tok[1].text.substr(2), index, line, tok[1].column),
                                 parse_set(tok[2].text.substr(2), index, line, tok[2].column));
        } else if (kw == "accepting" && header == "dfa") {
            if (tok.size() != 2) throw InputError("expected 'accepting {...}'", line, tok[0].column);
            a.accepting = parse_set(tok[1].text, index, line, tok[1].column);
            a.has_accepting = true;
        } else {
            throw InputError("unknown keyword '" + kw + "'", line, tok[0].column);
        }
    }
    if (!seen_header) throw InputError("empty automaton", 1, 1);
    if (!a.initial) throw InputError("automaton has no initial state", 1, 1);
    for (std::size_t q = 0; q < a.states.size(); ++q)
        for (std::size_t l = 0; l < alphabet.size(); ++l) {
            if (a.delta[q][l] != npos) continue;
            if (a.fallback[q] == npos)
                throw InputError("no edge from '" + a.states[q] + "' on letter '" + alphabet.name(l) + "'");
            a.delta[q][l] = a.fallback[q];
        }
    return a;
}

}  // namespace

void Dra::validate(std::size_t alphabet_size) const {
    validate_delta(states, initial, delta, alphabet_size);
    if (pairs.empty()) throw InputError("Rabin automaton needs at least one pair");
    for (const auto& p : pairs)
        for (const auto* set : {&p.finite, &p.infinite})
            for (auto q : *set)
                if (q >= states.size()) throw InputError("Rabin pair refers to an unknown state");
}

void Dfa::validate(std::size_t alphabet_size) const {
    validate_delta(states, initial, delta, alphabet_size);
    if (accepting.size() != states.size()) throw InputError("accepting flags have wrong size");
}

bool Dfa::is_prefix_free() const {
    std::size_t n = states.size();
    for (std::size_t start = 0; start < n; ++start) {
        if (!accepting[start]) continue;
        std::vector<char> seen(n, 0);
        std::deque<std::size_t> queue;
        for (auto r : delta[start])
            if (!seen[r]) {
                seen[r] = 1;
                queue.push_back(r);
            }
        while (!queue.empty()) {
            auto q = queue.front();
            queue.pop_front();
            if (accepting[q]) return false;
            for (auto r : delta[q])
                if (!seen[r]) {
                    seen[r] = 1;
                    queue.push_back(r);
                }
        }
    }
    return true;
}

Dra parse_dra(std::string_view text, const Mdp& alphabet) {
    auto a = parse_automaton(text, alphabet, "dra");
    Dra d;
    d.states = std::move(a.states);
    d.initial = *a.initial;
    d.delta = std::move(a.delta);
    for (auto& [l, k] : a.pairs) d.pairs.push_back({std::move(l), std::move(k)});
    d.validate(alphabet.size());
    return d;
}

Dfa parse_dfa(std::string_view text, const Mdp& alphabet) {
    auto a = parse_automaton(text, alphabet, "dfa");
    if (!a.has_accepting) throw InputError("deterministic finite automaton needs an 'accepting' line");
    Dfa d;
    d.states = std::move(a.states);
    d.initial = *a.initial;
    d.delta = std::move(a.delta);
    d.accepting.assign(d.states.size(), 0);
    for (auto q : a.accepting) d.accepting[q] = 1;
    d.validate(alphabet.size());
    return d;
}

Dra eventually_dra(const Mdp& alphabet, const StateSet& target) {
    Dra d;
    d.states = {"wait", "seen"};
    d.initial = 0;
    d.delta.assign(2, std::vector<std::size_t>(alphabet.size(), 0));
    for (std::size_t l = 0; l < alphabet.size(); ++l) {
        d.delta[0][l] = target.count(l) ? 1 : 0;
        d.delta[1][l] = 1;
    }
    d.pairs.push_back({{}, {1}});
    return d;
}

Dfa first_visit_dfa(const Mdp& alphabet, const StateSet& cause) {
    Dfa d;
    d.states = {"search", "hit", "done"};
    d.initial = 0;
    d.delta.assign(3, std::vector<std::size_t>(alphabet.size(), 2));
    for (std::size_t l = 0; l < alphabet.size(); ++l) d.delta[0][l] = cause.count(l) ? 1 : 0;
    d.accepting = {0, 1, 0};
    return d;
}

}  // namespace prcause
