#include "prcause/mdp.hpp"

#include "prcause/error.hpp"

#include <algorithm>
#include <map>

namespace prcause {

StateId Mdp::add_state(std::string name) {
    if (name.empty()) throw InputError("empty state name");
    if (index_.count(name)) throw InputError("duplicate state '" + name + "'");
    StateId s = names_.size();
    index_.emplace(name, s);
    names_.push_back(std::move(name));
    choices_.emplace_back();
    return s;
}

std::size_t Mdp::add_choice(StateId s, std::string action, std::vector<Transition> dist) {
    if (s >= size()) throw PreconditionError("add_choice: unknown state");
    for (const auto& c : choices_[s])
        if (c.action == action) throw InputError("duplicate action '" + action + "' at state '" + names_[s] + "'");
    std::map<StateId, Rat> merged;
    Rat sum = 0;
    for (auto& t : dist) {
        if (t.target >= size()) throw PreconditionError("add_choice: unknown target");
        if (t.prob < 0) throw InputError("negative probability at state '" + names_[s] + "'");
        merged[t.target] += t.prob;
        sum += t.prob;
    }
    if (sum != 1)
        throw InputError("non-stochastic row: state '" + names_[s] + "', action '" + action + "' sums to " +
                         to_string(sum));
    Choice c{std::move(action), {}};
    for (auto& [t, p] : merged)
        if (p != 0) c.dist.push_back({t, p});
    choices_[s].push_back(std::move(c));
    return choices_[s].size() - 1;
}

void Mdp::set_init(StateId s) {
    if (s >= size()) throw PreconditionError("set_init: unknown state");
    init_ = s;
}

std::optional<StateId> Mdp::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

StateId Mdp::id(std::string_view name) const {
    auto s = find(name);
    if (!s) throw InputError("unknown state '" + std::string(name) + "'");
    return *s;
}

bool Mdp::is_markov_chain() const {
    return std::all_of(choices_.begin(), choices_.end(), [](const auto& cs) { return cs.size() <= 1; });
}

std::optional<std::size_t> Mdp::choice_index(StateId s, std::string_view action) const {
    const auto& cs = choices_.at(s);
    for (std::size_t i = 0; i < cs.size(); ++i)
        if (cs[i].action == action) return i;
    return std::nullopt;
}

std::string Mdp::fresh_name(std::string_view base) const {
    std::string candidate(base);
    for (int k = 1; index_.count(candidate); ++k) candidate = std::string(base) + "_" + std::to_string(k);
    return candidate;
}

StateMask Mdp::mask(const StateSet& states) const {
    StateMask m(size(), 0);
    for (StateId s : states) m.at(s) = 1;
    return m;
}

StateSet Mdp::terminals() const {
    StateSet out;
    for (StateId s = 0; s < size(); ++s)
        if (is_terminal(s)) out.insert(s);
    return out;
}

StateSet to_set(const StateMask& mask) {
    StateSet out;
    for (StateId s = 0; s < mask.size(); ++s)
        if (mask[s]) out.insert(s);
    return out;
}

StateSet parse_state_list(const Mdp& m, std::string_view names) {
    StateSet out;
    std::size_t pos = 0;
    while (pos <= names.size()) {
        auto comma = names.find(',', pos);
        auto item = names.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.insert(m.id(item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string format_state_set(const Mdp& m, const StateSet& states) {
    std::string out = "{";
    bool first = true;
    for (StateId s : states) {
        if (!first) out += ",";
        out += m.name(s);
        first = false;
    }
    return out + "}";
}

}  // namespace prcause
