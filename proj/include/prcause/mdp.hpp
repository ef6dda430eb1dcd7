#pragma once

#include "prcause/rational.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace prcause {

using StateId = std::size_t;
using StateSet = std::set<StateId>;
using StateMask = std::vector<char>;

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Transition {
    StateId target;
    Rat prob;
};

struct Choice {
    std::string action;
    std::vector<Transition> dist;
};

// Finite MDP with exact transition probabilities. States without choices are terminal.
class Mdp {
public:
    StateId add_state(std::string name);

    // Merges repeated targets and drops zero entries; the distribution must sum to 1.
    std::size_t add_choice(StateId s, std::string action, std::vector<Transition> dist);

    void set_init(StateId s);

    std::size_t size() const { return names_.size(); }
    StateId init() const { return init_; }
    const std::string& name(StateId s) const { return names_.at(s); }
    std::optional<StateId> find(std::string_view name) const;
    StateId id(std::string_view name) const;

    const std::vector<Choice>& choices(StateId s) const { return choices_.at(s); }
    bool is_terminal(StateId s) const { return choices_.at(s).empty(); }
    bool is_markov_chain() const;

    std::optional<std::size_t> choice_index(StateId s, std::string_view action) const;
    std::string fresh_name(std::string_view base) const;

    StateMask mask(const StateSet& states) const;
    StateSet terminals() const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, StateId> index_;
    std::vector<std::vector<Choice>> choices_;
    StateId init_ = 0;
};

StateSet to_set(const StateMask& mask);

// Resolves comma separated state names.
StateSet parse_state_list(const Mdp& m, std::string_view names);
std::string format_state_set(const Mdp& m, const StateSet& states);

}  // namespace prcause
