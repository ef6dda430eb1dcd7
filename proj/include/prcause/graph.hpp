#pragma once

#include "prcause/mdp.hpp"

#include <utility>
#include <vector>

namespace prcause {

// allowed[s][i] enables choice i of state s; an empty mask allows everything.
using ActionMask = std::vector<std::vector<char>>;

ActionMask full_action_mask(const Mdp& m);

struct Mec {
    StateSet states;
    std::set<std::pair<StateId, std::size_t>> stateActions;
};

// States reachable from `from` using allowed choices.
StateMask reachable_from(const Mdp& m, StateId from, const ActionMask& allowed = {});

// States that can reach `target` along paths whose intermediate states lie in `region`.
StateMask can_reach(const Mdp& m, const StateMask& target, const StateMask& region = {},
                    const ActionMask& allowed = {});

// Maximal end components of the sub-MDP induced by the states in `region` and the
// allowed choices (choices leaving the region are dropped).
std::vector<Mec> mec_decompose(const Mdp& m, const StateMask& region = {}, const ActionMask& allowed = {});

bool has_end_component(const Mdp& m);

// For states that can reach `target` with positive probability: the lowest-index allowed
// choice that has a successor strictly closer to the target; npos elsewhere (and at targets).
std::vector<std::size_t> attractor_choices(const Mdp& m, const StateMask& target, const ActionMask& allowed = {});

// Memoryless choices inside an end component that reach `goal` almost surely.
std::vector<std::size_t> mec_attractor(const Mdp& m, const Mec& mec, StateId goal);

// Origin of a choice in a collapsed model; choice == npos marks an added choice.
struct ChoiceOrigin {
    StateId state;
    std::size_t choice;
};

// Each MEC becomes one state whose choices are the allowed choices of its members that
// leave the MEC. States outside MECs keep their allowed choices.
struct Collapsed {
    Mdp mdp;
    std::vector<StateId> to_new;
    std::vector<StateId> mec_state;
    std::vector<std::vector<ChoiceOrigin>> origin;
};

Collapsed collapse_mecs(const Mdp& m, const std::vector<Mec>& mecs, const ActionMask& allowed = {});

}  // namespace prcause
