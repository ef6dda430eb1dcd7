#pragma once

#include "prcause/mdp.hpp"
#include "prcause/scheduler.hpp"

#include <map>
#include <optional>
#include <vector>

namespace prcause {

enum class Opt { Min, Max };

struct ReachResult {
    std::vector<Rat> value;
    MdScheduler scheduler;
};

ReachResult max_reach_prob(const Mdp& m, const StateSet& target);
ReachResult min_reach_prob(const Mdp& m, const StateSet& target);

// max over schedulers of Pr((not avoid\{c}) U c)
Rat max_constrained_reach(const Mdp& m, const StateSet& avoid, StateId c);

// Optimal expected terminal value on a model without end components.
// Terminal states missing from `value` count as 0.
ReachResult optimize_terminal_value(const Mdp& m, const std::map<StateId, Rat>& value, Opt mode);

// Finite Markov chain induced by a scheduler; label[v] is the model state of node v
// and mode[v] the memory mode.
struct InducedChain {
    Mdp chain;
    std::vector<StateId> label;
    std::vector<std::size_t> mode;
};

InducedChain induced_chain(const Mdp& m, const FmScheduler& s);
InducedChain induced_chain(const Mdp& m, const MrScheduler& s);

// (region U target); an absent region means "eventually target".
struct PathEvent {
    std::optional<StateSet> region;
    StateSet target;

    static PathEvent eventually(StateSet target) { return {std::nullopt, std::move(target)}; }
    static PathEvent until(StateSet region, StateSet target) { return {std::move(region), std::move(target)}; }
};

Rat reach_prob_under(const Mdp& m, const FmScheduler& s, const PathEvent& event);
Rat reach_prob_under(const Mdp& m, const MrScheduler& s, const PathEvent& event);

// Pr(region U (target and afterwards eventually `then`)); for terminal `then` this is
// the probability of (region U target) together with eventually `then`.
Rat joint_prob_under(const Mdp& m, const FmScheduler& s, const PathEvent& event, const StateSet& then);

FrequencyVector scheduler_frequencies(const Mdp& m, const MrScheduler& s);

// x_{s,a}/x_s, first choice where x_s = 0.
MrScheduler scheduler_from_frequencies(const Mdp& m, const FrequencyVector& f);

MrScheduler convex_combine(const Mdp& m, const MrScheduler& s1, const MrScheduler& s2, const Rat& lambda);

namespace detail {

using Rows = std::vector<std::vector<Transition>>;

Rows induced_rows(const Mdp& m, const MrScheduler& s);
Rows md_rows(const Mdp& m, const MdScheduler& s);

// Expected stop value collected on first reaching a stop state while staying inside
// `region` (empty region: everywhere). Rows of stop states are ignored.
std::vector<Rat> absorb_value(const Rows& rows, const StateMask& stop, const std::vector<Rat>& stop_value,
                              const StateMask& region = {});

StateMask mask_of_labels(const InducedChain& ic, const StateSet& states);

}  // namespace detail

}  // namespace prcause
