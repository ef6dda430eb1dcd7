#pragma once

#include "prcause/automata.hpp"
#include "prcause/graph.hpp"
#include "prcause/mdp.hpp"

#include <map>
#include <optional>
#include <vector>

namespace prcause {

// Where each state of a source model went. States without an image map to npos.
struct StateMap {
    std::vector<StateId> to_new;
    std::multimap<StateId, StateId> to_old;

    static StateMap identity(std::size_t n);
    static StateMap from_forward(std::vector<StateId> to_new);
    StateId operator()(StateId s) const { return to_new.at(s); }
    // this followed by next
    StateMap then(const StateMap& next) const;
};

struct WminResult {
    Mdp mdp;
    StateMap map;
    std::map<StateId, Rat> weight;          // per cause state of the source model
    StateId eff_target = npos;              // eff state receiving the weight
    std::optional<StateId> noeff_target;    // fresh terminal, present when some weight < 1
};

// Cause states keep a single action "gamma" leading to the lowest-index effect state with
// probability Pr^min_c(<>eff) and to a fresh non-effect terminal otherwise.
WminResult wmin_cause(const Mdp& m, const StateSet& cause, const StateSet& eff);

struct Quotient {
    Mdp mdp;
    StateMap map;
    StateId bottom;
    std::vector<StateId> mec_state;                    // per MEC of the source model
    std::vector<Mec> mecs;
    std::vector<std::vector<ChoiceOrigin>> origin;     // "tau" choices have origin choice npos
};

// Each MEC becomes one state with its exits plus "tau" to `bottom`. Without a given
// bottom a fresh terminal is added.
Quotient mec_quotient(const Mdp& m, std::optional<StateId> bottom = std::nullopt);

struct PruneResult {
    Mdp mdp;
    StateMap map;
};

// Drops states unreachable from the initial state, except those in `keep`.
PruneResult prune_unreachable(const Mdp& m, const StateSet& keep = {});

struct CanonicalMdp {
    Mdp mdp;
    StateId eff_cov;
    StateId eff_unc;
    StateId noeff_fp;
    StateId noeff_tn;
    StateSet cause;                      // ids in mdp
    std::map<StateId, Rat> weight;       // keyed by ids in mdp
    StateMap map;                        // source model to mdp

    // Intermediate models kept for translating schedulers back.
    Mdp split;                           // source ids plus the four terminals
    Quotient quotient;                   // of split
    StateMap prune;                      // quotient.mdp to mdp
    StateMap split_map;                  // source model to split

    StateSet effect() const { return {eff_cov, eff_unc}; }
};

// Weighted cause states, four designated terminals, MECs collapsed, unreachable parts dropped.
CanonicalMdp canonical_form(const Mdp& m, const StateSet& cause, const StateSet& eff);

// Two copies; the successors of a state in copy 0 lie in copy 1 once the state is a
// trigger state or already in copy 1. Only pairs reachable from (init, 0) are built.
struct SplitModel {
    Mdp mdp;
    std::vector<StateId> base;
    std::vector<char> copy;
    StateMap map;                        // to copy 0 where reachable
};

SplitModel cause_split(const Mdp& m, const StateSet& trigger);

struct ActionSplit {
    Mdp mdp;
    StateId split_state;                 // copy of s in which only the action is enabled
    StateSet effect;                     // effect states of both copies
    StateMap to_with;                    // source model to the copy keeping only the action
    StateMap to_without;                 // source model to the copy without the action
};

ActionSplit action_causality_mdp(const Mdp& m, StateId s, std::string_view action, const StateSet& eff);

// Letter read on entering a state; empty means the state id itself.
using Labels = std::vector<std::size_t>;

struct Product {
    Mdp mdp;
    std::vector<StateId> base;
    std::vector<std::size_t> automaton;
    StateMap map;                        // to_old holds the projection
};

struct DraProduct : Product {
    std::vector<std::pair<StateMask, StateMask>> pairs;   // (L, K) over product states
};

struct DfaProduct : Product {
    StateSet accepting;
};

DraProduct product_dra(const Mdp& m, const Dra& a, const Labels& labels = {});
DfaProduct product_dfa(const Mdp& m, const Dfa& a, const Labels& labels = {});

// Gives every terminal state a "stay" self-loop.
Mdp stutter_terminals(const Mdp& m);

}  // namespace prcause
