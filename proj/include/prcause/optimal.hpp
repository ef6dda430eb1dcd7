#pragma once

#include "prcause/mdp.hpp"
#include "prcause/quality.hpp"
#include "prcause/rational.hpp"

#include <optional>
#include <string>

namespace prcause {

enum class Comparison { Exceeds, AtLeast };

struct OptimalResult {
    StateSet cause;
    Measure measure;
    Extended value;
    std::string method;
};

// Reachable non-effect states forming a singleton cause in the strict sense.
StateSet spr_states(const Mdp& m, const StateSet& eff);

// Cause states c of `cause` with Pr^max((not cause) U c) > 0.
StateSet front(const Mdp& m, const StateSet& cause);

struct CanonicalCause {
    StateSet cause;
    Rat recall;
    Extended covratio;
};

// Front of all singleton causes; recall- and ratio-optimal among SPR causes.
std::optional<CanonicalCause> canonical_cause(const Mdp& m, const StateSet& eff);

struct FscoreOptimal {
    StateSet cause;
    Rat fscore;
};

FscoreOptimal fscore_optimal_mc(const Mdp& mc, const StateSet& eff);

struct ThresholdResult {
    bool holds = false;
    std::optional<StateSet> cause;   // an SPR cause with f-score above the threshold
};

// Is there an SPR cause whose f-score exceeds (or reaches) `threshold`?
ThresholdResult spr_fscore_threshold(const Mdp& m, const StateSet& eff, const Rat& threshold,
                                     Comparison cmp = Comparison::Exceeds,
                                     std::optional<std::size_t> budget = std::nullopt);

std::optional<OptimalResult> gpr_optimal(const Mdp& m, const StateSet& eff, Measure measure,
                                         std::optional<std::size_t> budget = std::nullopt);

// Recall and ratio from the canonical cause, f-score by shortest paths on Markov chains
// and by enumeration otherwise.
std::optional<OptimalResult> spr_optimal(const Mdp& m, const StateSet& eff, Measure measure,
                                         std::optional<std::size_t> budget = std::nullopt);

bool gpr_threshold(const Mdp& m, const StateSet& eff, Measure measure, const Rat& threshold,
                   Comparison cmp = Comparison::AtLeast, std::optional<std::size_t> budget = std::nullopt);

}  // namespace prcause
