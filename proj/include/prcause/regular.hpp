#pragma once

#include "prcause/automata.hpp"
#include "prcause/cause_check.hpp"
#include "prcause/graph.hpp"
#include "prcause/mdp.hpp"
#include "prcause/optimal.hpp"
#include "prcause/quality.hpp"
#include "prcause/transforms.hpp"

#include <map>
#include <optional>
#include <vector>

namespace prcause {

using RabinMasks = std::vector<std::pair<StateMask, StateMask>>;

struct QualitativeRabin {
    bool can_accept;   // some scheduler staying in the MEC accepts almost surely
    bool can_reject;   // some scheduler staying in the MEC accepts with probability 0
};

QualitativeRabin qualitative_rabin(const Mdp& m, const Mec& mec, const RabinMasks& pairs);

// End-component-free model of a product with a before/after-cause split. Every MEC state
// leads to eff_unc/noeff_tn (before the cause) or eff_cov/noeff_fp (after the cause).
struct RegularTransform {
    Mdp mdp;
    StateId eff_cov;
    StateId eff_unc;
    StateId noeff_fp;
    StateId noeff_tn;
    StateSet cause;                          // cause states of the transform
    std::map<StateId, StateSet> cause_of;    // model state to its cause states
    std::vector<StateId> base;               // model state per transform state; npos if collapsed or fresh

    StateSet effect() const { return {eff_cov, eff_unc}; }
};

// Effect given by a Rabin automaton, cause by a set of model states. `labels` maps model
// states to letters when the model is not the automaton's alphabet (e.g. an induced chain).
RegularTransform regular_effect_transform(const Mdp& m, const Dra& effect, const StateSet& cause,
                                          const Labels& labels = {});

CauseVerdict check_reachability_gpr(const Mdp& m, const Dra& effect, const StateSet& cause,
                                    const CheckOptions& options = {}, const Labels& labels = {});
CauseVerdict check_reachability_spr(const Mdp& m, const Dra& effect, const StateSet& cause,
                                    const CheckOptions& options = {}, const Labels& labels = {});

// Per cause state: the effect is not yet certain on reaching it.
std::map<StateId, bool> temp_prio_check(const Mdp& m, const Dra& effect, const StateSet& cause,
                                        const Labels& labels = {});

MeasureResult reachability_quality(const Mdp& m, const Dra& effect, const StateSet& cause, Measure measure,
                                   const Labels& labels = {});

std::optional<CanonicalCause> canonical_reachability_cause(const Mdp& m, const Dra& effect,
                                                           const Labels& labels = {});

struct RegularSearchOptions {
    bool temp_prio = true;          // every cause state leaves the effect uncertain
    StateSet excluded;              // states never used as cause candidates
    std::optional<std::size_t> budget;
};

std::optional<OptimalResult> reachability_optimal(const Mdp& m, const Dra& effect, Measure measure, CauseKind kind,
                                                  const RegularSearchOptions& options = {},
                                                  const Labels& labels = {});

// Cause given by a prefix-free automaton of minimal good prefixes.
RegularTransform cosafety_transform(const Mdp& m, const Dra& effect, const Dfa& cause, const Labels& labels = {});

CauseVerdict check_cosafety_gpr(const Mdp& m, const Dra& effect, const Dfa& cause, const CheckOptions& options = {},
                                const Labels& labels = {});

enum class Tristate { No, Unknown, Yes };

std::string to_string(Tristate t);

struct CosafetySprResult {
    Tristate verdict = Tristate::Unknown;
    // Markov chains: the violating product state with its conditional and unconditional value.
    std::optional<StateId> state;
    std::optional<Rat> conditional;
    std::optional<Rat> unconditional;
};

// No when the transform refutes the strict condition; on Markov chains Yes/No per good prefix;
// otherwise Unknown.
CosafetySprResult check_cosafety_spr_necessary(const Mdp& m, const Dra& effect, const Dfa& cause,
                                               const Labels& labels = {});

bool temp_prio2_check(const Mdp& m, const Dra& effect, const Dfa& cause, const Labels& labels = {});

MeasureResult cosafety_quality(const Mdp& m, const Dra& effect, const Dfa& cause, Measure measure,
                               const Labels& labels = {});

}  // namespace prcause
