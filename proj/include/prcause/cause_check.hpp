#pragma once

#include "prcause/mdp.hpp"
#include "prcause/scheduler.hpp"
#include "prcause/transforms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace prcause {

enum class Inequality { Strict, NonStrict };

enum class CauseKind { Spr, Gpr };

struct CheckOptions {
    Inequality inequality = Inequality::Strict;
    // Continue with the reachable front of the cause instead of rejecting it.
    bool relaxed_minimality = false;
    // Face budget of the randomized search; PRCAUSE_BUDGET overrides the default.
    std::optional<std::size_t> budget;
};

std::size_t default_face_budget();

// Cause states c with Pr^max((not Cause) U c) = 0.
StateSet check_minimality(const Mdp& m, const StateSet& cause);

enum class SprBranch { Below, Above, TieUnreachable, TieReachable };

struct SprReport {
    StateId state;
    Rat max_effect;    // Pr^max(<>Eff) once every cause state is weighted
    Rat weight;        // Pr^min_c(<>Eff)
    SprBranch branch;
    bool passes;
};

// Replay of a witness on the source model.
struct WitnessReplay {
    Rat effect;          // Pr(<>Eff)
    Rat condition;       // probability of the conditioning event
    Rat joint;           // probability of condition and effect
    Rat conditional() const { return joint / condition; }
};

struct Witness {
    MrScheduler reduced;          // on the end-component-free model the check ran in
    FmScheduler lifted;           // two modes on the source model
    std::optional<StateId> state; // cause state of a violated singleton condition
    WitnessReplay replay;
};

struct CauseVerdict {
    bool is_cause = false;
    StateSet minimality_failures;
    StateSet checked_cause;        // cause after relaxed minimality pruning
    std::string violated;          // "", "minimality", "spr" or "gpr"
    std::vector<SprReport> reports;
    std::optional<Witness> witness;
    std::optional<Rat> conditional;     // Markov chain checks
    std::optional<Rat> unconditional;
};

SprReport spr_singleton_report(const Mdp& m, StateId c, const StateSet& eff,
                               Inequality inequality = Inequality::Strict);
bool spr_singleton_check(const Mdp& m, StateId c, const StateSet& eff);

CauseVerdict check_spr(const Mdp& m, const StateSet& cause, const StateSet& eff, const CheckOptions& options = {});

struct ExistingCause {
    StateId state;
    Rat precision;
};

// A reachable state passing the singleton check with maximal Pr^min(<>Eff).
std::optional<ExistingCause> exists_cause(const Mdp& m, const StateSet& eff);

CauseVerdict check_gpr_mc(const Mdp& m, const StateSet& cause, const StateSet& eff,
                          const CheckOptions& options = {});

// Frequency variables x_{s,i} of a canonical model. Violation of the cause condition:
// f = sum_c w_c x_c - x_Cause (sum_c w_c x_c + x_unc) <= 0 with x_Cause > 0
// (strict inequality), or f < 0 (non-strict).
struct QuadraticSystem {
    Mdp mdp;
    StateSet cause;
    std::vector<Rat> weight;        // per state; zero outside the cause
    StateId uncovered;
    Inequality inequality = Inequality::Strict;

    Rat cause_mass(const FrequencyVector& x) const;
    Rat covered_mass(const FrequencyVector& x) const;
    Rat uncovered_mass(const FrequencyVector& x) const;
    Rat quadratic(const FrequencyVector& x) const;
    bool satisfies_flow(const FrequencyVector& x) const;
    // Feasible point of the system, i.e. the frequencies refute the cause.
    bool is_solution(const FrequencyVector& x) const;
};

QuadraticSystem build_quadratic_system(const CanonicalMdp& cm, Inequality inequality = Inequality::Strict);

// Exact search over the faces of the frequency polytope with dimension at most two.
std::optional<FrequencyVector> solve_quadratic_system(const QuadraticSystem& qs,
                                                      std::optional<std::size_t> budget = std::nullopt);

CauseVerdict check_gpr(const Mdp& m, const StateSet& cause, const StateSet& eff, const CheckOptions& options = {});

// Makes every "tau" choice deterministic while keeping the violation.
MrScheduler round_tau_witness(const QuadraticSystem& qs, const MrScheduler& u);

// q_i = p_i / (1 - sum_{j<i} p_j)
std::vector<Rat> sequential_exit_probabilities(const std::vector<Rat>& p);

// MR scheduler on the model before MEC collapse with the same distribution over leaving
// the end components as `reduced` on the quotient. End components whose state takes "tau"
// are never left.
MrScheduler lift_through_quotient(const Mdp& pre, const Quotient& quotient, const MrScheduler& reduced);

// Two-mode scheduler on the source model: `before` follows `pre_scheduler` (a scheduler on
// a model sharing state ids and choice order with `original` outside the cause) until a
// cause state is entered; `after` minimizes the effect probability.
FmScheduler two_mode_scheduler(const Mdp& original, const StateSet& cause, const StateSet& eff,
                               const MrScheduler& pre_scheduler);

}  // namespace prcause
