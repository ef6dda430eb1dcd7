#pragma once

#include "prcause/cause_check.hpp"
#include "prcause/mdp.hpp"
#include "prcause/scheduler.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace prcause {

// Nonterminal states s0 (initial), s1, ... and the terminals "eff" and "noeff".
// With `ec_free` every transition goes to a state with a larger index.
Mdp generate_random_mdp(std::uint64_t seed, std::size_t max_states, std::size_t max_actions, bool ec_free);

// MR schedulers whose weights are multiples of 1/resolution; resolution 0 gives the MD schedulers.
struct SchedulerGrid {
    std::size_t resolution = 4;

    // Visits every scheduler until `visit` returns false.
    void for_each(const Mdp& m, const std::function<bool(const MrScheduler&)>& visit) const;
    std::size_t size(const Mdp& m) const;
};

// First grid scheduler violating the strict condition, evaluated exactly on an
// end-component-free model.
std::optional<MrScheduler> refute_pr_oracle(const Mdp& m, const StateSet& cause, const StateSet& eff, CauseKind kind,
                                            const SchedulerGrid& grid);

// Minima over grid schedulers reaching the effect with positive probability.
struct QualityEnvelope {
    std::optional<Rat> recall;
    std::optional<Extended> covratio;
    std::optional<Rat> fscore;
    std::optional<MrScheduler> recall_witness;
    std::optional<MrScheduler> covratio_witness;
    std::optional<MrScheduler> fscore_witness;
};

QualityEnvelope quality_envelope(const Mdp& m, const StateSet& cause, const StateSet& eff, const SchedulerGrid& grid);

}  // namespace prcause
