#pragma once

#include "prcause/analysis.hpp"
#include "prcause/mdp.hpp"
#include "prcause/scheduler.hpp"

#include <optional>
#include <vector>

namespace prcause {

struct SspResult {
    Extended value;
    std::optional<MdScheduler> scheduler;   // absent for an infinite maximum
};

// Optimal expected weight accumulated (on visited states) before reaching `target`,
// over schedulers that reach `target` almost surely.
SspResult ssp_expected_weight(const Mdp& m, const std::vector<Rat>& weights, const StateSet& target, Opt mode);

// Pr_{max}(target) = 1 region.
StateMask almost_sure_region(const Mdp& m, const StateMask& target);

struct RatioResult {
    Extended value;
    Mdp reset_model;                        // m plus reset choices to the initial state
    std::optional<MdScheduler> scheduler;   // on reset_model
};

// inf / sup over schedulers with Pr(<>V) > 0 of Pr(<>U) / Pr(<>V), for an end-component-free m.
RatioResult ratio_extremal(const Mdp& m, const StateSet& u, const StateSet& v, Opt mode);

}  // namespace prcause
