#pragma once

#include "prcause/mdp.hpp"

#include <string>
#include <vector>

namespace prcause {

// Choice index per state; entries of terminal states are ignored.
using MdScheduler = std::vector<std::size_t>;

struct MrScheduler {
    // weights[s][i] is the probability of choice i at state s.
    std::vector<std::vector<Rat>> weights;

    static MrScheduler from_md(const Mdp& m, const MdScheduler& md);
    // Picks the first choice everywhere.
    static MrScheduler uniform_first(const Mdp& m);

    void validate(const Mdp& m) const;
    bool is_deterministic() const;
};

// Mode-indexed MR schedulers. The mode in effect at the initial state is `initial`;
// on entering state t from mode k the scheduler continues in mode update[k][t].
struct FmScheduler {
    std::vector<std::string> modes;
    std::vector<MrScheduler> per_mode;
    std::vector<std::vector<std::size_t>> update;
    std::size_t initial = 0;

    static FmScheduler memoryless(const Mdp& m, MrScheduler s);
    void validate(const Mdp& m) const;
};

struct FrequencyVector {
    std::vector<Rat> state;               // expected visits; for terminals the reach probability
    std::vector<std::vector<Rat>> pair;   // pair[s][i] for choice i of s
};

}  // namespace prcause
