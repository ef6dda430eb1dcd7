#pragma once

#include "prcause/mdp.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace prcause {

// Letters are state ids of the model whose state names form the alphabet.
struct RabinPair {
    std::set<std::size_t> finite;     // L: visited only finitely often
    std::set<std::size_t> infinite;   // K: visited infinitely often
};

struct Dra {
    std::vector<std::string> states;
    std::size_t initial = 0;
    std::vector<std::vector<std::size_t>> delta;   // delta[q][letter]
    std::vector<RabinPair> pairs;

    void validate(std::size_t alphabet_size) const;
};

struct Dfa {
    std::vector<std::string> states;
    std::size_t initial = 0;
    std::vector<std::vector<std::size_t>> delta;
    std::vector<char> accepting;

    void validate(std::size_t alphabet_size) const;
    // No accepting state is reachable from an accepting state by a nonempty word.
    bool is_prefix_free() const;
};

// dra
// state NAME [init]
// edge FROM LETTER TO        (LETTER '*' covers every letter without an explicit edge)
// pair L={q,...} K={q,...}
Dra parse_dra(std::string_view text, const Mdp& alphabet);

// dfa ... accepting {q,...}
Dfa parse_dfa(std::string_view text, const Mdp& alphabet);

// Two-state automaton for "eventually reach one of `target`".
Dra eventually_dra(const Mdp& alphabet, const StateSet& target);

// Automaton accepting the finite paths that end on their first visit to `cause`.
Dfa first_visit_dfa(const Mdp& alphabet, const StateSet& cause);

}  // namespace prcause
