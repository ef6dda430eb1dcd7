#pragma once

#include "prcause/io.hpp"
#include "prcause/scheduler.hpp"

#include <algorithm>
#include <initializer_list>

#include <fstream>
#include <sstream>
#include <string>

namespace testing_support {

inline std::string read_model_text(const std::string& file) {
    std::ifstream in(std::string(PRCAUSE_MODEL_DIR) + "/" + file);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline prcause::Mdp load(const std::string& file) { return prcause::parse_mdp(read_model_text(file)); }

inline prcause::Rat q(const char* text) { return prcause::parse_rational(text); }

inline prcause::StateSet ids(const prcause::Mdp& m, std::initializer_list<const char*> names) {
    prcause::StateSet out;
    for (auto n : names) out.insert(m.id(n));
    return out;
}

// MR scheduler choosing `action` at the listed states and the first choice elsewhere.
inline prcause::MrScheduler pick(const prcause::Mdp& m,
                                 std::initializer_list<std::pair<const char*, const char*>> picks) {
    auto s = prcause::MrScheduler::uniform_first(m);
    for (auto [state, action] : picks) {
        auto st = m.id(state);
        std::fill(s.weights[st].begin(), s.weights[st].end(), prcause::Rat(0));
        s.weights[st][*m.choice_index(st, action)] = 1;
    }
    return s;
}

}  // namespace testing_support
