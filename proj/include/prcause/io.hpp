#pragma once

#include "prcause/mdp.hpp"
#include "prcause/scheduler.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace prcause {

enum class Unreachable { Error, Warn };

// Line-based model format:
//   mdp | mc
//   state NAME [init] [terminal]
//   trans STATE ACTION TARGET P/Q      (ACTION may be omitted in mc files)
Mdp parse_mdp(std::string_view text, Unreachable policy = Unreachable::Error,
              std::vector<std::string>* warnings = nullptr);
std::string write_mdp(const Mdp& m);

// scheduler
// choose STATE ACTION P/Q
// States without entries use their first action.
MrScheduler parse_scheduler(std::string_view text, const Mdp& m);
std::string write_scheduler(const Mdp& m, const MrScheduler& s);

namespace detail {

struct Token {
    std::string text;
    int column;
};

// Splits a line on whitespace after stripping '#' comments.
std::vector<Token> tokenize(std::string_view line);

}  // namespace detail

}  // namespace prcause
