#pragma once

#include "prcause/mdp.hpp"
#include "prcause/rational.hpp"
#include "prcause/scheduler.hpp"
#include "prcause/transforms.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace prcause {

struct ConfusionMatrix {
    Rat tp, fp, fn, tn;
};

ConfusionMatrix confusion_matrix(const Mdp& m, const StateSet& cause, const StateSet& eff, const FmScheduler& s);
ConfusionMatrix confusion_matrix(const Mdp& m, const StateSet& cause, const StateSet& eff, const MrScheduler& s);

// Worst case scheduler of a ratio query: MD on the reset model of the canonical form.
struct RatioWitness {
    Mdp reset_model;
    MdScheduler scheduler;
    StateMap map;   // source model to the canonical form, whose states open the reset model
};

struct RecallResult {
    Rat recall;
    Extended covratio;
    std::optional<RatioWitness> witness;   // absent when the uncovered effect is unreachable
};

// Infimum over schedulers of recall and of covered/uncovered effect probability.
RecallResult recall_covratio(const Mdp& m, const StateSet& cause, const StateSet& eff);

struct FscoreResult {
    Rat fscore;
    std::optional<RatioWitness> witness;
    std::optional<MdScheduler> avoiding;   // on the source model when the infimum is 0 by avoiding the cause
};

FscoreResult fscore(const Mdp& m, const StateSet& cause, const StateSet& eff);

enum class Measure { Recall, Covratio, Fscore };

std::string to_string(Measure m);
Measure parse_measure(std::string_view text);

struct MeasureResult {
    Extended value;
    std::optional<RatioWitness> witness;
    std::optional<MdScheduler> avoiding;
};

MeasureResult measure_cause(const Mdp& m, const StateSet& cause, const StateSet& eff, Measure measure);

// coefficient * sqrt(radicand); exact when the radicand is 1.
struct Mcc {
    Rat coefficient;
    Rat radicand;
    bool is_rational() const { return radicand == 1; }
    std::optional<Rat> exact() const;
    std::string str() const;
    std::string decimal() const;
};

Mcc mcc(const ConfusionMatrix& cm);
Mcc mcc_under(const FmScheduler& s, const Mdp& m, const StateSet& cause, const StateSet& eff);

}  // namespace prcause
