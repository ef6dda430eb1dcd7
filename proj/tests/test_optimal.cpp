#include "support.hpp"

#include "prcause/analysis.hpp"
#include "prcause/cause_check.hpp"
#include "prcause/error.hpp"
#include "prcause/optimal.hpp"
#include "prcause/quality.hpp"

#include <doctest.h>

using namespace prcause;
using testing_support::ids;
using testing_support::load;
using testing_support::q;

namespace {

// Best f-score over all SPR causes among non-terminal states, by brute force.
std::optional<Rat> best_spr_fscore(const Mdp& m, const StateSet& eff) {
    std::vector<StateId> pool;
    for (StateId s = 0; s < m.size(); ++s)
        if (!m.is_terminal(s)) pool.push_back(s);
    std::optional<Rat> best;
    for (std::size_t mask = 1; mask < (std::size_t{1} << pool.size()); ++mask) {
        StateSet cause;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (mask >> i & 1) cause.insert(pool[i]);
        if (!check_spr(m, cause, eff).is_cause) continue;
        Rat f = fscore(m, cause, eff).fscore;
        if (!best || f > *best) best = f;
    }
    return best;
}

}  // namespace

TEST_CASE("canonical cause") {
    auto pr = load("precision_recall.mc");
    auto can = canonical_cause(pr, ids(pr, {"eff"}));
    REQUIRE(can);
    CHECK(can->cause == ids(pr, {"s1"}));
    CHECK(can->recall == q("3/5"));

    auto two = load("two_causes.mc");
    can = canonical_cause(two, ids(two, {"eff"}));
    REQUIRE(can);
    CHECK(can->cause == ids(two, {"c1"}));
    CHECK(can->recall == q("2/3"));

    auto certain = load("certain_effect.mc");
    CHECK_FALSE(canonical_cause(certain, ids(certain, {"eff"})));
}

TEST_CASE("front keeps states reachable without passing another cause state") {
    auto pr = load("precision_recall.mc");
    CHECK(front(pr, ids(pr, {"s1", "s2"})) == ids(pr, {"s1"}));
    CHECK(front(pr, ids(pr, {"s2"})) == ids(pr, {"s2"}));
}

TEST_CASE("f-score optimal cause of a Markov chain") {
    auto pr = load("precision_recall.mc");
    auto best = fscore_optimal_mc(pr, ids(pr, {"eff"}));
    CHECK(best.cause == ids(pr, {"s2"}));
    CHECK(best.fscore == q("3/4"));
    CHECK(fscore(pr, ids(pr, {"s1"}), ids(pr, {"eff"})).fscore == q("2/3"));
    CHECK(best_spr_fscore(pr, ids(pr, {"eff"})) == best.fscore);

    auto two = load("two_causes.mc");
    best = fscore_optimal_mc(two, ids(two, {"eff"}));
    CHECK(best.cause == ids(two, {"c1"}));
    CHECK(best.fscore == q("4/5"));
    CHECK(best_spr_fscore(two, ids(two, {"eff"})) == best.fscore);

    auto certain = load("certain_effect.mc");
    CHECK_THROWS_AS(fscore_optimal_mc(certain, ids(certain, {"eff"})), PreconditionError);
    auto mdp = load("memory_needed.mdp");
    CHECK_THROWS_AS(fscore_optimal_mc(mdp, ids(mdp, {"eff"})), PreconditionError);
}

TEST_CASE("f-score threshold for strict causes") {
    auto pr = load("precision_recall.mc");
    auto eff = ids(pr, {"eff"});
    auto yes = spr_fscore_threshold(pr, eff, q("7/10"));
    CHECK(yes.holds);
    REQUIRE(yes.cause);
    CHECK(fscore(pr, *yes.cause, eff).fscore > q("7/10"));
    CHECK_FALSE(spr_fscore_threshold(pr, eff, q("4/5")).holds);
    CHECK(spr_fscore_threshold(pr, eff, Rat(0)).holds);

    CHECK_FALSE(spr_fscore_threshold(pr, eff, q("3/4")).holds);
    CHECK(spr_fscore_threshold(pr, eff, q("3/4"), Comparison::AtLeast).holds);

    auto certain = load("certain_effect.mc");
    CHECK_FALSE(spr_fscore_threshold(certain, ids(certain, {"eff"}), Rat(0)).holds);
}

TEST_CASE("f-score threshold agrees with enumeration on MDPs") {
    for (const char* file : {"memory_needed.mdp", "randomization_needed.mdp", "tie_case.mdp", "two_causes.mc"}) {
        auto m = load(file);
        StateSet eff;
        for (StateId s = 0; s < m.size(); ++s)
            if (m.name(s).starts_with("eff")) eff.insert(s);
        auto best = best_spr_fscore(m, eff);
        for (const char* t : {"0", "1/10", "1/4", "1/3", "1/2", "2/3", "3/4", "4/5", "9/10"}) {
            CAPTURE(file);
            CAPTURE(t);
            bool expected = best && *best > q(t);
            CHECK(spr_fscore_threshold(m, eff, q(t)).holds == expected);
        }
    }
}

TEST_CASE("f-score threshold when the effect can be avoided") {
    auto m = parse_mdp(R"(mdp
state init init
state d
state eff terminal
state noeff terminal
trans init alpha noeff 1
trans init gamma d 1/2
trans init gamma noeff 1/2
trans d go eff 1/2
trans d go noeff 1/2
)");
    auto eff = ids(m, {"eff"});
    CHECK(min_reach_prob(m, eff).value[m.init()] == 0);
    CHECK(best_spr_fscore(m, eff) == q("2/3"));
    auto result = spr_fscore_threshold(m, eff, q("1/2"));
    CHECK(result.holds);
    CHECK(result.cause == ids(m, {"d"}));
    CHECK_FALSE(spr_fscore_threshold(m, eff, q("2/3")).holds);
}

TEST_CASE("optimal GPR causes") {
    auto two = load("two_causes.mc");
    auto eff = ids(two, {"eff"});
    auto best = gpr_optimal(two, eff, Measure::Recall);
    REQUIRE(best);
    CHECK(best->cause == ids(two, {"c1", "c2"}));
    CHECK(best->value == Extended(q("5/6")));
    CHECK(best->method == "enumeration");

    CHECK(gpr_threshold(two, eff, Measure::Recall, q("4/5")));
    CHECK_FALSE(gpr_threshold(two, eff, Measure::Recall, q("9/10")));
    CHECK(gpr_threshold(two, eff, Measure::Recall, Rat(0)));
    CHECK(gpr_threshold(two, eff, Measure::Recall, q("5/6")));
    CHECK_FALSE(gpr_threshold(two, eff, Measure::Recall, q("5/6"), Comparison::Exceeds));

    auto pr = load("precision_recall.mc");
    best = gpr_optimal(pr, ids(pr, {"eff"}), Measure::Fscore);
    REQUIRE(best);
    CHECK(best->cause == ids(pr, {"s2"}));
    CHECK(best->value == Extended(q("3/4")));

    auto certain = load("certain_effect.mc");
    CHECK_FALSE(gpr_optimal(certain, ids(certain, {"eff"}), Measure::Recall));
    CHECK_FALSE(gpr_threshold(certain, ids(certain, {"eff"}), Measure::Recall, Rat(0)));
}

TEST_CASE("recall and coverage ratio select the same optimal cause") {
    for (const char* file : {"two_causes.mc", "precision_recall.mc", "memory_needed.mdp"}) {
        auto m = load(file);
        StateSet eff;
        for (StateId s = 0; s < m.size(); ++s)
            if (m.name(s) == "eff") eff.insert(s);
        auto by_recall = gpr_optimal(m, eff, Measure::Recall);
        auto by_ratio = gpr_optimal(m, eff, Measure::Covratio);
        CAPTURE(file);
        REQUIRE(by_recall.has_value() == by_ratio.has_value());
        if (by_recall) CHECK(by_recall->cause == by_ratio->cause);
    }
}

TEST_CASE("candidate budget") {
    auto two = load("two_causes.mc");
    CHECK_THROWS_AS(gpr_optimal(two, ids(two, {"eff"}), Measure::Recall, 2), BudgetExceeded);
    CHECK_THROWS_AS(spr_fscore_threshold(load("precision_recall.mc"), {3}, Rat(0), Comparison::Exceeds, 1),
                    BudgetExceeded);
}

TEST_CASE("measure names") {
    CHECK(parse_measure("covratio") == Measure::Covratio);
    CHECK(to_string(Measure::Fscore) == "fscore");
    CHECK_THROWS_AS(parse_measure("precision"), InputError);
}

TEST_CASE("optimal SPR causes") {
    auto pr = load("precision_recall.mc");
    auto eff = ids(pr, {"eff"});
    auto by_recall = spr_optimal(pr, eff, Measure::Recall);
    REQUIRE(by_recall);
    CHECK(by_recall->cause == ids(pr, {"s1"}));
    CHECK(by_recall->value == Extended(q("3/5")));
    CHECK(by_recall->method == "canonical");
    auto by_fscore = spr_optimal(pr, eff, Measure::Fscore);
    REQUIRE(by_fscore);
    CHECK(by_fscore->cause == ids(pr, {"s2"}));
    CHECK(by_fscore->value == Extended(q("3/4")));
    CHECK(by_fscore->method == "shortest-path");

    auto mem = load("memory_needed.mdp");
    auto mem_eff = ids(mem, {"eff"});
    auto enumerated = spr_optimal(mem, mem_eff, Measure::Fscore);
    REQUIRE(enumerated);
    CHECK(enumerated->method == "enumeration");
    CHECK(enumerated->value == Extended(*best_spr_fscore(mem, mem_eff)));

    auto certain = load("certain_effect.mc");
    CHECK_FALSE(spr_optimal(certain, ids(certain, {"eff"}), Measure::Fscore));
}
