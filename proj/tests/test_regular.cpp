#include "support.hpp"

#include "prcause/analysis.hpp"
#include "prcause/error.hpp"
#include "prcause/regular.hpp"

#include <doctest.h>

#include <set>

using namespace prcause;
using testing_support::ids;
using testing_support::load;
using testing_support::pick;
using testing_support::q;
using testing_support::read_model_text;

namespace {

Rat effect_probability(const RegularTransform& t) { return max_reach_prob(t.mdp, t.effect()).value[t.mdp.init()]; }

// Good prefixes init.b and init.a^k.c for k in `counts`; counts >= `loop_from` repeat with period 2.
Dfa chain_cause(const Mdp& m, const std::set<int>& counts, int top, std::optional<int> loop_from = std::nullopt) {
    std::string text = "dfa\nstate q0 init\nstate q1\nstate acc\nstate sink\n";
    for (int k = 1; k <= top; ++k) text += "state a" + std::to_string(k) + "\n";
    text += "edge q0 init q1\nedge q0 * sink\nedge q1 b acc\nedge q1 a a1\nedge q1 * sink\n";
    for (int k = 1; k <= top; ++k) {
        std::string from = "a" + std::to_string(k);
        if (k < top)
            text += "edge " + from + " a a" + std::to_string(k + 1) + "\n";
        else if (loop_from)
            text += "edge " + from + " a a" + std::to_string(*loop_from) + "\n";
        if (counts.count(k)) text += "edge " + from + " c acc\n";
        text += "edge " + from + " * sink\n";
    }
    text += "edge acc * sink\nedge sink * sink\naccepting {acc}\n";
    return parse_dfa(text, m);
}

RabinMasks single_pair(std::size_t n, const StateSet& finite, const StateSet& infinite) {
    StateMask l(n, 0), k(n, 0);
    for (auto s : finite) l[s] = 1;
    for (auto s : infinite) k[s] = 1;
    return {{l, k}};
}

}  // namespace

TEST_CASE("qualitative Rabin analysis of end components") {
    auto m = parse_mdp(R"(mdp
state x init
state y
state z
trans x a y 1
trans y a x 1
trans y b z 1
trans z a y 1
)");
    auto mecs = mec_decompose(m);
    REQUIRE(mecs.size() == 1);
    const auto& mec = mecs[0];

    auto all_k = qualitative_rabin(m, mec, single_pair(m.size(), {}, {0, 1, 2}));
    CHECK(all_k.can_accept);
    CHECK_FALSE(all_k.can_reject);

    auto no_k = qualitative_rabin(m, mec, single_pair(m.size(), {}, {}));
    CHECK_FALSE(no_k.can_accept);
    CHECK(no_k.can_reject);

    // K = {z}; the cycle x-y avoids it, the cycle y-z visits it.
    auto both = qualitative_rabin(m, mec, single_pair(m.size(), {}, {2}));
    CHECK(both.can_accept);
    CHECK(both.can_reject);

    // K = {z}, L = {y}: every cycle through z passes y.
    auto never = qualitative_rabin(m, mec, single_pair(m.size(), {1}, {2}));
    CHECK_FALSE(never.can_accept);
    CHECK(never.can_reject);
}

TEST_CASE("qualitative analysis agrees with sub-component enumeration") {
    auto m = parse_mdp(R"(mdp
state x init
state y
state z
state w
trans x a y 1
trans x b z 1
trans y a x 1/2
trans y a w 1/2
trans z a x 1
trans w a y 1
trans w b w 1
)");
    auto mecs = mec_decompose(m);
    REQUIRE(mecs.size() == 1);
    // Enumerate all state subsets, keep those forming an end component with the choices staying inside.
    std::vector<StateSet> components;
    for (unsigned mask = 1; mask < 16; ++mask) {
        StateMask region(4, 0);
        for (StateId s = 0; s < 4; ++s) region[s] = mask >> s & 1;
        for (const auto& sub : mec_decompose(m, region))
            if (sub.states.size() == static_cast<std::size_t>(__builtin_popcount(mask))) components.push_back(sub.states);
    }
    for (unsigned lmask = 0; lmask < 16; ++lmask) {
        for (unsigned kmask = 0; kmask < 16; ++kmask) {
            StateSet l, k;
            for (StateId s = 0; s < 4; ++s) {
                if (lmask >> s & 1) l.insert(s);
                if (kmask >> s & 1) k.insert(s);
            }
            bool accept = false, reject = false;
            for (const auto& c : components) {
                bool hits_l = false, hits_k = false;
                for (auto s : c) {
                    hits_l = hits_l || l.count(s);
                    hits_k = hits_k || k.count(s);
                }
                accept = accept || (hits_k && !hits_l);
                reject = reject || !(hits_k && !hits_l);
            }
            auto got = qualitative_rabin(m, mecs[0], single_pair(4, l, k));
            CAPTURE(lmask);
            CAPTURE(kmask);
            CHECK(got.can_accept == accept);
            CHECK(got.can_reject == reject);
        }
    }
}

TEST_CASE("regular effect transform of the looping chain") {
    auto m = load("rabin_chain.mc");
    auto dra = parse_dra(read_model_text("eventually_e.dra"), m);
    auto t = regular_effect_transform(m, dra, ids(m, {"b"}));
    CHECK_FALSE(has_end_component(t.mdp));
    CHECK(effect_probability(t) == q("2/3"));
    REQUIRE(t.cause.size() == 1);
    CHECK(t.base[*t.cause.begin()] == m.id("b"));

    auto none = regular_effect_transform(m, dra, {});
    CHECK(none.cause.empty());
    CHECK(effect_probability(none) == q("2/3"));
    CHECK(max_reach_prob(none.mdp, {none.eff_cov}).value[none.mdp.init()] == 0);
}

TEST_CASE("reachability effects reproduce the state-based checks") {
    for (const char* file : {"two_causes.mc", "memory_needed.mdp", "tie_case.mdp", "path_dependent.mdp",
                             "precision_recall.mc"}) {
        auto m = load(file);
        auto eff = ids(m, {"eff"});
        auto dra = eventually_dra(m, eff);
        std::vector<StateId> pool;
        for (StateId s = 0; s < m.size(); ++s)
            if (!m.is_terminal(s)) pool.push_back(s);
        for (std::size_t mask = 1; mask < (std::size_t{1} << pool.size()); ++mask) {
            StateSet cause;
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (mask >> i & 1) cause.insert(pool[i]);
            if (!check_minimality(m, cause).empty()) continue;
            CAPTURE(std::string(file));
            CAPTURE(mask);
            CHECK(check_reachability_gpr(m, dra, cause).is_cause == check_gpr(m, cause, eff).is_cause);
            CHECK(check_reachability_spr(m, dra, cause).is_cause == check_spr(m, cause, eff).is_cause);
            for (auto measure : {Measure::Recall, Measure::Covratio, Measure::Fscore})
                CHECK(reachability_quality(m, dra, cause, measure).value == measure_cause(m, cause, eff, measure).value);
        }
    }
}

TEST_CASE("reachability causes of the two-cause chain") {
    auto m = load("two_causes.mc");
    auto dra = parse_dra(read_model_text("eventually_eff.dra"), m);
    CHECK(check_reachability_spr(m, dra, ids(m, {"c1"})).is_cause);
    auto both = check_reachability_spr(m, dra, ids(m, {"c1", "c2"}));
    CHECK_FALSE(both.is_cause);
    CHECK(both.violated == "spr");
    CHECK(check_reachability_gpr(m, dra, ids(m, {"c1", "c2"})).is_cause);
    CHECK(check_reachability_spr(m, dra, ids(m, {"c2"})).is_cause ==
          check_reachability_gpr(m, dra, ids(m, {"c2"})).is_cause);
    CHECK_THROWS_AS(check_reachability_gpr(m, dra, {}), PreconditionError);
}

TEST_CASE("reachability cause of the looping chain") {
    auto m = load("rabin_chain.mc");
    auto dra = parse_dra(read_model_text("eventually_e.dra"), m);
    CHECK(check_reachability_gpr(m, dra, ids(m, {"b"})).is_cause);
    CHECK_FALSE(check_reachability_gpr(m, dra, ids(m, {"a"})).is_cause);
    CHECK_FALSE(check_reachability_gpr(m, dra, ids(m, {"c"})).is_cause);
    CHECK(reachability_quality(m, dra, ids(m, {"b"}), Measure::Recall).value == Extended(q("3/8")));

    auto prio = temp_prio_check(m, dra, ids(m, {"b", "e"}));
    CHECK(prio.at(m.id("b")));
    CHECK_FALSE(prio.at(m.id("e")));

    auto can = canonical_reachability_cause(m, dra);
    REQUIRE(can);
    CHECK(can->cause == ids(m, {"b"}));
    CHECK(can->recall == q("3/8"));

    auto best = reachability_optimal(m, dra, Measure::Recall, CauseKind::Gpr);
    REQUIRE(best);
    CHECK(best->cause == ids(m, {"b"}));
    CHECK(best->value == Extended(q("3/8")));
}

TEST_CASE("reachability optimum matches the state-based optimum") {
    auto pr = load("precision_recall.mc");
    auto dra = eventually_dra(pr, ids(pr, {"eff"}));
    auto can = canonical_reachability_cause(pr, dra);
    REQUIRE(can);
    CHECK(can->cause == ids(pr, {"s1"}));

    RegularSearchOptions plain;
    plain.temp_prio = false;
    plain.excluded = pr.terminals();
    auto best = reachability_optimal(pr, dra, Measure::Fscore, CauseKind::Gpr, plain);
    REQUIRE(best);
    CHECK(best->cause == ids(pr, {"s2"}));
    CHECK(best->value == Extended(q("3/4")));

    // s2 reaches the effect surely, so the temporal priority condition rules it out.
    best = reachability_optimal(pr, dra, Measure::Fscore, CauseKind::Gpr);
    REQUIRE(best);
    CHECK_FALSE(best->cause.count(pr.id("s2")));

    for (const char* file : {"two_causes.mc", "memory_needed.mdp", "tie_case.mdp", "path_dependent.mdp"}) {
        auto m = load(file);
        auto eff = ids(m, {"eff"});
        RegularSearchOptions options;
        options.temp_prio = false;
        options.excluded = m.terminals();
        for (auto measure : {Measure::Recall, Measure::Covratio, Measure::Fscore}) {
            CAPTURE(std::string(file));
            CAPTURE(to_string(measure));
            auto state_based = gpr_optimal(m, eff, measure);
            auto regular = reachability_optimal(m, eventually_dra(m, eff), measure, CauseKind::Gpr, options);
            REQUIRE(state_based.has_value() == regular.has_value());
            if (!regular) continue;
            CHECK(regular->cause == state_based->cause);
            CHECK(regular->value == state_based->value);
        }
    }

    auto two = load("two_causes.mc");
    RegularSearchOptions options;
    options.temp_prio = false;
    options.excluded = two.terminals();
    dra = eventually_dra(two, ids(two, {"eff"}));
    best = reachability_optimal(two, dra, Measure::Recall, CauseKind::Spr, options);
    REQUIRE(best);
    CHECK(best->cause == ids(two, {"c1"}));
    // c1 reaches the effect surely and c2 alone is no cause.
    CHECK_FALSE(reachability_optimal(two, dra, Measure::Recall, CauseKind::Gpr));

    auto certain = load("certain_effect.mc");
    CHECK_FALSE(reachability_optimal(certain, eventually_dra(certain, ids(certain, {"eff"})), Measure::Recall,
                                     CauseKind::Gpr));
}

TEST_CASE("co-safety cause init b") {
    auto m = load("rabin_chain.mc");
    auto dra = parse_dra(read_model_text("eventually_e.dra"), m);
    auto dfa = parse_dfa(read_model_text("prefix_init_b.dfa"), m);
    auto t = cosafety_transform(m, dra, dfa);
    CHECK(t.cause.size() == 1);
    CHECK(effect_probability(t) == q("2/3"));
    CHECK(check_cosafety_gpr(m, dra, dfa).is_cause);
    CHECK(temp_prio2_check(m, dra, dfa));
    CHECK(cosafety_quality(m, dra, dfa, Measure::Recall).value == Extended(q("3/8")));

    auto everything = parse_dfa("dfa\nstate q0 init\nstate acc\nstate sink\nedge q0 init acc\nedge q0 * sink\n"
                                "edge acc * sink\nedge sink * sink\naccepting {acc}\n",
                                m);
    CHECK_FALSE(check_cosafety_gpr(m, dra, everything).is_cause);

    auto empty = parse_dfa("dfa\nstate q0 init\nedge q0 * q0\naccepting {}\n", m);
    CHECK(cosafety_transform(m, dra, empty).cause.empty());
    CHECK(temp_prio2_check(m, dra, empty));
    CHECK_THROWS_AS(cosafety_quality(m, dra, empty, Measure::Recall), PreconditionError);

    auto at_e = parse_dfa("dfa\nstate q0 init\nstate q1\nstate acc\nstate sink\nedge q0 init q1\nedge q0 * sink\n"
                          "edge q1 e acc\nedge q1 * sink\nedge acc * sink\nedge sink * sink\naccepting {acc}\n",
                          m);
    CHECK_FALSE(temp_prio2_check(m, dra, at_e));
}

TEST_CASE("co-safety causes extended by a-chains") {
    auto m = load("rabin_chain.mc");
    auto dra = parse_dra(read_model_text("eventually_e.dra"), m);
    struct Case {
        Dfa cause;
        Rat p;
    };
    std::vector<Case> cases{{chain_cause(m, {3}, 3), q("1/8")},
                            {chain_cause(m, {2}, 2), q("1/4")},
                            {chain_cause(m, {3, 4}, 4), q("3/16")},
                            {chain_cause(m, {3}, 4, 3), q("1/6")},
                            {chain_cause(m, {1}, 1), q("1/2")}};
    for (const auto& c : cases) {
        CAPTURE(c.p);
        CHECK(check_cosafety_gpr(m, dra, c.cause).is_cause == (c.p < q("1/5")));
        CHECK(cosafety_quality(m, dra, c.cause, Measure::Recall).value == Extended(q("3/8") + c.p / 8));
    }
}

TEST_CASE("co-safety SPR on the path-dependent model") {
    auto m = load("path_dependent.mdp");
    auto eff = ids(m, {"eff"});
    auto dra = parse_dra(read_model_text("eventually_eff.dra"), m);
    auto dfa = parse_dfa(read_model_text("two_paths.dfa"), m);
    CHECK(check_spr(m, ids(m, {"c"}), eff).is_cause);
    CHECK(check_reachability_gpr(m, dra, ids(m, {"c"})).is_cause);
    auto t = cosafety_transform(m, dra, dfa);
    CHECK(t.cause.size() == 2);
    // The two cause states tell the prefixes apart, so the refuting scheduler is memoryless there.
    CHECK(check_cosafety_spr_necessary(m, dra, dfa).verdict == Tristate::No);
    auto merged = parse_dfa(read_model_text("two_paths_minimal.dfa"), m);
    CHECK(cosafety_transform(m, dra, merged).cause.size() == 1);
    CHECK(check_cosafety_spr_necessary(m, dra, merged).verdict == Tristate::Unknown);

    // alpha at c after init b c, beta otherwise
    FmScheduler fm;
    fm.modes = {"other", "via_b"};
    auto alpha = pick(m, {{"c", "alpha"}});
    auto beta = pick(m, {{"c", "beta"}});
    fm.per_mode = {beta, alpha};
    fm.update.assign(2, std::vector<std::size_t>(m.size(), 0));
    for (std::size_t k = 0; k < 2; ++k)
        for (StateId s = 0; s < m.size(); ++s) fm.update[k][s] = s == m.id("b") ? 1 : (s == m.id("d") ? 0 : k);
    auto chain = induced_chain(m, fm);
    Labels labels(chain.label.begin(), chain.label.end());
    for (const auto& automaton : {dfa, merged}) {
        auto verdict = check_cosafety_spr_necessary(chain.chain, dra, automaton, labels);
        CHECK(verdict.verdict == Tristate::No);
        REQUIRE(verdict.conditional);
        CHECK(*verdict.conditional == q("1/2"));
        CHECK(*verdict.unconditional == q("1/2"));
    }
}

TEST_CASE("co-safety SPR refutation on the transform") {
    auto m = load("two_causes.mc");
    auto dra = eventually_dra(m, ids(m, {"eff"}));
    auto first = first_visit_dfa(m, ids(m, {"c1", "c2"}));
    CHECK(check_cosafety_spr_necessary(m, dra, first).verdict == Tristate::No);
    auto only_c1 = first_visit_dfa(m, ids(m, {"c1"}));
    CHECK(check_cosafety_spr_necessary(m, dra, only_c1).verdict == Tristate::Yes);

    auto mdp = load("memory_needed.mdp");
    auto refuted = check_cosafety_spr_necessary(mdp, eventually_dra(mdp, ids(mdp, {"eff"})),
                                                first_visit_dfa(mdp, ids(mdp, {"c"})));
    CHECK(refuted.verdict == Tristate::No);
}

TEST_CASE("first-visit automata reproduce state causes") {
    for (const char* file : {"two_causes.mc", "memory_needed.mdp", "randomization_needed.mdp", "tie_case.mdp"}) {
        auto m = load(file);
        StateSet eff;
        for (StateId s = 0; s < m.size(); ++s)
            if (m.name(s).starts_with("eff")) eff.insert(s);
        auto dra = eventually_dra(m, eff);
        for (StateId c = 0; c < m.size(); ++c) {
            if (m.is_terminal(c) || c == m.init()) continue;
            CAPTURE(std::string(file));
            CAPTURE(m.name(c));
            CHECK(check_cosafety_gpr(m, dra, first_visit_dfa(m, {c})).is_cause == check_gpr(m, {c}, eff).is_cause);
        }
    }
}

TEST_CASE("prefix freedom is enforced") {
    auto m = load("rabin_chain.mc");
    auto dra = parse_dra(read_model_text("eventually_e.dra"), m);
    auto bad = parse_dfa("dfa\nstate q0 init\nstate acc\nedge q0 * acc\nedge acc * acc\naccepting {acc}\n", m);
    CHECK_THROWS_AS(cosafety_transform(m, dra, bad), PreconditionError);
}
