// Prints one PASS/FAIL line per acceptance criterion; exits non-zero on any failure.

#include "support.hpp"

#include "prcause/analysis.hpp"
#include "prcause/automata.hpp"
#include "prcause/cause_check.hpp"
#include "prcause/graph.hpp"
#include "prcause/optimal.hpp"
#include "prcause/oracle.hpp"
#include "prcause/quality.hpp"
#include "prcause/regular.hpp"
#include "prcause/ssp.hpp"
#include "prcause/transforms.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace prcause;
using testing_support::ids;
using testing_support::load;
using testing_support::pick;
using testing_support::q;
using testing_support::read_model_text;

namespace {

class Checker {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        failed_ += ok ? 0 : 1;
    }
    bool ok() const { return failed_ == 0; }
    std::size_t checks() const { return checks_; }
    std::string summary() const {
        std::ostringstream out;
        out << checks_ << " checks";
        if (failed_) {
            out << ", " << failed_ << " failed:";
            for (const auto& f : failures_) out << " [" << f << "]";
        }
        return out.str();
    }

private:
    std::size_t checks_ = 0;
    std::size_t failed_ = 0;
    std::vector<std::string> failures_;
};

StateSet complement(const Mdp& m, const StateSet& set) {
    StateSet out;
    for (StateId s = 0; s < m.size(); ++s)
        if (!set.count(s)) out.insert(s);
    return out;
}

std::vector<StateId> inner_states(const Mdp& m) {
    std::vector<StateId> out;
    for (StateId s = 0; s < m.size(); ++s)
        if (!m.is_terminal(s)) out.push_back(s);
    return out;
}

std::vector<StateSet> nonempty_subsets(const std::vector<StateId>& pool) {
    std::vector<StateSet> out;
    for (std::size_t bits = 1; bits < (std::size_t{1} << pool.size()); ++bits) {
        StateSet s;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (bits >> i & 1) s.insert(pool[i]);
        out.push_back(std::move(s));
    }
    return out;
}

// Checks that a witness replays on the source model to the recorded violation.
bool witness_replays(const Mdp& m, const CauseVerdict& v, const StateSet& eff, bool strict_spr) {
    if (!v.witness) return false;
    const auto& w = *v.witness;
    PathEvent event = strict_spr && w.state ? PathEvent::until(complement(m, v.checked_cause), {*w.state})
                                            : PathEvent::eventually(v.checked_cause);
    Rat condition = reach_prob_under(m, w.lifted, event);
    Rat joint = joint_prob_under(m, w.lifted, event, eff);
    Rat effect = reach_prob_under(m, w.lifted, PathEvent::eventually(eff));
    return condition > 0 && condition == w.replay.condition && joint == w.replay.joint && effect == w.replay.effect &&
           joint <= effect * condition;
}

void criterion_1(Checker& c) {
    auto m = load("two_causes.mc");
    auto eff = ids(m, {"eff"});
    auto only = FmScheduler::memoryless(m, MrScheduler::uniform_first(m));
    c.expect(reach_prob_under(m, only, PathEvent::eventually(eff)) == q("1/2"), "Pr(<>Eff) = 1/2");
    struct Row {
        const char* name;
        StateSet cause;
        Rat conditional;
        bool spr, gpr;
    };
    std::vector<Row> rows{{"c1", ids(m, {"c1"}), q("1"), true, true},
                          {"c2", ids(m, {"c2"}), q("1/4"), false, false},
                          {"c1,c2", ids(m, {"c1", "c2"}), q("5/8"), false, true}};
    for (const auto& r : rows) {
        auto mc = check_gpr_mc(m, r.cause, eff);
        c.expect(mc.conditional && *mc.conditional == r.conditional, std::string("conditional given ") + r.name);
        c.expect(check_spr(m, r.cause, eff).is_cause == r.spr, std::string("SPR verdict ") + r.name);
        c.expect(check_gpr(m, r.cause, eff).is_cause == r.gpr, std::string("GPR verdict ") + r.name);
        c.expect(mc.is_cause == r.gpr, std::string("chain GPR verdict ") + r.name);
    }
}

void criterion_2(Checker& c) {
    auto m = load("certain_effect.mc");
    auto eff = ids(m, {"eff"});
    c.expect(!exists_cause(m, eff), "no cause exists");
    for (const auto& cause : nonempty_subsets(inner_states(m))) {
        c.expect(!check_spr(m, cause, eff).is_cause, "SPR false");
        c.expect(!check_gpr(m, cause, eff).is_cause, "GPR false");
    }
}

void criterion_3(Checker& c) {
    auto m = load("memory_needed.mdp");
    auto eff = ids(m, {"eff"});
    auto cause = ids(m, {"c"});
    for (auto v : {check_spr(m, cause, eff), check_gpr(m, cause, eff)}) {
        c.expect(!v.is_cause, "verdict false");
        c.expect(witness_replays(m, v, eff, true), "witness replays");
        if (!v.witness) continue;
        c.expect(v.witness->replay.effect == q("5/16"), "Pr(<>eff) = 5/16");
        c.expect(v.witness->replay.conditional() == q("1/4"), "Pr(<>eff | <>c) = 1/4");
    }
}

void criterion_4(Checker& c) {
    auto m = load("randomization_needed.mdp");
    auto eff = ids(m, {"eff_unc", "eff_cov"});
    auto cause = ids(m, {"c"});
    auto v = check_gpr(m, cause, eff);
    c.expect(!v.is_cause, "GPR false");
    c.expect(witness_replays(m, v, eff, false), "witness replays");
    if (v.witness) {
        c.expect(v.witness->replay.conditional() == q("1/2"), "conditional 1/2");
        c.expect(v.witness->replay.effect == q("5/8"), "unconditional 5/8");
        c.expect(!v.witness->reduced.is_deterministic(), "witness randomizes");
    }
    bool md_raises = true;
    SchedulerGrid{0}.for_each(m, [&](const MrScheduler& s) {
        auto fm = FmScheduler::memoryless(m, s);
        auto event = PathEvent::eventually(cause);
        Rat reach = reach_prob_under(m, fm, event);
        if (reach == 0) return true;
        Rat conditional = joint_prob_under(m, fm, event, eff) / reach;
        Rat effect = reach_prob_under(m, fm, PathEvent::eventually(eff));
        md_raises = md_raises && conditional > effect && conditional == q("1/2") && effect == q("1/4");
        return true;
    });
    c.expect(md_raises, "deterministic schedulers satisfy 1/2 > 1/4");
}

void criterion_5(Checker& c) {
    auto m = load("action_cause.mdp");
    auto a = action_causality_mdp(m, m.id("s"), "alpha", ids(m, {"eff"}));
    auto report = spr_singleton_report(a.mdp, a.split_state, a.effect);
    c.expect(report.weight == q("1/4"), "effect probability after alpha 1/4");
    c.expect(max_reach_prob(a.mdp, a.effect).value[a.mdp.init()] == q("1/8"), "maximal effect probability 1/8");
    c.expect(report.passes, "alpha raises the effect probability");
    c.expect(spr_singleton_check(a.mdp, a.split_state, a.effect), "singleton check");
}

void criterion_6(Checker& c) {
    auto m = load("tie_case.mdp");
    auto r = spr_singleton_report(m, m.id("c"), ids(m, {"eff"}));
    c.expect(r.max_effect == q("1/4"), "initial value 1/4");
    c.expect(r.weight == q("1/4"), "cause weight 1/4");
    c.expect(r.branch == SprBranch::TieUnreachable, "tie with unreachable branch");
    c.expect(spr_singleton_check(m, m.id("c"), ids(m, {"eff"})), "singleton check true");
}

void criterion_7(Checker& c) {
    auto m = load("precision_recall.mc");
    auto eff = ids(m, {"eff"});
    auto can = canonical_cause(m, eff);
    c.expect(can && can->cause == ids(m, {"s1"}), "canonical cause {s1}");
    if (can) c.expect(can->recall == q("3/5"), "recall 3/5");
    auto mc = check_gpr_mc(m, ids(m, {"s1"}), eff);
    auto cm = confusion_matrix(m, ids(m, {"s1"}), eff, MrScheduler::uniform_first(m));
    c.expect(cm.tp / (cm.tp + cm.fp) == q("3/4") && mc.conditional && *mc.conditional == q("3/4"), "precision 3/4");
    auto best = fscore_optimal_mc(m, eff);
    c.expect(best.cause == ids(m, {"s2"}) && best.fscore == q("3/4"), "f-score optimum {s2} with 3/4");
    c.expect(fscore(m, ids(m, {"s1"}), eff).fscore == q("2/3"), "f-score of {s1} 2/3");
}

// Good prefixes init.b and init.a^k.c for k in `counts`.
Dfa chain_cause(const Mdp& m, const std::set<int>& counts, int top) {
    std::string text = "dfa\nstate q0 init\nstate q1\nstate acc\nstate sink\n";
    for (int k = 1; k <= top; ++k) text += "state a" + std::to_string(k) + "\n";
    text += "edge q0 init q1\nedge q0 * sink\nedge q1 b acc\nedge q1 a a1\nedge q1 * sink\n";
    for (int k = 1; k <= top; ++k) {
        std::string from = "a" + std::to_string(k);
        if (k < top) text += "edge " + from + " a a" + std::to_string(k + 1) + "\n";
        if (counts.count(k)) text += "edge " + from + " c acc\n";
        text += "edge " + from + " * sink\n";
    }
    text += "edge acc * sink\nedge sink * sink\naccepting {acc}\n";
    return parse_dfa(text, m);
}

void criterion_8(Checker& c) {
    auto m = load("rabin_chain.mc");
    auto dra = parse_dra(read_model_text("eventually_e.dra"), m);
    auto dfa = parse_dfa(read_model_text("prefix_init_b.dfa"), m);
    auto t = cosafety_transform(m, dra, dfa);
    c.expect(max_reach_prob(t.mdp, t.effect()).value[t.mdp.init()] == q("2/3"), "Pr(<>e) = 2/3");
    auto v = check_cosafety_gpr(m, dra, dfa);
    c.expect(v.is_cause, "init.b is GPR");
    auto mc = check_gpr_mc(t.mdp, t.cause, t.effect());
    c.expect(mc.is_cause && *mc.conditional == q("3/4") && *mc.unconditional == q("2/3"), "3/4 > 2/3");
    struct Case {
        Dfa cause;
        Rat p;
        bool gpr;
    };
    for (const auto& k : {Case{chain_cause(m, {3}, 3), q("1/8"), true}, Case{chain_cause(m, {2}, 2), q("1/4"), false}}) {
        c.expect(check_cosafety_gpr(m, dra, k.cause).is_cause == k.gpr, "GPR iff p < 1/5 at p = " + to_string(k.p));
        c.expect(cosafety_quality(m, dra, k.cause, Measure::Recall).value == Extended(q("3/8") + k.p / 8),
                 "recall 3/8 + p/8 at p = " + to_string(k.p));
    }
}

void criterion_9(Checker& c) {
    auto m = load("path_dependent.mdp");
    auto eff = ids(m, {"eff"});
    auto dra = parse_dra(read_model_text("eventually_eff.dra"), m);
    auto dfa = parse_dfa(read_model_text("two_paths_minimal.dfa"), m);
    c.expect(check_spr(m, ids(m, {"c"}), eff).is_cause, "state-based SPR of {c}");
    c.expect(check_cosafety_spr_necessary(m, dra, dfa).verdict == Tristate::Unknown, "Unknown on the MDP");

    FmScheduler fm;
    fm.modes = {"other", "via_b"};
    fm.per_mode = {pick(m, {{"c", "beta"}}), pick(m, {{"c", "alpha"}})};
    fm.update.assign(2, std::vector<std::size_t>(m.size(), 0));
    for (std::size_t k = 0; k < 2; ++k)
        for (StateId s = 0; s < m.size(); ++s) fm.update[k][s] = s == m.id("b") ? 1 : (s == m.id("d") ? 0 : k);
    auto chain = induced_chain(m, fm);
    Labels labels(chain.label.begin(), chain.label.end());
    auto r = check_cosafety_spr_necessary(chain.chain, dra, dfa, labels);
    c.expect(r.verdict == Tristate::No, "violation certified on the chain");
    c.expect(r.conditional && *r.conditional == q("1/2") && r.unconditional && *r.unconditional == q("1/2"),
             "1/2 = 1/2");
}

Extended covratio_from_recall(const Rat& recall) {
    if (recall == 1) return Extended::infinity();
    return Extended(Rat(recall / (1 - recall)));
}

// Independent GPR decision on a Markov chain.
bool chain_gpr(const Mdp& m, const StateSet& cause, const StateSet& eff) {
    auto only = FmScheduler::memoryless(m, MrScheduler::uniform_first(m));
    StateSet outside = complement(m, cause);
    for (StateId s : cause)
        if (reach_prob_under(m, only, PathEvent::until(outside, {s})) == 0) return false;
    auto event = PathEvent::eventually(cause);
    Rat reach = reach_prob_under(m, only, event);
    return joint_prob_under(m, only, event, eff) > reach * reach_prob_under(m, only, PathEvent::eventually(eff));
}

Extended chain_measure(const Mdp& m, const StateSet& cause, const StateSet& eff, Measure measure) {
    auto cm = confusion_matrix(m, cause, eff, MrScheduler::uniform_first(m));
    switch (measure) {
        case Measure::Recall: return Extended(Rat(cm.tp / (cm.tp + cm.fn)));
        case Measure::Covratio: return cm.fn == 0 ? Extended::infinity() : Extended(Rat(cm.tp / cm.fn));
        case Measure::Fscore: return Extended(Rat(2 * cm.tp / (2 * cm.tp + cm.fp + cm.fn)));
    }
    return {};
}

struct PropertyStats {
    std::size_t models = 0, causes = 0, refutations = 0, optima = 0;
};

void random_model_properties(Checker& c, PropertyStats& stats, std::uint64_t seed) {
    bool ec_free = seed % 3 != 0;
    std::size_t actions = seed % 4 == 1 ? 1 : 2;
    auto m = generate_random_mdp(seed, 6, actions, ec_free);
    StateSet eff{m.id("eff")};
    ++stats.models;
    if (!reachable_from(m, m.init())[m.id("eff")]) return;
    const std::string tag = "seed " + std::to_string(seed);
    SchedulerGrid grid{2};

    auto subsets = nonempty_subsets(inner_states(m));
    std::vector<char> spr_of(subsets.size()), gpr_of(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const auto& cause = subsets[i];
        auto spr = check_spr(m, cause, eff);
        auto gpr = check_gpr(m, cause, eff);
        spr_of[i] = spr.is_cause;
        gpr_of[i] = gpr.is_cause;
        c.expect(!spr.is_cause || gpr.is_cause, tag + ": SPR implies GPR");
        if (cause.size() == 1) c.expect(spr.is_cause == gpr.is_cause, tag + ": singleton SPR iff GPR");

        for (const auto* v : {&spr, &gpr}) {
            bool strict_spr = v == &spr;
            if (v->violated == "spr" || v->violated == "gpr")
                c.expect(witness_replays(m, *v, eff, strict_spr), tag + ": witness replays");
        }

        bool minimal = check_minimality(m, cause).empty();
        if (minimal) {
            auto cf = canonical_form(m, cause, eff);
            c.expect(check_gpr(cf.mdp, cf.cause, cf.effect()).is_cause == gpr.is_cause, tag + ": canonical GPR");
            if (cause.size() == 1)
                c.expect(check_spr(cf.mdp, cf.cause, cf.effect()).is_cause == spr.is_cause, tag + ": canonical SPR");
            auto w = wmin_cause(m, cause, eff);
            StateSet wcause;
            for (StateId s : cause) wcause.insert(w.map(s));
            c.expect(check_gpr(w.mdp, wcause, {w.eff_target}).is_cause == gpr.is_cause, tag + ": wmin GPR");

            auto rc = recall_covratio(m, cause, eff);
            auto crc = recall_covratio(cf.mdp, cf.cause, cf.effect());
            c.expect(rc.recall == crc.recall && rc.covratio == crc.covratio, tag + ": canonical recall");
            c.expect(fscore(m, cause, eff).fscore == fscore(cf.mdp, cf.cause, cf.effect()).fscore,
                     tag + ": canonical f-score");
            c.expect(rc.covratio == covratio_from_recall(rc.recall), tag + ": recall/covratio duality");

            // Oracle on the EC-free model the verdict is invariant under.
            const Mdp& target = ec_free ? m : cf.mdp;
            StateSet tcause = ec_free ? cause : cf.cause;
            StateSet teff = ec_free ? eff : cf.effect();
            auto gpr_refuted = refute_pr_oracle(target, tcause, teff, CauseKind::Gpr, grid);
            if (gpr.is_cause) c.expect(!gpr_refuted, tag + ": oracle refutes a GPR cause");
            if (gpr_refuted) {
                ++stats.refutations;
                c.expect(!gpr.is_cause, tag + ": GPR refutation");
            }
            if (ec_free || cause.size() == 1) {
                auto spr_refuted = refute_pr_oracle(target, tcause, teff, CauseKind::Spr, grid);
                if (spr.is_cause) c.expect(!spr_refuted, tag + ": oracle refutes an SPR cause");
            }
            if (ec_free && cause.size() <= 2) {
                auto env = quality_envelope(m, cause, eff, grid);
                if (env.recall) {
                    c.expect(rc.recall <= *env.recall && rc.covratio <= *env.covratio, tag + ": envelope recall");
                    c.expect(fscore(m, cause, eff).fscore <= *env.fscore, tag + ": envelope f-score");
                }
            }
        }
        if (spr.is_cause || gpr.is_cause) ++stats.causes;
    }

    auto can = canonical_cause(m, eff);
    if (can) {
        c.expect(check_spr(m, can->cause, eff).is_cause, tag + ": canonical cause is SPR");
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            if (!spr_of[i]) continue;
            auto rc = recall_covratio(m, subsets[i], eff);
            c.expect(rc.recall <= can->recall && rc.covratio <= can->covratio, tag + ": canonical cause dominates");
        }
    } else {
        for (std::size_t i = 0; i < subsets.size(); ++i) c.expect(!spr_of[i], tag + ": SPR cause without canonical");
    }

    for (Measure measure : {Measure::Recall, Measure::Covratio, Measure::Fscore}) {
        auto spr_best = spr_optimal(m, eff, measure);
        std::optional<Extended> spr_expected;
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            if (!spr_of[i]) continue;
            Extended value = measure_cause(m, subsets[i], eff, measure).value;
            if (!spr_expected || value > *spr_expected) spr_expected = value;
        }
        c.expect(bool(spr_best) == bool(spr_expected), tag + ": SPR optimum exists");
        if (spr_best && spr_expected)
            c.expect(spr_best->value == *spr_expected, tag + ": SPR optimal value " + to_string(measure));

        auto best = gpr_optimal(m, eff, measure);
        std::optional<Extended> expected;
        bool chain = m.is_markov_chain();
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            bool is_gpr = chain ? chain_gpr(m, subsets[i], eff) : bool(gpr_of[i]);
            if (chain) c.expect(is_gpr == bool(gpr_of[i]), tag + ": chain GPR oracle");
            if (!is_gpr) continue;
            Extended value = chain ? chain_measure(m, subsets[i], eff, measure)
                                   : measure_cause(m, subsets[i], eff, measure).value;
            if (!expected || value > *expected) expected = value;
        }
        c.expect(bool(best) == bool(expected), tag + ": optimum exists");
        if (best && expected) {
            ++stats.optima;
            c.expect(best->value == *expected, tag + ": optimal value " + to_string(measure));
        }
    }
}

void criterion_10(Checker& c) {
    PropertyStats stats;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) random_model_properties(c, stats, seed);
    c.expect(stats.models >= 1000, "1000 models");
    c.expect(stats.causes > 100, "causes found");
    c.expect(stats.refutations > 100, "oracle refutations found");
    c.expect(stats.optima > 100, "optima found");
}

// Partial sums of sum_n sum_k n x^n C(n+k,k) q^k p in floating point.
struct PartialSums {
    double total = 0;
    bool monotone = true;
};

PartialSums basic_fact_partial_sums(double x, double q, double p) {
    PartialSums out;
    double previous = 0;
    for (int n = 1; n < 4000; ++n) {
        double inner = 0;
        double log_base = std::log(n) + n * std::log(x) + std::log(p);
        double peak = 0;
        for (int k = 0; k < 100000; ++k) {
            double log_term = log_base + std::lgamma(n + k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n + 1.0) +
                              (k == 0 ? 0.0 : k * std::log(q));
            double term = std::exp(log_term);
            inner += term;
            peak = std::max(peak, term);
            if (term < peak * 1e-18 && k > n * q / (1 - q) + 1) break;
        }
        out.total += inner;
        if (out.total < previous) out.monotone = false;
        previous = out.total;
        if (inner < 1e-17 && n > 10) break;
    }
    return out;
}

void criterion_11(Checker& c) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick_p(4, 16), pick_split(0, 100);
    for (int sample = 0; sample < 20; ++sample) {
        // x + q + p = 1 with denominators 20
        int pn = pick_p(rng);
        int rest = 20 - pn;
        int xn = 1 + pick_split(rng) % (rest - 1);
        int qn = rest - xn;
        Rat x(xn, 20), qq(qn, 20), p(pn, 20);
        x.canonicalize();
        qq.canonicalize();
        p.canonicalize();

        // expected number of x-steps before the p-exit, as a stochastic shortest path
        Mdp m;
        auto s = m.add_state("s");
        auto counted = m.add_state("counted");
        auto skipped = m.add_state("skipped");
        auto goal = m.add_state("goal");
        m.set_init(s);
        m.add_choice(s, "go", {{counted, x}, {skipped, qq}, {goal, p}});
        m.add_choice(counted, "back", {{s, Rat(1)}});
        m.add_choice(skipped, "back", {{s, Rat(1)}});
        std::vector<Rat> weights(m.size(), Rat(0));
        weights[counted] = 1;
        auto ssp = ssp_expected_weight(m, weights, {goal}, Opt::Min);
        Rat exact = x / p;
        c.expect(!ssp.value.is_infinite() && ssp.value.value() == exact, "expected weight x/p");

        auto sums = basic_fact_partial_sums(x.get_d(), qq.get_d(), p.get_d());
        c.expect(sums.monotone, "partial sums monotone");
        c.expect(std::abs(sums.total - exact.get_d()) < 1e-9,
                 "partial sums within 1e-9 at x=" + to_string(x) + " q=" + to_string(qq));
    }

    std::size_t bracketed = 0;
    for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
        auto m = generate_random_mdp(seed, 6, 2, true);
        StateSet u{m.id("eff")}, v{m.id("noeff")};
        if (max_reach_prob(m, v).value[m.init()] == 0) continue;
        auto lo = ratio_extremal(m, u, v, Opt::Min).value;
        auto hi = ratio_extremal(m, u, v, Opt::Max).value;
        SchedulerGrid{2}.for_each(m, [&](const MrScheduler& s) {
            auto fm = FmScheduler::memoryless(m, s);
            Rat pv = reach_prob_under(m, fm, PathEvent::eventually(v));
            if (pv == 0) return true;
            Extended ratio(Rat(reach_prob_under(m, fm, PathEvent::eventually(u)) / pv));
            c.expect(lo <= ratio && ratio <= hi, "seed " + std::to_string(seed) + ": ratio bracketed");
            ++bracketed;
            return true;
        });
    }
    c.expect(bracketed > 300, "grid ratios evaluated");
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria{
        {"two-cause chain", criterion_1},
        {"no cause exists", criterion_2},
        {"memory refutes", criterion_3},
        {"randomization refutes", criterion_4},
        {"action causality", criterion_5},
        {"tie corner case", criterion_6},
        {"canonical and f-score optimal causes", criterion_7},
        {"regular and co-safety causes", criterion_8},
        {"path-dependent co-safety SPR", criterion_9},
        {"random model properties", criterion_10},
        {"shortest path and ratio engine", criterion_11},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checker checker;
        auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(checker);
        } catch (const std::exception& e) {
            checker.expect(false, std::string("exception: ") + e.what());
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && checker.ok();
        std::cout << "criterion " << i + 1 << ": " << (checker.ok() ? "PASS" : "FAIL") << "  " << criteria[i].first
                  << " (" << checker.summary() << ", " << std::fixed;
        std::cout.precision(2);
        std::cout << seconds << " s)" << std::endl;
    }
    return all ? 0 : 1;
}
