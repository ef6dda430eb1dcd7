#include "prcause/optimal.hpp"

#include "prcause/analysis.hpp"
#include "prcause/cause_check.hpp"
#include "prcause/error.hpp"
#include "prcause/graph.hpp"
#include "prcause/quality.hpp"
#include "prcause/ssp.hpp"
#include "prcause/transforms.hpp"

#include <vector>

namespace prcause {

namespace {

void require_effect(const Mdp& m, const StateSet& eff) {
    if (eff.empty()) throw PreconditionError("effect set is empty");
    for (StateId e : eff) {
        if (e >= m.size()) throw PreconditionError("effect state out of range");
        if (!m.is_terminal(e)) throw PreconditionError("effect state '" + m.name(e) + "' is not terminal");
    }
}

// Subsets of `pool` by increasing bitmask.
template <class Visit>
void for_each_subset(const std::vector<StateId>& pool, std::size_t budget, Visit visit) {
    if (pool.size() >= 63 || (std::size_t{1} << pool.size()) - 1 > budget)
        throw BudgetExceeded("candidate budget of " + std::to_string(budget) + " exceeded");
    for (std::size_t mask = 1; mask < (std::size_t{1} << pool.size()); ++mask) {
        StateSet subset;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (mask >> i & 1) subset.insert(pool[i]);
        visit(subset);
    }
}

bool front_closed(const Mdp& m, const StateSet& cause) { return front(m, cause).size() == cause.size(); }

}  // namespace

StateSet spr_states(const Mdp& m, const StateSet& eff) {
    require_effect(m, eff);
    auto reach = reachable_from(m, m.init());
    StateSet out;
    for (StateId s = 0; s < m.size(); ++s)
        if (reach[s] && !eff.count(s) && spr_singleton_check(m, s, eff)) out.insert(s);
    return out;
}

StateSet front(const Mdp& m, const StateSet& cause) {
    StateSet out;
    for (StateId c : cause)
        if (max_constrained_reach(m, cause, c) > 0) out.insert(c);
    return out;
}

std::optional<CanonicalCause> canonical_cause(const Mdp& m, const StateSet& eff) {
    auto all = spr_states(m, eff);
    if (all.empty()) return std::nullopt;
    CanonicalCause out;
    out.cause = front(m, all);
    auto quality = recall_covratio(m, out.cause, eff);
    out.recall = quality.recall;
    out.covratio = quality.covratio;
    return out;
}

FscoreOptimal fscore_optimal_mc(const Mdp& mc, const StateSet& eff) {
    if (!mc.is_markov_chain()) throw PreconditionError("model is not a Markov chain");
    auto candidates = spr_states(mc, eff);
    if (candidates.empty()) throw PreconditionError("no singleton cause exists");

    auto qt = mec_quotient(mc);
    const Mdp& n = qt.mdp;
    Mdp k;
    for (StateId s = 0; s < n.size(); ++s) k.add_state(n.name(s));
    StateId covered = k.add_state(n.fresh_name("eff_cov"));
    StateId missed = k.add_state(k.fresh_name("noeff_c"));
    k.set_init(n.init());
    auto minimum = min_reach_prob(mc, eff).value;
    std::vector<StateId> original(n.size(), npos);
    for (StateId s = 0; s < mc.size(); ++s)
        if (candidates.count(s)) original[qt.map(s)] = s;
    for (StateId s = 0; s < n.size(); ++s) {
        for (const auto& c : n.choices(s)) k.add_choice(s, c.action, c.dist);
        if (original[s] != npos)
            k.add_choice(s, "gamma", {{covered, minimum[original[s]]}, {missed, 1 - minimum[original[s]]}});
        if (n.is_terminal(s)) k.add_choice(s, "reset", {{n.init(), Rat(1)}});
    }
    k.add_choice(missed, "reset", {{n.init(), Rat(1)}});

    std::vector<Rat> weight(k.size(), Rat(0));
    for (StateId e : eff) weight[qt.map(e)] = 1;
    weight[missed] = 1;
    auto best = ssp_expected_weight(k, weight, {covered}, Opt::Min);
    if (!best.scheduler || best.value.is_infinite()) throw std::logic_error("covered effect is not reachable");

    StateSet chosen;
    for (StateId s = 0; s < n.size(); ++s)
        if (original[s] != npos && k.choices(s)[(*best.scheduler)[s]].action == "gamma") chosen.insert(original[s]);
    FscoreOptimal out;
    out.cause = front(mc, chosen);
    out.fscore = 2 / (best.value.value() + 2);
    return out;
}

ThresholdResult spr_fscore_threshold(const Mdp& m, const StateSet& eff, const Rat& threshold, Comparison cmp,
                                     std::optional<std::size_t> budget) {
    auto candidates = spr_states(m, eff);
    ThresholdResult out;
    if (candidates.empty()) return out;

    auto qt = mec_quotient(m);
    Mdp k = qt.mdp;
    StateSet k_eff;
    for (StateId e : eff) k_eff.insert(qt.map(e));
    auto minimum = min_reach_prob(qt.mdp, k_eff).value;
    if (minimum[qt.mdp.init()] == 0) {
        // Force the scheduler to leave the region where the effect can be avoided.
        const Mdp& n = qt.mdp;
        ActionMask avoiding(n.size());
        for (StateId s = 0; s < n.size(); ++s) {
            const auto& cs = n.choices(s);
            avoiding[s].assign(cs.size(), 0);
            if (minimum[s] != 0) continue;
            for (std::size_t i = 0; i < cs.size(); ++i) {
                bool inside = true;
                for (const auto& t : cs[i].dist) inside = inside && minimum[t.target] == 0;
                avoiding[s][i] = inside ? 1 : 0;
            }
        }
        auto region = reachable_from(n, n.init(), avoiding);
        StateId start = k.add_state(k.fresh_name("init"));
        for (StateId s = 0; s < n.size(); ++s) {
            if (!region[s]) continue;
            for (std::size_t i = 0; i < n.choices(s).size(); ++i)
                if (!avoiding[s][i])
                    k.add_choice(start, "leave:" + n.name(s) + ":" + n.choices(s)[i].action, n.choices(s)[i].dist);
        }
        if (k.is_terminal(start)) return out;
        k.set_init(start);
    }

    std::vector<StateId> pool;
    for (StateId c : candidates) pool.push_back(qt.map(c));
    const Rat covered_value = 2 * (1 - threshold);
    for_each_subset(pool, budget.value_or(default_face_budget()), [&](const StateSet& subset) {
        if (out.holds || !front_closed(k, subset)) return;
        auto cf = canonical_form(k, subset, k_eff);
        std::map<StateId, Rat> value{
            {cf.eff_cov, covered_value}, {cf.eff_unc, -threshold}, {cf.noeff_fp, -threshold}, {cf.noeff_tn, Rat(0)}};
        Rat worst = optimize_terminal_value(cf.mdp, value, Opt::Min).value[cf.mdp.init()];
        if (worst > 0 || (cmp == Comparison::AtLeast && worst == 0)) {
            out.holds = true;
            StateSet cause;
            for (StateId v : subset) cause.insert(qt.map.to_old.find(v)->second);
            out.cause = std::move(cause);
        }
    });
    return out;
}

namespace {

template <class Check>
std::optional<OptimalResult> enumerate_optimal(const Mdp& m, const StateSet& eff, Measure measure,
                                               std::optional<std::size_t> budget, Check is_cause) {
    require_effect(m, eff);
    auto reach = reachable_from(m, m.init());
    std::vector<StateId> pool;
    for (StateId s = 0; s < m.size(); ++s)
        if (reach[s] && !m.is_terminal(s)) pool.push_back(s);
    std::optional<OptimalResult> best;
    for_each_subset(pool, budget.value_or(default_face_budget()), [&](const StateSet& cause) {
        if (!front_closed(m, cause) || !is_cause(cause)) return;
        Extended value = measure_cause(m, cause, eff, measure).value;
        if (!best || value > best->value || (value == best->value && cause < best->cause))
            best = OptimalResult{cause, measure, value, "enumeration"};
    });
    return best;
}

}  // namespace

std::optional<OptimalResult> gpr_optimal(const Mdp& m, const StateSet& eff, Measure measure,
                                         std::optional<std::size_t> budget) {
    CheckOptions options;
    options.budget = budget;
    return enumerate_optimal(m, eff, measure, budget,
                             [&](const StateSet& cause) { return check_gpr(m, cause, eff, options).is_cause; });
}

std::optional<OptimalResult> spr_optimal(const Mdp& m, const StateSet& eff, Measure measure,
                                         std::optional<std::size_t> budget) {
    require_effect(m, eff);
    auto canonical = canonical_cause(m, eff);
    if (!canonical) return std::nullopt;
    switch (measure) {
    case Measure::Recall:
        return OptimalResult{canonical->cause, measure, Extended(canonical->recall), "canonical"};
    case Measure::Covratio:
        return OptimalResult{canonical->cause, measure, canonical->covratio, "canonical"};
    case Measure::Fscore:
        break;
    }
    if (m.is_markov_chain()) {
        auto best = fscore_optimal_mc(m, eff);
        return OptimalResult{best.cause, measure, Extended(best.fscore), "shortest-path"};
    }
    return enumerate_optimal(m, eff, measure, budget,
                             [&](const StateSet& cause) { return check_spr(m, cause, eff).is_cause; });
}

bool gpr_threshold(const Mdp& m, const StateSet& eff, Measure measure, const Rat& threshold, Comparison cmp,
                   std::optional<std::size_t> budget) {
    auto best = gpr_optimal(m, eff, measure, budget);
    if (!best) return false;
    return cmp == Comparison::AtLeast ? best->value >= Extended(threshold) : best->value > Extended(threshold);
}

}  // namespace prcause
