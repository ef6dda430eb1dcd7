#include "prcause/regular.hpp"

#include "prcause/analysis.hpp"
#include "prcause/error.hpp"

#include <functional>

namespace prcause {

namespace {

struct Annotated {
    Mdp mdp;
    std::vector<StateId> base;   // model state per product state
    RabinMasks pairs;
    StateSet trigger;
};

Annotated effect_product(const Mdp& m, const Dra& effect, const Labels& labels) {
    auto p = product_dra(stutter_terminals(m), effect, labels);
    return {std::move(p.mdp), std::move(p.base), std::move(p.pairs), {}};
}

RegularTransform finish(const Annotated& a) {
    auto split = cause_split(a.mdp, a.trigger);
    const Mdp& sm = split.mdp;
    RabinMasks pairs;
    for (const auto& [l, k] : a.pairs) {
        StateMask sl(sm.size(), 0), sk(sm.size(), 0);
        for (StateId v = 0; v < sm.size(); ++v) {
            sl[v] = l[split.base[v]];
            sk[v] = k[split.base[v]];
        }
        pairs.emplace_back(std::move(sl), std::move(sk));
    }

    auto mecs = mec_decompose(sm);
    auto col = collapse_mecs(sm, mecs);
    Mdp out = std::move(col.mdp);
    StateId eff_cov = out.add_state(out.fresh_name("eff_cov"));
    StateId eff_unc = out.add_state(out.fresh_name("eff_unc"));
    StateId noeff_fp = out.add_state(out.fresh_name("noeff_fp"));
    StateId noeff_tn = out.add_state(out.fresh_name("noeff_tn"));
    for (std::size_t i = 0; i < mecs.size(); ++i) {
        bool after = split.copy[*mecs[i].states.begin()] != 0;
        auto q = qualitative_rabin(sm, mecs[i], pairs);
        StateId v = col.mec_state[i];
        if (q.can_accept) out.add_choice(v, "accept", {{after ? eff_cov : eff_unc, Rat(1)}});
        if (q.can_reject) out.add_choice(v, "reject", {{after ? noeff_fp : noeff_tn, Rat(1)}});
    }

    auto pruned = prune_unreachable(out, {eff_cov, eff_unc, noeff_fp, noeff_tn});
    RegularTransform t;
    t.mdp = std::move(pruned.mdp);
    t.eff_cov = pruned.map(eff_cov);
    t.eff_unc = pruned.map(eff_unc);
    t.noeff_fp = pruned.map(noeff_fp);
    t.noeff_tn = pruned.map(noeff_tn);
    t.base.assign(t.mdp.size(), npos);
    StateSet collapsed(col.mec_state.begin(), col.mec_state.end());
    for (StateId v = 0; v < sm.size(); ++v) {
        StateId c = col.to_new[v];
        if (collapsed.count(c)) continue;
        StateId w = pruned.map(c);
        if (w == npos) continue;
        StateId model_state = a.base[split.base[v]];
        t.base[w] = model_state;
        if (split.copy[v] == 0 && a.trigger.count(split.base[v])) {
            t.cause.insert(w);
            t.cause_of[model_state].insert(w);
        }
    }
    return t;
}

StateMask mask_of(std::size_t n, const StateSet& states) {
    StateMask mask(n, 0);
    for (StateId s : states) mask[s] = 1;
    return mask;
}

bool reaches(const Mdp& m, StateId from, StateId target) { return reachable_from(m, from)[target] != 0; }

void require_cause(const Mdp& m, const StateSet& cause) {
    if (cause.empty()) throw PreconditionError("cause is empty");
    for (StateId c : cause)
        if (c >= m.size()) throw PreconditionError("cause state out of range");
}

CauseVerdict minimality_verdict(const Mdp& m, const StateSet& cause) {
    CauseVerdict v;
    v.checked_cause = cause;
    for (StateId c : cause)
        if (max_constrained_reach(m, cause, c) == 0) v.minimality_failures.insert(c);
    if (!v.minimality_failures.empty()) v.violated = "minimality";
    return v;
}

}  // namespace

QualitativeRabin qualitative_rabin(const Mdp& m, const Mec& mec, const RabinMasks& pairs) {
    ActionMask allowed(m.size());
    for (StateId s = 0; s < m.size(); ++s) allowed[s].assign(m.choices(s).size(), 0);
    for (auto [s, i] : mec.stateActions) allowed[s][i] = 1;
    StateMask region = mask_of(m.size(), mec.states);

    QualitativeRabin out{false, false};
    for (const auto& [l, k] : pairs) {
        StateMask inner = region;
        for (StateId s = 0; s < m.size(); ++s)
            if (l[s]) inner[s] = 0;
        for (const auto& sub : mec_decompose(m, inner, allowed))
            for (StateId s : sub.states) out.can_accept = out.can_accept || k[s];
    }

    // An end component rejecting every pair: visits L_i or avoids K_i for each i.
    std::function<bool(const StateMask&)> rejecting = [&](const StateMask& area) {
        for (const auto& sub : mec_decompose(m, area, allowed)) {
            StateMask next = mask_of(m.size(), sub.states);
            bool bad = false;
            for (const auto& [l, k] : pairs) {
                bool hits_l = false, hits_k = false;
                for (StateId s : sub.states) {
                    hits_l = hits_l || l[s];
                    hits_k = hits_k || k[s];
                }
                if (hits_k && !hits_l) {
                    bad = true;
                    for (StateId s : sub.states)
                        if (k[s]) next[s] = 0;
                }
            }
            if (!bad || rejecting(next)) return true;
        }
        return false;
    };
    out.can_reject = rejecting(region);
    return out;
}

RegularTransform regular_effect_transform(const Mdp& m, const Dra& effect, const StateSet& cause,
                                          const Labels& labels) {
    auto a = effect_product(m, effect, labels);
    for (StateId v = 0; v < a.mdp.size(); ++v)
        if (cause.count(a.base[v])) a.trigger.insert(v);
    return finish(a);
}

CauseVerdict check_reachability_gpr(const Mdp& m, const Dra& effect, const StateSet& cause,
                                    const CheckOptions& options, const Labels& labels) {
    require_cause(m, cause);
    auto pre = minimality_verdict(m, cause);
    if (!pre.violated.empty()) return pre;
    auto t = regular_effect_transform(m, effect, cause, labels);
    auto v = check_gpr(t.mdp, t.cause, t.effect(), options);
    v.checked_cause = cause;
    return v;
}

CauseVerdict check_reachability_spr(const Mdp& m, const Dra& effect, const StateSet& cause,
                                    const CheckOptions& options, const Labels& labels) {
    require_cause(m, cause);
    auto pre = minimality_verdict(m, cause);
    if (!pre.violated.empty()) return pre;
    auto t = regular_effect_transform(m, effect, cause, labels);
    CauseVerdict out;
    out.checked_cause = cause;
    out.is_cause = true;
    for (StateId c : cause) {
        auto v = check_gpr(t.mdp, t.cause_of.at(c), t.effect(), options);
        if (v.is_cause) continue;
        v.checked_cause = cause;
        v.violated = "spr";
        if (v.witness) v.witness->state = c;
        return v;
    }
    return out;
}

std::map<StateId, bool> temp_prio_check(const Mdp& m, const Dra& effect, const StateSet& cause,
                                        const Labels& labels) {
    auto t = regular_effect_transform(m, effect, cause, labels);
    std::map<StateId, bool> out;
    for (StateId c : cause) {
        bool ok = false;
        auto it = t.cause_of.find(c);
        if (it != t.cause_of.end())
            for (StateId v : it->second) ok = ok || reaches(t.mdp, v, t.noeff_fp);
        out[c] = ok;
    }
    return out;
}

MeasureResult reachability_quality(const Mdp& m, const Dra& effect, const StateSet& cause, Measure measure,
                                   const Labels& labels) {
    require_cause(m, cause);
    auto t = regular_effect_transform(m, effect, cause, labels);
    if (t.cause.empty()) throw PreconditionError("cause is not reachable");
    return measure_cause(t.mdp, t.cause, t.effect(), measure);
}

std::optional<CanonicalCause> canonical_reachability_cause(const Mdp& m, const Dra& effect, const Labels& labels) {
    auto reach = reachable_from(m, m.init());
    StateSet singles;
    for (StateId s = 0; s < m.size(); ++s) {
        if (!reach[s]) continue;
        auto t = regular_effect_transform(m, effect, {s}, labels);
        bool prio = false;
        for (StateId v : t.cause) prio = prio || reaches(t.mdp, v, t.noeff_fp);
        if (prio && check_gpr(t.mdp, t.cause, t.effect()).is_cause) singles.insert(s);
    }
    if (singles.empty()) return std::nullopt;
    CanonicalCause out;
    out.cause = front(m, singles);
    auto t = regular_effect_transform(m, effect, out.cause, labels);
    auto quality = recall_covratio(t.mdp, t.cause, t.effect());
    out.recall = quality.recall;
    out.covratio = quality.covratio;
    return out;
}

std::optional<OptimalResult> reachability_optimal(const Mdp& m, const Dra& effect, Measure measure, CauseKind kind,
                                                  const RegularSearchOptions& search, const Labels& labels) {
    auto reach = reachable_from(m, m.init());
    std::vector<StateId> pool;
    for (StateId s = 0; s < m.size(); ++s)
        if (reach[s] && !search.excluded.count(s)) pool.push_back(s);
    std::size_t limit = search.budget.value_or(default_face_budget());
    if (pool.size() >= 63 || (std::size_t{1} << pool.size()) - 1 > limit)
        throw BudgetExceeded("candidate budget of " + std::to_string(limit) + " exceeded");
    CheckOptions options;
    options.budget = search.budget;

    std::optional<OptimalResult> best;
    for (std::size_t mask = 1; mask < (std::size_t{1} << pool.size()); ++mask) {
        StateSet cause;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (mask >> i & 1) cause.insert(pool[i]);
        if (front(m, cause).size() != cause.size()) continue;
        auto t = regular_effect_transform(m, effect, cause, labels);
        bool prio = true;
        for (StateId c : cause) {
            if (!search.temp_prio) break;
            bool ok = false;
            for (StateId v : t.cause_of[c]) ok = ok || reaches(t.mdp, v, t.noeff_fp);
            prio = prio && ok;
        }
        if (!prio) continue;
        bool passes = true;
        if (kind == CauseKind::Gpr) {
            passes = check_gpr(t.mdp, t.cause, t.effect(), options).is_cause;
        } else {
            for (StateId c : cause) passes = passes && check_gpr(t.mdp, t.cause_of[c], t.effect(), options).is_cause;
        }
        if (!passes) continue;
        Extended value = measure_cause(t.mdp, t.cause, t.effect(), measure).value;
        if (!best || value > best->value || (value == best->value && cause < best->cause))
            best = OptimalResult{cause, measure, value, "enumeration"};
    }
    return best;
}

RegularTransform cosafety_transform(const Mdp& m, const Dra& effect, const Dfa& cause, const Labels& labels) {
    if (!cause.is_prefix_free()) throw PreconditionError("cause automaton is not prefix-free");
    auto first = effect_product(m, effect, labels);
    Labels letters(first.mdp.size());
    for (StateId v = 0; v < first.mdp.size(); ++v) letters[v] = labels.empty() ? first.base[v] : labels[first.base[v]];
    auto second = product_dfa(first.mdp, cause, letters);

    Annotated a;
    a.mdp = std::move(second.mdp);
    a.base.resize(a.mdp.size());
    for (StateId w = 0; w < a.mdp.size(); ++w) a.base[w] = first.base[second.base[w]];
    for (const auto& [l, k] : first.pairs) {
        StateMask sl(a.mdp.size(), 0), sk(a.mdp.size(), 0);
        for (StateId w = 0; w < a.mdp.size(); ++w) {
            sl[w] = l[second.base[w]];
            sk[w] = k[second.base[w]];
        }
        a.pairs.emplace_back(std::move(sl), std::move(sk));
    }
    a.trigger = second.accepting;
    return finish(a);
}

CauseVerdict check_cosafety_gpr(const Mdp& m, const Dra& effect, const Dfa& cause, const CheckOptions& options,
                                const Labels& labels) {
    auto t = cosafety_transform(m, effect, cause, labels);
    if (t.cause.empty()) throw PreconditionError("no good prefix of the cause has positive probability");
    return check_gpr(t.mdp, t.cause, t.effect(), options);
}

std::string to_string(Tristate t) {
    switch (t) {
    case Tristate::No:
        return "no";
    case Tristate::Unknown:
        return "unknown";
    case Tristate::Yes:
        return "yes";
    }
    return "?";
}

CosafetySprResult check_cosafety_spr_necessary(const Mdp& m, const Dra& effect, const Dfa& cause,
                                               const Labels& labels) {
    auto t = cosafety_transform(m, effect, cause, labels);
    if (t.cause.empty()) throw PreconditionError("no good prefix of the cause has positive probability");
    CosafetySprResult out;
    if (t.mdp.is_markov_chain()) {
        // Pr(effect | prefix) only depends on the product state the prefix ends in.
        auto value = max_reach_prob(t.mdp, t.effect()).value;
        Rat overall = value[t.mdp.init()];
        out.verdict = Tristate::Yes;
        for (StateId v : t.cause) {
            if (value[v] > overall) continue;
            out.verdict = Tristate::No;
            out.state = v;
            out.conditional = value[v];
            out.unconditional = overall;
            break;
        }
        return out;
    }
    out.verdict = check_spr(t.mdp, t.cause, t.effect()).is_cause ? Tristate::Unknown : Tristate::No;
    return out;
}

bool temp_prio2_check(const Mdp& m, const Dra& effect, const Dfa& cause, const Labels& labels) {
    auto t = cosafety_transform(m, effect, cause, labels);
    for (StateId v : t.cause)
        if (!reaches(t.mdp, v, t.noeff_fp)) return false;
    return true;
}

MeasureResult cosafety_quality(const Mdp& m, const Dra& effect, const Dfa& cause, Measure measure,
                               const Labels& labels) {
    auto t = cosafety_transform(m, effect, cause, labels);
    if (t.cause.empty()) throw PreconditionError("no good prefix of the cause has positive probability");
    return measure_cause(t.mdp, t.cause, t.effect(), measure);
}

}  // namespace prcause
