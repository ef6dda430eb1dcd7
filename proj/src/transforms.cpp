#include "prcause/transforms.hpp"

#include "prcause/analysis.hpp"
#include "prcause/error.hpp"

#include <deque>

namespace prcause {

namespace {

void check_cause_effect(const Mdp& m, const StateSet& cause, const StateSet& eff) {
    for (StateId e : eff) {
        if (e >= m.size()) throw PreconditionError("effect state out of range");
        if (!m.is_terminal(e)) throw PreconditionError("effect state '" + m.name(e) + "' is not terminal");
    }
    for (StateId c : cause) {
        if (c >= m.size()) throw PreconditionError("cause state out of range");
        if (eff.count(c)) throw PreconditionError("state '" + m.name(c) + "' is both cause and effect");
    }
}

std::vector<Transition> remap(const std::vector<Transition>& dist, const std::vector<StateId>& to) {
    std::vector<Transition> out;
    out.reserve(dist.size());
    for (const auto& t : dist) out.push_back({to[t.target], t.prob});
    return out;
}

std::size_t letter_of(const Labels& labels, StateId s) { return labels.empty() ? s : labels[s]; }

void check_labels(const Mdp& m, const Labels& labels, std::size_t alphabet_size) {
    if (labels.empty()) {
        if (alphabet_size != m.size()) throw InputError("automaton alphabet does not match the model states");
        return;
    }
    if (labels.size() != m.size()) throw InputError("label vector has wrong size");
    for (auto l : labels)
        if (l >= alphabet_size) throw InputError("label outside the automaton alphabet");
}

Product build_product(const Mdp& m, const std::vector<std::string>& qnames, std::size_t initial,
                      const std::vector<std::vector<std::size_t>>& delta, const Labels& labels) {
    Product p;
    std::map<std::pair<StateId, std::size_t>, StateId> index;
    std::deque<StateId> queue;
    auto node = [&](StateId s, std::size_t q) {
        auto [it, fresh] = index.try_emplace({s, q}, p.mdp.size());
        if (fresh) {
            p.mdp.add_state(m.name(s) + "|" + qnames[q]);
            p.base.push_back(s);
            p.automaton.push_back(q);
            queue.push_back(it->second);
        }
        return it->second;
    };
    StateId start = node(m.init(), delta[initial][letter_of(labels, m.init())]);
    p.mdp.set_init(start);
    while (!queue.empty()) {
        StateId v = queue.front();
        queue.pop_front();
        StateId s = p.base[v];
        std::size_t q = p.automaton[v];
        for (const auto& c : m.choices(s)) {
            std::vector<Transition> dist;
            for (const auto& t : c.dist) dist.push_back({node(t.target, delta[q][letter_of(labels, t.target)]), t.prob});
            p.mdp.add_choice(v, c.action, std::move(dist));
        }
    }
    p.map.to_new.assign(m.size(), npos);
    for (StateId v = 0; v < p.mdp.size(); ++v) {
        p.map.to_old.emplace(v, p.base[v]);
        if (p.map.to_new[p.base[v]] == npos) p.map.to_new[p.base[v]] = v;
    }
    return p;
}

}  // namespace

StateMap StateMap::identity(std::size_t n) {
    std::vector<StateId> to(n);
    for (StateId s = 0; s < n; ++s) to[s] = s;
    return from_forward(std::move(to));
}

StateMap StateMap::from_forward(std::vector<StateId> to_new) {
    StateMap out;
    out.to_new = std::move(to_new);
    for (StateId s = 0; s < out.to_new.size(); ++s)
        if (out.to_new[s] != npos) out.to_old.emplace(out.to_new[s], s);
    return out;
}

StateMap StateMap::then(const StateMap& next) const {
    std::vector<StateId> to(to_new.size(), npos);
    for (StateId s = 0; s < to_new.size(); ++s)
        if (to_new[s] != npos) to[s] = next.to_new.at(to_new[s]);
    return from_forward(std::move(to));
}

WminResult wmin_cause(const Mdp& m, const StateSet& cause, const StateSet& eff) {
    check_cause_effect(m, cause, eff);
    WminResult out;
    out.mdp = m;
    out.map = StateMap::identity(m.size());
    if (cause.empty()) return out;
    if (eff.empty()) throw PreconditionError("effect set is empty");
    auto minimum = min_reach_prob(m, eff).value;
    out.eff_target = *eff.begin();
    for (StateId c : cause) {
        out.weight[c] = minimum[c];
        if (minimum[c] < 1 && !out.noeff_target) out.noeff_target = out.mdp.add_state(m.fresh_name("noeff"));
    }
    Mdp rebuilt;
    for (StateId s = 0; s < out.mdp.size(); ++s) rebuilt.add_state(out.mdp.name(s));
    for (StateId s = 0; s < m.size(); ++s) {
        if (!cause.count(s)) {
            for (const auto& c : m.choices(s)) rebuilt.add_choice(s, c.action, c.dist);
            continue;
        }
        std::vector<Transition> dist{{out.eff_target, minimum[s]}};
        if (out.noeff_target) dist.push_back({*out.noeff_target, 1 - minimum[s]});
        rebuilt.add_choice(s, "gamma", std::move(dist));
    }
    rebuilt.set_init(m.init());
    out.mdp = std::move(rebuilt);
    return out;
}

Quotient mec_quotient(const Mdp& m, std::optional<StateId> bottom) {
    if (bottom && (*bottom >= m.size() || !m.is_terminal(*bottom)))
        throw PreconditionError("quotient bottom state must be terminal");
    Quotient q;
    q.mecs = mec_decompose(m);
    auto collapsed = collapse_mecs(m, q.mecs);
    q.mdp = std::move(collapsed.mdp);
    q.mec_state = std::move(collapsed.mec_state);
    q.origin = std::move(collapsed.origin);
    q.map = StateMap::from_forward(std::move(collapsed.to_new));
    if (bottom) {
        q.bottom = q.map(*bottom);
    } else {
        q.bottom = q.mdp.add_state(q.mdp.fresh_name(m.fresh_name("bottom")));
        q.origin.emplace_back();
    }
    for (StateId v : q.mec_state) {
        q.mdp.add_choice(v, "tau", {{q.bottom, Rat(1)}});
        q.origin[v].push_back({npos, npos});
    }
    return q;
}

PruneResult prune_unreachable(const Mdp& m, const StateSet& keep) {
    StateMask live = reachable_from(m, m.init());
    for (StateId k : keep) {
        auto more = reachable_from(m, k);
        for (StateId s = 0; s < m.size(); ++s) live[s] = live[s] || more[s];
    }
    PruneResult out;
    std::vector<StateId> to(m.size(), npos);
    for (StateId s = 0; s < m.size(); ++s)
        if (live[s]) to[s] = out.mdp.add_state(m.name(s));
    for (StateId s = 0; s < m.size(); ++s)
        if (live[s])
            for (const auto& c : m.choices(s)) out.mdp.add_choice(to[s], c.action, remap(c.dist, to));
    out.mdp.set_init(to[m.init()]);
    out.map = StateMap::from_forward(std::move(to));
    return out;
}

CanonicalMdp canonical_form(const Mdp& m, const StateSet& cause, const StateSet& eff) {
    check_cause_effect(m, cause, eff);
    std::vector<Rat> minimum(m.size(), Rat(0));
    if (!eff.empty()) minimum = min_reach_prob(m, eff).value;

    Mdp split;
    for (StateId s = 0; s < m.size(); ++s) split.add_state(m.name(s));
    StateId eff_cov = split.add_state(m.fresh_name("eff_cov"));
    StateId eff_unc = split.add_state(m.fresh_name("eff_unc"));
    StateId noeff_fp = split.add_state(m.fresh_name("noeff_fp"));
    StateId noeff_tn = split.add_state(m.fresh_name("noeff_tn"));

    std::vector<StateId> redirect(m.size());
    for (StateId s = 0; s < m.size(); ++s)
        redirect[s] = !m.is_terminal(s) ? s : eff.count(s) ? eff_unc : noeff_tn;
    for (StateId s = 0; s < m.size(); ++s) {
        if (cause.count(s)) {
            split.add_choice(s, "gamma", {{eff_cov, minimum[s]}, {noeff_fp, 1 - minimum[s]}});
            continue;
        }
        for (const auto& c : m.choices(s)) split.add_choice(s, c.action, remap(c.dist, redirect));
    }
    split.set_init(redirect[m.init()]);

    CanonicalMdp out;
    out.split_map = StateMap::from_forward(redirect);
    out.quotient = mec_quotient(split, noeff_tn);
    const auto& qmap = out.quotient.map;
    auto pruned = prune_unreachable(out.quotient.mdp, {qmap(eff_cov), qmap(eff_unc), qmap(noeff_fp), qmap(noeff_tn)});
    out.prune = std::move(pruned.map);
    out.mdp = std::move(pruned.mdp);
    auto final_id = [&](StateId split_id) { return out.prune(qmap(split_id)); };
    out.eff_cov = final_id(eff_cov);
    out.eff_unc = final_id(eff_unc);
    out.noeff_fp = final_id(noeff_fp);
    out.noeff_tn = final_id(noeff_tn);
    for (StateId c : cause) {
        StateId v = final_id(c);
        if (v == npos) continue;
        out.cause.insert(v);
        out.weight[v] = minimum[c];
    }
    out.map = out.split_map.then(qmap).then(out.prune);
    out.split = std::move(split);
    return out;
}

SplitModel cause_split(const Mdp& m, const StateSet& trigger) {
    SplitModel out;
    std::map<std::pair<StateId, char>, StateId> index;
    std::deque<StateId> queue;
    auto node = [&](StateId s, char bit) {
        auto [it, fresh] = index.try_emplace({s, bit}, out.mdp.size());
        if (fresh) {
            out.mdp.add_state(m.name(s) + (bit ? "|1" : "|0"));
            out.base.push_back(s);
            out.copy.push_back(bit);
            queue.push_back(it->second);
        }
        return it->second;
    };
    out.mdp.set_init(node(m.init(), 0));
    while (!queue.empty()) {
        StateId v = queue.front();
        queue.pop_front();
        StateId s = out.base[v];
        char next = out.copy[v] || trigger.count(s) ? 1 : 0;
        for (const auto& c : m.choices(s)) {
            std::vector<Transition> dist;
            for (const auto& t : c.dist) dist.push_back({node(t.target, next), t.prob});
            out.mdp.add_choice(v, c.action, std::move(dist));
        }
    }
    out.map.to_new.assign(m.size(), npos);
    for (StateId v = 0; v < out.mdp.size(); ++v) {
        out.map.to_old.emplace(v, out.base[v]);
        if (!out.copy[v]) out.map.to_new[out.base[v]] = v;
    }
    return out;
}

ActionSplit action_causality_mdp(const Mdp& m, StateId s, std::string_view action, const StateSet& eff) {
    if (s >= m.size()) throw PreconditionError("state out of range");
    if (m.is_terminal(s)) throw PreconditionError("state '" + m.name(s) + "' is terminal");
    auto alpha = m.choice_index(s, action);
    if (!alpha) throw PreconditionError("action '" + std::string(action) + "' is not enabled in '" + m.name(s) + "'");
    if (m.choices(s).size() < 2)
        throw PreconditionError("action '" + std::string(action) + "' is the only action of '" + m.name(s) + "'");
    for (const auto& c : m.choices(s))
        for (const auto& t : c.dist)
            if (reachable_from(m, t.target)[s]) throw PreconditionError("state '" + m.name(s) + "' lies on a cycle");
    for (StateId e : eff)
        if (e >= m.size()) throw PreconditionError("effect state out of range");

    std::size_t n = m.size();
    ActionSplit out;
    std::vector<StateId> with(n), without(n);
    for (StateId x = 0; x < n; ++x) with[x] = out.mdp.add_state(m.name(x) + "_0");
    for (StateId x = 0; x < n; ++x) without[x] = out.mdp.add_state(m.name(x) + "_1");
    for (StateId x = 0; x < n; ++x)
        for (std::size_t i = 0; i < m.choices(x).size(); ++i) {
            const auto& c = m.choices(x)[i];
            if (x != s || i == *alpha) out.mdp.add_choice(with[x], c.action, remap(c.dist, with));
            if (x != s || i != *alpha) out.mdp.add_choice(without[x], c.action, remap(c.dist, without));
        }
    StateId root = out.mdp.add_state(out.mdp.fresh_name("init"));
    out.mdp.add_choice(root, "split", {{with[s], Rat(1, 2)}, {without[s], Rat(1, 2)}});
    out.mdp.set_init(root);
    out.split_state = with[s];
    for (StateId e : eff) {
        out.effect.insert(with[e]);
        out.effect.insert(without[e]);
    }
    out.to_with = StateMap::from_forward(with);
    out.to_without = StateMap::from_forward(without);
    return out;
}

DraProduct product_dra(const Mdp& m, const Dra& a, const Labels& labels) {
    a.validate(a.delta.empty() ? 0 : a.delta[0].size());
    check_labels(m, labels, a.delta[0].size());
    DraProduct out;
    static_cast<Product&>(out) = build_product(m, a.states, a.initial, a.delta, labels);
    for (const auto& pair : a.pairs) {
        StateMask l(out.mdp.size(), 0), k(out.mdp.size(), 0);
        for (StateId v = 0; v < out.mdp.size(); ++v) {
            l[v] = pair.finite.count(out.automaton[v]) ? 1 : 0;
            k[v] = pair.infinite.count(out.automaton[v]) ? 1 : 0;
        }
        out.pairs.emplace_back(std::move(l), std::move(k));
    }
    return out;
}

DfaProduct product_dfa(const Mdp& m, const Dfa& a, const Labels& labels) {
    a.validate(a.delta.empty() ? 0 : a.delta[0].size());
    check_labels(m, labels, a.delta[0].size());
    DfaProduct out;
    static_cast<Product&>(out) = build_product(m, a.states, a.initial, a.delta, labels);
    for (StateId v = 0; v < out.mdp.size(); ++v)
        if (a.accepting[out.automaton[v]]) out.accepting.insert(v);
    return out;
}

Mdp stutter_terminals(const Mdp& m) {
    Mdp out = m;
    for (StateId t : m.terminals()) out.add_choice(t, "stay", {{t, Rat(1)}});
    return out;
}

}  // namespace prcause
