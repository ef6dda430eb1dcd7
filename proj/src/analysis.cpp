#include "prcause/analysis.hpp"

#include "prcause/error.hpp"
#include "prcause/graph.hpp"
#include "prcause/linalg.hpp"

#include <deque>
#include <map>

namespace prcause {

namespace detail {

Rows induced_rows(const Mdp& m, const MrScheduler& s) {
    Rows rows(m.size());
    for (StateId st = 0; st < m.size(); ++st) {
        std::map<StateId, Rat> acc;
        const auto& cs = m.choices(st);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const Rat& w = s.weights[st][i];
            if (w == 0) continue;
            for (const auto& t : cs[i].dist) acc[t.target] += w * t.prob;
        }
        for (auto& [t, p] : acc)
            if (p != 0) rows[st].push_back({t, p});
    }
    return rows;
}

Rows md_rows(const Mdp& m, const MdScheduler& s) {
    Rows rows(m.size());
    for (StateId st = 0; st < m.size(); ++st)
        if (!m.is_terminal(st)) rows[st] = m.choices(st)[s[st]].dist;
    return rows;
}

std::vector<Rat> absorb_value(const Rows& rows, const StateMask& stop, const std::vector<Rat>& stop_value,
                              const StateMask& region) {
    std::size_t n = rows.size();
    auto live = [&](StateId s) { return !stop[s] && (region.empty() || region[s]) && !rows[s].empty(); };

    std::vector<std::vector<StateId>> pred(n);
    for (StateId s = 0; s < n; ++s)
        if (live(s))
            for (const auto& t : rows[s]) pred[t.target].push_back(s);
    StateMask relevant(n, 0);
    std::deque<StateId> queue;
    for (StateId s = 0; s < n; ++s)
        if (stop[s] && stop_value[s] != 0) {
            relevant[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        StateId t = queue.front();
        queue.pop_front();
        for (StateId s : pred[t])
            if (!relevant[s]) {
                relevant[s] = 1;
                queue.push_back(s);
            }
    }

    std::vector<std::size_t> index(n, npos);
    std::vector<StateId> unknown;
    for (StateId s = 0; s < n; ++s)
        if (relevant[s] && live(s)) {
            index[s] = unknown.size();
            unknown.push_back(s);
        }
    std::vector<Rat> value(n, Rat(0));
    for (StateId s = 0; s < n; ++s)
        if (stop[s]) value[s] = stop_value[s];
    if (unknown.empty()) return value;

    std::size_t k = unknown.size();
    Matrix a(k, k);
    std::vector<Rat> b(k, Rat(0));
    for (std::size_t i = 0; i < k; ++i) {
        a(i, i) += 1;
        for (const auto& t : rows[unknown[i]]) {
            if (stop[t.target])
                b[i] += t.prob * stop_value[t.target];
            else if (index[t.target] != npos)
                a(i, index[t.target]) -= t.prob;
        }
    }
    auto x = solve(a, b);
    if (!x) throw std::logic_error("absorb_value: singular system");
    for (std::size_t i = 0; i < k; ++i) value[unknown[i]] = (*x)[i];
    return value;
}

StateMask mask_of_labels(const InducedChain& ic, const StateSet& states) {
    StateMask out(ic.label.size(), 0);
    for (std::size_t v = 0; v < ic.label.size(); ++v) out[v] = states.count(ic.label[v]) ? 1 : 0;
    return out;
}

}  // namespace detail

namespace {

using detail::absorb_value;
using detail::md_rows;

Rat choice_value(const Choice& c, const std::vector<Rat>& v) {
    Rat sum = 0;
    for (const auto& t : c.dist) sum += t.prob * v[t.target];
    return sum;
}

// Policy iteration with strict improvement and lowest-index tie-breaking.
ReachResult policy_iteration(const Mdp& m, const StateMask& stop, const std::vector<Rat>& stop_value, Opt mode,
                             MdScheduler policy, const StateMask& fixed) {
    while (true) {
        auto v = absorb_value(md_rows(m, policy), stop, stop_value);
        bool improved = false;
        for (StateId s = 0; s < m.size(); ++s) {
            if (stop[s] || m.is_terminal(s) || fixed[s]) continue;
            const auto& cs = m.choices(s);
            Rat best = choice_value(cs[policy[s]], v);
            std::size_t arg = policy[s];
            for (std::size_t i = 0; i < cs.size(); ++i) {
                Rat q = choice_value(cs[i], v);
                if (mode == Opt::Max ? q > best : q < best) {
                    best = q;
                    arg = i;
                }
            }
            if (arg != policy[s]) {
                policy[s] = arg;
                improved = true;
            }
        }
        if (!improved) return {std::move(v), std::move(policy)};
    }
}

bool stays_in(const Choice& c, const StateMask& set) {
    for (const auto& t : c.dist)
        if (!set[t.target]) return false;
    return true;
}

// States from which a scheduler can avoid every stop state of nonzero value forever.
StateMask avoid_forever(const Mdp& m, const StateMask& stop, const std::vector<Rat>& stop_value) {
    StateMask x(m.size(), 0);
    for (StateId s = 0; s < m.size(); ++s) x[s] = !(stop[s] && stop_value[s] != 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s = 0; s < m.size(); ++s) {
            if (!x[s] || stop[s] || m.is_terminal(s)) continue;
            bool ok = false;
            for (const auto& c : m.choices(s))
                if (stays_in(c, x)) {
                    ok = true;
                    break;
                }
            if (!ok) {
                x[s] = 0;
                changed = true;
            }
        }
    }
    return x;
}

ReachResult optimize_stop(const Mdp& m, const StateMask& stop, const std::vector<Rat>& stop_value, Opt mode) {
    MdScheduler policy(m.size(), 0);
    StateMask fixed(m.size(), 0);
    if (mode == Opt::Min) {
        auto zero = avoid_forever(m, stop, stop_value);
        for (StateId s = 0; s < m.size(); ++s) {
            if (!zero[s] || stop[s] || m.is_terminal(s)) continue;
            const auto& cs = m.choices(s);
            for (std::size_t i = 0; i < cs.size(); ++i)
                if (stays_in(cs[i], zero)) {
                    policy[s] = i;
                    break;
                }
            fixed[s] = 1;
        }
    }
    return policy_iteration(m, stop, stop_value, mode, std::move(policy), fixed);
}

ReachResult reach(const Mdp& m, const StateSet& target, Opt mode) {
    if (target.empty()) throw PreconditionError("reachability target must be nonempty");
    StateMask stop = m.mask(target);
    std::vector<Rat> value(m.size(), Rat(0));
    for (StateId s : target) value[s] = 1;
    return optimize_stop(m, stop, value, mode);
}

}  // namespace

ReachResult max_reach_prob(const Mdp& m, const StateSet& target) { return reach(m, target, Opt::Max); }

ReachResult min_reach_prob(const Mdp& m, const StateSet& target) { return reach(m, target, Opt::Min); }

Rat max_constrained_reach(const Mdp& m, const StateSet& avoid, StateId c) {
    StateMask stop = m.mask(avoid);
    stop[c] = 1;
    std::vector<Rat> value(m.size(), Rat(0));
    value[c] = 1;
    return optimize_stop(m, stop, value, Opt::Max).value[m.init()];
}

ReachResult optimize_terminal_value(const Mdp& m, const std::map<StateId, Rat>& value, Opt mode) {
    if (has_end_component(m)) throw PreconditionError("optimize_terminal_value requires a model without end components");
    StateMask stop(m.size(), 0);
    std::vector<Rat> v(m.size(), Rat(0));
    for (StateId s = 0; s < m.size(); ++s) stop[s] = m.is_terminal(s);
    for (const auto& [s, x] : value) {
        if (!m.is_terminal(s)) throw PreconditionError("terminal value given for a non-terminal state");
        v[s] = x;
    }
    return policy_iteration(m, stop, v, mode, MdScheduler(m.size(), 0), StateMask(m.size(), 0));
}

InducedChain induced_chain(const Mdp& m, const FmScheduler& s) {
    s.validate(m);
    std::size_t modes = s.modes.size();
    InducedChain out;
    std::map<std::pair<StateId, std::size_t>, StateId> node;
    std::deque<std::pair<StateId, std::size_t>> queue;
    auto node_of = [&](StateId st, std::size_t k) {
        auto key = std::make_pair(st, k);
        auto it = node.find(key);
        if (it != node.end()) return it->second;
        std::string name = modes == 1 ? m.name(st) : m.name(st) + "@" + s.modes[k];
        StateId v = out.chain.add_state(name);
        out.label.push_back(st);
        out.mode.push_back(k);
        node.emplace(key, v);
        queue.push_back(key);
        return v;
    };
    node_of(m.init(), s.initial);
    while (!queue.empty()) {
        auto [st, k] = queue.front();
        queue.pop_front();
        StateId v = node.at({st, k});
        if (m.is_terminal(st)) continue;
        std::map<StateId, Rat> acc;
        const auto& cs = m.choices(st);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const Rat& w = s.per_mode[k].weights[st][i];
            if (w == 0) continue;
            for (const auto& t : cs[i].dist) acc[t.target] += w * t.prob;
        }
        std::vector<Transition> dist;
        for (auto& [t, p] : acc) dist.push_back({node_of(t, s.update[k][t]), p});
        out.chain.add_choice(v, "step", std::move(dist));
    }
    out.chain.set_init(0);
    return out;
}

InducedChain induced_chain(const Mdp& m, const MrScheduler& s) {
    return induced_chain(m, FmScheduler::memoryless(m, s));
}

namespace {

std::vector<Rat> event_values(const InducedChain& ic, const PathEvent& event, const std::vector<Rat>& on_target) {
    auto stop = detail::mask_of_labels(ic, event.target);
    StateMask region;
    if (event.region) region = detail::mask_of_labels(ic, *event.region);
    std::vector<Rat> sv(stop.size(), Rat(0));
    for (std::size_t v = 0; v < stop.size(); ++v)
        if (stop[v]) sv[v] = on_target[v];
    return detail::absorb_value(detail::induced_rows(ic.chain, MrScheduler::uniform_first(ic.chain)), stop, sv, region);
}

}  // namespace

Rat reach_prob_under(const Mdp& m, const FmScheduler& s, const PathEvent& event) {
    auto ic = induced_chain(m, s);
    std::vector<Rat> ones(ic.label.size(), Rat(1));
    return event_values(ic, event, ones)[ic.chain.init()];
}

Rat reach_prob_under(const Mdp& m, const MrScheduler& s, const PathEvent& event) {
    return reach_prob_under(m, FmScheduler::memoryless(m, s), event);
}

Rat joint_prob_under(const Mdp& m, const FmScheduler& s, const PathEvent& event, const StateSet& then) {
    auto ic = induced_chain(m, s);
    std::vector<Rat> ones(ic.label.size(), Rat(1));
    auto after = event_values(ic, PathEvent::eventually(then), ones);
    return event_values(ic, event, after)[ic.chain.init()];
}

FrequencyVector scheduler_frequencies(const Mdp& m, const MrScheduler& s) {
    if (has_end_component(m)) throw PreconditionError("expected frequencies require a model without end components");
    s.validate(m);
    auto rows = detail::induced_rows(m, s);
    std::size_t n = m.size();
    // Reachable part under s.
    StateMask seen(n, 0);
    std::deque<StateId> queue{m.init()};
    seen[m.init()] = 1;
    while (!queue.empty()) {
        StateId v = queue.front();
        queue.pop_front();
        for (const auto& t : rows[v])
            if (!seen[t.target]) {
                seen[t.target] = 1;
                queue.push_back(t.target);
            }
    }
    std::vector<std::size_t> index(n, npos);
    std::vector<StateId> states;
    for (StateId v = 0; v < n; ++v)
        if (seen[v]) {
            index[v] = states.size();
            states.push_back(v);
        }
    std::size_t k = states.size();
    Matrix a(k, k);
    std::vector<Rat> b(k, Rat(0));
    b[index[m.init()]] = 1;
    for (std::size_t i = 0; i < k; ++i) a(i, i) += 1;
    for (StateId v : states)
        for (const auto& t : rows[v]) a(index[t.target], index[v]) -= t.prob;
    auto x = solve(a, b);
    if (!x) throw std::logic_error("scheduler_frequencies: singular system");
    FrequencyVector f;
    f.state.assign(n, Rat(0));
    f.pair.resize(n);
    for (StateId v = 0; v < n; ++v) {
        f.pair[v].assign(m.choices(v).size(), Rat(0));
        if (index[v] == npos) continue;
        f.state[v] = (*x)[index[v]];
        for (std::size_t i = 0; i < f.pair[v].size(); ++i) f.pair[v][i] = f.state[v] * s.weights[v][i];
    }
    return f;
}

MrScheduler scheduler_from_frequencies(const Mdp& m, const FrequencyVector& f) {
    MrScheduler out;
    out.weights.resize(m.size());
    for (StateId s = 0; s < m.size(); ++s) {
        std::size_t k = m.choices(s).size();
        out.weights[s].assign(k, Rat(0));
        if (k == 0) continue;
        Rat total = 0;
        for (const auto& x : f.pair[s]) total += x;
        if (total == 0) {
            out.weights[s][0] = 1;
            continue;
        }
        for (std::size_t i = 0; i < k; ++i) out.weights[s][i] = f.pair[s][i] / total;
    }
    return out;
}

MrScheduler convex_combine(const Mdp& m, const MrScheduler& s1, const MrScheduler& s2, const Rat& lambda) {
    if (lambda <= 0 || lambda >= 1) throw PreconditionError("convex_combine: lambda must lie in (0,1)");
    auto f1 = scheduler_frequencies(m, s1);
    auto f2 = scheduler_frequencies(m, s2);
    FrequencyVector f;
    f.state.resize(m.size());
    f.pair.resize(m.size());
    for (StateId s = 0; s < m.size(); ++s) {
        f.state[s] = lambda * f1.state[s] + (1 - lambda) * f2.state[s];
        f.pair[s].resize(f1.pair[s].size());
        for (std::size_t i = 0; i < f.pair[s].size(); ++i)
            f.pair[s][i] = lambda * f1.pair[s][i] + (1 - lambda) * f2.pair[s][i];
    }
    return scheduler_from_frequencies(m, f);
}

}  // namespace prcause
