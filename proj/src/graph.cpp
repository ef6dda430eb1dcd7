#include "prcause/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace prcause {

namespace {

bool allowed_choice(const ActionMask& allowed, StateId s, std::size_t i) {
    return allowed.empty() || allowed[s][i];
}

// Tarjan's algorithm over the graph given by `succ`, restricted to `active` nodes.
std::vector<std::size_t> scc_ids(std::size_t n, const StateMask& active,
                                 const std::vector<std::vector<StateId>>& succ) {
    std::vector<std::size_t> id(n, npos), low(n, 0), order(n, npos);
    std::vector<char> on_stack(n, 0);
    std::vector<StateId> stack;
    std::size_t counter = 0, next_id = 0;

    struct Frame {
        StateId v;
        std::size_t edge;
    };
    for (StateId root = 0; root < n; ++root) {
        if (!active[root] || order[root] != npos) continue;
        std::vector<Frame> call{{root, 0}};
        order[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& f = call.back();
            if (f.edge < succ[f.v].size()) {
                StateId w = succ[f.v][f.edge++];
                if (!active[w]) continue;
                if (order[w] == npos) {
                    order[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], order[w]);
                }
                continue;
            }
            StateId v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == order[v]) {
                StateId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    id[w] = next_id;
                } while (w != v);
                ++next_id;
            }
        }
    }
    return id;
}

}  // namespace

ActionMask full_action_mask(const Mdp& m) {
    ActionMask a(m.size());
    for (StateId s = 0; s < m.size(); ++s) a[s].assign(m.choices(s).size(), 1);
    return a;
}

StateMask reachable_from(const Mdp& m, StateId from, const ActionMask& allowed) {
    StateMask seen(m.size(), 0);
    std::deque<StateId> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        const auto& cs = m.choices(s);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (!allowed_choice(allowed, s, i)) continue;
            for (const auto& t : cs[i].dist)
                if (!seen[t.target]) {
                    seen[t.target] = 1;
                    queue.push_back(t.target);
                }
        }
    }
    return seen;
}

StateMask can_reach(const Mdp& m, const StateMask& target, const StateMask& region, const ActionMask& allowed) {
    std::vector<std::vector<StateId>> pred(m.size());
    for (StateId s = 0; s < m.size(); ++s) {
        const auto& cs = m.choices(s);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (!allowed_choice(allowed, s, i)) continue;
            for (const auto& t : cs[i].dist) pred[t.target].push_back(s);
        }
    }
    StateMask out(m.size(), 0);
    std::deque<StateId> queue;
    for (StateId s = 0; s < m.size(); ++s)
        if (target[s]) {
            out[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        StateId t = queue.front();
        queue.pop_front();
        for (StateId s : pred[t]) {
            if (out[s] || (!region.empty() && !region[s])) continue;
            out[s] = 1;
            queue.push_back(s);
        }
    }
    return out;
}

std::vector<Mec> mec_decompose(const Mdp& m, const StateMask& region, const ActionMask& allowed) {
    std::size_t n = m.size();
    StateMask active(n, 0);
    ActionMask act(n);
    for (StateId s = 0; s < n; ++s) {
        act[s].assign(m.choices(s).size(), 0);
        if (!region.empty() && !region[s]) continue;
        for (std::size_t i = 0; i < act[s].size(); ++i) act[s][i] = allowed_choice(allowed, s, i);
        active[s] = 1;
    }
    std::vector<std::size_t> scc;
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s = 0; s < n; ++s) {
            if (!active[s]) continue;
            if (std::none_of(act[s].begin(), act[s].end(), [](char c) { return c != 0; })) {
                active[s] = 0;
                changed = true;
            }
        }
        std::vector<std::vector<StateId>> succ(n);
        for (StateId s = 0; s < n; ++s) {
            if (!active[s]) continue;
            for (std::size_t i = 0; i < act[s].size(); ++i)
                if (act[s][i])
                    for (const auto& t : m.choices(s)[i].dist) succ[s].push_back(t.target);
        }
        scc = scc_ids(n, active, succ);
        for (StateId s = 0; s < n; ++s) {
            if (!active[s]) continue;
            for (std::size_t i = 0; i < act[s].size(); ++i) {
                if (!act[s][i]) continue;
                for (const auto& t : m.choices(s)[i].dist)
                    if (!active[t.target] || scc[t.target] != scc[s]) {
                        act[s][i] = 0;
                        changed = true;
                        break;
                    }
            }
        }
    }
    std::vector<Mec> out;
    std::vector<std::size_t> slot(n, npos);
    for (StateId s = 0; s < n; ++s) {
        if (!active[s]) continue;
        if (slot[scc[s]] == npos) {
            slot[scc[s]] = out.size();
            out.emplace_back();
        }
        Mec& e = out[slot[scc[s]]];
        e.states.insert(s);
        for (std::size_t i = 0; i < act[s].size(); ++i)
            if (act[s][i]) e.stateActions.insert({s, i});
    }
    return out;
}

bool has_end_component(const Mdp& m) { return !mec_decompose(m).empty(); }

}  // namespace prcause

namespace prcause {

std::vector<std::size_t> attractor_choices(const Mdp& m, const StateMask& target, const ActionMask& allowed) {
    std::size_t n = m.size();
    std::vector<std::vector<StateId>> pred(n);
    for (StateId s = 0; s < n; ++s) {
        const auto& cs = m.choices(s);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (!allowed.empty() && !allowed[s][i]) continue;
            for (const auto& t : cs[i].dist) pred[t.target].push_back(s);
        }
    }
    std::vector<std::size_t> dist(n, npos);
    std::deque<StateId> queue;
    for (StateId s = 0; s < n; ++s)
        if (target[s]) {
            dist[s] = 0;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        StateId t = queue.front();
        queue.pop_front();
        for (StateId s : pred[t])
            if (dist[s] == npos) {
                dist[s] = dist[t] + 1;
                queue.push_back(s);
            }
    }
    std::vector<std::size_t> out(n, npos);
    for (StateId s = 0; s < n; ++s) {
        if (target[s] || dist[s] == npos) continue;
        const auto& cs = m.choices(s);
        for (std::size_t i = 0; i < cs.size() && out[s] == npos; ++i) {
            if (!allowed.empty() && !allowed[s][i]) continue;
            for (const auto& t : cs[i].dist)
                if (dist[t.target] < dist[s]) {
                    out[s] = i;
                    break;
                }
        }
    }
    return out;
}

std::vector<std::size_t> mec_attractor(const Mdp& m, const Mec& mec, StateId goal) {
    ActionMask allowed(m.size());
    for (StateId s = 0; s < m.size(); ++s) allowed[s].assign(m.choices(s).size(), 0);
    for (const auto& [s, i] : mec.stateActions) allowed[s][i] = 1;
    StateMask target(m.size(), 0);
    target[goal] = 1;
    return attractor_choices(m, target, allowed);
}

Collapsed collapse_mecs(const Mdp& m, const std::vector<Mec>& mecs, const ActionMask& allowed) {
    Collapsed out;
    std::size_t n = m.size();
    std::vector<std::size_t> mec_of(n, npos);
    for (std::size_t j = 0; j < mecs.size(); ++j)
        for (StateId s : mecs[j].states) mec_of[s] = j;
    out.to_new.assign(n, npos);
    out.mec_state.assign(mecs.size(), npos);
    for (StateId s = 0; s < n; ++s) {
        if (mec_of[s] == npos) {
            out.to_new[s] = out.mdp.add_state(m.name(s));
            continue;
        }
        std::size_t j = mec_of[s];
        if (out.mec_state[j] == npos) {
            std::string base = m.fresh_name("mec_" + m.name(*mecs[j].states.begin()));
            out.mec_state[j] = out.mdp.add_state(out.mdp.fresh_name(base));
        }
        out.to_new[s] = out.mec_state[j];
    }
    out.origin.resize(out.mdp.size());
    auto add = [&](StateId s, std::size_t i, bool prefixed) {
        const Choice& c = m.choices(s)[i];
        std::vector<Transition> dist;
        for (const auto& t : c.dist) dist.push_back({out.to_new[t.target], t.prob});
        StateId ns = out.to_new[s];
        out.mdp.add_choice(ns, prefixed ? m.name(s) + ":" + c.action : c.action, std::move(dist));
        out.origin[ns].push_back({s, i});
    };
    for (StateId s = 0; s < n; ++s) {
        if (mec_of[s] != npos) continue;
        for (std::size_t i = 0; i < m.choices(s).size(); ++i)
            if (allowed.empty() || allowed[s][i]) add(s, i, false);
    }
    for (const auto& mec : mecs)
        for (StateId s : mec.states)
            for (std::size_t i = 0; i < m.choices(s).size(); ++i)
                if ((allowed.empty() || allowed[s][i]) && !mec.stateActions.count({s, i})) add(s, i, true);
    out.mdp.set_init(out.to_new[m.init()]);
    return out;
}

}  // namespace prcause
