#include "prcause/ssp.hpp"

#include "prcause/error.hpp"
#include "prcause/graph.hpp"
#include "prcause/linalg.hpp"

namespace prcause {

namespace {

bool inside(const Choice& c, const StateMask& set) {
    for (const auto& t : c.dist)
        if (!set[t.target]) return false;
    return true;
}

// Expected accumulated weight of a proper memoryless policy.
std::vector<Rat> evaluate_cost(const Mdp& m, const MdScheduler& policy, const StateMask& stop,
                               const std::vector<Rat>& weight) {
    std::size_t n = m.size();
    std::vector<std::size_t> index(n, npos);
    std::vector<StateId> live;
    for (StateId s = 0; s < n; ++s)
        if (!stop[s] && !m.is_terminal(s)) {
            index[s] = live.size();
            live.push_back(s);
        }
    Matrix a(live.size(), live.size());
    std::vector<Rat> b(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
        StateId s = live[i];
        a(i, i) += 1;
        b[i] = weight[s];
        for (const auto& t : m.choices(s)[policy[s]].dist)
            if (index[t.target] != npos) a(i, index[t.target]) -= t.prob;
    }
    auto x = solve(a, b);
    if (!x) throw std::logic_error("evaluate_cost: improper policy");
    std::vector<Rat> v(n, Rat(0));
    for (std::size_t i = 0; i < live.size(); ++i) v[live[i]] = (*x)[i];
    return v;
}

}  // namespace

StateMask almost_sure_region(const Mdp& m, const StateMask& target) {
    StateMask x(m.size(), 1);
    while (true) {
        ActionMask allowed(m.size());
        for (StateId s = 0; s < m.size(); ++s) {
            const auto& cs = m.choices(s);
            allowed[s].assign(cs.size(), 0);
            for (std::size_t i = 0; i < cs.size(); ++i) allowed[s][i] = inside(cs[i], x);
        }
        auto y = can_reach(m, target, x, allowed);
        for (StateId s = 0; s < m.size(); ++s) y[s] = y[s] && x[s];
        if (y == x) return x;
        x = std::move(y);
    }
}

SspResult ssp_expected_weight(const Mdp& m, const std::vector<Rat>& weights, const StateSet& target, Opt mode) {
    std::size_t n = m.size();
    if (weights.size() != n) throw PreconditionError("weight vector size does not match model");
    for (const auto& w : weights)
        if (w < 0) throw PreconditionError("weights must be nonnegative");
    StateMask t = m.mask(target);
    if (t[m.init()]) return {Extended(Rat(0)), MdScheduler(n, 0)};
    auto region = almost_sure_region(m, t);
    if (!region[m.init()]) throw PreconditionError("no scheduler reaches the target almost surely");

    ActionMask allowed(n);
    for (StateId s = 0; s < n; ++s) {
        const auto& cs = m.choices(s);
        allowed[s].assign(cs.size(), 0);
        if (!region[s] || t[s]) continue;
        for (std::size_t i = 0; i < cs.size(); ++i) allowed[s][i] = inside(cs[i], region);
    }
    auto reach = reachable_from(m, m.init(), allowed);
    for (StateId s = 0; s < n; ++s) {
        region[s] = region[s] && reach[s] && !t[s];
        if (!region[s]) std::fill(allowed[s].begin(), allowed[s].end(), 0);
    }

    std::vector<Mec> mecs;
    if (mode == Opt::Min) {
        StateMask zero(n, 0);
        for (StateId s = 0; s < n; ++s) zero[s] = region[s] && weights[s] == 0;
        mecs = mec_decompose(m, zero, allowed);
    } else {
        mecs = mec_decompose(m, region, allowed);
        for (const auto& e : mecs)
            for (StateId s : e.states)
                if (weights[s] != 0) return {Extended::infinity(), std::nullopt};
    }
    auto c = collapse_mecs(m, mecs, allowed);
    const Mdp& q = c.mdp;
    StateMask stop(q.size(), 0);
    std::vector<Rat> w(q.size(), Rat(0));
    for (StateId s = 0; s < n; ++s) {
        if (t[s]) stop[c.to_new[s]] = 1;
        if (!region[s]) continue;
        bool in_mec = false;
        for (auto ms : c.mec_state) in_mec = in_mec || ms == c.to_new[s];
        if (!in_mec) w[c.to_new[s]] = weights[s];
    }

    auto policy = attractor_choices(q, stop);
    for (StateId s = 0; s < q.size(); ++s)
        if (policy[s] == npos) policy[s] = 0;
    std::vector<Rat> v;
    while (true) {
        v = evaluate_cost(q, policy, stop, w);
        bool improved = false;
        for (StateId s = 0; s < q.size(); ++s) {
            if (stop[s] || q.is_terminal(s)) continue;
            const auto& cs = q.choices(s);
            auto value_of = [&](std::size_t i) {
                Rat sum = w[s];
                for (const auto& tr : cs[i].dist) sum += tr.prob * v[tr.target];
                return sum;
            };
            Rat best = value_of(policy[s]);
            std::size_t arg = policy[s];
            for (std::size_t i = 0; i < cs.size(); ++i) {
                Rat x = value_of(i);
                if (mode == Opt::Max ? x > best : x < best) {
                    best = x;
                    arg = i;
                }
            }
            if (arg != policy[s]) {
                policy[s] = arg;
                improved = true;
            }
        }
        if (!improved) break;
    }

    MdScheduler out(n, 0);
    for (StateId s = 0; s < n; ++s) {
        if (!region[s]) continue;
        StateId ns = c.to_new[s];
        if (q.is_terminal(ns)) continue;
        out[s] = c.origin[ns][policy[ns]].choice;
    }
    for (std::size_t j = 0; j < mecs.size(); ++j) {
        StateId ns = c.mec_state[j];
        if (q.is_terminal(ns)) continue;
        auto exit = c.origin[ns][policy[ns]];
        auto inner = mec_attractor(m, mecs[j], exit.state);
        for (StateId s : mecs[j].states) out[s] = s == exit.state ? exit.choice : inner[s];
    }
    return {Extended(v[c.to_new[m.init()]]), out};
}

RatioResult ratio_extremal(const Mdp& m, const StateSet& u, const StateSet& v, Opt mode) {
    if (v.empty()) throw PreconditionError("ratio: V must be nonempty");
    for (StateId s : u)
        if (v.count(s)) throw PreconditionError("ratio: U and V must be disjoint");
    for (StateId s : u)
        if (!m.is_terminal(s)) throw PreconditionError("ratio: U must consist of terminal states");
    for (StateId s : v)
        if (!m.is_terminal(s)) throw PreconditionError("ratio: V must consist of terminal states");
    if (has_end_component(m)) throw PreconditionError("ratio: model must not contain end components");
    auto reach = reachable_from(m, m.init());
    bool v_reachable = false;
    for (StateId s : v) v_reachable = v_reachable || reach[s];
    if (!v_reachable) throw PreconditionError("ratio: V is unreachable, the ratio is undefined");

    RatioResult out;
    Mdp& n = out.reset_model;
    for (StateId s = 0; s < m.size(); ++s) n.add_state(m.name(s));
    for (StateId s = 0; s < m.size(); ++s)
        for (const auto& c : m.choices(s)) n.add_choice(s, c.action, c.dist);
    for (StateId s = 0; s < m.size(); ++s)
        if (m.is_terminal(s) && !v.count(s)) n.add_choice(s, "reset", {{m.init(), Rat(1)}});
    n.set_init(m.init());
    std::vector<Rat> w(m.size(), Rat(0));
    for (StateId s : u) w[s] = 1;
    auto r = ssp_expected_weight(n, w, v, mode);
    out.value = r.value;
    out.scheduler = r.scheduler;
    return out;
}

}  // namespace prcause
