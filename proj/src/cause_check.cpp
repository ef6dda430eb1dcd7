#include "prcause/cause_check.hpp"

#include "prcause/analysis.hpp"
#include "prcause/error.hpp"
#include "prcause/graph.hpp"
#include "prcause/linalg.hpp"

#include <array>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>

namespace prcause {

namespace {

bool violates(const Rat& cause_mass, const Rat& covered, const Rat& uncovered, Inequality inequality) {
    if (cause_mass <= 0) return false;
    Rat f = covered - cause_mass * (covered + uncovered);
    return inequality == Inequality::Strict ? f <= 0 : f < 0;
}

StateSet image(const StateSet& states, const StateMap& map) {
    StateSet out;
    for (StateId s : states)
        if (map(s) != npos) out.insert(map(s));
    return out;
}

ActionMask value_preserving(const Mdp& m, const std::vector<Rat>& value) {
    ActionMask mask(m.size());
    for (StateId s = 0; s < m.size(); ++s) {
        const auto& cs = m.choices(s);
        mask[s].assign(cs.size(), 0);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            Rat expected = 0;
            for (const auto& t : cs[i].dist) expected += t.prob * value[t.target];
            mask[s][i] = expected == value[s] ? 1 : 0;
        }
    }
    return mask;
}

void require_cause(const Mdp& m, const StateSet& cause, const StateSet& eff) {
    if (cause.empty()) throw PreconditionError("cause set is empty");
    if (eff.empty()) throw PreconditionError("effect set is empty");
    for (StateId e : eff) {
        if (e >= m.size()) throw PreconditionError("effect state out of range");
        if (!m.is_terminal(e)) throw PreconditionError("effect state '" + m.name(e) + "' is not terminal");
    }
    for (StateId c : cause) {
        if (c >= m.size()) throw PreconditionError("cause state out of range");
        if (eff.count(c)) throw PreconditionError("state '" + m.name(c) + "' is both cause and effect");
    }
}

// Applies the minimality requirement; returns false when the verdict is already settled.
bool settle_minimality(const Mdp& m, const StateSet& cause, const CheckOptions& options, CauseVerdict& verdict) {
    verdict.minimality_failures = check_minimality(m, cause);
    verdict.checked_cause = cause;
    if (verdict.minimality_failures.empty()) return true;
    if (!options.relaxed_minimality) {
        verdict.is_cause = false;
        verdict.violated = "minimality";
        return false;
    }
    for (StateId c : verdict.minimality_failures) verdict.checked_cause.erase(c);
    if (verdict.checked_cause.empty()) throw PreconditionError("no cause state is reachable before the others");
    return true;
}

StateSet complement(const Mdp& m, const StateSet& states) {
    StateSet out;
    for (StateId s = 0; s < m.size(); ++s)
        if (!states.count(s)) out.insert(s);
    return out;
}

WitnessReplay replay(const Mdp& m, const FmScheduler& fm, const PathEvent& condition, const StateSet& eff) {
    WitnessReplay r;
    r.effect = reach_prob_under(m, fm, PathEvent::eventually(eff));
    r.condition = reach_prob_under(m, fm, condition);
    r.joint = joint_prob_under(m, fm, condition, eff);
    return r;
}

// Model in which "(not cause) U c" becomes "eventually c": the other cause states lead into
// a second copy where the scheduler is unconstrained.
struct Focus {
    Mdp model;
    StateId target;
    StateSet eff;
    std::optional<SplitModel> split;
};

Focus focus_on(const Mdp& m, const StateSet& cause, StateId c, const StateSet& eff) {
    StateSet others = cause;
    others.erase(c);
    if (others.empty()) return {m, c, eff, std::nullopt};
    auto sp = cause_split(m, others);
    StateSet split_eff;
    for (StateId v = 0; v < sp.mdp.size(); ++v)
        if (eff.count(sp.base[v])) split_eff.insert(v);
    Mdp model = sp.mdp;
    StateId target = sp.map(c);
    return {std::move(model), target, std::move(split_eff), std::move(sp)};
}

// Scheduler on m that replays `fm` on the split model; the copy bit and whether the current
// state releases into the second copy are kept in memory.
FmScheduler project_split(const Mdp& m, const SplitModel& sp, const StateSet& trigger, const FmScheduler& fm) {
    std::vector<std::array<StateId, 2>> node(m.size(), {npos, npos});
    for (StateId v = 0; v < sp.mdp.size(); ++v) node[sp.base[v]][sp.copy[v] ? 1 : 0] = v;
    auto index = [](std::size_t k, int copy, bool releasing) { return k * 4 + copy * 2 + (releasing ? 1 : 0); };

    FmScheduler out;
    std::size_t modes = fm.modes.size() * 4;
    out.modes.resize(modes);
    out.per_mode.assign(modes, MrScheduler::uniform_first(m));
    out.update.assign(modes, std::vector<std::size_t>(m.size(), 0));
    for (std::size_t k = 0; k < fm.modes.size(); ++k) {
        for (int copy = 0; copy < 2; ++copy) {
            for (bool releasing : {false, true}) {
                std::size_t mode = index(k, copy, releasing);
                out.modes[mode] = fm.modes[k] + (copy ? "/released" : "/open") + (releasing ? "/release" : "");
                for (StateId s = 0; s < m.size(); ++s)
                    if (node[s][copy] != npos) out.per_mode[mode].weights[s] = fm.per_mode[k].weights[node[s][copy]];
                int next_copy = copy || releasing ? 1 : 0;
                for (StateId t = 0; t < m.size(); ++t) {
                    StateId v = node[t][next_copy];
                    std::size_t next_k = v == npos ? k : fm.update[k][v];
                    out.update[mode][t] = index(next_k, next_copy, next_copy == 0 && trigger.count(t));
                }
            }
        }
    }
    out.initial = index(fm.initial, 0, trigger.count(m.init()) > 0);
    return out;
}

std::vector<SprReport> spr_reports(const WminResult& n, const Quotient& qt, const ReachResult& best,
                                   const StateSet& cause, Inequality inequality) {
    Rat q = best.value[qt.mdp.init()];
    auto keep = value_preserving(qt.mdp, best.value);
    auto reach = reachable_from(qt.mdp, qt.mdp.init(), keep);
    std::vector<SprReport> out;
    for (StateId c : cause) {
        SprReport r{c, q, n.weight.at(c), SprBranch::Below, true};
        if (q > r.weight) {
            r.branch = SprBranch::Above;
        } else if (q == r.weight) {
            r.branch = reach[qt.map(n.map(c))] ? SprBranch::TieReachable : SprBranch::TieUnreachable;
        }
        r.passes = inequality == Inequality::Strict
                       ? r.branch == SprBranch::Below || r.branch == SprBranch::TieUnreachable
                       : r.branch != SprBranch::Above;
        out.push_back(r);
    }
    return out;
}

MrScheduler restrict_to_quotient(const Quotient& qt, const StateMap& prune, const MrScheduler& s) {
    MrScheduler out = MrScheduler::uniform_first(qt.mdp);
    for (StateId v = 0; v < qt.mdp.size(); ++v)
        if (prune(v) != npos) out.weights[v] = s.weights[prune(v)];
    return out;
}

std::size_t tau_index(const Quotient& qt, StateId v) {
    const auto& origin = qt.origin[v];
    for (std::size_t i = 0; i < origin.size(); ++i)
        if (origin[i].choice == npos) return i;
    return npos;
}

}  // namespace

std::size_t default_face_budget() {
    if (const char* env = std::getenv("PRCAUSE_BUDGET")) {
        try {
            return static_cast<std::size_t>(std::stoull(env));
        } catch (const std::exception&) {
            throw InputError("PRCAUSE_BUDGET is not a number");
        }
    }
    return std::size_t{1} << 20;
}

StateSet check_minimality(const Mdp& m, const StateSet& cause) {
    StateSet out;
    for (StateId c : cause)
        if (max_constrained_reach(m, cause, c) == 0) out.insert(c);
    return out;
}

SprReport spr_singleton_report(const Mdp& m, StateId c, const StateSet& eff, Inequality inequality) {
    require_cause(m, {c}, eff);
    auto n = wmin_cause(m, {c}, eff);
    auto qt = mec_quotient(n.mdp);
    auto best = max_reach_prob(qt.mdp, image(eff, qt.map));
    return spr_reports(n, qt, best, {c}, inequality).front();
}

bool spr_singleton_check(const Mdp& m, StateId c, const StateSet& eff) {
    return spr_singleton_report(m, c, eff).passes;
}

CauseVerdict check_spr(const Mdp& m, const StateSet& cause, const StateSet& eff, const CheckOptions& options) {
    require_cause(m, cause, eff);
    CauseVerdict verdict;
    if (!settle_minimality(m, cause, options, verdict)) return verdict;
    const StateSet& checked = verdict.checked_cause;

    for (StateId c : checked) {
        auto f = focus_on(m, checked, c, eff);
        auto n = wmin_cause(f.model, {f.target}, f.eff);
        auto qt = mec_quotient(n.mdp);
        auto best = max_reach_prob(qt.mdp, image(f.eff, qt.map));
        auto report = spr_reports(n, qt, best, {f.target}, options.inequality).front();
        report.state = c;
        verdict.reports.push_back(report);
        if (report.passes || verdict.witness) continue;

        StateMask goal(qt.mdp.size(), 0);
        goal[qt.map(n.map(f.target))] = 1;
        MrScheduler reduced;
        if (report.branch == SprBranch::Above) {
            auto toward = attractor_choices(qt.mdp, goal);
            MdScheduler reach = best.scheduler;
            for (StateId v = 0; v < qt.mdp.size(); ++v)
                if (toward[v] != npos) reach[v] = toward[v];
            Rat lambda = (1 + report.weight / report.max_effect) / 2;
            reduced = convex_combine(qt.mdp, MrScheduler::from_md(qt.mdp, best.scheduler),
                                     MrScheduler::from_md(qt.mdp, reach), lambda);
        } else {
            auto keep = value_preserving(qt.mdp, best.value);
            auto toward = attractor_choices(qt.mdp, goal, keep);
            MdScheduler md(qt.mdp.size(), 0);
            for (StateId v = 0; v < qt.mdp.size(); ++v) {
                if (toward[v] != npos) {
                    md[v] = toward[v];
                    continue;
                }
                for (std::size_t i = 0; i < keep[v].size(); ++i)
                    if (keep[v][i]) {
                        md[v] = i;
                        break;
                    }
            }
            reduced = MrScheduler::from_md(qt.mdp, md);
        }
        auto pre = lift_through_quotient(n.mdp, qt, reduced);
        auto focused = two_mode_scheduler(f.model, {f.target}, f.eff, pre);
        Witness w;
        w.reduced = reduced;
        if (f.split) {
            StateSet others = checked;
            others.erase(c);
            w.lifted = project_split(m, *f.split, others, focused);
        } else {
            w.lifted = std::move(focused);
        }
        w.state = c;
        w.replay = replay(m, w.lifted, PathEvent::until(complement(m, checked), {c}), eff);
        verdict.witness = std::move(w);
    }
    verdict.is_cause = !verdict.witness;
    if (verdict.witness) verdict.violated = "spr";
    return verdict;
}

std::optional<ExistingCause> exists_cause(const Mdp& m, const StateSet& eff) {
    if (eff.empty()) throw PreconditionError("effect set is empty");
    auto reach = reachable_from(m, m.init());
    std::optional<ExistingCause> best;
    for (StateId s = 0; s < m.size(); ++s) {
        if (!reach[s] || eff.count(s)) continue;
        auto r = spr_singleton_report(m, s, eff);
        if (r.passes && (!best || r.weight > best->precision)) best = ExistingCause{s, r.weight};
    }
    return best;
}

CauseVerdict check_gpr_mc(const Mdp& m, const StateSet& cause, const StateSet& eff, const CheckOptions& options) {
    if (!m.is_markov_chain()) throw PreconditionError("model is not a Markov chain");
    require_cause(m, cause, eff);
    CauseVerdict verdict;
    if (!settle_minimality(m, cause, options, verdict)) return verdict;
    auto fm = FmScheduler::memoryless(m, MrScheduler::uniform_first(m));
    auto r = replay(m, fm, PathEvent::eventually(verdict.checked_cause), eff);
    if (r.condition == 0) throw PreconditionError("the cause is never reached");
    verdict.conditional = r.conditional();
    verdict.unconditional = r.effect;
    verdict.is_cause = options.inequality == Inequality::Strict ? *verdict.conditional > r.effect
                                                                : *verdict.conditional >= r.effect;
    if (!verdict.is_cause) {
        verdict.violated = "gpr";
        verdict.witness = Witness{MrScheduler::uniform_first(m), fm, std::nullopt, r};
    }
    return verdict;
}

Rat QuadraticSystem::cause_mass(const FrequencyVector& x) const {
    Rat sum = 0;
    for (StateId c : cause) sum += x.state[c];
    return sum;
}

Rat QuadraticSystem::covered_mass(const FrequencyVector& x) const {
    Rat sum = 0;
    for (StateId c : cause) sum += weight[c] * x.state[c];
    return sum;
}

Rat QuadraticSystem::uncovered_mass(const FrequencyVector& x) const { return x.state[uncovered]; }

Rat QuadraticSystem::quadratic(const FrequencyVector& x) const {
    Rat b = covered_mass(x);
    return b - cause_mass(x) * (b + uncovered_mass(x));
}

bool QuadraticSystem::satisfies_flow(const FrequencyVector& x) const {
    std::size_t n = mdp.size();
    if (x.state.size() != n || x.pair.size() != n) return false;
    std::vector<Rat> inflow(n, Rat(0));
    inflow[mdp.init()] = 1;
    for (StateId s = 0; s < n; ++s) {
        const auto& cs = mdp.choices(s);
        if (x.pair[s].size() != cs.size()) return false;
        Rat out = 0;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (x.pair[s][i] < 0) return false;
            out += x.pair[s][i];
            for (const auto& t : cs[i].dist) inflow[t.target] += x.pair[s][i] * t.prob;
        }
        if (!cs.empty() && out != x.state[s]) return false;
    }
    for (StateId s = 0; s < n; ++s)
        if (x.state[s] < 0 || x.state[s] != inflow[s]) return false;
    return true;
}

bool QuadraticSystem::is_solution(const FrequencyVector& x) const {
    return satisfies_flow(x) && violates(cause_mass(x), covered_mass(x), uncovered_mass(x), inequality);
}

QuadraticSystem build_quadratic_system(const CanonicalMdp& cm, Inequality inequality) {
    QuadraticSystem qs;
    qs.mdp = cm.mdp;
    qs.cause = cm.cause;
    qs.weight.assign(cm.mdp.size(), Rat(0));
    for (const auto& [c, w] : cm.weight) qs.weight[c] = w;
    qs.uncovered = cm.eff_unc;
    qs.inequality = inequality;
    return qs;
}

namespace {

// Faces of the frequency polytope: a nonempty choice subset per state reached under it.
class FaceSearch {
public:
    FaceSearch(const QuadraticSystem& qs, std::size_t budget) : qs_(qs), m_(qs.mdp), budget_(budget) {}

    std::optional<FrequencyVector> run(std::size_t dimension) {
        target_ = dimension;
        allowed_.assign(m_.size(), {});
        reached_.assign(m_.size(), 0);
        order_.clear();
        found_.reset();
        mark(m_.init());
        descend(0, 0);
        return found_;
    }

private:
    void mark(StateId s) {
        reached_[s] = 1;
        order_.push_back(s);
    }

    void descend(std::size_t pos, std::size_t used) {
        if (found_) return;
        if (pos == order_.size()) {
            if (++visited_ > budget_) throw BudgetExceeded("face budget of " + std::to_string(budget_) + " exceeded");
            if (used == target_) evaluate();
            return;
        }
        StateId s = order_[pos];
        std::size_t k = m_.choices(s).size();
        if (k == 0) {
            descend(pos + 1, used);
            return;
        }
        std::size_t max_size = std::min(k, 1 + target_ - used);
        std::vector<std::size_t> subset;
        std::function<void(std::size_t)> choose = [&](std::size_t from) {
            if (found_) return;
            if (!subset.empty()) {
                std::size_t mark_point = order_.size();
                for (auto i : subset)
                    for (const auto& t : m_.choices(s)[i].dist)
                        if (!reached_[t.target]) mark(t.target);
                allowed_[s] = subset;
                descend(pos + 1, used + subset.size() - 1);
                allowed_[s].clear();
                while (order_.size() > mark_point) {
                    reached_[order_.back()] = 0;
                    order_.pop_back();
                }
            }
            if (subset.size() == max_size) return;
            for (std::size_t i = from; i < k && !found_; ++i) {
                subset.push_back(i);
                choose(i + 1);
                subset.pop_back();
            }
        };
        choose(0);
    }

    FrequencyVector frequencies_of(const std::vector<std::vector<Rat>>& weights) const {
        MrScheduler s;
        s.weights.resize(m_.size());
        for (StateId v = 0; v < m_.size(); ++v) {
            s.weights[v].assign(m_.choices(v).size(), Rat(0));
            if (m_.is_terminal(v)) continue;
            if (weights[v].empty())
                s.weights[v][0] = 1;
            else
                s.weights[v] = weights[v];
        }
        return scheduler_frequencies(m_, s);
    }

    void evaluate() {
        std::size_t n = m_.size();
        // The scheduler choosing uniformly inside the face.
        std::vector<std::vector<Rat>> uniform(n);
        for (StateId v = 0; v < n; ++v) {
            if (allowed_[v].empty()) continue;
            uniform[v].assign(m_.choices(v).size(), Rat(0));
            for (auto i : allowed_[v]) uniform[v][i] = Rat(1, static_cast<long>(allowed_[v].size()));
        }
        auto x = frequencies_of(uniform);
        if (qs_.is_solution(x)) {
            found_ = std::move(x);
            return;
        }
        if (target_ == 0) return;

        // Affine parametrization y = Y0 + Y z by the non-base choice frequencies z.
        std::vector<std::pair<StateId, std::size_t>> free;
        for (StateId v = 0; v < n; ++v)
            for (std::size_t j = 1; j < allowed_[v].size(); ++j) free.emplace_back(v, allowed_[v][j]);
        std::size_t d = free.size();
        Matrix a(n, n), rhs(n, d + 1);
        for (StateId t = 0; t < n; ++t) a(t, t) = 1;
        rhs(m_.init(), 0) = 1;
        for (StateId v = 0; v < n; ++v) {
            if (allowed_[v].empty()) continue;
            for (const auto& t : m_.choices(v)[allowed_[v][0]].dist) a(t.target, v) -= t.prob;
        }
        for (std::size_t j = 0; j < d; ++j) {
            auto [v, i] = free[j];
            for (const auto& t : m_.choices(v)[i].dist) rhs(t.target, j + 1) += t.prob;
            for (const auto& t : m_.choices(v)[allowed_[v][0]].dist) rhs(t.target, j + 1) -= t.prob;
        }
        auto y = solve(a, rhs);
        if (!y) return;
        std::vector<Rat> alpha(d + 1, Rat(0)), beta(d + 1, Rat(0)), mu(d + 1, Rat(0));
        for (std::size_t j = 0; j <= d; ++j) {
            for (StateId c : qs_.cause) {
                alpha[j] += (*y)(c, j);
                beta[j] += qs_.weight[c] * (*y)(c, j);
            }
            mu[j] = (*y)(qs_.uncovered, j);
        }
        // Stationary point of f(z) = b - a (b + u).
        Matrix h(d, d);
        std::vector<Rat> g(d);
        for (std::size_t j = 0; j < d; ++j) {
            Rat gamma_j = beta[j + 1] + mu[j + 1];
            for (std::size_t k = 0; k < d; ++k) {
                Rat gamma_k = beta[k + 1] + mu[k + 1];
                h(j, k) = alpha[j + 1] * gamma_k + gamma_j * alpha[k + 1];
            }
            g[j] = beta[j + 1] - alpha[j + 1] * (beta[0] + mu[0]) - alpha[0] * gamma_j;
        }
        auto z = solve(h, g);
        if (!z) return;
        FrequencyVector cand;
        cand.state.assign(n, Rat(0));
        cand.pair.resize(n);
        for (StateId v = 0; v < n; ++v) {
            cand.pair[v].assign(m_.choices(v).size(), Rat(0));
            Rat value = (*y)(v, 0);
            for (std::size_t j = 0; j < d; ++j) value += (*y)(v, j + 1) * (*z)[j];
            cand.state[v] = value;
        }
        for (StateId v = 0; v < n; ++v) {
            if (allowed_[v].empty()) continue;
            cand.pair[v][allowed_[v][0]] = cand.state[v];
        }
        for (std::size_t j = 0; j < d; ++j) {
            auto [v, i] = free[j];
            cand.pair[v][i] = (*z)[j];
            cand.pair[v][allowed_[v][0]] -= (*z)[j];
        }
        if (qs_.is_solution(cand)) found_ = std::move(cand);
    }

    const QuadraticSystem& qs_;
    const Mdp& m_;
    std::size_t budget_;
    std::size_t visited_ = 0;
    std::size_t target_ = 0;
    std::vector<std::vector<std::size_t>> allowed_;
    std::vector<char> reached_;
    std::vector<StateId> order_;
    std::optional<FrequencyVector> found_;
};

}  // namespace

std::optional<FrequencyVector> solve_quadratic_system(const QuadraticSystem& qs, std::optional<std::size_t> budget) {
    if (has_end_component(qs.mdp)) throw PreconditionError("quadratic system needs a model without end components");
    if (qs.cause.empty()) return std::nullopt;
    auto towards_cause = max_reach_prob(qs.mdp, qs.cause);
    if (towards_cause.value[qs.mdp.init()] == 0) return std::nullopt;
    auto x = scheduler_frequencies(qs.mdp, MrScheduler::from_md(qs.mdp, towards_cause.scheduler));
    if (qs.is_solution(x)) return x;
    FaceSearch search(qs, budget.value_or(default_face_budget()));
    for (std::size_t dimension = 0; dimension <= 2; ++dimension)
        if (auto found = search.run(dimension)) return found;
    return std::nullopt;
}

MrScheduler round_tau_witness(const QuadraticSystem& qs, const MrScheduler& u) {
    auto violated = [&](const MrScheduler& s) { return qs.is_solution(scheduler_frequencies(qs.mdp, s)); };
    if (!violated(u)) throw PreconditionError("scheduler does not refute the cause");
    MrScheduler out = u;
    for (StateId v = 0; v < qs.mdp.size(); ++v) {
        auto tau = qs.mdp.choice_index(v, "tau");
        if (!tau) continue;
        const Rat p = out.weights[v][*tau];
        if (p == 0 || p == 1) continue;
        MrScheduler without = out;
        for (auto& w : without.weights[v]) w /= 1 - p;
        without.weights[v][*tau] = 0;
        if (violated(without)) {
            out = std::move(without);
            continue;
        }
        MrScheduler with = out;
        for (auto& w : with.weights[v]) w = 0;
        with.weights[v][*tau] = 1;
        if (!violated(with)) throw std::logic_error("neither tau rounding keeps the violation");
        out = std::move(with);
    }
    return out;
}

std::vector<Rat> sequential_exit_probabilities(const std::vector<Rat>& p) {
    std::vector<Rat> q;
    Rat used = 0;
    for (const auto& pi : p) {
        Rat left = 1 - used;
        q.push_back(left == 0 ? Rat(1) : pi / left);
        used += pi;
    }
    return q;
}

MrScheduler lift_through_quotient(const Mdp& pre, const Quotient& quotient, const MrScheduler& reduced) {
    reduced.validate(quotient.mdp);
    std::size_t n = pre.size();
    const auto& mecs = quotient.mecs;
    std::vector<std::size_t> mec_of(n, npos);
    for (std::size_t j = 0; j < mecs.size(); ++j)
        for (StateId s : mecs[j].states) mec_of[s] = j;

    struct Exit {
        StateId state;
        std::size_t choice;
    };
    std::vector<char> sink(mecs.size(), 0);
    std::vector<std::vector<Exit>> exits(mecs.size());
    std::vector<std::vector<Rat>> stay(mecs.size());
    std::vector<std::size_t> first_mode(mecs.size(), 0);
    std::size_t modes = 1;
    for (std::size_t j = 0; j < mecs.size(); ++j) {
        StateId v = quotient.mec_state[j];
        std::size_t tau = tau_index(quotient, v);
        const auto& w = reduced.weights[v];
        if (tau != npos && w[tau] != 0) {
            if (w[tau] != 1) throw PreconditionError("scheduler is randomized on a tau choice");
            sink[j] = 1;
            continue;
        }
        std::vector<Rat> p;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (i != tau && w[i] > 0) {
                exits[j].push_back({quotient.origin[v][i].state, quotient.origin[v][i].choice});
                p.push_back(w[i]);
            }
        stay[j] = sequential_exit_probabilities(p);
        first_mode[j] = modes;
        modes += exits[j].size();
    }
    std::vector<std::size_t> mode_exit(modes, npos);
    for (std::size_t j = 0; j < mecs.size(); ++j)
        for (std::size_t i = 0; i < exits[j].size(); ++i) mode_exit[first_mode[j] + i] = i;
    auto entry_mode = [&](StateId t) {
        std::size_t j = mec_of[t];
        return j == npos || sink[j] ? 0 : first_mode[j];
    };
    std::vector<std::size_t> internal(n, npos);
    for (const auto& mec : mecs)
        for (const auto& [s, i] : mec.stateActions)
            if (internal[s] == npos || i < internal[s]) internal[s] = i;
    std::map<std::pair<StateId, std::size_t>, std::vector<std::size_t>> toward;
    auto attractor = [&](std::size_t j, StateId goal) -> const std::vector<std::size_t>& {
        auto key = std::make_pair(goal, j);
        auto it = toward.find(key);
        if (it == toward.end()) it = toward.emplace(key, mec_attractor(pre, mecs[j], goal)).first;
        return it->second;
    };

    // Chain of the finite-memory traversal; its choices are tagged with the pre-model choice.
    Mdp chain;
    std::vector<StateId> base;
    std::vector<std::size_t> node_mode;
    std::vector<std::vector<std::size_t>> tag;
    std::vector<std::vector<Rat>> weight;
    std::map<std::pair<StateId, std::size_t>, StateId> index;
    std::deque<StateId> queue;
    auto node = [&](StateId s, std::size_t mode) {
        auto [it, fresh] = index.try_emplace({s, mode}, chain.size());
        if (fresh) {
            chain.add_state("n" + std::to_string(chain.size()));
            base.push_back(s);
            node_mode.push_back(mode);
            tag.emplace_back();
            weight.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };
    auto add = [&](StateId v, std::size_t choice, const Rat& p, const std::function<std::size_t(StateId)>& next) {
        std::vector<Transition> dist;
        for (const auto& t : pre.choices(base[v])[choice].dist) dist.push_back({node(t.target, next(t.target)), t.prob});
        chain.add_choice(v, pre.choices(base[v])[choice].action + "#" + std::to_string(tag[v].size()), std::move(dist));
        tag[v].push_back(choice);
        weight[v].push_back(p);
    };
    chain.set_init(node(pre.init(), entry_mode(pre.init())));
    while (!queue.empty()) {
        StateId v = queue.front();
        queue.pop_front();
        std::size_t mode = node_mode[v];
        StateId s = base[v];
        std::size_t j = mec_of[s];
        if (pre.is_terminal(s) || (j != npos && sink[j])) continue;
        if (j == npos) {
            StateId qv = quotient.map(s);
            const auto& w = reduced.weights[qv];
            for (std::size_t i = 0; i < w.size(); ++i)
                if (w[i] > 0) add(v, quotient.origin[qv][i].choice, w[i], entry_mode);
            continue;
        }
        std::size_t i = mode_exit[mode];
        const Exit& e = exits[j][i];
        if (s != e.state) {
            add(v, attractor(j, e.state)[s], Rat(1), [&](StateId) { return mode; });
            continue;
        }
        Rat leave = stay[j][i];
        add(v, e.choice, leave, [&](StateId t) { return mec_of[t] == j ? first_mode[j] : entry_mode(t); });
        if (leave < 1) add(v, internal[s], 1 - leave, [&](StateId) { return mode + 1; });
    }

    MrScheduler chain_scheduler;
    chain_scheduler.weights = weight;
    auto f = scheduler_frequencies(chain, chain_scheduler);
    std::vector<std::vector<Rat>> visits(n);
    for (StateId s = 0; s < n; ++s) visits[s].assign(pre.choices(s).size(), Rat(0));
    for (StateId v = 0; v < chain.size(); ++v)
        for (std::size_t k = 0; k < tag[v].size(); ++k) visits[base[v]][tag[v][k]] += f.pair[v][k];

    MrScheduler out;
    out.weights.resize(n);
    for (StateId s = 0; s < n; ++s) {
        auto& w = out.weights[s];
        w.assign(pre.choices(s).size(), Rat(0));
        if (w.empty()) continue;
        std::size_t j = mec_of[s];
        if (j == npos) {
            StateId qv = quotient.map(s);
            for (std::size_t i = 0; i < quotient.origin[qv].size(); ++i)
                w[quotient.origin[qv][i].choice] = reduced.weights[qv][i];
            continue;
        }
        Rat total = 0;
        for (const auto& x : visits[s]) total += x;
        if (sink[j] || total == 0) {
            w[internal[s]] = 1;
            continue;
        }
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = visits[s][i] / total;
    }
    return out;
}

FmScheduler two_mode_scheduler(const Mdp& original, const StateSet& cause, const StateSet& eff,
                               const MrScheduler& pre_scheduler) {
    std::size_t n = original.size();
    FmScheduler fm;
    fm.modes = {"before", "after"};
    MrScheduler before = MrScheduler::uniform_first(original);
    for (StateId s = 0; s < n; ++s) {
        if (cause.count(s) || original.is_terminal(s)) continue;
        if (pre_scheduler.weights.at(s).size() != original.choices(s).size())
            throw std::logic_error("pre-model choices differ from the source model");
        before.weights[s] = pre_scheduler.weights[s];
    }
    fm.per_mode = {std::move(before), MrScheduler::from_md(original, min_reach_prob(original, eff).scheduler)};
    fm.update.assign(2, std::vector<std::size_t>(n, 1));
    for (StateId t = 0; t < n; ++t)
        if (!cause.count(t)) fm.update[0][t] = 0;
    fm.initial = cause.count(original.init()) ? 1 : 0;
    return fm;
}

CauseVerdict check_gpr(const Mdp& m, const StateSet& cause, const StateSet& eff, const CheckOptions& options) {
    require_cause(m, cause, eff);
    CauseVerdict verdict;
    if (!settle_minimality(m, cause, options, verdict)) return verdict;
    const StateSet& checked = verdict.checked_cause;
    auto cf = canonical_form(m, checked, eff);
    auto qs = build_quadratic_system(cf, options.inequality);
    auto x = solve_quadratic_system(qs, options.budget);
    if (!x) {
        verdict.is_cause = true;
        return verdict;
    }
    verdict.violated = "gpr";
    auto reduced = round_tau_witness(qs, scheduler_from_frequencies(cf.mdp, *x));
    auto on_quotient = restrict_to_quotient(cf.quotient, cf.prune, reduced);
    auto pre = lift_through_quotient(cf.split, cf.quotient, on_quotient);
    Witness w;
    w.reduced = std::move(reduced);
    w.lifted = two_mode_scheduler(m, checked, eff, pre);
    w.replay = replay(m, w.lifted, PathEvent::eventually(checked), eff);
    verdict.witness = std::move(w);
    return verdict;
}

}  // namespace prcause
