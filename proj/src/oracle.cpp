#include "prcause/oracle.hpp"

#include "prcause/analysis.hpp"
#include "prcause/quality.hpp"

#include <random>
#include <stdexcept>

namespace prcause {

Mdp generate_random_mdp(std::uint64_t seed, std::size_t max_states, std::size_t max_actions, bool ec_free) {
    if (max_states < 3 || max_actions < 1) throw std::invalid_argument("random model needs 3 states and 1 action");
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    std::size_t inner = uniform(1, max_states - 2);
    Mdp m;
    for (std::size_t i = 0; i < inner; ++i) m.add_state("s" + std::to_string(i));
    m.add_state("eff");
    m.add_state("noeff");
    m.set_init(0);

    std::size_t total = m.size();
    for (StateId s = 0; s < inner; ++s) {
        std::size_t first = ec_free ? s + 1 : 0;
        std::size_t actions = uniform(1, max_actions);
        for (std::size_t a = 0; a < actions; ++a) {
            std::size_t fanout = uniform(1, std::min<std::size_t>(3, total - first));
            std::vector<Transition> dist;
            long sum = 0;
            std::vector<long> weight;
            for (std::size_t k = 0; k < fanout; ++k) {
                StateId t = uniform(first, total - 1);
                weight.push_back(static_cast<long>(uniform(1, 4)));
                sum += weight.back();
                dist.push_back({t, 0});
            }
            for (std::size_t k = 0; k < fanout; ++k) dist[k].prob = Rat(weight[k], sum);
            for (auto& tr : dist) tr.prob.canonicalize();
            m.add_choice(s, "a" + std::to_string(a), std::move(dist));
        }
    }
    return m;
}

namespace {

// Weight vectors over `n` choices with entries in multiples of 1/k, or the unit vectors when k == 0.
std::vector<std::vector<Rat>> grid_points(std::size_t n, std::size_t k) {
    std::vector<std::vector<Rat>> out;
    if (k == 0 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Rat> w(n, Rat(0));
            w[i] = 1;
            out.push_back(std::move(w));
        }
        return out;
    }
    std::vector<std::size_t> parts(n, 0);
    auto emit = [&](auto&& self, std::size_t i, std::size_t left) -> void {
        if (i + 1 == n) {
            parts[i] = left;
            std::vector<Rat> w(n);
            for (std::size_t j = 0; j < n; ++j) {
                w[j] = Rat(static_cast<long>(parts[j]), static_cast<long>(k));
                w[j].canonicalize();
            }
            out.push_back(std::move(w));
            return;
        }
        for (std::size_t v = left + 1; v-- > 0;) {
            parts[i] = v;
            self(self, i + 1, left - v);
        }
    };
    emit(emit, 0, k);
    return out;
}

}  // namespace

void SchedulerGrid::for_each(const Mdp& m, const std::function<bool(const MrScheduler&)>& visit) const {
    std::vector<std::vector<std::vector<Rat>>> options(m.size());
    for (StateId s = 0; s < m.size(); ++s)
        if (!m.is_terminal(s)) options[s] = grid_points(m.choices(s).size(), resolution);

    MrScheduler current;
    current.weights.assign(m.size(), {});
    std::vector<std::size_t> pick(m.size(), 0);
    for (StateId s = 0; s < m.size(); ++s)
        if (!options[s].empty()) current.weights[s] = options[s][0];

    while (true) {
        if (!visit(current)) return;
        StateId s = 0;
        for (; s < m.size(); ++s) {
            if (options[s].empty()) continue;
            if (++pick[s] < options[s].size()) {
                current.weights[s] = options[s][pick[s]];
                break;
            }
            pick[s] = 0;
            current.weights[s] = options[s][0];
        }
        if (s == m.size()) return;
    }
}

std::size_t SchedulerGrid::size(const Mdp& m) const {
    std::size_t total = 1;
    for (StateId s = 0; s < m.size(); ++s)
        if (!m.is_terminal(s)) total *= grid_points(m.choices(s).size(), resolution).size();
    return total;
}

namespace {

StateSet complement(const Mdp& m, const StateSet& set) {
    StateSet out;
    for (StateId s = 0; s < m.size(); ++s)
        if (!set.count(s)) out.insert(s);
    return out;
}

bool violates(const Mdp& m, const FmScheduler& fm, const StateSet& cause, const StateSet& eff, CauseKind kind) {
    Rat effect = reach_prob_under(m, fm, PathEvent::eventually(eff));
    auto fails = [&](const PathEvent& event) {
        Rat reach = reach_prob_under(m, fm, event);
        if (reach == 0) return false;
        return joint_prob_under(m, fm, event, eff) <= effect * reach;
    };
    if (kind == CauseKind::Gpr) return fails(PathEvent::eventually(cause));
    StateSet outside = complement(m, cause);
    for (StateId c : cause)
        if (fails(PathEvent::until(outside, {c}))) return true;
    return false;
}

}  // namespace

std::optional<MrScheduler> refute_pr_oracle(const Mdp& m, const StateSet& cause, const StateSet& eff, CauseKind kind,
                                            const SchedulerGrid& grid) {
    std::optional<MrScheduler> found;
    grid.for_each(m, [&](const MrScheduler& s) {
        if (violates(m, FmScheduler::memoryless(m, s), cause, eff, kind)) {
            found = s;
            return false;
        }
        return true;
    });
    return found;
}

QualityEnvelope quality_envelope(const Mdp& m, const StateSet& cause, const StateSet& eff, const SchedulerGrid& grid) {
    QualityEnvelope env;
    grid.for_each(m, [&](const MrScheduler& s) {
        ConfusionMatrix cm = confusion_matrix(m, cause, eff, s);
        Rat effect = cm.tp + cm.fn;
        if (effect == 0) return true;
        Rat recall = cm.tp / effect;
        if (!env.recall || recall < *env.recall) {
            env.recall = recall;
            env.recall_witness = s;
        }
        Extended covratio = cm.fn == 0 ? Extended::infinity() : Extended(Rat(cm.tp / cm.fn));
        if (!env.covratio || covratio < *env.covratio) {
            env.covratio = covratio;
            env.covratio_witness = s;
        }
        Rat fscore = 2 * cm.tp / (2 * cm.tp + cm.fp + cm.fn);
        if (!env.fscore || fscore < *env.fscore) {
            env.fscore = fscore;
            env.fscore_witness = s;
        }
        return true;
    });
    return env;
}

}  // namespace prcause
