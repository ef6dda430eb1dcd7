#include "prcause/scheduler.hpp"

#include "prcause/error.hpp"

namespace prcause {

MrScheduler MrScheduler::from_md(const Mdp& m, const MdScheduler& md) {
    MrScheduler out;
    out.weights.resize(m.size());
    for (StateId s = 0; s < m.size(); ++s) {
        out.weights[s].assign(m.choices(s).size(), Rat(0));
        if (!m.is_terminal(s)) out.weights[s].at(md.at(s)) = 1;
    }
    return out;
}

MrScheduler MrScheduler::uniform_first(const Mdp& m) {
    return from_md(m, MdScheduler(m.size(), 0));
}

void MrScheduler::validate(const Mdp& m) const {
    if (weights.size() != m.size()) throw PreconditionError("scheduler size does not match model");
    for (StateId s = 0; s < m.size(); ++s) {
        if (weights[s].size() != m.choices(s).size())
            throw PreconditionError("scheduler has wrong arity at state " + m.name(s));
        if (m.is_terminal(s)) continue;
        Rat sum = 0;
        for (const auto& w : weights[s]) {
            if (w < 0) throw PreconditionError("negative scheduler weight at state " + m.name(s));
            sum += w;
        }
        if (sum != 1) throw PreconditionError("scheduler weights at state " + m.name(s) + " do not sum to 1");
    }
}

bool MrScheduler::is_deterministic() const {
    for (const auto& row : weights)
        for (const auto& w : row)
            if (w != 0 && w != 1) return false;
    return true;
}

FmScheduler FmScheduler::memoryless(const Mdp& m, MrScheduler s) {
    FmScheduler out;
    out.modes = {"main"};
    out.per_mode.push_back(std::move(s));
    out.update.assign(1, std::vector<std::size_t>(m.size(), 0));
    return out;
}

void FmScheduler::validate(const Mdp& m) const {
    if (modes.empty() || per_mode.size() != modes.size() || update.size() != modes.size())
        throw PreconditionError("malformed finite-memory scheduler");
    if (initial >= modes.size()) throw PreconditionError("initial mode out of range");
    for (std::size_t k = 0; k < modes.size(); ++k) {
        per_mode[k].validate(m);
        if (update[k].size() != m.size()) throw PreconditionError("mode update has wrong size");
        for (auto next : update[k])
            if (next >= modes.size()) throw PreconditionError("mode update out of range");
    }
}

}  // namespace prcause
