#include "prcause/quality.hpp"

#include "prcause/analysis.hpp"
#include "prcause/error.hpp"
#include "prcause/graph.hpp"
#include "prcause/ssp.hpp"

namespace prcause {

namespace {

ConfusionMatrix from_probabilities(const Rat& tp, const Rat& with_cause, const Rat& with_effect) {
    ConfusionMatrix cm;
    cm.tp = tp;
    cm.fp = with_cause - tp;
    cm.fn = with_effect - tp;
    cm.tn = 1 - with_cause - with_effect + tp;
    return cm;
}

// Largest square k*k dividing n for small k; returns (k, n / k^2).
std::pair<mpz_class, mpz_class> split_square(mpz_class n) {
    mpz_class outside = 1;
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        return {r, 1};
    }
    for (unsigned long p = 2; p <= 1000; ++p) {
        mpz_class sq = p * p;
        while (n % sq == 0) {
            n /= sq;
            outside *= p;
        }
    }
    return {outside, n};
}

}  // namespace

ConfusionMatrix confusion_matrix(const Mdp& m, const StateSet& cause, const StateSet& eff, const FmScheduler& s) {
    if (cause.empty()) {
        Rat e = reach_prob_under(m, s, PathEvent::eventually(eff));
        return from_probabilities(0, 0, e);
    }
    auto event = PathEvent::eventually(cause);
    return from_probabilities(joint_prob_under(m, s, event, eff), reach_prob_under(m, s, event),
                              reach_prob_under(m, s, PathEvent::eventually(eff)));
}

ConfusionMatrix confusion_matrix(const Mdp& m, const StateSet& cause, const StateSet& eff, const MrScheduler& s) {
    return confusion_matrix(m, cause, eff, FmScheduler::memoryless(m, s));
}

RecallResult recall_covratio(const Mdp& m, const StateSet& cause, const StateSet& eff) {
    if (eff.empty()) throw PreconditionError("effect set is empty");
    auto cf = canonical_form(m, cause, eff);
    RecallResult out;
    if (max_reach_prob(cf.mdp, {cf.eff_unc}).value[cf.mdp.init()] == 0) {
        out.recall = 1;
        out.covratio = Extended::infinity();
        return out;
    }
    auto ratio = ratio_extremal(cf.mdp, {cf.eff_cov}, {cf.eff_unc}, Opt::Min);
    out.covratio = ratio.value;
    if (ratio.value.is_infinite()) {
        out.recall = 1;
    } else {
        const Rat& r = ratio.value.value();
        out.recall = r / (1 + r);
    }
    if (ratio.scheduler) out.witness = RatioWitness{std::move(ratio.reset_model), *ratio.scheduler, cf.map};
    return out;
}

FscoreResult fscore(const Mdp& m, const StateSet& cause, const StateSet& eff) {
    if (eff.empty()) throw PreconditionError("effect set is empty");
    FscoreResult out;
    // Schedulers that surely avoid the cause yet may reach the effect.
    StateMask safe(m.size(), 1);
    if (!cause.empty()) {
        auto avoid = min_reach_prob(m, cause).value;
        for (StateId s = 0; s < m.size(); ++s) safe[s] = avoid[s] == 0 ? 1 : 0;
    }
    ActionMask stay(m.size());
    for (StateId s = 0; s < m.size(); ++s) {
        const auto& cs = m.choices(s);
        stay[s].assign(cs.size(), 0);
        if (!safe[s]) continue;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            bool inside = true;
            for (const auto& t : cs[i].dist) inside = inside && safe[t.target];
            stay[s][i] = inside ? 1 : 0;
        }
    }
    if (safe[m.init()]) {
        auto toward = attractor_choices(m, m.mask(eff), stay);
        if (toward[m.init()] != npos || eff.count(m.init())) {
            MdScheduler md(m.size(), 0);
            for (StateId s = 0; s < m.size(); ++s) {
                if (toward[s] != npos) {
                    md[s] = toward[s];
                    continue;
                }
                for (std::size_t i = 0; i < stay[s].size(); ++i)
                    if (stay[s][i]) {
                        md[s] = i;
                        break;
                    }
            }
            out.fscore = 0;
            out.avoiding = std::move(md);
            return out;
        }
    }
    auto cf = canonical_form(m, cause, eff);
    if (max_reach_prob(cf.mdp, {cf.eff_cov}).value[cf.mdp.init()] == 0) {
        out.fscore = 0;
        return out;
    }
    auto ratio = ratio_extremal(cf.mdp, {cf.noeff_fp, cf.eff_unc}, {cf.eff_cov}, Opt::Max);
    out.fscore = ratio.value.is_infinite() ? Rat(0) : Rat(2 / (ratio.value.value() + 2));
    if (ratio.scheduler) out.witness = RatioWitness{std::move(ratio.reset_model), *ratio.scheduler, cf.map};
    return out;
}

std::optional<Rat> Mcc::exact() const {
    if (!is_rational()) return std::nullopt;
    return coefficient;
}

std::string Mcc::str() const {
    if (is_rational()) return to_string(coefficient);
    return to_string(coefficient) + "*sqrt(" + to_string(radicand) + ")";
}

std::string Mcc::decimal() const {
    mpf_class root(radicand, 256);
    mpf_class value = mpf_class(coefficient, 256) * sqrt(root);
    char buf[64];
    gmp_snprintf(buf, sizeof buf, "%.17Fg", value.get_mpf_t());
    return buf;
}

Mcc mcc(const ConfusionMatrix& cm) {
    Rat product = (cm.tp + cm.fp) * (cm.tp + cm.fn) * (cm.tn + cm.fp) * (cm.tn + cm.fn);
    if (product == 0) throw PreconditionError("MCC is undefined: a marginal of the confusion matrix is zero");
    Rat numerator = cm.tp * cm.tn - cm.fp * cm.fn;
    // numerator / sqrt(p/q) = numerator * sqrt(p*q) / p
    mpz_class p = product.get_num(), q = product.get_den();
    auto [outside, rest] = split_square(p * q);
    Mcc out;
    out.coefficient = numerator * Rat(outside) / Rat(p);
    out.radicand = Rat(rest);
    if (out.coefficient == 0) out.radicand = 1;
    return out;
}

Mcc mcc_under(const FmScheduler& s, const Mdp& m, const StateSet& cause, const StateSet& eff) {
    return mcc(confusion_matrix(m, cause, eff, s));
}

std::string to_string(Measure m) {
    switch (m) {
    case Measure::Recall:
        return "recall";
    case Measure::Covratio:
        return "covratio";
    case Measure::Fscore:
        return "fscore";
    }
    return "?";
}

Measure parse_measure(std::string_view text) {
    if (text == "recall") return Measure::Recall;
    if (text == "covratio") return Measure::Covratio;
    if (text == "fscore") return Measure::Fscore;
    throw InputError("unknown measure '" + std::string(text) + "'");
}

MeasureResult measure_cause(const Mdp& m, const StateSet& cause, const StateSet& eff, Measure measure) {
    if (measure == Measure::Fscore) {
        auto f = fscore(m, cause, eff);
        return {f.fscore, std::move(f.witness), std::move(f.avoiding)};
    }
    auto r = recall_covratio(m, cause, eff);
    return {measure == Measure::Recall ? Extended(r.recall) : r.covratio, std::move(r.witness), std::nullopt};
}

}  // namespace prcause
