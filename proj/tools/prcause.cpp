#include "prcause/analysis.hpp"
#include "prcause/automata.hpp"
#include "prcause/cause_check.hpp"
#include "prcause/error.hpp"
#include "prcause/io.hpp"
#include "prcause/optimal.hpp"
#include "prcause/quality.hpp"
#include "prcause/regular.hpp"
#include "prcause/transforms.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace prcause;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* version = "0.1.0";
constexpr int schema = 1;

enum Exit { IsCause = 0, NotCause = 1, BadInput = 2, Undecided = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

json number(const Rat& value) { return {{"exact", to_string(value)}, {"decimal", to_decimal(value)}}; }
json number(const Extended& value) { return {{"exact", value.str()}, {"decimal", value.decimal()}}; }

json names(const Mdp& m, const StateSet& states) {
    json out = json::array();
    for (StateId s : states) out.push_back(m.name(s));
    return out;
}

json scheduler_table(const Mdp& m, const MrScheduler& s) {
    json out = json::object();
    for (StateId st = 0; st < m.size(); ++st) {
        if (m.is_terminal(st)) continue;
        json row = json::object();
        for (std::size_t i = 0; i < m.choices(st).size(); ++i)
            if (s.weights[st][i] != 0) row[m.choices(st)[i].action] = to_string(s.weights[st][i]);
        out[m.name(st)] = row;
    }
    return out;
}

json scheduler_table(const Mdp& m, const MdScheduler& s) { return scheduler_table(m, MrScheduler::from_md(m, s)); }

json scheduler_table(const Mdp& m, const FmScheduler& s) {
    json per_mode = json::object();
    for (std::size_t k = 0; k < s.modes.size(); ++k) per_mode[s.modes[k]] = scheduler_table(m, s.per_mode[k]);
    json update = json::array();
    for (std::size_t k = 0; k < s.modes.size(); ++k)
        for (StateId t = 0; t < m.size(); ++t)
            if (s.update[k][t] != k)
                update.push_back({{"from", s.modes[k]}, {"enter", m.name(t)}, {"to", s.modes[s.update[k][t]]}});
    return {{"modes", s.modes}, {"initial", s.modes[s.initial]}, {"per_mode", per_mode}, {"update", update}};
}

std::string to_string(SprBranch b) {
    switch (b) {
    case SprBranch::Below: return "below";
    case SprBranch::Above: return "above";
    case SprBranch::TieUnreachable: return "tie-unreachable";
    case SprBranch::TieReachable: return "tie-reachable";
    }
    return "";
}

json verdict_json(const Mdp& m, const CauseVerdict& v) {
    json out{{"is_cause", v.is_cause},
             {"violated", v.violated.empty() ? json(nullptr) : json(v.violated)},
             {"minimality_failures", names(m, v.minimality_failures)},
             {"checked_cause", names(m, v.checked_cause)}};
    if (!v.reports.empty()) {
        json reports = json::array();
        for (const auto& r : v.reports)
            reports.push_back({{"state", m.name(r.state)},
                               {"max_effect", number(r.max_effect)},
                               {"weight", number(r.weight)},
                               {"branch", to_string(r.branch)},
                               {"passes", r.passes}});
        out["singleton_reports"] = reports;
    }
    if (v.conditional) out["conditional"] = number(*v.conditional);
    if (v.unconditional) out["unconditional"] = number(*v.unconditional);
    if (v.witness) {
        const auto& w = *v.witness;
        json witness{{"scheduler", scheduler_table(m, w.lifted)},
                     {"replay",
                      {{"effect", number(w.replay.effect)},
                       {"condition", number(w.replay.condition)},
                       {"joint", number(w.replay.joint)},
                       {"conditional", number(w.replay.conditional())}}}};
        if (w.state) witness["state"] = m.name(*w.state);
        out["witness"] = witness;
    }
    return out;
}

// Model, effect and cause flags shared by the query commands.
struct Inputs {
    std::string model;
    std::string cause;
    std::string eff;
    std::string eff_dra;
    std::string cause_dfa;
    std::optional<std::size_t> budget;

    Mdp mdp;
    StateSet cause_states;
    StateSet eff_states;
    std::optional<Dra> dra;
    std::optional<Dfa> dfa;

    void add_to(CLI::App& cmd, bool with_cause) {
        cmd.add_option("--model", model, "model file")->required();
        if (with_cause) {
            cmd.add_option("--cause", cause, "cause states, comma separated");
            cmd.add_option("--cause-dfa", cause_dfa, "co-safety cause automaton");
        }
        cmd.add_option("--eff", eff, "effect states, comma separated");
        cmd.add_option("--eff-dra", eff_dra, "effect automaton");
        cmd.add_option("--budget", budget, "enumeration budget");
    }

    void load(bool need_cause) {
        mdp = parse_mdp(read_file(model));
        if (eff.empty() == eff_dra.empty()) throw InputError("give exactly one of --eff and --eff-dra");
        if (!eff.empty()) eff_states = parse_state_list(mdp, eff);
        if (!eff_dra.empty()) dra = parse_dra(read_file(eff_dra), mdp);
        if (!need_cause) return;
        if (cause.empty() == cause_dfa.empty()) throw InputError("give exactly one of --cause and --cause-dfa");
        if (!cause.empty()) cause_states = parse_state_list(mdp, cause);
        if (!cause_dfa.empty()) dfa = parse_dfa(read_file(cause_dfa), mdp);
    }

    const Dra& effect_automaton() {
        if (!dra) dra = eventually_dra(mdp, eff_states);
        return *dra;
    }

    json echo() const {
        json out{{"model", model}};
        if (!cause.empty()) out["cause"] = cause;
        if (!cause_dfa.empty()) out["cause_dfa"] = cause_dfa;
        if (!eff.empty()) out["eff"] = eff;
        if (!eff_dra.empty()) out["eff_dra"] = eff_dra;
        if (budget) out["budget"] = *budget;
        return out;
    }
};

struct CheckCommand {
    Inputs in;
    std::string mode;
    bool non_strict = false;
    bool relaxed = false;
    bool tempprio = false;

    int run(json& query, json& result) {
        in.load(true);
        query = in.echo();
        query["mode"] = mode;
        query["non_strict"] = non_strict;
        query["relaxed_minimality"] = relaxed;
        query["tempprio"] = tempprio;

        CheckOptions options;
        options.inequality = non_strict ? Inequality::NonStrict : Inequality::Strict;
        options.relaxed_minimality = relaxed;
        options.budget = in.budget;
        const Mdp& m = in.mdp;

        if (in.dfa) {
            const Dra& dra = in.effect_automaton();
            bool prio = true;
            if (tempprio) {
                prio = temp_prio2_check(m, dra, *in.dfa);
                result["tempprio"] = prio;
            }
            if (mode == "gpr") {
                auto v = check_cosafety_gpr(m, dra, *in.dfa, options);
                result["verdict"] = verdict_json(m, v);
                return v.is_cause && prio ? IsCause : NotCause;
            }
            auto r = check_cosafety_spr_necessary(m, dra, *in.dfa);
            result["verdict"] = prcause::to_string(r.verdict);
            if (r.conditional) result["conditional"] = number(*r.conditional);
            if (r.unconditional) result["unconditional"] = number(*r.unconditional);
            if (r.verdict == Tristate::No || !prio) return NotCause;
            return r.verdict == Tristate::Yes ? IsCause : Undecided;
        }

        if (in.cause_states.empty()) throw InputError("cause set is empty");
        CauseVerdict v;
        bool prio = true;
        if (!in.eff_dra.empty()) {
            v = mode == "gpr" ? check_reachability_gpr(m, *in.dra, in.cause_states, options)
                              : check_reachability_spr(m, *in.dra, in.cause_states, options);
            if (tempprio) {
                json per_state = json::object();
                for (auto [s, ok] : temp_prio_check(m, *in.dra, in.cause_states)) {
                    per_state[m.name(s)] = ok;
                    prio = prio && ok;
                }
                result["tempprio"] = per_state;
            }
        } else if (mode == "gpr" && m.is_markov_chain()) {
            v = check_gpr_mc(m, in.cause_states, in.eff_states, options);
        } else {
            v = mode == "gpr" ? check_gpr(m, in.cause_states, in.eff_states, options)
                              : check_spr(m, in.cause_states, in.eff_states, options);
        }
        result["verdict"] = verdict_json(m, v);
        return v.is_cause && prio ? IsCause : NotCause;
    }
};

struct QualityCommand {
    Inputs in;
    std::string measure = "all";
    std::string scheduler;

    int run(json& query, json& result) {
        in.load(true);
        query = in.echo();
        query["measure"] = measure;
        if (!scheduler.empty()) query["scheduler"] = scheduler;
        const Mdp& m = in.mdp;

        std::vector<Measure> measures;
        if (measure == "all")
            measures = {Measure::Recall, Measure::Covratio, Measure::Fscore};
        else
            measures = {parse_measure(measure)};

        json values = json::object();
        for (Measure q : measures) {
            MeasureResult r;
            if (in.dfa)
                r = cosafety_quality(m, in.effect_automaton(), *in.dfa, q);
            else if (!in.eff_dra.empty())
                r = reachability_quality(m, *in.dra, in.cause_states, q);
            else
                r = measure_cause(m, in.cause_states, in.eff_states, q);
            json entry = number(r.value);
            if (r.avoiding) entry["avoiding_scheduler"] = scheduler_table(m, *r.avoiding);
            values[prcause::to_string(q)] = entry;
        }
        result["values"] = values;

        if (!scheduler.empty()) {
            if (in.dfa || !in.eff_dra.empty()) throw InputError("--scheduler needs state-based cause and effect");
            auto s = parse_scheduler(read_file(scheduler), m);
            auto cm = confusion_matrix(m, in.cause_states, in.eff_states, s);
            json fixed{{"tp", number(cm.tp)}, {"fp", number(cm.fp)}, {"fn", number(cm.fn)}, {"tn", number(cm.tn)}};
            try {
                auto value = mcc(cm);
                fixed["mcc"] = {{"exact", value.str()}, {"decimal", value.decimal()}, {"undefined", false}};
            } catch (const PreconditionError&) {
                fixed["mcc"] = {{"undefined", true}};
            }
            result["fixed_scheduler"] = fixed;
        }
        return IsCause;
    }
};

struct OptimalCommand {
    Inputs in;
    std::string measure;
    std::string mode;
    std::string threshold;
    bool at_least = false;
    bool no_tempprio = false;

    int run(json& query, json& result) {
        in.load(false);
        query = in.echo();
        query["measure"] = measure;
        query["mode"] = mode;
        if (!threshold.empty()) query["threshold"] = threshold;
        query["at_least"] = at_least;
        const Mdp& m = in.mdp;
        Measure q = parse_measure(measure);
        Comparison cmp = at_least ? Comparison::AtLeast : Comparison::Exceeds;
        std::optional<Rat> bound;
        if (!threshold.empty()) bound = parse_rational(threshold);

        if (bound && in.eff_dra.empty() && mode == "spr" && q == Measure::Fscore) {
            auto r = spr_fscore_threshold(m, in.eff_states, *bound, cmp, in.budget);
            result["holds"] = r.holds;
            result["cause"] = r.cause ? names(m, *r.cause) : json(nullptr);
            return r.holds ? IsCause : NotCause;
        }

        std::optional<OptimalResult> best;
        if (!in.eff_dra.empty()) {
            RegularSearchOptions options;
            options.temp_prio = !no_tempprio;
            options.budget = in.budget;
            best = reachability_optimal(m, *in.dra, q, mode == "gpr" ? CauseKind::Gpr : CauseKind::Spr, options);
        } else {
            best = mode == "gpr" ? gpr_optimal(m, in.eff_states, q, in.budget)
                                 : spr_optimal(m, in.eff_states, q, in.budget);
        }
        if (!best) {
            result["cause"] = nullptr;
            result["message"] = "no cause exists";
            if (bound) result["holds"] = false;
            return NotCause;
        }
        result["cause"] = names(m, best->cause);
        result["value"] = number(best->value);
        result["method"] = best->method;
        if (!bound) return IsCause;
        bool holds = cmp == Comparison::AtLeast ? best->value >= Extended(*bound) : best->value > Extended(*bound);
        result["holds"] = holds;
        return holds ? IsCause : NotCause;
    }
};

struct TransformCommand {
    std::string model;
    std::string kind;
    std::string cause;
    std::string eff;
    std::string dra;
    std::string dfa;
    std::string state;
    std::string action;
    std::string output;
    std::string map;

    int run(json& query, json& result) {
        query = {{"model", model}, {"kind", kind}};
        Mdp m = parse_mdp(read_file(model));
        auto states = [&](const std::string& list, const char* flag) {
            if (list.empty()) throw InputError(std::string("--") + flag + " is required for " + kind);
            return parse_state_list(m, list);
        };

        Mdp out;
        std::vector<std::optional<StateId>> origin;
        auto from_map = [&](const StateMap& sm) {
            origin.assign(out.size(), std::nullopt);
            for (auto [to, from] : sm.to_old) origin[to] = from;
        };
        auto from_base = [&](const std::vector<StateId>& base) {
            origin.assign(out.size(), std::nullopt);
            for (StateId v = 0; v < base.size(); ++v)
                if (base[v] != npos) origin[v] = base[v];
        };

        if (kind == "wmin") {
            auto w = wmin_cause(m, states(cause, "cause"), states(eff, "eff"));
            out = std::move(w.mdp);
            from_map(w.map);
        } else if (kind == "quotient") {
            auto qt = mec_quotient(m);
            out = std::move(qt.mdp);
            from_map(qt.map);
        } else if (kind == "canonical") {
            auto cf = canonical_form(m, states(cause, "cause"), states(eff, "eff"));
            out = std::move(cf.mdp);
            from_map(cf.map);
            result["designated"] = {{"eff_cov", out.name(cf.eff_cov)},
                                    {"eff_unc", out.name(cf.eff_unc)},
                                    {"noeff_fp", out.name(cf.noeff_fp)},
                                    {"noeff_tn", out.name(cf.noeff_tn)}};
        } else if (kind == "product-dra") {
            if (dra.empty()) throw InputError("--dra is required for product-dra");
            auto p = product_dra(m, parse_dra(read_file(dra), m));
            out = std::move(p.mdp);
            from_base(p.base);
        } else if (kind == "product-dfa") {
            if (dfa.empty()) throw InputError("--dfa is required for product-dfa");
            auto p = product_dfa(m, parse_dfa(read_file(dfa), m));
            out = std::move(p.mdp);
            from_base(p.base);
            result["accepting"] = names(out, p.accepting);
        } else if (kind == "action-split") {
            if (state.empty() || action.empty()) throw InputError("--state and --action are required for action-split");
            auto a = action_causality_mdp(m, m.id(state), action, states(eff, "eff"));
            out = std::move(a.mdp);
            origin.assign(out.size(), std::nullopt);
            for (const auto* sm : {&a.to_with, &a.to_without})
                for (auto [to, from] : sm->to_old) origin[to] = from;
            result["split_state"] = out.name(a.split_state);
            result["effect"] = names(out, a.effect);
        } else {
            throw InputError("unknown transform kind '" + kind + "'");
        }

        json states_map = json::object();
        for (StateId v = 0; v < out.size(); ++v)
            states_map[out.name(v)] = origin[v] ? json(m.name(*origin[v])) : json(nullptr);
        result["states"] = states_map;
        write_file(output, write_mdp(out));
        if (!map.empty()) {
            json sidecar{{"schema", schema}, {"kind", kind}, {"source", model}};
            sidecar.update(result);
            write_file(map, sidecar.dump(2) + "\n");
        }
        return IsCause;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probability-raising causes in Markov decision processes"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    CheckCommand check;
    auto* check_cmd = app.add_subcommand("check", "decide whether a set of states is a cause");
    check.in.add_to(*check_cmd, true);
    check_cmd->add_option("--mode", check.mode, "spr or gpr")->required()->check(CLI::IsMember({"spr", "gpr"}));
    check_cmd->add_flag("--non-strict", check.non_strict, "use the non-strict inequality");
    check_cmd->add_flag("--relaxed-minimality", check.relaxed, "drop unreachable cause states");
    check_cmd->add_flag("--tempprio", check.tempprio, "also require the effect to be uncertain at the cause");

    QualityCommand quality;
    auto* quality_cmd = app.add_subcommand("quality", "worst-case quality of a cause");
    quality.in.add_to(*quality_cmd, true);
    quality_cmd->add_option("--measure", quality.measure, "recall, covratio, fscore or all")
        ->check(CLI::IsMember({"recall", "covratio", "fscore", "all"}));
    quality_cmd->add_option("--scheduler", quality.scheduler, "scheduler file for a fixed confusion matrix");

    OptimalCommand optimal;
    auto* optimal_cmd = app.add_subcommand("optimal", "best cause for a measure");
    optimal.in.add_to(*optimal_cmd, false);
    optimal_cmd->add_option("--measure", optimal.measure, "recall, covratio or fscore")
        ->required()
        ->check(CLI::IsMember({"recall", "covratio", "fscore"}));
    optimal_cmd->add_option("--mode", optimal.mode, "spr or gpr")->required()->check(CLI::IsMember({"spr", "gpr"}));
    optimal_cmd->add_option("--threshold", optimal.threshold, "decide whether the optimum exceeds p/q");
    optimal_cmd->add_flag("--at-least", optimal.at_least, "compare the threshold with >=");
    optimal_cmd->add_flag("--no-tempprio", optimal.no_tempprio, "allow causes after which the effect is certain");

    TransformCommand transform;
    auto* transform_cmd = app.add_subcommand("transform", "write a transformed model");
    transform_cmd->add_option("--model", transform.model, "model file")->required();
    transform_cmd
        ->add_option("--kind", transform.kind, "wmin, quotient, canonical, product-dra, product-dfa or action-split")
        ->required();
    transform_cmd->add_option("--cause", transform.cause, "cause states");
    transform_cmd->add_option("--eff", transform.eff, "effect states");
    transform_cmd->add_option("--dra", transform.dra, "Rabin automaton");
    transform_cmd->add_option("--dfa", transform.dfa, "finite automaton");
    transform_cmd->add_option("--state", transform.state, "state of the action");
    transform_cmd->add_option("--action", transform.action, "action to split on");
    transform_cmd->add_option("--output,-o", transform.output, "model output, stdout by default");
    transform_cmd->add_option("--map", transform.map, "state map sidecar (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return BadInput;
    }

    auto start = std::chrono::steady_clock::now();
    json query, result;
    int code = BadInput;
    std::string command = app.get_subcommands().front()->get_name();
    try {
        if (command == "check") code = check.run(query, result);
        if (command == "quality") code = quality.run(query, result);
        if (command == "optimal") code = optimal.run(query, result);
        if (command == "transform") {
            code = transform.run(query, result);
            return code;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return BadInput;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return BadInput;
    } catch (const BudgetExceeded& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        result = {{"verdict", "undecided"}, {"reason", e.what()}};
        code = Undecided;
    }

    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    json report{{"schema", schema}, {"tool", "prcause"},     {"version", version}, {"command", command},
                {"query", query},   {"result", result},      {"exit_code", code},  {"timing_ms", ms}};
    std::cout << report.dump(2) << "\n";
    return code;
}
