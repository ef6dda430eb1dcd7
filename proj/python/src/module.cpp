#include "prcause/cause_check.hpp"
#include "prcause/error.hpp"
#include "prcause/io.hpp"
#include "prcause/optimal.hpp"
#include "prcause/quality.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace prcause;

namespace {

py::object fraction(const Rat& value) {
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(to_string(value));
}

py::object fraction(const Extended& value) {
    if (value.is_infinite()) return py::float_(INFINITY);
    return fraction(value.value());
}

StateSet states(const Mdp& m, const std::vector<std::string>& names) {
    StateSet out;
    for (const auto& n : names) out.insert(m.id(n));
    return out;
}

std::vector<std::string> names(const Mdp& m, const StateSet& set) {
    std::vector<std::string> out;
    for (StateId s : set) out.push_back(m.name(s));
    return out;
}

py::dict verdict(const Mdp& m, const CauseVerdict& v) {
    py::dict out;
    out["is_cause"] = v.is_cause;
    out["violated"] = v.violated.empty() ? py::none() : py::object(py::str(v.violated));
    out["minimality_failures"] = names(m, v.minimality_failures);
    out["checked_cause"] = names(m, v.checked_cause);
    out["conditional"] = v.conditional ? fraction(*v.conditional) : py::none();
    out["unconditional"] = v.unconditional ? fraction(*v.unconditional) : py::none();
    if (v.witness) {
        py::dict w;
        w["effect"] = fraction(v.witness->replay.effect);
        w["condition"] = fraction(v.witness->replay.condition);
        w["conditional"] = fraction(v.witness->replay.conditional());
        w["state"] = v.witness->state ? py::object(py::str(m.name(*v.witness->state))) : py::none();
        out["witness"] = w;
    } else {
        out["witness"] = py::none();
    }
    return out;
}

CheckOptions options(bool non_strict, bool relaxed_minimality) {
    CheckOptions o;
    o.inequality = non_strict ? Inequality::NonStrict : Inequality::Strict;
    o.relaxed_minimality = relaxed_minimality;
    return o;
}

py::object optimum(const Mdp& m, const std::optional<OptimalResult>& r) {
    if (!r) return py::none();
    py::dict out;
    out["cause"] = names(m, r->cause);
    out["value"] = fraction(r->value);
    out["method"] = r->method;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Probability-raising causes in Markov decision processes";

    py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);
    py::register_exception<PreconditionError>(mod, "PreconditionError", PyExc_ValueError);
    py::register_exception<BudgetExceeded>(mod, "BudgetExceeded", PyExc_RuntimeError);

    py::class_<Mdp>(mod, "Mdp")
        .def_static("parse", [](const std::string& text) { return parse_mdp(text); }, py::arg("text"))
        .def("write", &write_mdp)
        .def_property_readonly("states", [](const Mdp& m) {
            std::vector<std::string> out;
            for (StateId s = 0; s < m.size(); ++s) out.push_back(m.name(s));
            return out;
        })
        .def_property_readonly("init", [](const Mdp& m) { return m.name(m.init()); })
        .def("is_markov_chain", &Mdp::is_markov_chain)
        .def("actions", [](const Mdp& m, const std::string& state) {
            std::vector<std::string> out;
            for (const auto& c : m.choices(m.id(state))) out.push_back(c.action);
            return out;
        })
        .def("__len__", &Mdp::size);

    mod.def("check_spr", [](const Mdp& m, const std::vector<std::string>& cause, const std::vector<std::string>& eff,
                            bool non_strict, bool relaxed_minimality) {
        return verdict(m, check_spr(m, states(m, cause), states(m, eff), options(non_strict, relaxed_minimality)));
    }, py::arg("model"), py::arg("cause"), py::arg("eff"), py::arg("non_strict") = false,
       py::arg("relaxed_minimality") = false);

    mod.def("check_gpr", [](const Mdp& m, const std::vector<std::string>& cause, const std::vector<std::string>& eff,
                            bool non_strict, bool relaxed_minimality) {
        return verdict(m, check_gpr(m, states(m, cause), states(m, eff), options(non_strict, relaxed_minimality)));
    }, py::arg("model"), py::arg("cause"), py::arg("eff"), py::arg("non_strict") = false,
       py::arg("relaxed_minimality") = false);

    mod.def("quality", [](const Mdp& m, const std::vector<std::string>& cause, const std::vector<std::string>& eff,
                          const std::string& measure) {
        return fraction(measure_cause(m, states(m, cause), states(m, eff), parse_measure(measure)).value);
    }, py::arg("model"), py::arg("cause"), py::arg("eff"), py::arg("measure"));

    mod.def("canonical_cause", [](const Mdp& m, const std::vector<std::string>& eff) -> py::object {
        auto c = canonical_cause(m, states(m, eff));
        if (!c) return py::none();
        py::dict out;
        out["cause"] = names(m, c->cause);
        out["recall"] = fraction(c->recall);
        out["covratio"] = fraction(c->covratio);
        return out;
    }, py::arg("model"), py::arg("eff"));

    mod.def("optimal_cause", [](const Mdp& m, const std::vector<std::string>& eff, const std::string& measure,
                                const std::string& mode, std::optional<std::size_t> budget) {
        auto q = parse_measure(measure);
        if (mode == "spr") return optimum(m, spr_optimal(m, states(m, eff), q, budget));
        if (mode == "gpr") return optimum(m, gpr_optimal(m, states(m, eff), q, budget));
        throw InputError("mode must be 'spr' or 'gpr'");
    }, py::arg("model"), py::arg("eff"), py::arg("measure"), py::arg("mode") = "spr", py::arg("budget") = py::none());
}
