#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hlf/element.hpp"
#include "hlf/error.hpp"
#include "hlf/expansion.hpp"
#include "hlf/jobs.hpp"
#include "hlf/suites.hpp"
#include "hlf/valuation.hpp"

namespace py = pybind11;
using namespace hlf;

namespace {

// pybind11 holders cannot be shared_ptr<const T>
using PyField = std::shared_ptr<Field>;
PyField py_field(const FieldPtr &f) { return std::const_pointer_cast<Field>(f); }

// JSON crosses the boundary as text; the Python side decodes it
std::string run_task_text(const std::string &kind, const std::string &inputs)
{
    Json in;
    try {
        in = Json::parse(inputs);
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::InvalidInput, std::string("bad JSON: ") + e.what());
    }
    return run_task_inputs(kind, in).dump();
}

} // namespace

PYBIND11_MODULE(_hlf, m)
{
    m.doc() = "Higher local fields: valuations, topologies, points";

    py::register_exception<Error>(m, "HlfError", PyExc_ValueError);

    py::class_<Field, PyField>(m, "Field")
        .def_static("parse", [](const std::string &d) { return py_field(Field::parse(d)); }, py::arg("desc"))
        .def_property_readonly("dim", &Field::dim)
        .def_property_readonly("residue", [](const Field &f) { return py_field(f.residue()); })
        .def("__str__", &Field::str)
        .def("__repr__", [](const Field &f) { return "Field('" + f.str() + "')"; });

    py::class_<Element>(m, "Element")
        .def_static("parse", [](const PyField &f, const std::string &t) { return Element::parse(f, t); },
                    py::arg("field"), py::arg("text"))
        .def_property_readonly("field", [](const Element &x) { return py_field(x.field()); })
        .def("is_zero", &Element::is_zero)
        .def("valuation", &Element::valuation)
        .def("rank_valuation", &rank_valuation, py::arg("r"))
        .def("in_integer_ring", &in_integer_ring, py::arg("level"))
        .def("residue", [](const Element &x) { return residue(x); })
        .def("inv", &Element::inv)
        .def("__add__", [](const Element &a, const Element &b) { return a + b; })
        .def("__sub__", [](const Element &a, const Element &b) { return a - b; })
        .def("__mul__", [](const Element &a, const Element &b) { return a * b; })
        .def("__truediv__", [](const Element &a, const Element &b) { return a / b; })
        .def("__neg__", [](const Element &a) { return -a; })
        .def("__pow__", [](const Element &a, int64_t e) { return a.pow(e); })
        .def("__eq__", [](const Element &a, const Element &b) { return a == b; })
        .def("__str__", &Element::str)
        .def("__repr__", [](const Element &x) { return "Element('" + x.str() + "')"; });

    m.def("lift_h", [](const PyField &f, const Element &y, int64_t N) { return lift_h(f, y, N).value; },
          py::arg("field"), py::arg("ybar"), py::arg("N") = 8);

    m.def("_run_task", &run_task_text, py::arg("kind"), py::arg("inputs"));
    m.def("_check", [](const std::string &suite, uint64_t seed, int battery) {
        return run_task_inputs("check-suite", Json{{"suite", suite}, {"seed", seed}, {"battery_size", battery}}).dump();
    }, py::arg("suite"), py::arg("seed") = 1, py::arg("battery") = 100);
    m.def("suite_names", &suite_names);
}
