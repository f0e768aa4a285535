#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "soliton/commands.hpp"
#include "soliton/errors.hpp"
#include "soliton/io.hpp"

namespace py = pybind11;
using namespace soliton;

namespace {

const char* kind_name(ErrorKind kind)
{
    switch (kind)
    {
        case ErrorKind::Validation: return "validation";
        case ErrorKind::NonConvergence: return "non_convergence";
        case ErrorKind::Infeasible: return "infeasible";
    }
    return "validation";
}

// Errors cross the boundary as (kind, message, extra json) so that the
// python side can raise its own exception classes.
py::tuple error_tuple(const std::string& kind, const std::string& message, const Json& extra)
{
    return py::make_tuple(kind, message, extra.dump());
}

}   // namespace

PYBIND11_MODULE(_soliton_volume, m)
{
    m.doc() = "Native core of soliton_volume; use the package wrapper.";
    m.attr("schema_version") = kSchemaVersion;

    m.def("run_json", [](const std::string& command, const std::string& inputs) -> py::object {
        Json report;
        {
            py::gil_scoped_release release;
            try
            {
                report = run_command(command, Json::parse(inputs));
            }
            catch (const NotConverged& e)
            {
                Json best = Json::array();
                for (double v : e.best_iterate())
                    best.push_back(format_real(v));
                Json extra = {{"best_iterate", {{"value", best}, {"precision", "f64"}}},
                              {"grad_norm", {{"value", format_real(e.grad_norm())}, {"precision", "f64"}}}};
                py::gil_scoped_acquire acquire;
                return error_tuple("non_convergence", e.what(), extra);
            }
            catch (const SolitonError& e)
            {
                py::gil_scoped_acquire acquire;
                return error_tuple(kind_name(e.kind()), e.what(), Json::object());
            }
            catch (const nlohmann::json::exception& e)
            {
                py::gil_scoped_acquire acquire;
                return error_tuple("validation", e.what(), Json::object());
            }
        }
        return py::str(report.dump());
    }, py::arg("command"), py::arg("inputs"),
       "Runs a command on JSON inputs. Returns the report text, or a (kind, message, extra) tuple on failure.");

    m.def("validate_report_json", [](const std::string& report) {
        try
        {
            validate_report(Json::parse(report));
            return std::string();
        }
        catch (const std::exception& e)
        {
            return std::string(e.what());
        }
    }, py::arg("report"), "Empty string when the report is well formed, else the problem.");

    m.def("builtin_document_json", [](const std::string& shortcut) -> py::object {
        try
        {
            return py::str(builtin_document(parse_builtin_shortcut(shortcut)).to_json().dump());
        }
        catch (const SolitonError& e)
        {
            return error_tuple(kind_name(e.kind()), e.what(), Json::object());
        }
    }, py::arg("shortcut"), "Problem document for a builtin such as OkPn:3:1.");

    m.def("command_names", &command_names);
    m.def("default_precision", [] { return to_string(default_precision()); });
}
