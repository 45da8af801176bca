#include "syzlab/error.hpp"
#include "syzlab/k3.hpp"
#include "syzlab/scenario.hpp"
#include "syzlab/sheaf.hpp"
#include "syzlab/topology.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace syzlab;
using nlohmann::json;

namespace {

// Results cross the boundary as JSON text; the Python package decodes them.
std::string run(const std::string& scenario, std::optional<int> grid, std::optional<double> tol,
                std::optional<std::uint64_t> seed, bool with_timings) {
    SettingsOverride o{grid, tol, seed};
    return report_json(run_scenario(parse_scenario(scenario), o), with_timings).dump();
}

std::string models(std::optional<std::pair<int, int>> type) {
    json a = json::array();
    for (const auto& r : list_models(type))
        a.push_back({{"model", r.name}, {"b1", r.b1}, {"b2", r.b2}, {"description", r.description}});
    return a.dump();
}

std::string fibre_cohomology(const std::string& model, int subdivisions) {
    CohomologyResult c = integral_cohomology(build_model(parse_model(model), subdivisions));
    json a = json::array();
    for (const auto& g : c.groups) a.push_back(group_json(g));
    return a.dump();
}

std::string sheaf_cohomology(const std::string& monodromy) {
    SphereCohomology h = pushforward_cohomology(local_system_from_json(json::parse(monodromy)));
    json a = json::array();
    for (const auto& g : h.h) a.push_back(group_json(g));
    return a.dump();
}

int quotient_rank(const std::string& preset, const std::vector<long>& E) {
    ZVector e(E.begin(), E.end());
    return sublattice_quotient(lattice_preset(preset), e).lattice.rank();
}

}  // namespace

PYBIND11_MODULE(_syzlab, m) {
    m.doc() = "Native core of the syzlab package";
    m.attr("__version__") = kToolVersion;

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, (std::string(errc_name(e.code())) + ": " + e.what()).c_str());
        }
    });

    m.def("run_scenario_json", &run, py::arg("scenario"), py::arg("grid") = py::none(), py::arg("tol") = py::none(),
          py::arg("seed") = py::none(), py::arg("with_timings") = true);
    m.def("models_json", &models, py::arg("type") = py::none());
    m.def("conventions", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& c : conventions()) out.emplace_back(c.key, c.statement);
        return out;
    });
    m.def("fibre_cohomology_json", &fibre_cohomology, py::arg("model"), py::arg("subdivisions") = 1);
    m.def("sheaf_cohomology_json", &sheaf_cohomology, py::arg("monodromy"));
    m.def("quotient_rank", &quotient_rank, py::arg("preset"), py::arg("E"));
}
