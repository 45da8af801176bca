#include "syzlab/error.hpp"
#include "syzlab/scenario.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace syzlab;
using nlohmann::json;

namespace {

struct Output {
    std::string format = "text";
    std::string path;
};

void add_output_flags(CLI::App* app, Output& o) {
    app->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app->add_option("--out", o.path, "write the report to this file");
}

void emit(const Output& o, const std::string& text) {
    if (o.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.path);
    if (!f) throw Error(Errc::Parse, "cannot write " + o.path);
    f << text;
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::Parse, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw Error(Errc::Parse, path + ": malformed JSON: " + e.what());
    }
}

int report(const RunReport& r, const Output& o) {
    emit(o, o.format == "json" ? report_json(r).dump(2) + "\n" : report_text(r));
    return exit_code(r);
}

Scenario module_scenario(const std::string& kind, const std::string& name, json payload) {
    Scenario s;
    s.version = kScenarioVersion;
    s.name = name;
    s.kind = kind;
    s.payload = std::move(payload);
    return s;
}

std::pair<int, int> parse_type(const std::string& t) {
    int a = -1, b = -1;
    char comma = 0;
    std::istringstream is(t);
    std::string rest;
    if (!(is >> a >> comma >> b) || comma != ',' || (is >> rest)) throw Error(Errc::Parse, "--type expects b1,b2");
    return {a, b};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-flat SYZ toolkit: chart calculus, duality checks, fibre topology, sheaf cohomology and the K3 "
                 "mirror map"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    SettingsOverride ov;
    int grid = 0;
    double tol = 0;
    std::uint64_t seed = 0;
    Output out;

    auto* run = app.add_subcommand("run", "run a scenario file");
    std::string scenario_path;
    run->add_option("scenario", scenario_path, "scenario JSON")->required();
    auto* grid_opt = run->add_option("--grid", grid, "fibre quadrature points per axis (default 16)");
    auto* tol_opt = run->add_option("--tol", tol, "residual tolerance (default 1e-8)");
    auto* seed_opt = run->add_option("--seed", seed, "random seed");
    add_output_flags(run, out);

    auto* fibre = app.add_subcommand("fibre", "cohomology of fibre models");
    std::vector<std::string> models;
    int subdivisions = 1;
    fibre->add_option("--model", models, "model name (repeatable; default all)");
    fibre->add_option("--subdivisions", subdivisions, "1, 2 or 3");
    add_output_flags(fibre, out);

    auto* sheaf = app.add_subcommand("sheaf", "cohomology of a local system on the punctured sphere");
    std::string mono_path, e2_path;
    sheaf->add_option("--monodromy", mono_path, "JSON list of monodromy matrices (or an object with 'monodromy')");
    sheaf->add_option("--e2", e2_path, "JSON object with 'table' and optional 'dual' E2 grids");
    add_output_flags(sheaf, out);

    auto* k3 = app.add_subcommand("k3", "K3 mirror map on lattice classes");
    std::string k3_path;
    k3->add_option("--input", k3_path, "mirror input JSON")->required();
    add_output_flags(k3, out);

    auto* mod = app.add_subcommand("models", "list the singular fibre models");
    std::string type;
    mod->add_option("--type", type, "only models of type b1,b2");
    mod->add_flag("--json", [&](std::int64_t) { out.format = "json"; }, "JSON output");
    add_output_flags(mod, out);

    auto* conv = app.add_subcommand("conventions", "print the sign and orientation conventions");
    add_output_flags(conv, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            if (*grid_opt) ov.grid = grid;
            if (*tol_opt) ov.tol = tol;
            if (*seed_opt) ov.seed = seed;
            return report(run_scenario(load_scenario(scenario_path), ov), out);
        }
        if (*fibre) {
            json p = {{"subdivisions", subdivisions}};
            if (!models.empty()) p["models"] = models;
            return report(run_scenario(module_scenario("fibre", "fibre", p)), out);
        }
        if (*sheaf) {
            json p = json::object();
            if (mono_path.empty() && e2_path.empty()) throw Error(Errc::Parse, "give --monodromy and/or --e2");
            if (!mono_path.empty()) {
                json m = read_json_file(mono_path);
                if (m.is_object()) {
                    for (const auto& [k, v] : m.items()) p[k] = v;
                } else {
                    p["monodromy"] = m;
                }
            }
            if (!e2_path.empty()) {
                json e = read_json_file(e2_path);
                if (!e.is_object()) throw Error(Errc::Schema, "--e2 file must be an object with 'table'");
                for (const auto& [k, v] : e.items()) p[k] = v;
            }
            return report(run_scenario(module_scenario("sheaf", mono_path.empty() ? e2_path : mono_path, p)), out);
        }
        if (*k3) return report(run_scenario(module_scenario("k3", k3_path, read_json_file(k3_path))), out);
        if (*mod) {
            std::optional<std::pair<int, int>> t;
            if (!type.empty()) t = parse_type(type);
            auto rows = list_models(t);
            if (out.format == "json") {
                json a = json::array();
                for (const auto& r : rows)
                    a.push_back({{"model", r.name}, {"b1", r.b1}, {"b2", r.b2}, {"description", r.description}});
                emit(out, a.dump(2) + "\n");
            } else {
                std::ostringstream os;
                for (const auto& r : rows)
                    os << r.name << "\t(" << r.b1 << "," << r.b2 << ")\t" << r.description << "\n";
                emit(out, os.str());
            }
            return 0;
        }
        if (*conv) {
            auto cs = conventions();
            if (out.format == "json") {
                json a = json::array();
                for (const auto& c : cs) a.push_back({{"key", c.key}, {"statement", c.statement}});
                emit(out, a.dump(2) + "\n");
            } else {
                std::ostringstream os;
                for (const auto& c : cs) os << c.key << ": " << c.statement << "\n";
                emit(out, os.str());
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "syzlab: " << errc_name(e.code()) << ": " << e.what() << "\n";
        return e.code() == Errc::Parse || e.code() == Errc::Schema ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "syzlab: internal error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
