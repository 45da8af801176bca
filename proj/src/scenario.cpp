#include "syzlab/scenario.hpp"

#include "syzlab/duality.hpp"
#include "syzlab/error.hpp"
#include "syzlab/semiflat.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

namespace syzlab {

using nlohmann::json;

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

[[noreturn]] void schema(const std::string& msg) { throw Error(Errc::Schema, msg); }

void check_fields(const json& j, const std::string& where, const std::set<std::string>& allowed,
                  const std::set<std::string>& required = {}) {
    if (!j.is_object()) schema(where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) schema("unknown field '" + k + "' in " + where);
    for (const auto& k : required)
        if (!j.contains(k)) schema("missing field '" + k + "' in " + where);
}

int get_int(const json& j, const std::string& what) {
    if (!j.is_number_integer()) schema(what + " must be an integer");
    return j.get<int>();
}

double get_double(const json& j, const std::string& what) {
    if (!j.is_number()) schema(what + " must be a number");
    return j.get<double>();
}

std::string get_string(const json& j, const std::string& what) {
    if (!j.is_string()) schema(what + " must be a string");
    return j.get<std::string>();
}

const json& get_array(const json& j, const std::string& what) {
    if (!j.is_array()) schema(what + " must be an array");
    return j;
}

// Exact rational from a JSON number or string; decimals keep their decimal value.
Q get_rational(const json& j, const std::string& what) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Q(j.get<long>());
    if (j.is_number_float()) return parse_rational(j.dump());
    schema(what + " must be a rational number or string");
}

Z get_integer(const json& j, const std::string& what) {
    Q q = get_rational(j, what);
    if (q.get_den() != 1) schema(what + " must be integral");
    return q.get_num();
}

ScalarExpr get_expr(const json& j, const std::string& what) {
    if (j.is_string()) return parse_expr(j.get<std::string>());
    if (j.is_number()) return ScalarExpr(get_rational(j, what));
    schema(what + " must be an expression string");
}

ComplexExpr get_complex(const json& j, const std::string& what) {
    if (j.is_object()) {
        check_fields(j, what, {"re", "im"});
        ComplexExpr c;
        if (j.contains("re")) c.re = get_expr(j["re"], what + ".re");
        if (j.contains("im")) c.im = get_expr(j["im"], what + ".im");
        return c;
    }
    return ComplexExpr(get_expr(j, what));
}

int get_n(const json& p) {
    int n = get_int(p.at("n"), "n");
    if (n < 1 || n > 3) schema("n must be 1, 2 or 3");
    return n;
}

Chart get_chart(const json& p, int n) {
    if (!p.contains("box")) return Chart::unit(n);
    const json& box = get_array(p["box"], "box");
    if (box.size() != sz(n)) schema("box needs one interval per base coordinate");
    std::vector<std::pair<double, double>> iv;
    for (const auto& b : box) {
        if (!b.is_array() || b.size() != 2) schema("box entries must be [lo, hi]");
        iv.emplace_back(get_double(b[0], "box"), get_double(b[1], "box"));
    }
    try {
        return Chart::make(n, iv);
    } catch (const Error& e) {
        schema(e.what());
    }
}

template <class T, class F>
Matrix<T> get_matrix(const json& j, int n, const std::string& what, F&& entry) {
    get_array(j, what);
    if (j.size() != sz(n)) schema(what + " must be " + std::to_string(n) + " x " + std::to_string(n));
    Matrix<T> m(sz(n), std::vector<T>(sz(n)));
    for (int i = 0; i < n; ++i) {
        const json& row = j[sz(i)];
        if (!row.is_array() || row.size() != sz(n))
            schema(what + " must be " + std::to_string(n) + " x " + std::to_string(n));
        for (int k = 0; k < n; ++k) m[sz(i)][sz(k)] = entry(row[sz(k)], what);
    }
    return m;
}

BetaStructure get_beta_structure(const json& p) {
    int n = get_n(p);
    Chart c = get_chart(p, n);
    bool compatible = true;
    if (p.contains("flags")) {
        check_fields(p["flags"], "flags", {"compatible"});
        if (p["flags"].contains("compatible")) {
            if (!p["flags"]["compatible"].is_boolean()) schema("flags.compatible must be a boolean");
            compatible = p["flags"]["compatible"].get<bool>();
        }
    }
    auto beta = get_matrix<ComplexExpr>(p.at("beta"), n, "beta", get_complex);
    return BetaStructure::make(c, beta, compatible);
}

SemiflatOptions semiflat_options(const Settings& s) {
    SemiflatOptions o;
    o.tol = s.tol;
    return o;
}

using Runner = std::function<Report(const json&, const Settings&, json&)>;

Report run_semiflat(const json& p, const Settings& set, json&) {
    check_fields(p, "payload", {"n", "box", "beta", "flags"}, {"n", "beta"});
    BetaStructure s = get_beta_structure(p);
    SemiflatOptions o = semiflat_options(set);
    Report r;
    r.append(pointwise_checks(s, o), "pointwise.");
    r.append(closedness_residuals(s, o), "closedness.");
    r.append(structure_equations(s, o), "structure.");
    return r;
}

Report run_dualize(const json& p, const Settings& set, json&) {
    check_fields(p, "payload", {"n", "box", "beta", "flags", "cycle", "alpha", "order"}, {"n", "beta"});
    BetaStructure s = get_beta_structure(p);
    int n = s.n();
    DualityOptions d;
    d.resolution = set.grid;
    d.tol = set.tol;
    if (p.contains("order")) {
        std::string o = get_string(p["order"], "order");
        if (o == "forward") d.order = PairingOrder::Forward;
        else if (o == "reversed") d.order = PairingOrder::Reversed;
        else schema("order must be 'forward' or 'reversed'");
    }
    CycleSpec gamma = dual_basis_cycle(n, 1, d.order);
    if (p.contains("cycle")) {
        const json& c = p["cycle"];
        check_fields(c, "cycle", {"cycle", "degree", "at"}, {"cycle"});
        gamma.degree = c.contains("degree") ? get_int(c["degree"], "cycle.degree") : 1;
        gamma.coeffs.clear();
        for (const auto& v : get_array(c["cycle"], "cycle.cycle")) gamma.coeffs.push_back(get_int(v, "cycle.cycle"));
        gamma.at = s.chart.center();
        if (c.contains("at")) {
            const json& at = get_array(c["at"], "cycle.at");
            if (at.size() != sz(n)) schema("cycle.at needs one coordinate per base axis");
            for (int i = 0; i < n; ++i) gamma.at[sz(i)] = get_double(at[sz(i)], "cycle.at");
        }
    }
    // alpha = sum_m c_m dx_{[n] \ m}
    DifferentialForm alpha(n);
    std::vector<ScalarExpr> coef(sz(n), ScalarExpr(1));
    if (p.contains("alpha")) {
        const json& a = get_array(p["alpha"], "alpha");
        if (a.size() != sz(n)) schema("alpha needs n coefficients");
        for (int m = 0; m < n; ++m) coef[sz(m)] = get_expr(a[sz(m)], "alpha");
    }
    for (int m = 1; m <= n; ++m)
        alpha.add(x_mask(n) & ~(1u << dx_slot(m)), ComplexExpr(coef[sz(m - 1)]));

    SemiflatOptions o = semiflat_options(set);
    Report r;
    r.append(mclean_report(s, o, set.grid), "mclean.");
    r.append(duality_identities(s, gamma, alpha, d), "identities.");
    r.append(dual_structure_check(s, o, set.grid), "dual.");
    return r;
}

Report run_hitchin(const json& p, const Settings& set, json&) {
    check_fields(p, "payload", {"n", "box", "phi", "b"}, {"n", "phi"});
    int n = get_n(p);
    HitchinPotential h{get_chart(p, n), get_expr(p["phi"], "phi")};
    std::optional<SymTensorField> b;
    if (p.contains("b")) b = SymTensorField{get_matrix<ScalarExpr>(p["b"], n, "b", get_expr)};
    return hitchin_report(h, b, semiflat_options(set));
}

Report run_yukawa(const json& p, const Settings& set, json& out) {
    check_fields(p, "payload", {"n", "box", "beta", "directions", "gauss_order"}, {"n", "beta"});
    int n = get_n(p);
    YukawaFamily f{get_chart(p, n), get_matrix<ComplexExpr>(p["beta"], n, "beta", get_complex)};
    std::vector<std::vector<double>> dirs;
    if (p.contains("directions")) {
        for (const auto& d : get_array(p["directions"], "directions")) {
            std::vector<double> v;
            for (const auto& x : get_array(d, "directions")) v.push_back(get_double(x, "directions"));
            dirs.push_back(v);
        }
    }
    Quadrature q;
    q.resolution = set.grid;
    if (p.contains("gauss_order")) q.gauss_order = get_int(p["gauss_order"], "gauss_order");
    YukawaResult y = yukawa(f, dirs, q);
    Report r;
    r.info("quadrature", y.quadrature);
    out["quadrature"] = y.quadrature;
    if (y.closed_form) {
        double c = *y.closed_form;
        out["closed_form"] = c;
        r.info("closed_form", c);
        double rel = std::abs(y.quadrature - c) / std::max(std::abs(c), 1e-300);
        r.residual("closed_form_relative_error", rel, set.tol);
    }
    return r;
}

json cohomology_json(const CohomologyResult& c) {
    json a = json::array();
    for (std::size_t k = 0; k < c.groups.size(); ++k) {
        json g = group_json(c.groups[k]);
        g["degree"] = k;
        a.push_back(g);
    }
    return a;
}

Report run_fibre_payload(const json& p, const Settings&, json& out) {
    check_fields(p, "payload", {"models", "subdivisions"});
    int sub = p.contains("subdivisions") ? get_int(p["subdivisions"], "subdivisions") : 1;
    if (sub < 1 || sub > 3) schema("subdivisions must be 1, 2 or 3");
    std::vector<FibreModel> models = all_fibre_models();
    if (p.contains("models") && !(p["models"].is_string() && p["models"] == "all")) {
        models.clear();
        for (const auto& m : get_array(p["models"], "models")) {
            try {
                models.push_back(parse_model(get_string(m, "models")));
            } catch (const Error& e) {
                schema(e.what());
            }
        }
    }
    std::map<FibreModel, CohomologyResult> results;
    Report r;
    json rows = json::array();
    std::vector<std::pair<int, int>> types;
    for (FibreModel m : models) {
        CohomologyResult c = integral_cohomology(build_model(m, sub));
        results[m] = c;
        std::string name = model_name(m);
        json row = {{"model", name}, {"cohomology", cohomology_json(c)}, {"b1", c.betti(1)}, {"b2", c.betti(2)}};
        if (m != FibreModel::T3) {
            auto [e1, e2] = expected_type(m);
            row["expected"] = {e1, e2};
            r.verdict(name + ".betti", c.betti(1) == e1 && c.betti(2) == e2,
                      "(" + std::to_string(c.betti(1)) + "," + std::to_string(c.betti(2)) + ")");
            types.emplace_back(c.betti(1), c.betti(2));
        }
        rows.push_back(row);
        if (m == FibreModel::M00) {
            AbelianGroup z = make_group(1, {});
            bool sphere = c.groups.size() == 4 && c.groups[0] == z && c.groups[1] == AbelianGroup{} &&
                          c.groups[2] == AbelianGroup{} && c.groups[3] == z;
            r.verdict("M00.sphere", sphere);
        }
    }
    out["models"] = rows;
    // the pairing audit is only meaningful on the full catalogue
    if (results.size() == all_fibre_models().size()) {
        auto unpaired = duality_pairing_audit(types);
        std::string note;
        for (const auto& u : unpaired) note += (note.empty() ? "" : " ") + u;
        r.verdict("duality_pairing", unpaired.empty(), note);
        r.verdict("all_match", fibre_type_report(results).all_match());
    }
    return r;
}

json e2_json(const E2Table& t) {
    json grid = json::array();
    for (int p = 0; p <= t.n; ++p) {
        json col = json::array();
        for (int q = 0; q <= t.n; ++q) col.push_back(group_json(t.at(p, q)));
        grid.push_back(col);
    }
    return grid;
}

Report run_sheaf_payload(const json& p, const Settings&, json& out) {
    check_fields(p, "payload", {"monodromy", "preset", "expected", "table", "dual"});
    Report r;
    bool have_system = p.contains("monodromy") || p.contains("preset");
    if (p.contains("monodromy") && p.contains("preset")) schema("give either monodromy or preset");
    if (have_system) {
        LocalSystem L;
        if (p.contains("preset")) {
            std::string name = get_string(p["preset"], "preset");
            if (name != "k3") schema("unknown local-system preset '" + name + "'");
            L = k3_local_system();
        } else {
            L = local_system_from_json(p["monodromy"]);
        }
        SphereCohomology h = pushforward_cohomology(L);
        json groups = json::array();
        for (int k = 0; k < 3; ++k) {
            groups.push_back(group_json(h.h[sz(k)]));
            r.info("h" + std::to_string(k), h.h[sz(k)].rank, h.h[sz(k)].str());
        }
        out["cohomology"] = groups;
        int chi = euler_characteristic(L);
        r.verdict("euler", h.h[0].rank - h.h[1].rank + h.h[2].rank == chi, "expected " + std::to_string(chi));
        if (p.contains("expected")) {
            const json& e = get_array(p["expected"], "expected");
            if (e.size() != 3) schema("expected lists h0, h1, h2");
            for (int k = 0; k < 3; ++k) {
                AbelianGroup g = make_group(get_int(e[sz(k)].at("rank"), "rank"), {});
                if (e[sz(k)].contains("torsion"))
                    for (const auto& d : get_array(e[sz(k)]["torsion"], "torsion")) g.torsion.push_back(get_integer(d, "torsion"));
                g = make_group(g.rank, g.torsion);
                r.verdict("expected_h" + std::to_string(k), g == h.h[sz(k)], h.h[sz(k)].str());
            }
        }
        if (L.m == 2 && h.h[0] == AbelianGroup{} && h.h[2] == AbelianGroup{}) out["e2"] = e2_json(e2_k3(L));
    } else if (p.contains("expected")) {
        schema("expected needs a local system");
    }
    if (p.contains("table")) {
        E2Table t = e2_table_from_json(p["table"]);
        E2Table d = p.contains("dual") ? e2_table_from_json(p["dual"]) : dual_table(t);
        r.append(duality_checks(t, d), "e2.");
        out["dual"] = e2_json(d);
    } else if (p.contains("dual")) {
        schema("dual needs a table");
    } else if (!have_system) {
        schema("sheaf payload needs monodromy, preset or table");
    }
    return r;
}

Report run_k3_payload(const json& p, const Settings&, json& out) {
    K3MirrorInput in = k3_input_from_json(p);
    AlignedInput a = validate_and_align(in);
    Report r;
    r.info("theta", a.theta, "cos " + to_string(a.cos_theta) + ", sin " + to_string(a.sin_theta));
    r.info("volume", a.volume.get_d(), to_string(a.volume));
    r.append(hyperkahler_rotate(a.input).checks, "hyperkahler.");
    MirrorClasses m = mirror_classes(a.input);
    r.append(m.checks, "mirror.");
    r.append(double_mirror_check(a.input), "double_mirror.");
    QuotientLattice q = sublattice_quotient(in.lattice, in.E);
    r.info("quotient_rank", q.lattice.rank());
    r.append(k3_chart_form_check(), "forms.");
    if (p.contains("algebraic_classes")) {
        std::vector<ZVector> declared;
        for (const auto& c : get_array(p["algebraic_classes"], "algebraic_classes")) {
            ZVector v;
            for (const auto& x : get_array(c, "algebraic_classes")) v.push_back(get_integer(x, "algebraic_classes"));
            declared.push_back(v);
        }
        auto bad = minus_two_obstructions(a.input, m, declared);
        std::string note;
        for (int i : bad) note += (note.empty() ? "" : " ") + std::to_string(i);
        r.verdict("no_minus2_classes", bad.empty(), note);
    }
    out["aligned"] = {{"re_omega", qvector_json(a.input.re_omega)},
                      {"im_omega", qvector_json(a.input.im_omega)},
                      {"B", qvector_json(a.input.B)},
                      {"volume", to_string(a.volume)}};
    out["mirror"] = {{"omega", qvector_json(m.omega_check)},
                     {"omega_n", {{"re", qvector_json(m.omega_n_check.re)}, {"im", qvector_json(m.omega_n_check.im)}}},
                     {"re_omega", qvector_json(m.re_omega_check)},
                     {"im_omega", qvector_json(m.im_omega_check)},
                     {"B", qvector_json(m.b_check)},
                     {"volume", to_string(m.dual_volume)}};
    out["quotient_rank"] = q.lattice.rank();
    return r;
}

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> m = {
        {"semiflat-check", run_semiflat}, {"dualize", run_dualize}, {"hitchin", run_hitchin},
        {"yukawa", run_yukawa},           {"fibre", run_fibre_payload}, {"sheaf", run_sheaf_payload},
        {"k3", run_k3_payload},
    };
    return m;
}

json settings_json(const Settings& s) { return {{"grid", s.grid}, {"tol", s.tol}, {"seed", s.seed}}; }

}  // namespace

json group_json(const AbelianGroup& g) {
    json t = json::array();
    for (const auto& d : g.torsion) t.push_back(d.fits_slong_p() ? json(d.get_si()) : json(d.get_str()));
    return {{"rank", g.rank}, {"torsion", t}};
}

json qvector_json(const QVector& v) {
    json a = json::array();
    for (const auto& x : v) {
        if (x.get_den() == 1 && x.get_num().fits_slong_p()) a.push_back(x.get_num().get_si());
        else a.push_back(to_string(x));
    }
    return a;
}

K3MirrorInput k3_input_from_json(const json& j) {
    check_fields(j, "k3 input", {"lattice", "E", "sigma0", "omega", "B", "re_omega", "im_omega", "algebraic_classes"},
                 {"lattice", "E", "sigma0", "omega", "re_omega", "im_omega"});
    K3MirrorInput in;
    const json& l = j["lattice"];
    if (l.is_string()) {
        in.lattice = lattice_preset(l.get<std::string>());
    } else {
        check_fields(l, "lattice", {"gram", "unimodular"}, {"gram"});
        const json& g = get_array(l["gram"], "lattice.gram");
        int r = static_cast<int>(g.size());
        in.lattice.gram = IntMatrix(r, r);
        for (int a = 0; a < r; ++a) {
            if (!g[sz(a)].is_array() || g[sz(a)].size() != sz(r)) schema("lattice.gram must be square");
            for (int b = 0; b < r; ++b) in.lattice.gram(a, b) = get_integer(g[sz(a)][sz(b)], "lattice.gram");
        }
        if (l.contains("unimodular")) in.lattice.unimodular = l["unimodular"].get<bool>();
    }
    int r = in.lattice.rank();
    auto zvec = [&](const char* key) {
        ZVector v;
        for (const auto& x : get_array(j[key], key)) v.push_back(get_integer(x, key));
        return v;
    };
    auto qvec = [&](const char* key) {
        QVector v;
        if (!j.contains(key)) return QVector(sz(r));
        for (const auto& x : get_array(j[key], key)) v.push_back(get_rational(x, key));
        return v;
    };
    in.E = zvec("E");
    in.sigma0 = zvec("sigma0");
    in.omega = qvec("omega");
    in.B = qvec("B");
    in.re_omega = qvec("re_omega");
    in.im_omega = qvec("im_omega");
    return in;
}

LocalSystem local_system_from_json(const json& j) {
    const json& mats = get_array(j, "monodromy");
    if (mats.empty()) schema("monodromy needs at least one matrix");
    LocalSystem L;
    for (const auto& m : mats) {
        get_array(m, "monodromy matrix");
        int rows = static_cast<int>(m.size());
        if (rows == 0) schema("monodromy matrices must be nonempty");
        IntMatrix t(rows, rows);
        for (int a = 0; a < rows; ++a) {
            if (!m[sz(a)].is_array() || m[sz(a)].size() != sz(rows)) schema("monodromy matrices must be square");
            for (int b = 0; b < rows; ++b) t(a, b) = get_integer(m[sz(a)][sz(b)], "monodromy entry");
        }
        if (L.T.empty()) L.m = rows;
        L.T.push_back(t);
    }
    return L;
}

E2Table e2_table_from_json(const json& j) {
    const json& grid = get_array(j, "E2 table");
    E2Table t;
    t.n = static_cast<int>(grid.size()) - 1;
    if (t.n != 3) schema("E2 tables are 4 x 4 grids indexed [p][q]");
    t.e.assign(4, std::vector<AbelianGroup>(4));
    for (int p = 0; p <= 3; ++p) {
        if (!grid[sz(p)].is_array() || grid[sz(p)].size() != 4) schema("E2 tables are 4 x 4 grids indexed [p][q]");
        for (int q = 0; q <= 3; ++q) {
            const json& g = grid[sz(p)][sz(q)];
            check_fields(g, "E2 entry", {"rank", "torsion"}, {"rank"});
            std::vector<Z> tors;
            if (g.contains("torsion"))
                for (const auto& d : get_array(g["torsion"], "torsion")) tors.push_back(get_integer(d, "torsion"));
            t.at(p, q) = make_group(get_int(g["rank"], "rank"), tors);
        }
    }
    try {
        validate_e2_n3(t);
    } catch (const Error& e) {
        schema(e.what());
    }
    return t;
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::Parse, std::string("malformed JSON: ") + e.what());
    }
    check_fields(j, "scenario", {"version", "name", "kind", "settings", "payload"}, {"version", "kind", "payload"});
    Scenario s;
    s.version = get_string(j["version"], "version");
    if (s.version != kScenarioVersion) schema("unsupported scenario version '" + s.version + "'");
    if (j.contains("name")) s.name = get_string(j["name"], "name");
    s.kind = get_string(j["kind"], "kind");
    if (!runners().count(s.kind)) schema("unknown scenario kind '" + s.kind + "'");
    if (j.contains("settings")) {
        const json& st = j["settings"];
        check_fields(st, "settings", {"grid", "tol", "seed"});
        if (st.contains("grid")) s.settings.grid = get_int(st["grid"], "settings.grid");
        if (st.contains("tol")) s.settings.tol = get_double(st["tol"], "settings.tol");
        if (st.contains("seed")) {
            if (!st["seed"].is_number_unsigned()) schema("settings.seed must be a non-negative integer");
            s.settings.seed = st["seed"].get<std::uint64_t>();
        }
    }
    if (s.settings.grid <= 0 || !(s.settings.tol > 0)) schema("settings must be positive");
    s.payload = j["payload"];
    if (!s.payload.is_object()) schema("payload must be an object");
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::Parse, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str());
}

RunReport run_scenario(Scenario s, const SettingsOverride& o) {
    if (o.grid) s.settings.grid = *o.grid;
    if (o.tol) s.settings.tol = *o.tol;
    if (o.seed) s.settings.seed = *o.seed;
    if (s.settings.grid <= 0 || !(s.settings.tol > 0)) schema("settings must be positive");
    auto it = runners().find(s.kind);
    if (it == runners().end()) schema("unknown scenario kind '" + s.kind + "'");

    RunReport out;
    out.scenario = {{"version", s.version}, {"name", s.name}, {"kind", s.kind}, {"settings", settings_json(s.settings)},
                    {"payload", s.payload}};
    auto t0 = std::chrono::steady_clock::now();
    try {
        out.report = it->second(s.payload, s.settings, out.outputs);
    } catch (const Error& e) {
        if (e.code() == Errc::Parse || e.code() == Errc::Schema || e.code() == Errc::Internal) throw;
        out.error = std::string(errc_name(e.code())) + ": " + e.what();
        out.report.verdict("input_accepted", false, out.error);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Schema, e.what());
    }
    out.timings.emplace_back(s.kind, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return out;
}

int exit_code(const RunReport& r) { return r.report.passed() ? 0 : 1; }

json checks_json(const Report& r) {
    json a = json::array();
    for (const auto& c : r.checks()) {
        json v = std::isfinite(c.value) ? json(c.value) : json(nullptr);
        json e = {{"name", c.name}, {"kind", check_kind_name(c.kind)}, {"value", v}, {"pass", c.pass}};
        if (c.kind == CheckKind::Residual || c.kind == CheckKind::LowerBound) e["bound"] = c.bound;
        if (!c.note.empty()) e["note"] = c.note;
        a.push_back(e);
    }
    return a;
}

json report_json(const RunReport& r, bool with_timings) {
    json j = {{"tool", "syzlab"}, {"tool_version", kToolVersion}, {"scenario", r.scenario},
              {"checks", checks_json(r.report)}, {"outputs", r.outputs}, {"passed", r.report.passed()}};
    if (!r.error.empty()) j["error"] = r.error;
    if (with_timings) {
        json t = json::object();
        for (const auto& [k, v] : r.timings) t[k] = v;
        j["timings"] = t;
    }
    return j;
}

std::string checks_table(const Report& r) {
    struct Row {
        std::string name, kind, value, bound, status, note;
    };
    std::vector<Row> rows = {{"check", "kind", "value", "bound", "status", "note"}};
    auto num = [](double v) {
        std::ostringstream os;
        os << std::setprecision(4) << std::scientific << v;
        return os.str();
    };
    for (const auto& c : r.checks()) {
        Row row{c.name, check_kind_name(c.kind), "", "", c.pass ? "pass" : "FAIL", c.note};
        switch (c.kind) {
            case CheckKind::Residual:
            case CheckKind::LowerBound:
                row.value = num(c.value);
                row.bound = num(c.bound);
                break;
            case CheckKind::Verdict:
                row.value = c.value != 0 ? "true" : "false";
                break;
            case CheckKind::Info:
                row.value = num(c.value);
                break;
        }
        rows.push_back(row);
    }
    std::array<std::size_t, 5> w{};
    for (const auto& row : rows) {
        w[0] = std::max(w[0], row.name.size());
        w[1] = std::max(w[1], row.kind.size());
        w[2] = std::max(w[2], row.value.size());
        w[3] = std::max(w[3], row.bound.size());
        w[4] = std::max(w[4], row.status.size());
    }
    std::ostringstream os;
    for (const auto& row : rows) {
        os << std::left << std::setw(static_cast<int>(w[0])) << row.name << "  " << std::setw(static_cast<int>(w[1]))
           << row.kind << "  " << std::right << std::setw(static_cast<int>(w[2])) << row.value << "  "
           << std::setw(static_cast<int>(w[3])) << row.bound << "  " << std::left << std::setw(static_cast<int>(w[4]))
           << row.status;
        if (!row.note.empty()) os << "  " << row.note;
        os << "\n";
    }
    return os.str();
}

std::string report_text(const RunReport& r) {
    std::ostringstream os;
    os << "syzlab " << kToolVersion << "  scenario: " << r.scenario.value("name", std::string()) << " ("
       << r.scenario.value("kind", std::string()) << ")\n";
    if (!r.error.empty()) os << "error: " << r.error << "\n";
    os << checks_table(r.report);
    for (const auto& [k, v] : r.timings) os << "time " << k << ": " << std::fixed << std::setprecision(3) << v << " s\n";
    os << "result: " << (r.report.passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::vector<ModelRow> list_models(std::optional<std::pair<int, int>> type) {
    std::vector<ModelRow> rows;
    for (FibreModel m : all_fibre_models()) {
        auto [b1, b2] = expected_type(m);
        if (type && *type != std::make_pair(b1, b2)) continue;
        rows.push_back({model_name(m), model_description(m), b1, b2});
    }
    return rows;
}

std::vector<Convention> conventions() {
    return {
        {"contraction",
         "iota(v_1,...,v_q) alpha denotes the (p-q)-form alpha(v_1,...,v_q, . , ..., .): vectors fill the front slots"},
        {"symplectic_form", "omega = sum_i dx_i ^ dy_i on every chart (x fibre angles, y action coordinates)"},
        {"contraction_sign",
         "iota(d/dx_I)(dx_1 ^ ... ^ dx_n) = (-1)^M dx_{I*}, M = #{(i, j) : i in I, j in I*, i > j}, I* the complement"},
        {"volume_normalization", "omega^n / n! = (-1)^{n(n-1)/2} (i/2)^n Omega ^ conj(Omega), Omega = V exp(beta)"},
        {"orientation", "dy_1 ^ ... ^ dy_n orients the base and dx_1 ^ ... ^ dx_n the fibre; V > 0"},
        {"beta", "beta_ij = b_ij + i g^ij; exp(beta) is read as a form through theta (x) v -> theta ^ iota(v) Omega_0"},
        {"pairing_order",
         "forward order: cycle e_i pairs with dx_{[n]\\i} with sign (-1)^{i-1}; reversed order uses (-1)^{n-i}"},
        {"cubical_boundary", "boundary of a cube = sum_j (-1)^j (front_j - back_j) over its free axes in increasing order"},
        {"local_system",
         "gamma_i counterclockwise around the i-th point, gamma_k ... gamma_1 = 1, so T_k ... T_1 = I"},
        {"crossed_homomorphism", "c(gh) = c(g) + g c(h); the last annulus restricts by c(gamma_k) = -T_k sum_{j<k} "
                                 "T_{k-1} ... T_{j+1} c_j"},
        {"e2_layout", "E2 tables are stored and read as [p][q]; text output prints q = n on top"},
        {"k3_alignment", "Omega is rotated so that Im(Omega).E = 0 and Re(Omega).E > 0; Vol(S_b) = Re(Omega).E"},
        {"hyperkahler_rotation", "Omega_K = Im(Omega) + i omega, omega_K = Re(Omega)"},
        {"b_field_lift", "the B-field is lifted to E^perp with B.sigma0 = 0"},
        {"fibrewise_negation", "fixes span(E, sigma0) and negates its orthogonal complement"},
    };
}

}  // namespace syzlab
