#include "parhom/scenario.hpp"

#include "parhom/version.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace parhom {

namespace {

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("expected a matrix (array of rows)");
    const int rows = static_cast<int>(j.size());
    if (rows == 0) return Matrix(0, 0);
    const int cols = static_cast<int>(j.at(0).size());
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j.at(r).size()) != cols) throw ParseError("ragged matrix rows");
        for (int c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
    }
    return m;
}

Vector vector_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("expected a vector (array of numbers)");
    Vector v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
    return v;
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

const char* verdict_label(Verdict v) {
    switch (v) {
        case Verdict::yes: return "homogeneous";
        case Verdict::no: return "not_homogeneous";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

Json error_entry(const std::string& kind, const std::string& message,
                 const std::map<std::string, double>* residuals = nullptr) {
    Json e;
    e["error"]["kind"] = kind;
    e["error"]["message"] = message;
    if (residuals) {
        Json r;
        for (const auto& [k, v] : *residuals) r[k] = v;
        e["error"]["residuals"] = std::move(r);
    }
    return e;
}

}  // namespace

Json tolerances_to_json(const Tolerances& tol) {
    Json j;
    j["rank_rel"] = tol.rank_rel;
    j["residual_abs"] = tol.residual_abs;
    j["feas_rel"] = tol.feas_rel;
    j["indeterminate_band"] = tol.indeterminate_band;
    return j;
}

Tolerances tolerances_from_json(const Json& j, const Tolerances& base) {
    Tolerances tol = base;
    if (j.contains("rank_rel")) tol.rank_rel = j.at("rank_rel").get<double>();
    if (j.contains("residual_abs")) tol.residual_abs = j.at("residual_abs").get<double>();
    if (j.contains("feas_rel")) tol.feas_rel = j.at("feas_rel").get<double>();
    if (j.contains("indeterminate_band"))
        tol.indeterminate_band = j.at("indeterminate_band").get<double>();
    tol.validate();
    return tol;
}

ScenarioFile parse_scenario_file(const Json& doc, const Tolerances& default_tol,
                                 std::uint64_t default_seed) {
    if (!doc.is_object()) throw ParseError("scenario file: top level must be an object");
    if (!doc.contains("schema")) throw ParseError("scenario file: missing mandatory schema field");
    if (doc.at("schema").get<int>() != 1) throw ParseError("scenario file: unsupported schema");
    ScenarioFile file;
    std::set<std::string> seen;
    for (const auto& s : doc.value("scenarios", Json::array())) {
        Scenario sc;
        if (!s.contains("id")) throw ParseError("scenario: missing id");
        sc.id = s.at("id").get<std::string>();
        if (!seen.insert(sc.id).second)
            throw ParseError("scenario: duplicate id '" + sc.id + "'");
        if (!s.contains("model")) throw ParseError("scenario '" + sc.id + "': missing model");
        sc.model_spec = s.at("model");
        for (const auto& j : s.value("jets", Json::array())) sc.jet_specs.push_back(j);
        for (const auto& p : s.value("pipelines", Json::array({"model_check"})))
            sc.pipelines.push_back(p.get<std::string>());
        sc.tolerances = s.contains("tolerances")
                            ? tolerances_from_json(s.at("tolerances"), default_tol)
                            : default_tol;
        sc.rng_seed = s.value("rng_seed", default_seed);
        file.scenarios.push_back(std::move(sc));
    }
    return file;
}

Json scenario_file_to_json(const ScenarioFile& file) {
    Json doc;
    doc["schema"] = file.schema;
    Json scenarios = Json::array();
    for (const auto& sc : file.scenarios) {
        Json s;
        s["id"] = sc.id;
        s["model"] = sc.model_spec;
        s["jets"] = sc.jet_specs;
        s["pipelines"] = sc.pipelines;
        s["tolerances"] = tolerances_to_json(sc.tolerances);
        s["rng_seed"] = sc.rng_seed;
        scenarios.push_back(std::move(s));
    }
    doc["scenarios"] = std::move(scenarios);
    return doc;
}

Json model_to_json(const SymmetricSpaceModel& model) {
    Json j;
    j["name"] = model.name();
    j["params"] = model.params();
    j["scale"] = model.scale();
    j["dim_g"] = model.dim_g();
    j["dim_k"] = model.dim_k();
    j["dim_p"] = model.dim_p();
    if (model.name() == "product") {
        Json factors = Json::array();
        for (const auto& f : model.factors()) {
            Json fj;
            fj["name"] = f.name;
            fj["params"] = f.params;
            fj["scale"] = f.scale;
            factors.push_back(std::move(fj));
        }
        j["factors"] = std::move(factors);
    }
    Json basis = Json::array();
    for (const auto& b : model.algebra().basis()) basis.push_back(matrix_to_json(b));
    j["basis"] = std::move(basis);
    j["theta"] = matrix_to_json(model.theta());
    j["metric"] = matrix_to_json(model.metric());
    j["type_tag"] = to_string(model.type_tag());
    return j;
}

SymmetricSpaceModel model_from_spec(const Json& spec, const Tolerances& tol) {
    if (!spec.is_object()) throw ParseError("model spec must be an object");
    const std::string name = spec.value("name", std::string("inline"));
    if (name == "product") {
        std::vector<SymmetricSpaceModel> factors;
        for (const auto& f : spec.value("factors", Json::array()))
            factors.push_back(model_from_spec(f, tol));
        return catalog_product(factors, tol);
    }
    if (catalog_has(name)) {
        std::vector<int> params;
        for (const auto& p : spec.value("params", Json::array()))
            params.push_back(p.get<int>());
        return catalog(name, params, spec.value("scale", 1.0), tol);
    }
    if (spec.contains("basis")) return model_from_json(spec, tol);
    throw ParseError("model spec: unknown family '" + name + "'");
}

SymmetricSpaceModel model_from_json(const Json& j, const Tolerances& tol) {
    const std::string name = j.value("name", std::string("inline"));
    if (name == "product" && j.contains("factors")) {
        std::vector<SymmetricSpaceModel> factors;
        for (const auto& f : j.at("factors"))
            factors.push_back(catalog(f.at("name").get<std::string>(),
                                      f.at("params").get<std::vector<int>>(),
                                      f.value("scale", 1.0), tol));
        return catalog_product(factors, tol);
    }
    if (catalog_has(name) && j.contains("params"))
        return catalog(name, j.at("params").get<std::vector<int>>(), j.value("scale", 1.0), tol);

    // inline model: basis + theta + metric, ordered with the k-basis first
    std::vector<Matrix> basis;
    for (const auto& b : j.at("basis")) basis.push_back(matrix_from_json(b));
    Matrix theta = matrix_from_json(j.at("theta"));
    Matrix metric = matrix_from_json(j.at("metric"));
    const int n = static_cast<int>(basis.size());
    if (theta.rows() != n || theta.cols() != n)
        throw ParseError("inline model: theta must be dim_g x dim_g");
    int dim_p = static_cast<int>(metric.rows());
    int dim_k = n - dim_p;
    Matrix expected = Matrix::Identity(n, n);
    expected.bottomRightCorner(dim_p, dim_p) *= -1.0;
    if ((theta - expected).norm() > tol.residual_abs)
        throw ParseError("inline model: theta must be +1 on the leading k-basis and -1 on p");
    SpaceType type = SpaceType::euclidean;
    const std::string tag = j.value("type_tag", std::string("euclidean"));
    if (tag == "compact") type = SpaceType::compact;
    else if (tag == "noncompact") type = SpaceType::noncompact;
    else if (tag == "product") type = SpaceType::product;
    FactorInfo info{"inline", {}, 1.0, 0, dim_k, 0, dim_p};
    LieAlgebraPresentation g = LieAlgebraPresentation::from_basis(std::move(basis), tol);
    return SymmetricSpaceModel(std::move(g), std::move(theta), dim_k, dim_p, std::move(metric),
                               type, {info}, "inline", {}, 1.0, tol);
}

Json jet_to_json(const TwoJet& jet) {
    Json j;
    j["model_ref"] = jet.space ? jet.space->name() : "";
    Json w = Json::array();
    for (int i = 0; i < jet.dim_W(); ++i) w.push_back(vector_to_json(jet.W.col(i)));
    j["W_onb"] = std::move(w);
    Json b = Json::array();
    for (const auto& row : jet.b) {
        Json brow = Json::array();
        for (const auto& v : row) brow.push_back(vector_to_json(v));
        b.push_back(std::move(brow));
    }
    j["b"] = std::move(b);
    return j;
}

TwoJet jet_from_spec(const Json& spec, const SymmetricSpaceModel& model, const Tolerances& tol) {
    if (!spec.is_object()) throw ParseError("jet spec must be an object");
    const std::string type = spec.value("type", std::string("inline"));
    auto w_columns = [&](const char* key) {
        Matrix cols(model.dim_p(), 0);
        if (spec.contains(key)) {
            const Json& rows = spec.at(key);
            cols.resize(model.dim_p(), static_cast<Eigen::Index>(rows.size()));
            for (size_t i = 0; i < rows.size(); ++i)
                cols.col(static_cast<Eigen::Index>(i)) = vector_from_json(rows.at(i));
        }
        return cols;
    };
    if (type == "totally_geodesic") return make_totally_geodesic_jet(model, w_columns("W"), tol);
    if (type == "umbilic")
        return make_umbilic_jet(model, spec.value("kappa", 1.0),
                                vector_from_json(spec.at("normal")), w_columns("W"), tol);
    if (type == "circle")
        return make_circle_jet(model, vector_from_json(spec.at("x")),
                               vector_from_json(spec.at("y")), tol);
    if (type == "inline") {
        TwoJet jet;
        jet.space = &model;
        Matrix w = w_columns("W_onb");
        if (w.cols() == 0) w = w_columns("W");
        jet.W = w;
        const int m = jet.dim_W();
        const Json& b = spec.at("b");
        if (static_cast<int>(b.size()) != m) throw ParseError("inline jet: b shape mismatch");
        jet.b.assign(m, std::vector<Vector>(m));
        for (int i = 0; i < m; ++i)
            for (int j2 = 0; j2 < m; ++j2) jet.b[i][j2] = vector_from_json(b.at(i).at(j2));
        jet.validate(tol);
        return jet;
    }
    throw ParseError("jet spec: unknown type '" + type + "'");
}

Json model_verdict_to_json(const ModelVerdict& v) {
    Json j;
    j["curvature_invariant"] = v.curvature_invariant;
    j["curvature_invariance_residual"] = v.curvature_invariance_residual;
    j["semiparallel"]["holds"] = v.semiparallel.holds;
    j["semiparallel"]["worst_residual"] = v.semiparallel.worst_residual;
    j["semiparallel"]["osc_closed"] = v.semiparallel.osc_closed;
    j["semiparallel"]["used_full_basis"] = v.semiparallel.used_full_basis;
    Json gammas = Json::array();
    for (const auto& g : v.gamma_per_basis) {
        Json gj;
        gj["verdict"] = to_string(g.verdict);
        gj["residual"] = g.residual;
        gj["target_norm"] = g.target_norm;
        gammas.push_back(std::move(gj));
    }
    j["gamma_feasible_per_basis"] = std::move(gammas);
    j["overall"] = to_string(v.overall);
    return j;
}

Json nomizu_to_json(const NomizuResult& r) {
    Json j;
    j["dims"]["m"] = r.dim_m;
    j["dims"]["h"] = r.dim_h;
    j["dims"]["g"] = r.dim_g;
    j["full"] = r.full;
    j["reduced"] = r.reduced;
    if (r.reduced) j["reduced_dim_p"] = r.reduced_dim_p;
    Json res;
    for (const auto& [k, v] : r.residuals) res[k] = v;
    j["residuals"] = std::move(res);
    j["hat_gamma"] = matrix_to_json(r.hat_gamma);
    j["m_basis"] = matrix_to_json(r.m_basis.onb());
    j["h_basis"] = matrix_to_json(r.h_basis.onb());
    j["g_basis"] = matrix_to_json(r.g_basis.onb());
    return j;
}

Json holonomy_to_json(const HolonomyReport& r, bool minus_nonzero) {
    Json j;
    j["dims"]["hol_N"] = r.dim_hol_ambient;
    j["dims"]["hol_Mbar"] = r.dim_hol_mbar;
    j["dims"]["hol_Of"] = r.dim_hol_osc;
    j["dims"]["hol_Of_plus"] = r.dim_hol_osc_plus;
    j["dims"]["hol_Of_minus"] = r.dim_hol_osc_minus;
    j["dims"]["first_normal"] = r.dim_first_normal;
    j["dims"]["centralizer_minus"] = r.centralizer_minus_dim;
    j["mbar_irreducible"] = r.mbar_irreducible;
    j["residuals"]["sigma_invariance"] = r.sigma_invariance_residual;
    j["residuals"]["splitting_defect"] = r.splitting_defect;
    j["residuals"]["curvature_plus"] = r.curvature_plus_residual;
    j["defect_norms"] = r.defect_norms;
    j["schur_d"] = r.schur_d;
    j["schur_d_in_124"] = r.schur_in_124;
    Json gammas = Json::array();
    for (const auto& g : r.gamma) {
        Json gj;
        gj["verdict"] = to_string(g.verdict);
        gj["residual"] = g.residual;
        gj["target_norm"] = g.target_norm;
        gammas.push_back(std::move(gj));
    }
    j["gamma_per_basis"] = std::move(gammas);
    j["chain"]["defect_chain_homogeneous"] = r.defect_chain_homogeneous;
    j["chain"]["surrogate_checks_ok"] = r.surrogate_checks_ok;
    j["chain"]["consistent"] = r.consistent;
    j["minus_nonzero_check"] = minus_nonzero;
    j["verdict"] = verdict_label(r.verdict);
    return j;
}

Json flat_report_to_json(const FlatReport& r) {
    Json j;
    j["applicable"] = r.applicable;
    if (!r.blocked_link.empty()) j["blocked_link"] = r.blocked_link;
    j["tangent_isotropic"] = r.tangent_isotropic;
    j["first_normal_isotropic"] = r.first_normal_isotropic;
    j["fundamental_residual"] = r.fundamental_residual;
    j["centralizer_minus_dim"] = r.centralizer_minus_dim;
    j["chain_concludes"] = r.chain_concludes;
    j["osc_isotropic"] = r.osc_isotropic;
    j["chain_agrees"] = r.chain_agrees;
    j["reduced_to_flat"] = r.reduced_to_flat;
    return j;
}

Json rspace_to_json(const RSpaceDatum& d, const Tolerances& tol) {
    Json j;
    j["found"] = true;
    j["X"] = vector_to_json(d.X);
    j["ad_cube_residual"] = d.ad_cube_residual;
    j["eigenvalue_deviation"] = d.eigenvalue_deviation;
    j["dims"]["k0"] = d.k0.dim();
    j["dims"]["kminus"] = d.kminus.dim();
    j["dims"]["center"] = d.center.dim();
    auto [k0_ok, k0_res] = verify_k0_equals_bracket(d, tol);
    j["k0_equals_bracket"]["ok"] = k0_ok;
    j["k0_equals_bracket"]["residual"] = k0_res;
    try {
        auto [c_ok, c_res] = verify_commutant_is_center(d, tol);
        j["commutant_is_center"]["ok"] = c_ok;
        j["commutant_is_center"]["residual"] = c_res;
    } catch (const InputError& e) {
        j["commutant_is_center"]["skipped"] = e.what();
    }
    j["center_meets_kminus_dim"] = verify_center_meets_kminus(d, tol);
    SymmetricSpaceModel flat = catalog("euclidean", {d.space->dim_p()}, 1.0, tol);
    TwoJet orbit = rspace_orbit_jet(d, flat, tol);
    j["orbit_jet"]["dim_W"] = orbit.dim_W();
    j["orbit_jet"]["boldb_match_residual"] = rspace_boldb_match_residual(d, orbit, tol);
    return j;
}

RunOutcome run_scenarios(const ScenarioFile& file, const Tolerances& default_tol,
                         std::uint64_t default_seed) {
    (void)default_seed;
    RunOutcome out;
    out.report["artifact_version"] = kVersion;
    out.report["schema"] = 1;
    out.report["tolerances"] = tolerances_to_json(default_tol);
    Json scenarios = Json::array();
    for (const auto& sc : file.scenarios) {
        Json sj;
        sj["id"] = sc.id;
        sj["seed"] = sc.rng_seed;
        sj["tolerances"] = tolerances_to_json(sc.tolerances);
        const Tolerances& tol = sc.tolerances;
        SymmetricSpaceModel model;
        try {
            model = model_from_spec(sc.model_spec, tol);
        } catch (const std::exception& e) {
            sj["model"] = error_entry("model_resolution", e.what());
            out.structural_error = true;
            scenarios.push_back(std::move(sj));
            continue;
        }
        sj["model"]["name"] = model.name();
        sj["model"]["params"] = model.params();
        sj["model"]["dim_g"] = model.dim_g();
        sj["model"]["dim_k"] = model.dim_k();
        sj["model"]["dim_p"] = model.dim_p();
        sj["model"]["type_tag"] = to_string(model.type_tag());

        const bool wants_rspace =
            std::find(sc.pipelines.begin(), sc.pipelines.end(), "rspace") != sc.pipelines.end();
        if (wants_rspace) {
            try {
                auto datum = find_rspace_element(model, 64, sc.rng_seed, tol);
                if (datum)
                    sj["model_pipelines"]["rspace"] = rspace_to_json(*datum, tol);
                else
                    sj["model_pipelines"]["rspace"] = Json{{"found", false}};
            } catch (const std::exception& e) {
                sj["model_pipelines"]["rspace"] = error_entry("rspace", e.what());
                out.structural_error = true;
            }
        }

        Json jets = Json::array();
        for (size_t ji = 0; ji < sc.jet_specs.size(); ++ji) {
            Json jj;
            jj["index"] = static_cast<int>(ji);
            TwoJet jet;
            try {
                jet = jet_from_spec(sc.jet_specs[ji], model, tol);
            } catch (const std::exception& e) {
                jj["error"] = error_entry("jet_resolution", e.what())["error"];
                out.structural_error = true;
                jets.push_back(std::move(jj));
                continue;
            }
            Json pipelines;
            for (const auto& pipe : sc.pipelines) {
                if (pipe == "rspace") continue;  // model-level, handled above
                std::mt19937_64 rng(sc.rng_seed + 0x9e3779b97f4a7c15ULL * (ji + 1));
                try {
                    if (pipe == "model_check") {
                        pipelines[pipe] = model_verdict_to_json(check_infinitesimal_model(jet, tol));
                    } else if (pipe == "nomizu") {
                        pipelines[pipe] = nomizu_to_json(construct(jet, tol));
                    } else if (pipe == "holonomy") {
                        HolonomyReport rep = homogeneity_verdict(jet, tol, rng);
                        pipelines[pipe] = holonomy_to_json(rep, check_minus_nonzero(jet, rep));
                    } else if (pipe == "flat_case") {
                        pipelines[pipe] = flat_report_to_json(flat_case_pipeline(jet, tol));
                    } else {
                        pipelines[pipe] = error_entry("unknown_pipeline", pipe)["error"];
                        out.structural_error = true;
                    }
                } catch (const ConstructionError& e) {
                    pipelines[pipe] = error_entry("construction", e.what(), &e.residuals)["error"];
                    out.structural_error = true;
                } catch (const PreconditionError& e) {
                    pipelines[pipe] = error_entry("precondition", e.what())["error"];
                    out.structural_error = true;
                } catch (const std::exception& e) {
                    pipelines[pipe] = error_entry("structural", e.what())["error"];
                    out.structural_error = true;
                }
            }
            jj["pipelines"] = std::move(pipelines);
            jets.push_back(std::move(jj));
        }
        sj["jets"] = std::move(jets);
        scenarios.push_back(std::move(sj));
    }
    out.report["scenarios"] = std::move(scenarios);
    return out;
}

int run(const std::string& scenario_path, const std::string& output_path,
        const std::string& format, const Tolerances& default_tol, std::uint64_t seed,
        std::ostream& diagnostics) {
    Json doc;
    ScenarioFile file;
    try {
        std::ifstream in(scenario_path);
        if (!in) throw ParseError("cannot open scenario file: " + scenario_path);
        doc = Json::parse(in);
        file = parse_scenario_file(doc, default_tol, seed);
    } catch (const Json::parse_error& e) {
        diagnostics << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        diagnostics << "parse error: " << e.what() << "\n";
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome outcome = run_scenarios(file, default_tol, seed);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string payload = format == "text" ? render_text_report(outcome.report, wall)
                                           : outcome.report.dump(2) + "\n";
    if (output_path.empty() || output_path == "-") {
        diagnostics << payload;
    } else {
        std::ofstream outf(output_path, std::ios::binary);
        if (!outf) {
            diagnostics << "cannot write output file: " << output_path << "\n";
            return 3;
        }
        outf << payload;
    }
    return outcome.structural_error ? 3 : 0;
}

std::string render_text_report(const Json& report, double wall_seconds) {
    std::ostringstream os;
    os << "parhom " << report.value("artifact_version", "?") << " report\n";
    for (const auto& sc : report.value("scenarios", Json::array())) {
        os << "scenario " << sc.value("id", "?") << "\n";
        for (const auto& jet : sc.value("jets", Json::array())) {
            os << "  jet " << jet.value("index", -1);
            if (jet.contains("error")) {
                os << "  ERROR: " << jet["error"].value("message", "") << "\n";
                continue;
            }
            os << "\n";
            const Json pipelines = jet.value("pipelines", Json::object());
            for (const auto& [name, payload] : pipelines.items()) {
                os << "    " << name << ": ";
                if (payload.contains("error"))
                    os << "ERROR " << payload["error"].value("message", "");
                else if (payload.contains("verdict"))
                    os << payload.value("verdict", "");
                else if (payload.contains("overall"))
                    os << payload.value("overall", "");
                else
                    os << "ok";
                os << "\n";
            }
        }
        if (sc.contains("model_pipelines"))
            os << "  rspace: found="
               << (sc["model_pipelines"]["rspace"].value("found", false) ? "yes" : "no") << "\n";
    }
    os << "wall time: " << wall_seconds << " s\n";
    return os.str();
}

std::string explain_report(const Json& report) {
    std::ostringstream os;
    bool any_jet = false;
    for (const auto& sc : report.value("scenarios", Json::array())) {
        os << "scenario " << sc.value("id", "?") << "\n";
        for (const auto& jet : sc.value("jets", Json::array())) {
            any_jet = true;
            os << "  jet " << jet.value("index", -1) << ":\n";
            if (jet.contains("error")) {
                os << "    unresolved: " << jet["error"].value("message", "") << "\n";
                continue;
            }
            const Json pipelines = jet.value("pipelines", Json::object());
            if (pipelines.contains("model_check")) {
                const Json& mc = pipelines["model_check"];
                if (mc.contains("error")) {
                    os << "    model_check failed: " << mc["error"].value("message", "") << "\n";
                } else {
                    os << "    curvature_invariant: "
                       << (mc.value("curvature_invariant", false) ? "yes" : "no")
                       << " (residual " << mc.value("curvature_invariance_residual", 0.0)
                       << ")\n";
                    os << "    semiparallel: "
                       << (mc["semiparallel"].value("holds", false) ? "yes" : "no")
                       << " (residual " << mc["semiparallel"].value("worst_residual", 0.0)
                       << ")\n";
                    std::string failing;
                    if (!mc.value("curvature_invariant", false)) failing = "curvature_invariance";
                    else if (!mc["semiparallel"].value("holds", false)) failing = "semiparallel";
                    for (const auto& g : mc.value("gamma_feasible_per_basis", Json::array())) {
                        os << "    gamma: " << g.value("verdict", "?") << " (residual "
                           << g.value("residual", 0.0) << ")\n";
                        if (failing.empty() && g.value("verdict", "") == "infeasible")
                            failing = "gamma_feasibility";
                    }
                    os << "    model verdict: " << mc.value("overall", "?");
                    if (!failing.empty()) os << "  failing link: " << failing;
                    os << "\n";
                }
            }
            if (pipelines.contains("holonomy")) {
                const Json& h = pipelines["holonomy"];
                if (h.contains("error")) {
                    os << "    holonomy failed: " << h["error"].value("message", "") << "\n";
                } else {
                    os << "    defect norms:";
                    for (const auto& d : h.value("defect_norms", Json::array()))
                        os << " " << d.get<double>();
                    os << "\n    homogeneity: " << h.value("verdict", "?") << "\n";
                }
            }
            if (pipelines.contains("nomizu")) {
                const Json& nm = pipelines["nomizu"];
                if (nm.contains("error"))
                    os << "    nomizu failed: " << nm["error"].value("message", "") << "\n";
                else
                    os << "    nomizu dims (m,h,g): " << nm["dims"].value("m", 0) << ", "
                       << nm["dims"].value("h", 0) << ", " << nm["dims"].value("g", 0) << "\n";
            }
            if (pipelines.contains("flat_case")) {
                const Json& f = pipelines["flat_case"];
                if (f.contains("error"))
                    os << "    flat_case failed: " << f["error"].value("message", "") << "\n";
                else if (f.value("applicable", false))
                    os << "    flat chain: first normal isotropic="
                       << (f.value("first_normal_isotropic", false) ? "yes" : "no")
                       << ", centralizer_minus_dim=" << f.value("centralizer_minus_dim", -1)
                       << ", osc isotropic=" << (f.value("osc_isotropic", false) ? "yes" : "no")
                       << "\n";
                else
                    os << "    flat chain not applicable (" << f.value("blocked_link", "")
                       << ")\n";
            }
        }
    }
    if (!any_jet) os << "no jets evaluated\n";
    return os.str();
}

std::string catalog_table(const Tolerances& tol) {
    struct Entry {
        std::string name;
        std::vector<int> params;
    };
    const std::vector<Entry> entries = {
        {"sphere", {2}},          {"sphere", {3}},       {"sphere", {4}},
        {"sphere", {5}},          {"euclidean", {2}},    {"euclidean", {3}},
        {"euclidean", {4}},       {"cp", {1}},           {"cp", {2}},
        {"cp", {3}},              {"grassmannian_su", {2}}, {"dual_sphere", {2}},
        {"dual_sphere", {3}},     {"dual_cp", {2}},      {"dual_grassmannian_su", {2}},
    };
    std::ostringstream os;
    os << "name                     params   dim_g  dim_k  dim_p  rank\n";
    auto pad = [&os](const std::string& s, size_t w) {
        os << s;
        for (size_t i = s.size(); i < w; ++i) os << ' ';
    };
    auto print = [&](const std::string& name, const std::string& params,
                     const SymmetricSpaceModel& m, int rank) {
        pad(name, 25);
        pad(params, 9);
        pad(std::to_string(m.dim_g()), 7);
        pad(std::to_string(m.dim_k()), 7);
        pad(std::to_string(m.dim_p()), 7);
        os << rank << "\n";
    };
    for (const auto& e : entries) {
        SymmetricSpaceModel m = catalog(e.name, e.params, 1.0, tol);
        std::string params;
        for (size_t i = 0; i < e.params.size(); ++i)
            params += (i ? "," : "") + std::to_string(e.params[i]);
        print(e.name, params, m, m.rank(tol));
    }
    {
        std::vector<SymmetricSpaceModel> f;
        f.push_back(catalog("sphere", {2}, 1.0, tol));
        f.push_back(catalog("sphere", {2}, 1.0, tol));
        SymmetricSpaceModel m = catalog_product(f, tol);
        print("product", "s2,s2", m, m.rank(tol));
    }
    {
        std::vector<SymmetricSpaceModel> f;
        f.push_back(catalog("sphere", {2}, 1.0, tol));
        f.push_back(catalog("sphere", {3}, 1.0, tol));
        SymmetricSpaceModel m = catalog_product(f, tol);
        print("product", "s2,s3", m, m.rank(tol));
    }
    return os.str();
}

}  // namespace parhom
