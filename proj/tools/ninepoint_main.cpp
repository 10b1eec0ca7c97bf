#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ninepoint/assembly.hpp"
#include "ninepoint/errors.hpp"
#include "ninepoint/feasibility.hpp"
#include "ninepoint/matrix_market.hpp"
#include "ninepoint/mesh.hpp"
#include "ninepoint/mesh_json.hpp"
#include "ninepoint/stencil.hpp"
#include "ninepoint/version.hpp"

namespace {

using nlohmann::json;
using namespace ninepoint;

json envelope(const std::string& command, json inputs, json results) {
    json j;
    j["command"] = command;
    j["inputs"] = std::move(inputs);
    j["results"] = std::move(results);
    j["tool_version"] = kVersion;
    return j;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
        out << j.dump(2) << "\n";
    }
}

json stencil_to_json(const Stencil9& st) {
    json j;
    j["alpha"] = st.alpha;
    j["beta"] = st.beta;
    const MomentResiduals r = moment_residuals(st);
    j["residuals"] = {{"r0", r.r0}, {"r1", r.r1}, {"r2", r.r2},
                      {"r3", r.r3}, {"r4", r.r4}, {"r5", r.r5}};
    if (st.geom.is_symmetric()) {
        j["beta6_identity_gap"] = beta6_identity_gap(st);
    } else {
        j["beta6_identity_gap"] = nullptr;
    }
    j["geometry"] = {{"H_minus", st.geom.H_minus},
                     {"H_plus", st.geom.H_plus},
                     {"h_minus", st.geom.h_minus},
                     {"h_plus", st.geom.h_plus}};
    return j;
}

std::vector<double> parse_ratio_range(const std::string& text) {
    double a = 0.0, b = 0.0, step = 0.0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || !(step > 0.0) || !(a > 0.0) ||
        !(b >= a)) {
        throw CLI::ValidationError("--ratios", "expected a:b:step with 0 < a <= b and step > 0");
    }
    std::vector<double> ratios;
    for (int k = 0;; ++k) {
        const double r = a + step * static_cast<double>(k);
        if (r > b * (1.0 + 1e-12)) break;
        ratios.push_back(r);
    }
    return ratios;
}

struct MeshAxisSpec {
    std::string kind = "uniform";
    int n = 16;
    double eps = 1e-3;
    double sigma = 2.0;
    double q = 0.5;
    std::string layer = "low";

    Mesh1D build() const {
        if (kind == "uniform") return uniform_mesh(n);
        if (kind == "shishkin") {
            return shishkin_mesh({n, eps, sigma, layer == "high" ? LayerSide::High : LayerSide::Low});
        }
        if (kind == "bakhvalov") return bakhvalov_mesh(n, eps, sigma, q);
        throw std::invalid_argument("unknown mesh kind: " + kind);
    }

    json to_json() const {
        json j;
        j["kind"] = kind;
        j["n"] = n;
        if (kind == "shishkin" || kind == "bakhvalov") {
            j["eps"] = eps;
            j["sigma"] = sigma;
        }
        if (kind == "shishkin") j["layer"] = layer;
        if (kind == "bakhvalov") j["q"] = q;
        return j;
    }
};

int run_app(int argc, char** argv) {
    CLI::App app{"nine-point stencils for u_xx + u_xy + u_yy: construction, monotone feasibility, "
                 "layer-adapted meshes, and M-matrix / maximum-principle diagnostics"};
    // --h is a spacing flag, so help must not claim the short -h.
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);
    std::function<void()> action;

    // stencil --------------------------------------------------------------
    auto* cmd_stencil = app.add_subcommand("stencil", "solve one consistent stencil and report residuals");
    double sH = 1.0, sh = 1.0;
    FreeParameters sfree;
    std::vector<double> asym;
    std::string sformat = "json";
    cmd_stencil->add_option("--H", sH, "x half-spacing")->check(CLI::PositiveNumber);
    cmd_stencil->add_option("--h", sh, "y half-spacing")->check(CLI::PositiveNumber);
    cmd_stencil->add_option("--beta2", sfree.beta2, "free parameter beta2")->required();
    cmd_stencil->add_option("--beta3", sfree.beta3, "free parameter beta3")->required();
    cmd_stencil->add_option("--beta4", sfree.beta4, "free parameter beta4")->required();
    cmd_stencil->add_option("--asym", asym, "per-side spacings H- H+ h- h+")
        ->expected(4)
        ->check(CLI::PositiveNumber);
    cmd_stencil->add_option("--format", sformat, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd_stencil->callback([&]() {
        action = [&]() {
            json inputs = {{"beta2", sfree.beta2}, {"beta3", sfree.beta3}, {"beta4", sfree.beta4}};
            Stencil9 st = [&]() {
                if (!asym.empty()) {
                    inputs["asym"] = asym;
                    return solve_stencil_asymmetric(
                        AsymmetricCellGeometry(asym[0], asym[1], asym[2], asym[3]), sfree);
                }
                inputs["H"] = sH;
                inputs["h"] = sh;
                return solve_stencil(CellGeometry(sH, sh), sfree);
            }();
            if (sformat == "csv") {
                const MomentResiduals r = moment_residuals(st);
                std::printf("alpha,beta1,beta2,beta3,beta4,beta5,beta6,beta7,beta8,"
                            "r0,r1,r2,r3,r4,r5,beta6_identity_gap\n");
                std::printf("%.17g", st.alpha);
                for (double b : st.beta) std::printf(",%.17g", b);
                for (double v : r.as_array()) std::printf(",%.17g", v);
                if (st.geom.is_symmetric()) {
                    std::printf(",%.17g\n", beta6_identity_gap(st));
                } else {
                    std::printf(",\n");
                }
            } else {
                emit(envelope("stencil", inputs, stencil_to_json(st)), "");
            }
        };
    });

    // margin ----------------------------------------------------------------
    auto* cmd_margin = app.add_subcommand("margin", "monotonicity margin of one cell");
    double mH = 1.0, mh = 1.0;
    cmd_margin->add_option("--H", mH, "x half-spacing")->required()->check(CLI::PositiveNumber);
    cmd_margin->add_option("--h", mh, "y half-spacing")->required()->check(CLI::PositiveNumber);
    cmd_margin->callback([&]() {
        action = [&]() {
            const CellGeometry geom(mH, mh);
            const FeasibilityReport rep = monotonicity_margin(geom);
            json results = {{"feasible", rep.feasible},
                            {"margin", rep.margin},
                            {"normalized_margin", rep.margin * geom.h * geom.H},
                            {"argmax_params",
                             {{"beta2", rep.argmax_params.beta2},
                              {"beta3", rep.argmax_params.beta3},
                              {"beta4", rep.argmax_params.beta4}}},
                            {"binding_indices", rep.binding_indices},
                            {"method", rep.method}};
            emit(envelope("margin", {{"H", mH}, {"h", mh}}, results), "");
        };
    });

    // threshold ---------------------------------------------------------------
    auto* cmd_threshold = app.add_subcommand("threshold", "aspect-ratio bound for monotone feasibility");
    cmd_threshold->callback([&]() {
        action = [&]() {
            emit(envelope("threshold", json::object(), {{"r_star", feasibility_threshold()}}), "");
        };
    });

    // sweep ---------------------------------------------------------------
    auto* cmd_sweep = app.add_subcommand("sweep", "margin sweep over aspect ratios (CSV)");
    std::string ratios_text = "0.25:4:0.25";
    std::string sweep_out;
    cmd_sweep->add_option("--ratios", ratios_text, "range a:b:step of H/h values");
    cmd_sweep->add_option("--out", sweep_out, "write CSV here instead of stdout");
    cmd_sweep->callback([&]() {
        action = [&]() {
            const std::vector<MarginSweepRow> rows = margin_sweep(parse_ratio_range(ratios_text));
            std::string csv = "ratio,normalized_margin,feasible\n";
            for (const MarginSweepRow& row : rows) {
                char line[128];
                std::snprintf(line, sizeof line, "%.12g,%.12g,%s\n", row.ratio, row.normalized_margin,
                              row.feasible ? "true" : "false");
                csv += line;
            }
            if (sweep_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(sweep_out);
                if (!out) throw std::runtime_error("cannot open " + sweep_out + " for writing");
                out << csv;
            }
        };
    });

    // mesh gen --------------------------------------------------------------
    auto* cmd_mesh = app.add_subcommand("mesh", "mesh generation");
    auto* cmd_gen = cmd_mesh->add_subcommand("gen", "generate a tensor mesh file");
    cmd_mesh->require_subcommand(1);
    cmd_gen->fallthrough(); // --out may follow the kind subcommand
    MeshAxisSpec x_spec;
    MeshAxisSpec y_spec;
    bool y_overridden = false;
    std::string mesh_out;
    cmd_gen->add_option("--out", mesh_out, "output mesh JSON path")->required();

    auto add_axis_flags = [](CLI::App* cmd, MeshAxisSpec& spec) {
        cmd->add_option("--n", spec.n, "intervals")->check(CLI::Range(2, 1 << 20));
        cmd->add_option("--eps", spec.eps, "perturbation parameter")->check(CLI::PositiveNumber);
        cmd->add_option("--sigma", spec.sigma, "mesh constant")->check(CLI::PositiveNumber);
        cmd->add_option("--q", spec.q, "layer fraction")->check(CLI::PositiveNumber);
        cmd->add_option("--layer", spec.layer, "layer side")->check(CLI::IsMember({"low", "high"}));
    };

    auto* gen_uniform = cmd_gen->add_subcommand("uniform", "uniform mesh");
    auto* gen_shishkin = cmd_gen->add_subcommand("shishkin", "piecewise-uniform layer mesh");
    auto* gen_bakhvalov = cmd_gen->add_subcommand("bakhvalov", "graded layer mesh");
    cmd_gen->require_subcommand(1);
    for (auto* sub : {gen_uniform, gen_shishkin, gen_bakhvalov}) {
        sub->fallthrough();
        add_axis_flags(sub, x_spec);
        // y-axis defaults to the same spec; override with these.
        sub->add_option("--y-kind", y_spec.kind, "y-axis mesh kind")
            ->check(CLI::IsMember({"uniform", "shishkin", "bakhvalov"}))
            ->each([&](const std::string&) { y_overridden = true; });
        sub->add_option("--y-n", y_spec.n, "y-axis intervals")
            ->check(CLI::Range(2, 1 << 20))
            ->each([&](const std::string&) { y_overridden = true; });
        sub->add_option("--y-eps", y_spec.eps)->check(CLI::PositiveNumber)->each([&](const std::string&) {
            y_overridden = true;
        });
        sub->add_option("--y-sigma", y_spec.sigma)->check(CLI::PositiveNumber)->each([&](const std::string&) {
            y_overridden = true;
        });
        sub->add_option("--y-q", y_spec.q)->check(CLI::PositiveNumber)->each([&](const std::string&) {
            y_overridden = true;
        });
        sub->add_option("--y-layer", y_spec.layer)
            ->check(CLI::IsMember({"low", "high"}))
            ->each([&](const std::string&) { y_overridden = true; });
    }
    gen_uniform->callback([&]() { x_spec.kind = "uniform"; });
    gen_shishkin->callback([&]() { x_spec.kind = "shishkin"; });
    gen_bakhvalov->callback([&]() { x_spec.kind = "bakhvalov"; });
    cmd_gen->callback([&]() {
        action = [&]() {
            if (!y_overridden) {
                y_spec = x_spec;
            } else if (y_spec.kind.empty()) {
                y_spec.kind = x_spec.kind;
            }
            const TensorMesh2D mesh(x_spec.build(), y_spec.build());
            write_mesh_json(mesh, mesh_out);
            json results = {{"path", mesh_out},
                            {"x_nodes", static_cast<int>(mesh.x.nodes.size())},
                            {"y_nodes", static_cast<int>(mesh.y.nodes.size())}};
            emit(envelope("mesh-gen", {{"x", x_spec.to_json()}, {"y", y_spec.to_json()}}, results), "");
        };
    });

    // classify --------------------------------------------------------------
    auto* cmd_classify = app.add_subcommand("classify", "per-node monotone-feasibility of a mesh file");
    std::string classify_mesh;
    bool classify_all = false;
    cmd_classify->add_option("--mesh", classify_mesh, "mesh JSON path")->required();
    cmd_classify->add_flag("--all", classify_all, "list every infeasible node (default caps at 100)");
    cmd_classify->callback([&]() {
        action = [&]() {
            const TensorMesh2D mesh = read_mesh_json(classify_mesh);
            const CellClassification cls = classify_cells(mesh);
            json nodes = json::array();
            std::size_t listed = 0;
            for (const auto& row : cls.rows) {
                if (row.monotone_feasible) continue;
                if (!classify_all && listed >= 100) break;
                nodes.push_back({{"i", row.i}, {"j", row.j}, {"ratio", row.ratio}});
                ++listed;
            }
            json results = {{"n_interior", cls.n_interior},
                            {"n_infeasible", cls.n_infeasible},
                            {"infeasible_fraction", cls.infeasible_fraction},
                            {"max_ratio", cls.max_ratio},
                            {"infeasible_nodes", nodes},
                            {"truncated", !classify_all && cls.n_infeasible > 100}};
            emit(envelope("classify", {{"mesh", classify_mesh}, {"all", classify_all}}, results), "");
        };
    });

    // check -----------------------------------------------------------------
    auto* cmd_check = app.add_subcommand("check", "assemble -L and run M-matrix / DMP diagnostics");
    std::string check_mesh;
    std::string scheme_name = "maxmargin";
    double threshold = 2.0;
    int dmp_trials = 100;
    std::uint64_t seed = 1;
    std::string export_matrix;
    cmd_check->add_option("--mesh", check_mesh, "mesh JSON path")->required();
    cmd_check->add_option("--scheme", scheme_name, "stencil strategy")
        ->check(CLI::IsMember({"maxmargin", "family", "hybrid"}));
    cmd_check->add_option("--threshold", threshold, "ratio threshold for hybrid")
        ->check(CLI::PositiveNumber);
    cmd_check->add_option("--dmp-trials", dmp_trials, "random right-hand sides to test")
        ->check(CLI::NonNegativeNumber);
    cmd_check->add_option("--seed", seed, "seed for the DMP trials");
    cmd_check->add_option("--export-matrix", export_matrix, "write the assembled matrix (MatrixMarket)");
    cmd_check->callback([&]() {
        action = [&]() {
            const TensorMesh2D mesh = read_mesh_json(check_mesh);
            SchemeStrategy strategy = SchemeStrategy::max_margin();
            if (scheme_name == "family") strategy = SchemeStrategy::explicit_family();
            if (scheme_name == "hybrid") strategy = SchemeStrategy::hybrid(threshold);

            const AssembledSystem sys = assemble(mesh, strategy);
            if (!export_matrix.empty()) write_matrix_market(sys.matrix, export_matrix);

            std::map<std::string, int> branch_counts;
            for (const auto& p : sys.provenance) ++branch_counts[to_string(p.branch)];

            const MMatrixReport mm = m_matrix_check(sys);
            json violations = json::array();
            for (std::size_t k = 0; k < mm.violations.size() && k < 100; ++k) {
                const auto& v = mm.violations[k];
                violations.push_back({{"row", v.row}, {"col", v.col}, {"value", v.value}});
            }
            json results = {{"n", sys.n},
                            {"branch_counts", branch_counts},
                            {"m_matrix",
                             {{"sign_pattern_ok", mm.sign_pattern_ok},
                              {"violation_count", static_cast<int>(mm.violations.size())},
                              {"violations", violations},
                              {"min_inverse_entry", mm.min_inverse_entry},
                              {"inverse_nonneg", mm.inverse_nonneg.has_value() ? json(*mm.inverse_nonneg) : json()},
                              {"tol_sign", mm.tol_sign},
                              {"tol_inverse", mm.tol_inverse}}}};
            if (dmp_trials > 0) {
                const DmpReport dmp = dmp_test(sys, dmp_trials, seed);
                results["dmp"] = {{"trials", dmp.trials},
                                  {"trials_passed", dmp.trials_passed},
                                  {"passed", dmp.passed},
                                  {"worst_violation", dmp.worst_violation},
                                  {"seed", dmp.seed}};
            }
            if (!export_matrix.empty()) results["matrix_path"] = export_matrix;
            json inputs = {{"mesh", check_mesh}, {"scheme", scheme_name},  {"threshold", threshold},
                           {"dmp_trials", dmp_trials}, {"seed", seed}};
            emit(envelope("check", inputs, results), "");
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        action();
    } catch (const CLI::ParseError& e) {
        std::cerr << e.get_name() << ": " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cout << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) { return run_app(argc, argv); }
