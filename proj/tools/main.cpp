#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "packsurf/csv_io.hpp"
#include "packsurf/embed_opt.hpp"
#include "packsurf/errors.hpp"
#include "packsurf/intrinsic.hpp"
#include "packsurf/meshgen.hpp"
#include "packsurf/metric_opt.hpp"
#include "packsurf/numformat.hpp"
#include "packsurf/obj_io.hpp"
#include "packsurf/packing.hpp"
#include "packsurf/pipeline.hpp"
#include "packsurf/report.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace packsurf;
namespace fs = std::filesystem;

bool verbose_enabled() {
    const char* v = std::getenv("PACKSURF_VERBOSE");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

void vlog(const std::string& message) {
    if (verbose_enabled()) std::cerr << "[packsurf] " << message << '\n';
}

// Config-field overrides shared by the solving subcommands.
struct Overrides {
    std::optional<std::string> out;
    std::optional<double> lambda_e, lambda_v, lambda_c;
    std::optional<double> eta_value;
    std::optional<double> target_total;
    std::optional<std::string> variables;
    std::optional<double> gradient_tolerance;
    std::optional<int> max_iterations;
};

void add_config_options(CLI::App* cmd, std::string& config_path, Overrides& o) {
    cmd->add_option("--config", config_path, "Run configuration JSON")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "Output directory (overrides output_dir)");
    cmd->add_option("--lambda-e", o.lambda_e, "Fixed-edge penalty weight");
    cmd->add_option("--lambda-v", o.lambda_v, "Fixed-vertex penalty weight");
    cmd->add_option("--lambda-c", o.lambda_c, "Convexity penalty weight");
    cmd->add_option("--eta", o.eta_value, "Constant conformal coefficient");
    cmd->add_option("--target-total", o.target_total,
                    "Total curvature budget (constant-total targets)");
    cmd->add_option("--variables", o.variables, "log-radius | radius | edge-length");
    cmd->add_option("--gradient-tolerance", o.gradient_tolerance,
                    "Solver gradient tolerance, both stages");
    cmd->add_option("--max-iterations", o.max_iterations, "Solver iteration cap, both stages");
}

RunConfig load_config(const std::string& path, const Overrides& o) {
    RunConfig c = config_from_json_file(path);
    if (o.out) c.output_dir = *o.out;
    if (o.lambda_e) c.lambda_e = *o.lambda_e;
    if (o.lambda_v) c.lambda_v = *o.lambda_v;
    if (o.lambda_c) c.lambda_c = *o.lambda_c;
    if (o.eta_value) {
        if (c.eta_source != EtaSource::Constant)
            throw ConfigError("--eta only applies when eta.source is constant");
        c.eta_value = *o.eta_value;
    }
    if (o.target_total) {
        if (c.target_kind != TargetKind::ConstantTotal)
            throw ConfigError("--target-total only applies to constant-total targets");
        c.target_total = *o.target_total;
    }
    if (o.variables) c.variables = variable_mode_from_string(*o.variables);
    if (o.gradient_tolerance) {
        c.metric_solver.gradient_tolerance = *o.gradient_tolerance;
        c.embed_solver.gradient_tolerance = *o.gradient_tolerance;
    }
    if (o.max_iterations) {
        c.metric_solver.max_iterations = *o.max_iterations;
        c.embed_solver.max_iterations = *o.max_iterations;
    }
    c.validate();
    return c;
}

json solve_report_json(const SolveReport& r) {
    return json{{"status", to_string(r.status)},
                {"iterations", r.iterations},
                {"objective", round_g12(r.objective)},
                {"gradient_norm", round_g12(r.gradient_norm)}};
}

json metrics_json(const RunMetrics& m) {
    return json{{"A_K", round_g12(m.A_K)},
                {"A_v", m.A_v ? json(round_g12(*m.A_v)) : json(nullptr)},
                {"A_theta_deg", round_g12(m.A_theta_deg)}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

fs::path ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return fs::path(dir);
}

int exit_code(SolveStatus status) { return status == SolveStatus::Converged ? 0 : 2; }

DomePlan plan_from_cli(const std::string& name) {
    if (name == "hex" || name == "hexagon") return DomePlan::Hexagon;
    if (name == "square") return DomePlan::Square;
    throw ConfigError("plan '" + name + "' is not one of: hexagon, square");
}

void print_mesh_stats(const Mesh& mesh, const Embedding& embedding) {
    std::cout << "vertices: " << mesh.vertex_count() << '\n'
              << "edges: " << mesh.edge_count() << '\n'
              << "faces: " << mesh.face_count() << '\n'
              << "boundary_vertices: " << mesh.boundary_vertices().size() << '\n'
              << "boundary_edges: " << mesh.boundary_edges().size() << '\n'
              << "interior_vertices: " << mesh.interior_vertices().size() << '\n'
              << "euler_characteristic: " << mesh.euler_characteristic() << '\n';
    const Metric metric = metric_from_embedding(mesh, embedding);
    std::cout << "gauss_bonnet_defect: " << format_g12(gauss_bonnet_defect(mesh, metric)) << '\n';
}

int cmd_run(const std::string& config_path, const Overrides& overrides) {
    const RunConfig config = load_config(config_path, overrides);
    vlog("running full pipeline from " + config_path);
    const RunResult result = run_pipeline(config);
    std::cout << "stage1: " << to_string(result.stage1.status) << " (" << result.stage1.iterations
              << " iterations, objective " << format_g12(result.stage1.objective) << ")\n";
    std::cout << "stage2: " << to_string(result.stage2.status) << " (" << result.stage2.iterations
              << " iterations, objective " << format_g12(result.stage2.objective) << ", beta "
              << format_g12(result.beta) << ")\n";
    std::cout << "A_K: " << format_g12(result.metrics.A_K) << '\n';
    std::cout << "A_v: " << (result.metrics.A_v ? format_g12(*result.metrics.A_v) : "n/a") << '\n';
    std::cout << "A_theta_deg: " << format_g12(result.metrics.A_theta_deg) << '\n';
    std::cout << "wrote " << result.obj_path << '\n';
    std::cout << "wrote " << result.report_path << '\n';
    std::cout << "wrote " << result.distributions_path << '\n';
    if (result.stage1.status != SolveStatus::Converged) return exit_code(result.stage1.status);
    return exit_code(result.stage2.status);
}

int cmd_generate_from_config(const std::string& config_path, const Overrides& overrides) {
    const RunConfig config = load_config(config_path, overrides);
    if (!config.generate)
        throw ConfigError("generate --config needs an input.generate section");
    const AssembledProblem p = assemble_problem(config);
    const fs::path dir = ensure_out_dir(config.output_dir);
    const std::string obj_path = (dir / "initial.obj").string();
    save_obj(obj_path, p.mesh, p.initial);
    save_targets_csv((dir / "targets.csv").string(), p.targets);
    print_mesh_stats(p.mesh, p.initial);
    std::cout << "wrote " << obj_path << '\n';
    std::cout << "wrote " << (dir / "targets.csv").string() << '\n';
    return 0;
}

int cmd_generate_direct(const std::string& plan, int n, double span, double height,
                        const std::string& profile, const std::string& out) {
    DomeSpec spec;
    spec.plan = plan_from_cli(plan);
    spec.n = n;
    spec.span = span;
    spec.height = height;
    if (profile == "paraboloid") {
        spec.profile = LiftProfile::Paraboloid;
    } else if (profile != "spherical-cap") {
        throw ConfigError("profile '" + profile + "' is not one of: spherical-cap, paraboloid");
    }
    const Dome dome = generate_dome(spec);
    const fs::path dir = ensure_out_dir(out);
    const std::string obj_path = (dir / "initial.obj").string();
    save_obj(obj_path, dome.mesh, dome.vertices);
    print_mesh_stats(dome.mesh, dome.vertices);
    std::cout << "wrote " << obj_path << '\n';
    return 0;
}

int cmd_inspect(const std::string& obj_path, const std::string& config_path,
                const Overrides& overrides) {
    if (obj_path.empty() == config_path.empty())
        throw ConfigError("inspect needs exactly one of: a positional OBJ path or --config");
    if (!obj_path.empty()) {
        const auto [mesh, embedding] = load_obj(obj_path);
        print_mesh_stats(mesh, embedding);
        return 0;
    }
    const RunConfig config = load_config(config_path, overrides);
    const AssembledProblem p = assemble_problem(config);
    print_mesh_stats(p.mesh, p.initial);
    const AdmissibilityReport admissibility =
        admissibility_singleton_diagnostic(p.mesh, p.eta, p.targets, p.targets.vertices);
    std::cout << "admissibility_singleton_violations: " << admissibility.violations.size() << '\n';
    return 0;
}

int cmd_solve_metric(const std::string& config_path, const Overrides& overrides) {
    const RunConfig config = load_config(config_path, overrides);
    const AssembledProblem p = assemble_problem(config);
    vlog("stage 1 on " + std::to_string(p.mesh.vertex_count()) + " vertices");
    const MetricSolution s1 = solve_metric(make_metric_problem(config, p), config.metric_solver);

    const fs::path dir = ensure_out_dir(config.output_dir);
    save_eta_csv((dir / "eta.csv").string(), p.mesh, p.eta);
    save_targets_csv((dir / "targets.csv").string(), p.targets);
    save_metric_csv((dir / "metric.csv").string(), p.mesh, s1.metric);
    save_packing_csv((dir / "packing.csv").string(), s1.packing);

    json j;
    j["config"] = json::parse(config_to_json_text(config));
    j["stage1"] = solve_report_json(s1.report);
    j["stage1"]["gauge_projected"] = s1.gauge_projected;
    j["timings"] = json{{"stage1_seconds", round_g12(s1.report.seconds)}};
    write_text((dir / "stage1.json").string(), j.dump(2) + "\n");

    std::cout << "stage1: " << to_string(s1.report.status) << " (" << s1.report.iterations
              << " iterations, objective " << format_g12(s1.report.objective) << ")\n";
    std::cout << "wrote " << (dir / "metric.csv").string() << '\n';
    return exit_code(s1.report.status);
}

int cmd_embed(const std::string& config_path, const std::string& metric_path_flag,
              const Overrides& overrides) {
    const RunConfig config = load_config(config_path, overrides);
    const AssembledProblem p = assemble_problem(config);
    const std::string metric_path = metric_path_flag.empty()
                                        ? (fs::path(config.output_dir) / "metric.csv").string()
                                        : metric_path_flag;
    Metric metric = load_metric_csv(metric_path, p.mesh);
    validate_metric(p.mesh, metric);
    vlog("stage 2 with metric from " + metric_path);
    const EmbedSolution s2 =
        solve_embedding(make_embed_problem(config, p, std::move(metric)), config.embed_solver);
    const RunMetrics metrics =
        evaluate(p.mesh, s2.embedding, p.targets, p.fixed_vertices, p.fixed_positions,
                 p.target_angles);

    const fs::path dir = ensure_out_dir(config.output_dir);
    const std::string obj_path = (dir / "final.obj").string();
    save_obj(obj_path, p.mesh, s2.embedding);
    export_distributions(p.mesh, s2.embedding, p.targets, p.target_angles,
                         (dir / "distributions.csv").string());

    json j;
    j["config"] = json::parse(config_to_json_text(config));
    j["metric_csv"] = metric_path;
    j["stage2"] = solve_report_json(s2.report);
    j["stage2"]["beta"] = round_g12(s2.beta);
    j["stage2"]["beta_optimised"] = s2.beta_optimised;
    j["stage2"]["initial_from_layout"] = s2.initial_from_layout;
    j["metrics"] = metrics_json(metrics);
    j["timings"] = json{{"stage2_seconds", round_g12(s2.report.seconds)}};
    write_text((dir / "stage2.json").string(), j.dump(2) + "\n");

    std::cout << "stage2: " << to_string(s2.report.status) << " (" << s2.report.iterations
              << " iterations, objective " << format_g12(s2.report.objective) << ", beta "
              << format_g12(s2.beta) << ")\n";
    std::cout << "wrote " << obj_path << '\n';
    return exit_code(s2.report.status);
}

int cmd_evaluate(const std::string& config_path, const std::string& final_path_flag,
                 const Overrides& overrides) {
    const RunConfig config = load_config(config_path, overrides);
    const AssembledProblem p = assemble_problem(config);
    const std::string final_path = final_path_flag.empty()
                                       ? (fs::path(config.output_dir) / "final.obj").string()
                                       : final_path_flag;
    const auto [final_mesh, final_embedding] = load_obj(final_path);
    if (final_mesh.faces() != p.mesh.faces())
        throw ConfigError("'" + final_path + "' does not share the config input's topology");
    const RunMetrics metrics =
        evaluate(p.mesh, final_embedding, p.targets, p.fixed_vertices, p.fixed_positions,
                 p.target_angles);
    std::cout << metrics_json(metrics).dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"packsurf: design triangulated surfaces with prescribed Gaussian curvatures"};
    app.set_version_flag("--version", "0.1.0");
    app.require_subcommand(1);

    std::string run_config;
    Overrides run_overrides;
    CLI::App* run = app.add_subcommand("run", "Full pipeline: metric then embedding");
    add_config_options(run, run_config, run_overrides);

    std::string gen_config, gen_plan, gen_profile = "spherical-cap", gen_out = "out";
    int gen_n = 1;
    double gen_span = 0.0, gen_height = 0.0;
    Overrides gen_overrides;
    CLI::App* generate = app.add_subcommand("generate", "Generate a dome mesh OBJ");
    generate->add_option("plan", gen_plan, "hexagon | square (alternative to --config)");
    generate->add_option("--config", gen_config, "Run configuration JSON")->check(CLI::ExistingFile);
    generate->add_option("--n", gen_n, "Rings (hexagon) or cells per side (square)");
    generate->add_option("--span", gen_span, "Plan span, meters");
    generate->add_option("--height", gen_height, "Apex height, meters");
    generate->add_option("--profile", gen_profile, "spherical-cap | paraboloid");
    generate->add_option("--out", gen_overrides.out, "Output directory");

    std::string inspect_obj, inspect_config;
    Overrides inspect_overrides;
    CLI::App* inspect = app.add_subcommand("inspect", "Print mesh statistics");
    inspect->add_option("mesh", inspect_obj, "OBJ file to inspect");
    inspect->add_option("--config", inspect_config, "Run configuration JSON")
        ->check(CLI::ExistingFile);

    std::string sm_config;
    Overrides sm_overrides;
    CLI::App* solve_metric_cmd =
        app.add_subcommand("solve-metric", "Stage 1 only: optimise the metric");
    add_config_options(solve_metric_cmd, sm_config, sm_overrides);

    std::string embed_config, embed_metric;
    Overrides embed_overrides;
    CLI::App* embed = app.add_subcommand("embed", "Stage 2 only: embed a saved metric");
    add_config_options(embed, embed_config, embed_overrides);
    embed->add_option("--metric", embed_metric,
                      "Metric CSV (default: <output_dir>/metric.csv)");

    std::string eval_config, eval_final;
    Overrides eval_overrides;
    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "Error metrics of a final mesh against the config targets");
    add_config_options(evaluate_cmd, eval_config, eval_overrides);
    evaluate_cmd->add_option("--final", eval_final,
                             "Final OBJ to evaluate (default: <output_dir>/final.obj)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(run)) return cmd_run(run_config, run_overrides);
        if (app.got_subcommand(generate)) {
            if (gen_config.empty() == gen_plan.empty())
                throw ConfigError("generate needs exactly one of: a positional plan or --config");
            if (!gen_config.empty()) return cmd_generate_from_config(gen_config, gen_overrides);
            if (generate->count("--n") == 0 || generate->count("--span") == 0)
                throw ConfigError("generate <plan> requires --n and --span");
            return cmd_generate_direct(gen_plan, gen_n, gen_span, gen_height, gen_profile,
                                       gen_overrides.out.value_or("out"));
        }
        if (app.got_subcommand(inspect))
            return cmd_inspect(inspect_obj, inspect_config, inspect_overrides);
        if (app.got_subcommand(solve_metric_cmd)) return cmd_solve_metric(sm_config, sm_overrides);
        if (app.got_subcommand(embed)) return cmd_embed(embed_config, embed_metric, embed_overrides);
        if (app.got_subcommand(evaluate_cmd))
            return cmd_evaluate(eval_config, eval_final, eval_overrides);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
