#include "packsurf/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <string_view>
#include <unordered_set>

#include <json.hpp>

#include "packsurf/numformat.hpp"
#include "packsurf/csv_io.hpp"
#include "packsurf/errors.hpp"
#include "packsurf/obj_io.hpp"
#include "packsurf/packing.hpp"

namespace packsurf {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---- enum <-> string -------------------------------------------------------

template <typename Enum>
struct EnumName {
    Enum value;
    std::string_view name;
};

constexpr EnumName<DomePlan> kPlans[] = {{DomePlan::Hexagon, "hexagon"},
                                         {DomePlan::Square, "square"}};
constexpr EnumName<LiftProfile> kProfiles[] = {{LiftProfile::SphericalCap, "spherical-cap"},
                                               {LiftProfile::Paraboloid, "paraboloid"}};
constexpr EnumName<EtaSource> kEtaSources[] = {{EtaSource::Constant, "constant"},
                                               {EtaSource::FromInitial, "from-initial"}};
constexpr EnumName<TargetKind> kTargetKinds[] = {
    {TargetKind::ConstantTotal, "constant-total"},
    {TargetKind::PerVertexFile, "per-vertex-file"},
    {TargetKind::RadialQuadratic, "radial-quadratic"}};
constexpr EnumName<ConvexityDirection> kConvexities[] = {{ConvexityDirection::Up, "up"},
                                                         {ConvexityDirection::Down, "down"}};
constexpr EnumName<VariableMode> kVariableModes[] = {{VariableMode::LogRadius, "log-radius"},
                                                     {VariableMode::Radius, "radius"},
                                                     {VariableMode::EdgeLength, "edge-length"}};

template <typename Enum, size_t N>
std::string_view enum_name(const EnumName<Enum> (&table)[N], Enum value) {
    for (const auto& entry : table)
        if (entry.value == value) return entry.name;
    throw ConfigError("unmapped enum value");  // unreachable for valid enums
}

template <typename Enum, size_t N>
Enum enum_value(const EnumName<Enum> (&table)[N], const std::string& name, const char* what) {
    for (const auto& entry : table)
        if (entry.name == name) return entry.value;
    std::string valid;
    for (const auto& entry : table) {
        if (!valid.empty()) valid += ", ";
        valid += entry.name;
    }
    throw ConfigError(std::string(what) + " '" + name + "' is not one of: " + valid);
}

// ---- JSON access with config-grade errors ----------------------------------

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const char* where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (auto a : allowed)
            if (item.key() == a) known = true;
        if (!known)
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

const json& require(const json& obj, const char* key, const char* where) {
    if (!obj.contains(key))
        throw ConfigError(std::string(where) + " requires key '" + key + "'");
    return obj.at(key);
}

const json& as_object(const json& j, const char* what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
    return j;
}

double as_number(const json& j, const char* what) {
    if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
    return j.get<double>();
}

int as_int(const json& j, const char* what) {
    if (!j.is_number_integer()) throw ConfigError(std::string(what) + " must be an integer");
    return j.get<int>();
}

std::string as_string(const json& j, const char* what) {
    if (!j.is_string()) throw ConfigError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

SolverConfig parse_solver(const json& j, const char* where) {
    as_object(j, where);
    check_keys(j,
               {"gradient_tolerance", "max_iterations", "sufficient_decrease",
                "backtracking_factor", "max_backtracks", "memory"},
               where);
    SolverConfig c;
    if (j.contains("gradient_tolerance"))
        c.gradient_tolerance = as_number(j.at("gradient_tolerance"), "gradient_tolerance");
    if (j.contains("max_iterations"))
        c.max_iterations = as_int(j.at("max_iterations"), "max_iterations");
    if (j.contains("sufficient_decrease"))
        c.sufficient_decrease = as_number(j.at("sufficient_decrease"), "sufficient_decrease");
    if (j.contains("backtracking_factor"))
        c.backtracking_factor = as_number(j.at("backtracking_factor"), "backtracking_factor");
    if (j.contains("max_backtracks")) c.max_backtracks = as_int(j.at("max_backtracks"), "max_backtracks");
    if (j.contains("memory")) c.memory = as_int(j.at("memory"), "memory");
    return c;
}

json solver_to_json(const SolverConfig& c) {
    return json{{"gradient_tolerance", round_g12(c.gradient_tolerance)},
                {"max_iterations", c.max_iterations},
                {"sufficient_decrease", round_g12(c.sufficient_decrease)},
                {"backtracking_factor", round_g12(c.backtracking_factor)},
                {"max_backtracks", c.max_backtracks},
                {"memory", c.memory}};
}

DomeSpec parse_dome(const json& j) {
    as_object(j, "input.generate");
    check_keys(j, {"plan", "n", "span", "height", "profile"}, "input.generate");
    DomeSpec spec;
    spec.plan = enum_value(kPlans, as_string(require(j, "plan", "input.generate"), "plan"), "plan");
    spec.n = as_int(require(j, "n", "input.generate"), "n");
    spec.span = as_number(require(j, "span", "input.generate"), "span");
    spec.height = as_number(require(j, "height", "input.generate"), "height");
    if (j.contains("profile"))
        spec.profile = enum_value(kProfiles, as_string(j.at("profile"), "profile"), "profile");
    return spec;
}

}  // namespace

void RunConfig::validate() const {
    if (input_obj.has_value() == generate.has_value())
        throw ConfigError("config needs exactly one input source: input.obj or input.generate");
    if (generate) generate->validate();
    if (eta_source == EtaSource::Constant && !(eta_value >= 0.0))
        throw ConfigError("constant eta must be non-negative");
    if (!(lambda_e >= 0.0) || !(lambda_v >= 0.0) || !(lambda_c >= 0.0))
        throw ConfigError("penalty weights lambda_e/lambda_v/lambda_c must be non-negative");
    switch (target_kind) {
        case TargetKind::ConstantTotal:
            if (!std::isfinite(target_total))
                throw ConfigError("targets.total must be finite");
            break;
        case TargetKind::PerVertexFile:
            if (target_file.empty()) throw ConfigError("targets.path must not be empty");
            break;
        case TargetKind::RadialQuadratic:
            if (!quad_x0) throw ConfigError("targets.x0 is required for radial-quadratic targets");
            if (*quad_x0 == 0.0) throw ConfigError("targets.x0 must be non-zero");
            if (!(quad_b > 0.0)) throw ConfigError("targets.b must be positive");
            break;
    }
    metric_solver.validate();
    embed_solver.validate();
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

RunConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    as_object(j, "config");
    check_keys(j,
               {"input", "eta", "targets", "fixed_vertices", "fixed_edges", "lambda_e",
                "lambda_v", "lambda_c", "convexity", "variables", "metric_solver",
                "embed_solver", "output_dir"},
               "config");

    RunConfig c;
    const json& input = as_object(require(j, "input", "config"), "input");
    check_keys(input, {"obj", "generate"}, "input");
    if (input.contains("obj")) c.input_obj = as_string(input.at("obj"), "input.obj");
    if (input.contains("generate")) c.generate = parse_dome(input.at("generate"));

    if (j.contains("eta")) {
        const json& eta = as_object(j.at("eta"), "eta");
        check_keys(eta, {"source", "value"}, "eta");
        c.eta_source = enum_value(kEtaSources, as_string(require(eta, "source", "eta"), "eta.source"),
                                  "eta.source");
        if (eta.contains("value")) {
            if (c.eta_source != EtaSource::Constant)
                throw ConfigError("eta.value only applies to the constant eta source");
            c.eta_value = as_number(eta.at("value"), "eta.value");
        }
    }

    if (j.contains("targets")) {
        const json& targets = as_object(j.at("targets"), "targets");
        c.target_kind = enum_value(
            kTargetKinds, as_string(require(targets, "kind", "targets"), "targets.kind"),
            "targets.kind");
        switch (c.target_kind) {
            case TargetKind::ConstantTotal:
                check_keys(targets, {"kind", "total"}, "targets");
                c.target_total = as_number(require(targets, "total", "targets"), "targets.total");
                break;
            case TargetKind::PerVertexFile:
                check_keys(targets, {"kind", "path"}, "targets");
                c.target_file = as_string(require(targets, "path", "targets"), "targets.path");
                break;
            case TargetKind::RadialQuadratic:
                check_keys(targets, {"kind", "c", "b", "x0"}, "targets");
                if (targets.contains("c")) c.quad_c = as_number(targets.at("c"), "targets.c");
                if (targets.contains("b")) c.quad_b = as_number(targets.at("b"), "targets.b");
                c.quad_x0 = as_number(require(targets, "x0", "targets"), "targets.x0");
                break;
        }
    } else {
        throw ConfigError("config requires key 'targets'");
    }

    if (j.contains("fixed_vertices")) {
        const json& fv = j.at("fixed_vertices");
        if (fv.is_string()) {
            const std::string policy = fv.get<std::string>();
            if (policy == "boundary") {
                c.fixed_vertices = SetPolicy::Boundary;
            } else if (policy == "none") {
                c.fixed_vertices = SetPolicy::None;
            } else {
                throw ConfigError("fixed_vertices must be \"boundary\", \"none\", or an index list");
            }
        } else if (fv.is_array()) {
            c.fixed_vertices = SetPolicy::Explicit;
            for (const auto& item : fv)
                c.fixed_vertex_list.push_back(as_int(item, "fixed_vertices entry"));
        } else {
            throw ConfigError("fixed_vertices must be \"boundary\", \"none\", or an index list");
        }
    }

    if (j.contains("fixed_edges")) {
        const json& fe = j.at("fixed_edges");
        if (fe.is_string()) {
            const std::string policy = fe.get<std::string>();
            if (policy == "boundary") {
                c.fixed_edges = SetPolicy::Boundary;
            } else if (policy == "none") {
                c.fixed_edges = SetPolicy::None;
            } else {
                throw ConfigError(
                    "fixed_edges must be \"boundary\", \"none\", or a list of vertex pairs");
            }
        } else if (fe.is_array()) {
            c.fixed_edges = SetPolicy::Explicit;
            for (const auto& item : fe) {
                if (!item.is_array() || item.size() != 2)
                    throw ConfigError("fixed_edges entries must be [vi, vj] pairs");
                c.fixed_edge_list.push_back(
                    {as_int(item.at(0), "fixed_edges entry"), as_int(item.at(1), "fixed_edges entry")});
            }
        } else {
            throw ConfigError("fixed_edges must be \"boundary\", \"none\", or a list of vertex pairs");
        }
    }

    if (j.contains("lambda_e")) c.lambda_e = as_number(j.at("lambda_e"), "lambda_e");
    if (j.contains("lambda_v")) c.lambda_v = as_number(j.at("lambda_v"), "lambda_v");
    if (j.contains("lambda_c")) c.lambda_c = as_number(j.at("lambda_c"), "lambda_c");
    if (j.contains("convexity"))
        c.convexity =
            enum_value(kConvexities, as_string(j.at("convexity"), "convexity"), "convexity");
    if (j.contains("variables"))
        c.variables =
            enum_value(kVariableModes, as_string(j.at("variables"), "variables"), "variables");
    if (j.contains("metric_solver")) c.metric_solver = parse_solver(j.at("metric_solver"), "metric_solver");
    if (j.contains("embed_solver")) c.embed_solver = parse_solver(j.at("embed_solver"), "embed_solver");
    if (j.contains("output_dir")) c.output_dir = as_string(j.at("output_dir"), "output_dir");

    c.validate();
    return c;
}

RunConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json_text(text);
}

std::string config_to_json_text(const RunConfig& config) {
    json j;
    if (config.input_obj) {
        j["input"] = json{{"obj", *config.input_obj}};
    } else {
        const DomeSpec& s = *config.generate;
        j["input"] = json{{"generate", json{{"plan", enum_name(kPlans, s.plan)},
                                            {"n", s.n},
                                            {"span", round_g12(s.span)},
                                            {"height", round_g12(s.height)},
                                            {"profile", enum_name(kProfiles, s.profile)}}}};
    }
    j["eta"] = json{{"source", enum_name(kEtaSources, config.eta_source)}};
    if (config.eta_source == EtaSource::Constant)
        j["eta"]["value"] = round_g12(config.eta_value);
    switch (config.target_kind) {
        case TargetKind::ConstantTotal:
            j["targets"] = json{{"kind", "constant-total"},
                                {"total", round_g12(config.target_total)}};
            break;
        case TargetKind::PerVertexFile:
            j["targets"] = json{{"kind", "per-vertex-file"}, {"path", config.target_file}};
            break;
        case TargetKind::RadialQuadratic:
            j["targets"] = json{{"kind", "radial-quadratic"},
                                {"c", round_g12(config.quad_c)},
                                {"b", round_g12(config.quad_b)},
                                {"x0", round_g12(*config.quad_x0)}};
            break;
    }
    switch (config.fixed_vertices) {
        case SetPolicy::Boundary: j["fixed_vertices"] = "boundary"; break;
        case SetPolicy::None: j["fixed_vertices"] = "none"; break;
        case SetPolicy::Explicit: j["fixed_vertices"] = config.fixed_vertex_list; break;
    }
    switch (config.fixed_edges) {
        case SetPolicy::Boundary: j["fixed_edges"] = "boundary"; break;
        case SetPolicy::None: j["fixed_edges"] = "none"; break;
        case SetPolicy::Explicit: {
            json pairs = json::array();
            for (const auto& [i, k] : config.fixed_edge_list) pairs.push_back(json::array({i, k}));
            j["fixed_edges"] = pairs;
            break;
        }
    }
    j["lambda_e"] = round_g12(config.lambda_e);
    j["lambda_v"] = round_g12(config.lambda_v);
    j["lambda_c"] = round_g12(config.lambda_c);
    j["convexity"] = enum_name(kConvexities, config.convexity);
    j["variables"] = enum_name(kVariableModes, config.variables);
    j["metric_solver"] = solver_to_json(config.metric_solver);
    j["embed_solver"] = solver_to_json(config.embed_solver);
    j["output_dir"] = config.output_dir;
    return j.dump(2) + "\n";
}

AssembledProblem assemble_problem(const RunConfig& config) {
    config.validate();

    auto [mesh, initial] = config.input_obj
                               ? load_obj(*config.input_obj)
                               : [&config] {
                                     Dome dome = generate_dome(*config.generate);
                                     return std::pair<Mesh, Embedding>{std::move(dome.mesh),
                                                                       std::move(dome.vertices)};
                                 }();

    Metric initial_metric = metric_from_embedding(mesh, initial);

    ConformalStructure eta;
    if (config.eta_source == EtaSource::Constant) {
        eta.eta.assign(mesh.edge_count(), config.eta_value);
    } else {
        eta = conformal_structure_from(mesh, initial_metric, init_radii(mesh, initial_metric));
    }

    TargetCurvatures targets;
    switch (config.target_kind) {
        case TargetKind::ConstantTotal:
            targets = constant_total_targets(mesh.interior_vertices(), config.target_total);
            break;
        case TargetKind::PerVertexFile: {
            targets = load_targets_csv(config.target_file);
            std::unordered_set<int> seen;
            for (int v : targets.vertices) {
                if (v < 0 || v >= mesh.vertex_count())
                    throw ConfigError("'" + config.target_file + "' references vertex " +
                                      std::to_string(v) + " but the mesh has " +
                                      std::to_string(mesh.vertex_count()) + " vertices");
                if (!seen.insert(v).second)
                    throw ConfigError("'" + config.target_file + "' lists vertex " +
                                      std::to_string(v) + " twice");
            }
            break;
        }
        case TargetKind::RadialQuadratic:
            targets = radial_quadratic_targets(initial, mesh.interior_vertices(), config.quad_c,
                                               config.quad_b, *config.quad_x0);
            break;
    }

    std::vector<int> fixed_vertices;
    switch (config.fixed_vertices) {
        case SetPolicy::Boundary: fixed_vertices = mesh.boundary_vertices(); break;
        case SetPolicy::None: break;
        case SetPolicy::Explicit: {
            std::unordered_set<int> seen;
            for (int v : config.fixed_vertex_list) {
                if (v < 0 || v >= mesh.vertex_count())
                    throw ConfigError("fixed_vertices entry " + std::to_string(v) +
                                      " is out of range");
                if (!seen.insert(v).second)
                    throw ConfigError("fixed_vertices lists vertex " + std::to_string(v) + " twice");
            }
            fixed_vertices = config.fixed_vertex_list;
            break;
        }
    }
    Embedding fixed_positions;
    fixed_positions.reserve(fixed_vertices.size());
    for (int v : fixed_vertices) fixed_positions.push_back(initial[v]);

    std::vector<int> fixed_edge_indices;
    switch (config.fixed_edges) {
        case SetPolicy::Boundary: fixed_edge_indices = mesh.boundary_edges(); break;
        case SetPolicy::None: break;
        case SetPolicy::Explicit: {
            std::unordered_set<int> seen;
            for (const auto& [a, b] : config.fixed_edge_list) {
                const int e = mesh.edge_index(a, b);
                if (e < 0)
                    throw ConfigError("fixed_edges pair [" + std::to_string(a) + ", " +
                                      std::to_string(b) + "] is not a mesh edge");
                if (!seen.insert(e).second)
                    throw ConfigError("fixed_edges lists edge [" + std::to_string(a) + ", " +
                                      std::to_string(b) + "] twice");
                fixed_edge_indices.push_back(e);
            }
            break;
        }
    }
    std::vector<double> fixed_edge_lengths;
    fixed_edge_lengths.reserve(fixed_edge_indices.size());
    for (int e : fixed_edge_indices) fixed_edge_lengths.push_back(initial_metric.lengths[e]);

    CornerAngles target_angles;
    if (config.eta_source == EtaSource::FromInitial) {
        target_angles = corner_angles(mesh, initial_metric);
    } else if (config.generate) {
        DomeSpec flat = *config.generate;
        flat.height = 0.0;
        Dome flat_dome = generate_dome(flat);
        target_angles =
            corner_angles(flat_dome.mesh, metric_from_embedding(flat_dome.mesh, flat_dome.vertices));
    } else {
        target_angles.per_face.assign(
            mesh.face_count(),
            {std::numbers::pi / 3.0, std::numbers::pi / 3.0, std::numbers::pi / 3.0});
    }

    return AssembledProblem{std::move(mesh),
                            std::move(initial),
                            std::move(initial_metric),
                            std::move(eta),
                            std::move(targets),
                            std::move(fixed_vertices),
                            std::move(fixed_positions),
                            std::move(fixed_edge_indices),
                            std::move(fixed_edge_lengths),
                            std::move(target_angles)};
}

MetricProblem make_metric_problem(const RunConfig& config, const AssembledProblem& problem) {
    MetricProblem mp;
    mp.mesh = &problem.mesh;
    mp.eta = problem.eta;
    mp.targets = problem.targets;
    mp.fixed_edges = problem.fixed_edge_indices;
    mp.fixed_lengths = problem.fixed_edge_lengths;
    mp.lambda_e = config.lambda_e;
    mp.mode = config.variables;
    mp.initial = init_radii(problem.mesh, problem.initial_metric);
    mp.initial_metric = problem.initial_metric;
    return mp;
}

EmbedProblem make_embed_problem(const RunConfig& config, const AssembledProblem& problem,
                                Metric stage1_metric) {
    EmbedProblem ep;
    ep.mesh = &problem.mesh;
    ep.metric = std::move(stage1_metric);
    ep.fixed_vertices = problem.fixed_vertices;
    ep.fixed_positions = problem.fixed_positions;
    ep.lambda_v = config.lambda_v;
    ep.lambda_c = config.lambda_c;
    ep.convexity = config.convexity;
    ep.initial = problem.initial;
    return ep;
}

VariableMode variable_mode_from_string(const std::string& name) {
    return enum_value(kVariableModes, name, "variables");
}

RunResult run_pipeline(const RunConfig& config) {
    AssembledProblem p = assemble_problem(config);

    const MetricSolution s1 = solve_metric(make_metric_problem(config, p), config.metric_solver);
    const EmbedSolution s2 =
        solve_embedding(make_embed_problem(config, p, s1.metric), config.embed_solver);

    RunResult result;
    result.metrics =
        evaluate(p.mesh, s2.embedding, p.targets, p.fixed_vertices, p.fixed_positions, p.target_angles);
    result.stage1 = s1.report;
    result.stage2 = s2.report;
    result.beta = s2.beta;
    result.gauge_projected = s1.gauge_projected;
    result.beta_optimised = s2.beta_optimised;
    result.initial_from_layout = s2.initial_from_layout;
    result.admissibility_violations = static_cast<int>(
        admissibility_singleton_diagnostic(p.mesh, p.eta, p.targets, p.targets.vertices)
            .violations.size());
    result.final_embedding = s2.embedding;

    const fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + config.output_dir +
                      "': " + ec.message());
    result.obj_path = (dir / "final.obj").string();
    result.report_path = (dir / "report.json").string();
    result.distributions_path = (dir / "distributions.csv").string();

    save_obj(result.obj_path, p.mesh, s2.embedding);
    export_distributions(p.mesh, s2.embedding, p.targets, p.target_angles,
                         result.distributions_path);
    save_eta_csv((dir / "eta.csv").string(), p.mesh, p.eta);
    save_targets_csv((dir / "targets.csv").string(), p.targets);
    save_metric_csv((dir / "metric.csv").string(), p.mesh, s1.metric);
    save_packing_csv((dir / "packing.csv").string(), s1.packing);
    {
        std::ofstream out(result.report_path);
        if (!out) throw IoError("cannot open '" + result.report_path + "' for writing");
        out << report_to_json_text(config, p, result);
        if (!out) throw IoError("write failed for '" + result.report_path + "'");
    }
    return result;
}

std::string report_to_json_text(const RunConfig& config, const AssembledProblem& problem,
                                const RunResult& result) {
    json j;
    j["config"] = json::parse(config_to_json_text(config));
    j["mesh"] = json{{"vertices", problem.mesh.vertex_count()},
                     {"edges", problem.mesh.edge_count()},
                     {"faces", problem.mesh.face_count()},
                     {"boundary_vertices", static_cast<int>(problem.mesh.boundary_vertices().size())},
                     {"euler_characteristic", problem.mesh.euler_characteristic()}};
    j["stage1"] = json{{"status", to_string(result.stage1.status)},
                       {"iterations", result.stage1.iterations},
                       {"objective", round_g12(result.stage1.objective)},
                       {"gradient_norm", round_g12(result.stage1.gradient_norm)},
                       {"gauge_projected", result.gauge_projected}};
    j["stage2"] = json{{"status", to_string(result.stage2.status)},
                       {"iterations", result.stage2.iterations},
                       {"objective", round_g12(result.stage2.objective)},
                       {"gradient_norm", round_g12(result.stage2.gradient_norm)},
                       {"beta", round_g12(result.beta)},
                       {"beta_optimised", result.beta_optimised},
                       {"initial_from_layout", result.initial_from_layout}};
    j["metrics"] = json{{"A_K", round_g12(result.metrics.A_K)},
                        {"A_v", result.metrics.A_v ? json(round_g12(*result.metrics.A_v))
                                                   : json(nullptr)},
                        {"A_theta_deg", round_g12(result.metrics.A_theta_deg)}};
    j["admissibility"] = json{{"singleton_violations", result.admissibility_violations}};
    j["timings"] = json{{"stage1_seconds", round_g12(result.stage1.seconds)},
                        {"stage2_seconds", round_g12(result.stage2.seconds)},
                        {"total_seconds",
                         round_g12(result.stage1.seconds + result.stage2.seconds)}};
    return j.dump(2) + "\n";
}

}  // namespace packsurf
