#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "packsurf/embed_opt.hpp"
#include "packsurf/geometry.hpp"
#include "packsurf/intrinsic.hpp"
#include "packsurf/mesh.hpp"
#include "packsurf/meshgen.hpp"
#include "packsurf/metric_opt.hpp"
#include "packsurf/optim.hpp"
#include "packsurf/report.hpp"

namespace packsurf {

enum class EtaSource { Constant, FromInitial };
enum class TargetKind { ConstantTotal, PerVertexFile, RadialQuadratic };
enum class SetPolicy { Boundary, None, Explicit };

/// Full description of a design run; serialisable to/from JSON so that the
/// report's config echo reproduces the run exactly.
struct RunConfig {
    // Exactly one input source: an OBJ file or a generated dome.
    std::optional<std::string> input_obj;
    std::optional<DomeSpec> generate;

    EtaSource eta_source = EtaSource::Constant;
    double eta_value = 1.0;

    TargetKind target_kind = TargetKind::ConstantTotal;
    double target_total = 0.0;          // ConstantTotal: budget over interior vertices
    std::string target_file;            // PerVertexFile: CSV path
    double quad_c = 0.0168;             // RadialQuadratic parameters
    double quad_b = 0.7;
    std::optional<double> quad_x0;      // required for RadialQuadratic

    SetPolicy fixed_vertices = SetPolicy::Boundary;
    std::vector<int> fixed_vertex_list;
    SetPolicy fixed_edges = SetPolicy::Boundary;
    std::vector<std::array<int, 2>> fixed_edge_list;  // endpoint vertex pairs

    double lambda_e = 0.01;
    double lambda_v = 0.01;
    double lambda_c = 0.0;
    ConvexityDirection convexity = ConvexityDirection::Up;
    VariableMode variables = VariableMode::LogRadius;

    SolverConfig metric_solver;
    SolverConfig embed_solver;

    std::string output_dir = "out";

    void validate() const;  // throws ConfigError
};

RunConfig config_from_json_file(const std::string& path);
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& config);

/// Everything the pipeline stages consume, assembled from a config:
/// the mesh, initial embedding and metric, conformal structure, curvature
/// targets, pinned vertices/edges with their target positions/lengths, and
/// the corner angles the final mesh is evaluated against.
struct AssembledProblem {
    Mesh mesh;
    Embedding initial;
    Metric initial_metric;
    ConformalStructure eta;
    TargetCurvatures targets;
    std::vector<int> fixed_vertices;
    Embedding fixed_positions;
    std::vector<int> fixed_edge_indices;
    std::vector<double> fixed_edge_lengths;
    CornerAngles target_angles;
};

/// Loads/generates the input and derives every stage input from the config.
/// Target angles follow the conformal source: the initial mesh's own angles
/// when eta comes from the initial geometry, the flat member of the generated
/// family for constant eta on generated meshes, and pi/3 everywhere for
/// constant eta on arbitrary OBJ input.
AssembledProblem assemble_problem(const RunConfig& config);

/// Stage problem builders; the returned problems point into `problem`, which
/// must outlive them.
MetricProblem make_metric_problem(const RunConfig& config, const AssembledProblem& problem);
EmbedProblem make_embed_problem(const RunConfig& config, const AssembledProblem& problem,
                                Metric stage1_metric);

/// Parses the CLI/config spelling of a variable mode
/// (log-radius | radius | edge-length); throws ConfigError otherwise.
VariableMode variable_mode_from_string(const std::string& name);

struct RunResult {
    RunMetrics metrics;
    SolveReport stage1;
    SolveReport stage2;
    double beta = 1.0;
    bool gauge_projected = false;
    bool beta_optimised = false;
    bool initial_from_layout = false;
    int admissibility_violations = 0;
    Embedding final_embedding;
    // artifacts written under output_dir
    std::string obj_path;
    std::string report_path;
    std::string distributions_path;
};

/// Runs stage 1 then stage 2 from the assembled inputs and writes
/// final.obj, report.json, distributions.csv plus the stage intermediates
/// (eta.csv, targets.csv, metric.csv, packing.csv) under output_dir.
/// Nothing is written until both stages finish.
RunResult run_pipeline(const RunConfig& config);

/// JSON text of the run report (config echo, mesh stats, solver reports,
/// metrics; timings nested under a "timings" key so byte-comparisons can
/// drop them).
std::string report_to_json_text(const RunConfig& config, const AssembledProblem& problem,
                                const RunResult& result);

}  // namespace packsurf
