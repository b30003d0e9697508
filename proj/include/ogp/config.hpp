// config.hpp — declarative experiment configurations: parsing, validation,
// canonical re-emission, and realization of the domain objects they describe.

#pragma once

#include "ogp/evolution.hpp"
#include "ogp/pseudopure.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ogp {

// schema violations: unknown fields, missing fields, malformed documents
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// physically invalid quantities: non-Hermitian generators, non-normalized
// states, out-of-range parameters
struct PhysicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode { pure, mixed, degenerate, pseudopure_closed, nodal_scan, figure1, interfere, selftest };

std::string to_string(RunMode mode);
RunMode mode_from_string(const std::string& name);

// one diagonal level of a state given in the computational basis; indices are
// 0-based here (1-based in config files)
struct DiagonalLevelSpec {
    double eigenvalue = 0.0;
    std::vector<int> indices;
};

struct PseudopureStateSpec {
    double epsilon = 1.0;
    int n = 0;  // 0-based
};

struct StateSpec {
    std::optional<PseudopureStateSpec> pseudopure;
    std::vector<DiagonalLevelSpec> levels;
};

struct PresetSpec {
    std::string name;  // precession | block-rotation | block-visibility
    int n = 0, m = 1;  // 0-based block indices
    std::array<double, 3> axis{0.0, 0.0, 1.0};
    double angle = 0.0;
    double polar_angle = 0.0;
    double turns = 1.0;
    double eta = 1.0;
    double omega = 0.0;
};

struct PathSpec {
    std::vector<GeneratorInterval> schedule;  // exclusive with preset
    std::optional<PresetSpec> preset;
    double duration = 1.0;  // presets only; schedules carry their own length
};

struct BasisSpec {
    enum class Kind { computational, precession, columns } kind = Kind::computational;
    double polar_angle = 0.0;
    Matrix columns;
};

struct ScanRange {
    double min = 0.0;
    double max = 1.0;
    int points = 2;
};

struct ScanSpec {
    ScanRange epsilon{0.05, 0.95, 19};
    ScanRange eta{0.0, 1.0, 101};
    double omega = 2.0 * 3.14159265358979323846;
};

struct Figure1Spec {
    std::vector<int> dims{3, 4, 5, 6};
    int eta_points = 201;
};

struct InterfereSpec {
    int m = 1;  // 0-based partner index
    int chi_points = 64;
};

struct ExperimentConfig {
    RunMode mode = RunMode::selftest;
    int dimension = 2;
    int max_dimension = kDefaultMaxDimension;
    int grid_steps = kDefaultGridSteps;
    double nodal_tol = kDefaultNodalTol;
    bool require_defined = false;
    std::optional<std::uint64_t> seed;
    std::vector<int> indices;  // 0-based
    std::optional<StateSpec> state;
    std::optional<PathSpec> path;
    BasisSpec basis;
    std::optional<PseudopureParams> params;
    ScanSpec scan;
    Figure1Spec figure1;
    InterfereSpec interfere;
};

// parse and validate a JSON document; schema problems raise ConfigError with
// the offending field named, physically invalid content raises PhysicsError
ExperimentConfig parse_config(const std::string& json_text);

// canonical JSON re-emission with all defaults filled; parse(emit(c)) == c
std::string emit_config(const ExperimentConfig& cfg);

// FNV-1a over the canonical emission; stamped into every artifact
std::uint64_t config_hash(const ExperimentConfig& cfg);

// realize the domain objects a config describes
SpectralDecomposition build_state(const ExperimentConfig& cfg);
UnitaryPath build_path(const ExperimentConfig& cfg);
OrthonormalBasis build_basis(const ExperimentConfig& cfg);

}  // namespace ogp
