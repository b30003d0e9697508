// evolution.hpp — one-parameter unitary families U(t), connection integrals,
// parallel-transporting unitaries, and time-ordered subspace exponentials.

#pragma once

#include "ogp/linalg.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace ogp {

// ---------------------------------------------------------------------------
// TimeGrid
// ---------------------------------------------------------------------------

// Discretization nodes 0 = t_0 < ... < t_n = τ.
class TimeGrid {
public:
    static TimeGrid uniform(int n_steps, double duration) {
        if (n_steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
        if (!(duration > 0.0)) throw std::invalid_argument("TimeGrid: duration must be > 0");
        std::vector<double> nodes(n_steps + 1);
        for (int i = 0; i <= n_steps; ++i) nodes[i] = duration * i / n_steps;
        nodes.front() = 0.0;
        nodes.back() = duration;
        return TimeGrid(std::move(nodes));
    }

    static TimeGrid from_nodes(std::vector<double> nodes) {
        if (nodes.size() < 2) throw std::invalid_argument("TimeGrid: need at least two nodes");
        if (nodes.front() != 0.0) throw std::invalid_argument("TimeGrid: first node must be 0");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1]))
                throw std::invalid_argument("TimeGrid: nodes must increase strictly");
        return TimeGrid(std::move(nodes));
    }

    int steps() const { return static_cast<int>(nodes_.size()) - 1; }
    double node(int i) const { return nodes_.at(i); }
    double duration() const { return nodes_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }

private:
    explicit TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {}
    std::vector<double> nodes_;
};

// ---------------------------------------------------------------------------
// UnitaryPath
// ---------------------------------------------------------------------------

struct GeneratorInterval {
    double t_begin = 0.0;
    double t_end = 0.0;
    Matrix hamiltonian;  // constant Hermitian generator on [t_begin, t_end]
};

// A path { U(t) | t ∈ [0,τ], U(0) = I }, given either by a generator schedule
// (piecewise-constant or a smooth H(t)) or by a grid of sampled unitaries.
class UnitaryPath {
public:
    using Generator = std::function<Matrix(double)>;

    // representation (a), piecewise-constant generators tiling [0, τ]
    static UnitaryPath schedule(std::vector<GeneratorInterval> intervals);

    // representation (a), smooth generator t -> H(t) on [0, duration]
    static UnitaryPath generator(int dim, double duration, Generator h);

    // representation (b); evaluation grids must be subsets of `times` unless
    // geodesic interpolation is opted in
    static UnitaryPath samples(std::vector<double> times, std::vector<Matrix> unitaries,
                               bool allow_interpolation = false);

    int dim() const { return dim_; }
    double duration() const { return duration_; }
    bool has_generator() const { return !sampled_; }
    bool interpolating() const { return interpolate_; }

    // Hermitian generator H(t); only for representation (a)
    Matrix generator_at(double t) const;

    // index of the schedule interval containing [t0, t1], or -1 when the path
    // is not piecewise constant there (enables cached step exponentials)
    int constant_interval(double t0, double t1) const;
    const Matrix& interval_hamiltonian(int index) const { return intervals_.at(index).hamiltonian; }

    // sorted schedule breakpoints strictly inside (a, b)
    void breakpoints_in(double a, double b, std::vector<double>& out) const;

    const std::vector<double>& sample_times() const { return sample_times_; }
    const std::vector<Matrix>& sample_unitaries() const { return sample_unitaries_; }

    // sampled representation only: U at time t, by node lookup or geodesic
    // interpolation exp(s·log(U_{i+1} U_i†))·U_i when enabled
    Matrix sample_at(double t) const;

private:
    UnitaryPath() = default;

    int dim_ = 0;
    double duration_ = 0.0;
    bool sampled_ = false;
    bool interpolate_ = false;

    // representation (a)
    std::vector<GeneratorInterval> intervals_;  // empty when generator_ is set
    Generator generator_;

    // representation (b)
    std::vector<double> sample_times_;
    std::vector<Matrix> sample_unitaries_;
};

// ---------------------------------------------------------------------------
// grid walk
// ---------------------------------------------------------------------------

// Per-step data handed to accumulating observers while the path is integrated
// once over a grid.  The connection A = U†U̇ is evaluated at the step midpoint,
// analytically as −iU†HU for generator paths and by symmetric finite
// differences averaged over the step endpoints for sampled ones.
struct PathStep {
    double t_mid = 0.0;
    double dt = 0.0;
    const Matrix& connection;  // anti-Hermitian
};

using StepObserver = std::function<void(const PathStep&)>;

// Integrates the path over the grid, invoking the observer once per step, and
// returns U(τ).  All transport machinery is built on this single walk.
Matrix walk_path(const UnitaryPath& path, const TimeGrid& grid, const StepObserver& observe);

// sampled unitaries at every grid node (midpoint-rule product integration for
// generator paths; node lookup / geodesic interpolation for sampled ones)
std::vector<Matrix> evolve(const UnitaryPath& path, const TimeGrid& grid);

// quadrature rule for connection integrals; midpoint is the default scheme,
// trapezoid exists as an independent cross-check
enum class Quadrature { midpoint, trapezoid };

// d_k(τ) = exp(−∫_0^τ <ψ_k|U†U̇|ψ_k> dt), a unit-modulus phase factor
Complex connection_factor(const UnitaryPath& path, const OrthonormalBasis& basis, int k,
                          const TimeGrid& grid, Quadrature rule = Quadrature::midpoint);

// U^∥(τ) = U(τ) Σ_k d_k(τ) |ψ_k><ψ_k|
Matrix parallel_transport_unitary(const UnitaryPath& path, const OrthonormalBasis& basis,
                                  const TimeGrid& grid);

// α^∥(τ) = P · T exp(−∫_0^τ P U†U̇ P dt) · P, a partial isometry on range(P)
Matrix subspace_parallel_transport(const UnitaryPath& path, const Matrix& projector,
                                   const TimeGrid& grid);

// parallel-transporting family for one spectrally-decomposed state:
// V^∥(τ) = Σ_k α_k^∥(τ) over the state's levels (projectors must resolve the
// identity; complete the kernel first for rank-deficient states), and
// U^∥(τ) = U(τ) V^∥(τ).
struct ParallelFamily {
    Matrix v;       // V^∥(τ), unitary
    Matrix u;       // U(τ) V^∥(τ)
    Matrix u_final; // U(τ)
};

ParallelFamily build_parallel_family(const UnitaryPath& path, const SpectralDecomposition& rho,
                                     const TimeGrid& grid);

// shared-walk variant: one grid traversal serving several states at once
std::vector<ParallelFamily> build_parallel_families(const UnitaryPath& path,
                                                    const std::vector<SpectralDecomposition>& rhos,
                                                    const TimeGrid& grid);

// orthonormal columns spanning range(P); deterministic for a given projector
Matrix projector_range_basis(const Matrix& projector, int rank);

}  // namespace ogp
