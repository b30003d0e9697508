// phases.hpp — off-diagonal geometric phase factors for pure, nondegenerate
// mixed, and degenerate mixed states, plus gauge-invariance diagnostics.

#pragma once

#include "ogp/evolution.hpp"

#include <cstdint>
#include <vector>

namespace ogp {

// ---------------------------------------------------------------------------
// IndexTuple
// ---------------------------------------------------------------------------

// Cyclically ordered distinct state indices (j_1, ..., j_l), 0-based.  Config
// files and the CLI use 1-based indices; the shift happens at parsing.  Tuples
// are canonicalized by cyclic rotation (smallest index first): the phase is
// invariant under rotation by trace cyclicity, and canonicalizing makes that
// hold bit-exactly.
class IndexTuple {
public:
    explicit IndexTuple(std::vector<int> indices);

    int order() const { return static_cast<int>(indices_.size()); }
    const std::vector<int>& indices() const { return indices_; }
    int at(int a) const { return indices_.at(a); }

    void validate_dim(int dim) const;

private:
    std::vector<int> indices_;
};

// ---------------------------------------------------------------------------
// phase operations
// ---------------------------------------------------------------------------

struct PurePhaseResult {
    PhaseResult value;
    std::vector<double> link_magnitudes;  // |<ψ_{j_a}|U^∥(τ)|ψ_{j_{a+1}}>| per link
};

// l-th order pure-state phase: ∏_a Φ[<ψ_{j_a}|U^∥(τ)|ψ_{j_{a+1}}>]; undefined
// as soon as any link amplitude falls below nodal_tol
PurePhaseResult pure_offdiagonal_phase(const UnitaryPath& path, const OrthonormalBasis& basis,
                                       const IndexTuple& idx, const TimeGrid& grid,
                                       double nodal_tol = kDefaultNodalTol);

// ordered eigenbasis of a state: descending eigenvalue, deterministic basis
// within each level; defines the cyclic shift W of the state family
OrthonormalBasis family_eigenbasis(const SpectralDecomposition& rho);

// Φ[Tr ∏_a U^∥(τ) ρ_{j_a}^{1/l}] with ρ_n = W^n ρ_1 W†^n; requires every
// nonzero eigenvalue of rho1 nondegenerate
PhaseResult mixed_offdiagonal_phase_nondeg(const UnitaryPath& path, const SpectralDecomposition& rho1,
                                           const OrthonormalBasis& basis, const IndexTuple& idx,
                                           const TimeGrid& grid, double nodal_tol = kDefaultNodalTol);
PhaseResult mixed_offdiagonal_phase_nondeg(const UnitaryPath& path, const SpectralDecomposition& rho1,
                                           const IndexTuple& idx, const TimeGrid& grid,
                                           double nodal_tol = kDefaultNodalTol);

// Φ[Tr ∏_a U(τ) V_{j_a}^∥(τ) ρ_{j_a}^{1/l}]; degenerate levels transported
// blockwise, reduces to the nondegenerate operation when all m_k = 1
PhaseResult mixed_offdiagonal_phase_degenerate(const UnitaryPath& path,
                                               const SpectralDecomposition& rho1,
                                               const OrthonormalBasis& basis, const IndexTuple& idx,
                                               const TimeGrid& grid,
                                               double nodal_tol = kDefaultNodalTol);
PhaseResult mixed_offdiagonal_phase_degenerate(const UnitaryPath& path,
                                               const SpectralDecomposition& rho1, const IndexTuple& idx,
                                               const TimeGrid& grid,
                                               double nodal_tol = kDefaultNodalTol);

// |Tr(W^{j2-j1} ρ_{j1})|; vanishes for states diagonal in the W basis
double noninterference_check(const SpectralDecomposition& rho1, const OrthonormalBasis& basis, int j1,
                             int j2);
double noninterference_check(const SpectralDecomposition& rho1, int j1, int j2);

// ---------------------------------------------------------------------------
// gauge machinery
// ---------------------------------------------------------------------------

// U(t) -> U(t) Σ_k e^{iθ_k(t)} |ψ_k><ψ_k| with random smooth θ_k, θ_k(0) = 0,
// returned as a sampled path on the grid nodes
UnitaryPath apply_random_diagonal_gauge(const UnitaryPath& path, const OrthonormalBasis& basis,
                                        const TimeGrid& grid, std::uint64_t seed);

// U(t) -> U(t) V(t) with V(t) a random smooth unitary, block-diagonal on the
// common refinement of the states' level projectors, V(0) = I
UnitaryPath apply_random_block_gauge(const UnitaryPath& path,
                                     const std::vector<SpectralDecomposition>& states,
                                     const TimeGrid& grid, std::uint64_t seed);

// common refinement of commuting level partitions (joint eigenprojectors)
std::vector<Matrix> common_refinement(const std::vector<SpectralDecomposition>& states);

struct GaugeReport {
    double max_deviation = 0.0;  // chordal distance, max over defined trials
    int excluded = 0;            // trials with an undefined phase on either side
    int trials = 0;
};

GaugeReport pure_gauge_invariance_report(const UnitaryPath& path, const OrthonormalBasis& basis,
                                         const IndexTuple& idx, const TimeGrid& grid, double nodal_tol,
                                         int n_trials, std::uint64_t seed);

GaugeReport nondeg_gauge_invariance_report(const UnitaryPath& path, const SpectralDecomposition& rho1,
                                           const OrthonormalBasis& basis, const IndexTuple& idx,
                                           const TimeGrid& grid, double nodal_tol, int n_trials,
                                           std::uint64_t seed);

GaugeReport degenerate_gauge_invariance_report(const UnitaryPath& path,
                                               const SpectralDecomposition& rho1,
                                               const OrthonormalBasis& basis, const IndexTuple& idx,
                                               const TimeGrid& grid, double nodal_tol, int n_trials,
                                               std::uint64_t seed);

// deterministic per-trial seed derivation (splitmix64)
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ogp
