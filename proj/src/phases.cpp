#include "ogp/phases.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ogp {

namespace {

constexpr Complex kImag{0.0, 1.0};

// rho must be diagonal in the basis for the W family construction to apply
void check_diagonal_in_basis(const SpectralDecomposition& rho, const OrthonormalBasis& basis) {
    const Matrix m = basis.matrix().adjoint() * rho.matrix() * basis.matrix();
    Matrix off = m;
    off.diagonal().setZero();
    if (max_abs(off) > 1e-8)
        throw std::invalid_argument("mixed phase: state is not diagonal in the transport basis");
}

std::vector<Matrix> shift_powers(const Matrix& w, int max_power) {
    std::vector<Matrix> pw(max_power + 1);
    pw[0] = Matrix::Identity(w.rows(), w.cols());
    for (int p = 1; p <= max_power; ++p) pw[p] = w * pw[p - 1];
    return pw;
}

}  // namespace

// ---------------------------------------------------------------------------
// IndexTuple
// ---------------------------------------------------------------------------

IndexTuple::IndexTuple(std::vector<int> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) throw std::invalid_argument("IndexTuple: empty");
    for (int j : indices_)
        if (j < 0) throw std::invalid_argument("IndexTuple: negative index");
    std::vector<int> sorted = indices_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("IndexTuple: indices must be pairwise distinct");
    const auto min_it = std::min_element(indices_.begin(), indices_.end());
    std::rotate(indices_.begin(), min_it, indices_.end());
}

void IndexTuple::validate_dim(int dim) const {
    if (order() > dim) throw std::invalid_argument("IndexTuple: order exceeds dimension");
    for (int j : indices_)
        if (j >= dim) throw std::invalid_argument("IndexTuple: index out of range");
}

// ---------------------------------------------------------------------------
// pure phases
// ---------------------------------------------------------------------------

PurePhaseResult pure_offdiagonal_phase(const UnitaryPath& path, const OrthonormalBasis& basis,
                                       const IndexTuple& idx, const TimeGrid& grid, double nodal_tol) {
    if (basis.dim() != path.dim()) throw std::invalid_argument("pure phase: dimension mismatch");
    idx.validate_dim(path.dim());
    if (!(nodal_tol > 0.0)) throw std::invalid_argument("pure phase: nodal_tol must be > 0");

    const Matrix u_par = parallel_transport_unitary(path, basis, grid);
    const int l = idx.order();
    PurePhaseResult out;
    out.link_magnitudes.reserve(l);
    Complex raw{1.0, 0.0};
    bool defined = true;
    for (int a = 0; a < l; ++a) {
        const int ja = idx.at(a);
        const int jb = idx.at((a + 1) % l);
        const Complex amp = (basis.vec(ja).adjoint() * u_par * basis.vec(jb))(0);
        out.link_magnitudes.push_back(std::abs(amp));
        raw *= amp;
        if (std::abs(amp) < nodal_tol) defined = false;
    }
    out.value.raw_trace = raw;
    out.value.magnitude = std::abs(raw);
    out.value.defined = defined;
    out.value.phase = defined ? raw / std::abs(raw) : Complex{0.0, 0.0};
    return out;
}

// ---------------------------------------------------------------------------
// mixed phases
// ---------------------------------------------------------------------------

OrthonormalBasis family_eigenbasis(const SpectralDecomposition& rho) {
    SpectralDecomposition rc = rho.with_completed_kernel();
    std::stable_sort(rc.levels.begin(), rc.levels.end(),
                     [](const SpectralLevel& a, const SpectralLevel& b) {
                         return a.eigenvalue > b.eigenvalue;
                     });
    const int dim = rc.dim();
    Matrix b(dim, dim);
    int col = 0;
    for (const auto& lv : rc.levels) {
        b.middleCols(col, lv.multiplicity) = projector_range_basis(lv.projector, lv.multiplicity);
        col += lv.multiplicity;
    }
    if (col != dim) throw std::invalid_argument("family_eigenbasis: level ranks do not sum to dim");
    return OrthonormalBasis::from_columns(std::move(b), 1e-9);
}

PhaseResult mixed_offdiagonal_phase_nondeg(const UnitaryPath& path, const SpectralDecomposition& rho1,
                                           const OrthonormalBasis& basis, const IndexTuple& idx,
                                           const TimeGrid& grid, double nodal_tol) {
    if (basis.dim() != path.dim() || rho1.dim() != path.dim())
        throw std::invalid_argument("mixed phase: dimension mismatch");
    idx.validate_dim(path.dim());
    const SpectralDecomposition rc = rho1.with_completed_kernel();
    if (!rc.nondegenerate())
        throw std::invalid_argument(
            "mixed phase: nonzero spectrum is degenerate; use the degenerate operation");
    check_diagonal_in_basis(rc, basis);

    const int l = idx.order();
    const Matrix u_par = parallel_transport_unitary(path, basis, grid);
    const Matrix root1 = density_root(rc, l);
    const int max_j = *std::max_element(idx.indices().begin(), idx.indices().end());
    const auto w = shift_powers(cyclic_shift_unitary(basis), max_j);

    Matrix product = Matrix::Identity(path.dim(), path.dim());
    for (int a = 0; a < l; ++a) {
        const int j = idx.at(a);
        product = product * u_par * (w[j] * root1 * w[j].adjoint());
    }
    return phase_functional(product.trace(), nodal_tol);
}

PhaseResult mixed_offdiagonal_phase_nondeg(const UnitaryPath& path, const SpectralDecomposition& rho1,
                                           const IndexTuple& idx, const TimeGrid& grid,
                                           double nodal_tol) {
    return mixed_offdiagonal_phase_nondeg(path, rho1, family_eigenbasis(rho1), idx, grid, nodal_tol);
}

PhaseResult mixed_offdiagonal_phase_degenerate(const UnitaryPath& path,
                                               const SpectralDecomposition& rho1,
                                               const OrthonormalBasis& basis, const IndexTuple& idx,
                                               const TimeGrid& grid, double nodal_tol) {
    if (basis.dim() != path.dim() || rho1.dim() != path.dim())
        throw std::invalid_argument("mixed phase: dimension mismatch");
    idx.validate_dim(path.dim());
    const SpectralDecomposition rc = rho1.with_completed_kernel();
    check_diagonal_in_basis(rc, basis);

    const int l = idx.order();
    const int max_j = *std::max_element(idx.indices().begin(), idx.indices().end());
    const auto w = shift_powers(cyclic_shift_unitary(basis), max_j);

    // one spectral family per distinct index, transported in a single walk
    std::vector<SpectralDecomposition> states;
    states.reserve(idx.order());
    for (int a = 0; a < l; ++a) states.push_back(rc.conjugated(w[idx.at(a)]));
    const auto families = build_parallel_families(path, states, grid);

    Matrix product = Matrix::Identity(path.dim(), path.dim());
    for (int a = 0; a < l; ++a) {
        const Matrix root = density_root(states[a], l);
        product = product * families[a].u * root;
    }
    return phase_functional(product.trace(), nodal_tol);
}

PhaseResult mixed_offdiagonal_phase_degenerate(const UnitaryPath& path,
                                               const SpectralDecomposition& rho1, const IndexTuple& idx,
                                               const TimeGrid& grid, double nodal_tol) {
    return mixed_offdiagonal_phase_degenerate(path, rho1, family_eigenbasis(rho1), idx, grid,
                                              nodal_tol);
}

double noninterference_check(const SpectralDecomposition& rho1, const OrthonormalBasis& basis, int j1,
                             int j2) {
    if (j1 == j2) throw std::invalid_argument("noninterference_check: indices must differ");
    const int n = basis.dim();
    const auto mod = [n](int p) { return ((p % n) + n) % n; };
    const auto w = shift_powers(cyclic_shift_unitary(basis), n);
    const Matrix rho_j1 = w[mod(j1)] * rho1.matrix() * w[mod(j1)].adjoint();
    return std::abs((w[mod(j2 - j1)] * rho_j1).trace());
}

double noninterference_check(const SpectralDecomposition& rho1, int j1, int j2) {
    return noninterference_check(rho1, family_eigenbasis(rho1), j1, j2);
}

// ---------------------------------------------------------------------------
// gauge machinery
// ---------------------------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

// smooth scalar gauge angle with θ(0) = 0 and θ(τ) generically nonzero; the
// oscillatory amplitudes stay small so finite-difference recovery on the
// default grid remains well inside the 1e-7 budget
struct GaugeAngle {
    double linear = 0.0, a1 = 0.0, a2 = 0.0, tau = 1.0;

    template <typename Rng>
    static GaugeAngle random(Rng& rng, double tau) {
        std::uniform_real_distribution<double> big(-2.0, 2.0), small(-0.1, 0.1);
        return GaugeAngle{big(rng), small(rng), small(rng), tau};
    }

    double operator()(double t) const {
        const double x = t / tau;
        return linear * x + a1 * std::sin(2.0 * M_PI * x) + a2 * std::sin(M_PI * x);
    }
};

UnitaryPath gauged_samples(const UnitaryPath& path, const TimeGrid& grid,
                           const std::function<Matrix(double)>& gauge_at) {
    const auto us = evolve(path, grid);
    std::vector<Matrix> gauged(us.size());
    gauged[0] = Matrix::Identity(path.dim(), path.dim());
    for (std::size_t i = 1; i < us.size(); ++i) gauged[i] = us[i] * gauge_at(grid.node(i));
    return UnitaryPath::samples(grid.nodes(), std::move(gauged));
}

}  // namespace

UnitaryPath apply_random_diagonal_gauge(const UnitaryPath& path, const OrthonormalBasis& basis,
                                        const TimeGrid& grid, std::uint64_t seed) {
    if (basis.dim() != path.dim()) throw std::invalid_argument("diagonal gauge: dimension mismatch");
    std::mt19937_64 rng(seed);
    std::vector<GaugeAngle> angles;
    for (int k = 0; k < path.dim(); ++k) angles.push_back(GaugeAngle::random(rng, path.duration()));
    const Matrix& b = basis.matrix();
    return gauged_samples(path, grid, [&](double t) {
        Vector d(path.dim());
        for (int k = 0; k < path.dim(); ++k) d(k) = std::polar(1.0, angles[k](t));
        return Matrix(b * d.asDiagonal() * b.adjoint());
    });
}

std::vector<Matrix> common_refinement(const std::vector<SpectralDecomposition>& states) {
    if (states.empty()) throw std::invalid_argument("common_refinement: no states");
    const int dim = states.front().dim();
    std::vector<Matrix> cells{Matrix::Identity(dim, dim)};
    for (const auto& state : states) {
        const auto complete = state.with_completed_kernel();
        std::vector<Matrix> next;
        for (const auto& cell : cells) {
            for (const auto& lv : complete.levels) {
                Matrix piece = cell * lv.projector;
                const double r = piece.trace().real();
                if (r < 0.5) continue;
                if (!is_projector(piece, 1e-8))
                    throw std::invalid_argument(
                        "common_refinement: level projectors of the states do not commute");
                next.push_back(std::move(piece));
            }
        }
        cells = std::move(next);
    }
    Matrix sum = Matrix::Zero(dim, dim);
    for (const auto& c : cells) sum += c;
    if (max_abs(sum - Matrix::Identity(dim, dim)) > 1e-8)
        throw std::invalid_argument("common_refinement: cells do not resolve the identity");
    return cells;
}

UnitaryPath apply_random_block_gauge(const UnitaryPath& path,
                                     const std::vector<SpectralDecomposition>& states,
                                     const TimeGrid& grid, std::uint64_t seed) {
    const auto cells = common_refinement(states);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    struct BlockGauge {
        Matrix range;       // dim x m
        Matrix generator;   // m x m Hermitian, unit scale
        GaugeAngle angle;   // time profile, θ(0) = 0
    };
    std::vector<BlockGauge> blocks;
    for (const auto& cell : cells) {
        BlockGauge bg;
        const int m = static_cast<int>(std::lround(cell.trace().real()));
        bg.range = projector_range_basis(cell, m);
        Matrix g(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
        bg.generator = hermitize(g);
        const double scale = std::max(max_abs(bg.generator), 1e-12);
        bg.generator /= scale;
        bg.angle = GaugeAngle::random(rng, path.duration());
        blocks.push_back(std::move(bg));
    }

    const int dim = path.dim();
    return gauged_samples(path, grid, [&](double t) {
        Matrix v = Matrix::Zero(dim, dim);
        for (const auto& bg : blocks)
            v += bg.range * expm_antihermitian(bg.generator, bg.angle(t)) * bg.range.adjoint();
        return v;
    });
}

namespace {

template <typename Compute>
GaugeReport run_gauge_trials(const Compute& compute,
                             const std::function<UnitaryPath(std::uint64_t)>& gauged, int n_trials,
                             std::uint64_t seed) {
    if (n_trials < 1) throw std::invalid_argument("gauge report: need at least one trial");
    GaugeReport report;
    report.trials = n_trials;
    const PhaseResult reference = compute(std::nullopt);
    for (int trial = 0; trial < n_trials; ++trial) {
        const UnitaryPath tilted = gauged(derive_seed(seed, trial));
        const PhaseResult value = compute(tilted);
        if (!reference.defined || !value.defined) {
            ++report.excluded;
            continue;
        }
        report.max_deviation = std::max(report.max_deviation, phase_distance(reference.phase, value.phase));
    }
    return report;
}

}  // namespace

GaugeReport pure_gauge_invariance_report(const UnitaryPath& path, const OrthonormalBasis& basis,
                                         const IndexTuple& idx, const TimeGrid& grid, double nodal_tol,
                                         int n_trials, std::uint64_t seed) {
    auto compute = [&](const std::optional<UnitaryPath>& tilted) {
        return pure_offdiagonal_phase(tilted ? *tilted : path, basis, idx, grid, nodal_tol).value;
    };
    auto gauged = [&](std::uint64_t s) { return apply_random_diagonal_gauge(path, basis, grid, s); };
    return run_gauge_trials(compute, gauged, n_trials, seed);
}

GaugeReport nondeg_gauge_invariance_report(const UnitaryPath& path, const SpectralDecomposition& rho1,
                                           const OrthonormalBasis& basis, const IndexTuple& idx,
                                           const TimeGrid& grid, double nodal_tol, int n_trials,
                                           std::uint64_t seed) {
    auto compute = [&](const std::optional<UnitaryPath>& tilted) {
        return mixed_offdiagonal_phase_nondeg(tilted ? *tilted : path, rho1, basis, idx, grid,
                                              nodal_tol);
    };
    auto gauged = [&](std::uint64_t s) { return apply_random_diagonal_gauge(path, basis, grid, s); };
    return run_gauge_trials(compute, gauged, n_trials, seed);
}

GaugeReport degenerate_gauge_invariance_report(const UnitaryPath& path,
                                               const SpectralDecomposition& rho1,
                                               const OrthonormalBasis& basis, const IndexTuple& idx,
                                               const TimeGrid& grid, double nodal_tol, int n_trials,
                                               std::uint64_t seed) {
    const SpectralDecomposition rc = rho1.with_completed_kernel();
    const int max_j = *std::max_element(idx.indices().begin(), idx.indices().end());
    const auto w = shift_powers(cyclic_shift_unitary(basis), max_j);
    std::vector<SpectralDecomposition> states;
    for (int a = 0; a < idx.order(); ++a) states.push_back(rc.conjugated(w[idx.at(a)]));

    auto compute = [&](const std::optional<UnitaryPath>& tilted) {
        return mixed_offdiagonal_phase_degenerate(tilted ? *tilted : path, rho1, basis, idx, grid,
                                                  nodal_tol);
    };
    auto gauged = [&](std::uint64_t s) { return apply_random_block_gauge(path, states, grid, s); };
    return run_gauge_trials(compute, gauged, n_trials, seed);
}

}  // namespace ogp
