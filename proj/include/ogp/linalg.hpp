// linalg.hpp — complex dense linear algebra, spectral decompositions, and the
// density-operator model shared by every other module.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ogp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultNodalTol = 1e-10;
inline constexpr double kDefaultDegeneracyTol = 1e-9;  // relative to largest |eigenvalue|
inline constexpr double kHermiticityTol = 1e-10;
inline constexpr int kDefaultGridSteps = 10000;
inline constexpr int kDefaultMaxDimension = 64;

// ---------------------------------------------------------------------------
// small helpers
// ---------------------------------------------------------------------------

// max-entry norm, the residual norm used throughout
inline double max_abs(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, double tol = kHermiticityTol) {
    return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

inline double unitarity_residual(const Matrix& u) {
    return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
    return u.rows() == u.cols() && unitarity_residual(u) <= tol;
}

inline bool is_projector(const Matrix& p, double tol = kHermiticityTol) {
    return is_hermitian(p, tol) && max_abs(p * p - p) <= tol;
}

inline Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

inline Matrix ket_projector(const Vector& v) { return v * v.adjoint(); }

// ---------------------------------------------------------------------------
// PhaseResult and the phase functional Φ[z] = z/|z|
// ---------------------------------------------------------------------------

// A phase factor together with the trace it was extracted from.  A vanishing
// trace leaves the phase undefined; that is data, not an error.
struct PhaseResult {
    Complex phase{0.0, 0.0};  // unit modulus when defined, 0 otherwise
    Complex raw_trace{0.0, 0.0};
    double magnitude = 0.0;  // |raw_trace|
    bool defined = false;

    double arg() const { return std::arg(phase); }
};

inline PhaseResult phase_functional(Complex z, double nodal_tol = kDefaultNodalTol) {
    if (!(nodal_tol > 0.0)) throw std::invalid_argument("phase_functional: nodal_tol must be > 0");
    PhaseResult r;
    r.raw_trace = z;
    r.magnitude = std::abs(z);
    r.defined = r.magnitude >= nodal_tol;
    if (r.defined) r.phase = z / r.magnitude;
    return r;
}

// chordal distance |γ_a − γ_b| between phase factors, bounded by 2
inline double phase_distance(Complex a, Complex b) { return std::abs(a - b); }

// ---------------------------------------------------------------------------
// OrthonormalBasis
// ---------------------------------------------------------------------------

// An ordered orthonormal basis |ψ_1>,...,|ψ_N>, stored as the columns of a
// unitary matrix.  Order matters: it fixes the cyclic shift W and hence which
// density operator of the family is "state n".
class OrthonormalBasis {
public:
    static OrthonormalBasis computational(int dim) {
        return OrthonormalBasis(Matrix::Identity(dim, dim), /*validated=*/true);
    }

    static OrthonormalBasis from_columns(Matrix columns, double tol = 1e-12) {
        if (columns.rows() != columns.cols() || columns.rows() < 1)
            throw std::invalid_argument("OrthonormalBasis: columns must form a square matrix");
        if (unitarity_residual(columns) > tol)
            throw std::invalid_argument("OrthonormalBasis: columns are not orthonormal");
        return OrthonormalBasis(std::move(columns), true);
    }

    int dim() const { return static_cast<int>(columns_.rows()); }
    Vector vec(int k) const {
        if (k < 0 || k >= dim()) throw std::out_of_range("OrthonormalBasis: index out of range");
        return columns_.col(k);
    }
    const Matrix& matrix() const { return columns_; }

private:
    OrthonormalBasis(Matrix m, bool) : columns_(std::move(m)) {}
    Matrix columns_;
};

// ---------------------------------------------------------------------------
// SpectralDecomposition
// ---------------------------------------------------------------------------

struct SpectralLevel {
    double eigenvalue = 0.0;
    int multiplicity = 0;
    Matrix projector;  // rank == multiplicity
};

// An operator stored as eigenvalue levels with orthogonal projectors.  The
// density operators of the artifact always live in this form; zero eigenvalues
// are kept as a level so that the projectors resolve the identity.
struct SpectralDecomposition {
    std::vector<SpectralLevel> levels;

    int dim() const {
        return levels.empty() ? 0 : static_cast<int>(levels.front().projector.rows());
    }

    Matrix matrix() const {
        Matrix m = Matrix::Zero(dim(), dim());
        for (const auto& lv : levels) m += lv.eigenvalue * lv.projector;
        return m;
    }

    double trace() const {
        double t = 0.0;
        for (const auto& lv : levels) t += lv.eigenvalue * lv.multiplicity;
        return t;
    }

    int rank_sum() const {
        int r = 0;
        for (const auto& lv : levels) r += lv.multiplicity;
        return r;
    }

    // Σ_k P_k == I
    bool complete(double tol = 1e-10) const {
        Matrix s = Matrix::Zero(dim(), dim());
        for (const auto& lv : levels) s += lv.projector;
        return max_abs(s - Matrix::Identity(dim(), dim())) <= tol;
    }

    // true iff every nonzero level has multiplicity one
    bool nondegenerate(double zero_tol = 1e-12) const {
        for (const auto& lv : levels)
            if (std::abs(lv.eigenvalue) > zero_tol && lv.multiplicity != 1) return false;
        return true;
    }

    // append the orthogonal complement of the levels as an explicit zero level
    SpectralDecomposition with_completed_kernel(double tol = 1e-10) const {
        if (complete(tol)) return *this;
        Matrix s = Matrix::Zero(dim(), dim());
        for (const auto& lv : levels) s += lv.projector;
        SpectralDecomposition out = *this;
        SpectralLevel kernel;
        kernel.eigenvalue = 0.0;
        kernel.multiplicity = dim() - rank_sum();
        kernel.projector = Matrix::Identity(dim(), dim()) - s;
        out.levels.push_back(std::move(kernel));
        return out;
    }

    // conjugate every projector: levels of  V ρ V†
    SpectralDecomposition conjugated(const Matrix& v) const {
        SpectralDecomposition out = *this;
        for (auto& lv : out.levels) lv.projector = v * lv.projector * v.adjoint();
        return out;
    }
};

// validation used by the density-operator entry points
inline void validate_density(const SpectralDecomposition& rho, double tol = 1e-10) {
    if (rho.levels.empty()) throw std::invalid_argument("density: no levels");
    for (const auto& lv : rho.levels) {
        if (lv.eigenvalue < -1e-10)
            throw std::invalid_argument("density: negative eigenvalue " + std::to_string(lv.eigenvalue));
        if (lv.multiplicity < 1) throw std::invalid_argument("density: nonpositive multiplicity");
        if (std::abs(lv.projector.trace().real() - lv.multiplicity) > 1e-8)
            throw std::invalid_argument("density: projector rank does not match multiplicity");
    }
    if (std::abs(rho.trace() - 1.0) > tol)
        throw std::invalid_argument("density: trace " + std::to_string(rho.trace()) + " != 1");
}

// ---------------------------------------------------------------------------
// hermitian_eig — levels of a Hermitian matrix, nearby eigenvalues merged
// ---------------------------------------------------------------------------

inline SpectralDecomposition hermitian_eig(const Matrix& h,
                                           double degeneracy_tol = kDefaultDegeneracyTol,
                                           bool density_input = false) {
    if (h.rows() != h.cols() || h.rows() < 1)
        throw std::invalid_argument("hermitian_eig: matrix must be square and nonempty");
    if (!is_hermitian(h)) throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(h));
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: eigensolver failed");
    const Eigen::VectorXd vals = es.eigenvalues();
    const Matrix vecs = es.eigenvectors();
    const int n = static_cast<int>(vals.size());

    if (density_input) {
        if (vals.minCoeff() < -1e-10)
            throw std::invalid_argument("hermitian_eig: density input has negative eigenvalue");
        if (std::abs(vals.sum() - 1.0) > 1e-10)
            throw std::invalid_argument("hermitian_eig: density input does not have unit trace");
    }

    const double scale = std::max(std::abs(vals(0)), std::abs(vals(n - 1)));
    const double merge = degeneracy_tol * std::max(scale, 1e-300);

    SpectralDecomposition out;
    int start = 0;
    while (start < n) {
        int stop = start + 1;
        while (stop < n && vals(stop) - vals(stop - 1) <= merge) ++stop;
        SpectralLevel lv;
        lv.multiplicity = stop - start;
        lv.eigenvalue = vals.segment(start, lv.multiplicity).mean();
        if (density_input && std::abs(lv.eigenvalue) <= merge) lv.eigenvalue = 0.0;
        const Matrix block = vecs.middleCols(start, lv.multiplicity);
        lv.projector = block * block.adjoint();
        out.levels.push_back(std::move(lv));
        start = stop;
    }
    // descending eigenvalue order; the solver returns ascending
    std::reverse(out.levels.begin(), out.levels.end());
    return out;
}

// ---------------------------------------------------------------------------
// cyclic shift W and density roots
// ---------------------------------------------------------------------------

// W = |ψ_1><ψ_N| + |ψ_N><ψ_{N-1}| + ... + |ψ_2><ψ_1|, i.e. W|ψ_k> = |ψ_{k+1}>
// cyclically.  W^N = I and W has zero diagonal in the defining basis, which is
// what makes the shifted density operators noninterfering.
inline Matrix cyclic_shift_unitary(const OrthonormalBasis& basis) {
    const int n = basis.dim();
    if (n < 2) throw std::invalid_argument("cyclic_shift_unitary: dim must be >= 2");
    Matrix w = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) w += basis.vec((k + 1) % n) * basis.vec(k).adjoint();
    return w;
}

inline Matrix cyclic_shift_unitary(int dim) {
    return cyclic_shift_unitary(OrthonormalBasis::computational(dim));
}

// Σ_k λ_k^{1/l} P_k  (principal real root per level; 0 -> 0)
inline Matrix density_root(const SpectralDecomposition& rho, int l) {
    if (l < 1) throw std::invalid_argument("density_root: order must be >= 1");
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto& lv : rho.levels) {
        if (lv.eigenvalue < -1e-12)
            throw std::invalid_argument("density_root: negative eigenvalue");
        const double v = std::max(lv.eigenvalue, 0.0);
        out += std::pow(v, 1.0 / l) * lv.projector;
    }
    return out;
}

// ---------------------------------------------------------------------------
// exp(-i H dt) for Hermitian H
// ---------------------------------------------------------------------------

inline Matrix expm_antihermitian(const Matrix& h, double dt) {
    if (!is_hermitian(h)) throw std::invalid_argument("expm_antihermitian: generator is not Hermitian");
    const int n = static_cast<int>(h.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    if (n <= 3) es.computeDirect(hermitize(h));
    else es.compute(hermitize(h));
    if (es.info() != Eigen::Success) throw std::runtime_error("expm_antihermitian: eigensolver failed");
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = std::polar(1.0, -es.eigenvalues()(i) * dt);
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace ogp
