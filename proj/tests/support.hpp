// support.hpp — shared test fixtures: random paths, and the independent
// oracles (series exponential, Bloch-path solid angle) the derived expected
// values are computed from.

#pragma once

#include "ogp/evolution.hpp"

#include <cmath>
#include <random>

namespace ogp::testing {

inline Matrix random_hermitian(std::mt19937_64& rng, int dim, double scale = 1.0,
                               bool traceless = false) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
    Matrix h = hermitize(g);
    if (traceless) h -= (h.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
    const double norm = max_abs(h);
    if (norm > 0.0) h *= scale / norm;
    return h;
}

inline UnitaryPath random_schedule(std::mt19937_64& rng, int dim, int pieces, double scale = 1.0,
                                   bool traceless = false) {
    std::vector<GeneratorInterval> intervals(pieces);
    for (int i = 0; i < pieces; ++i) {
        intervals[i].t_begin = static_cast<double>(i) / pieces;
        intervals[i].t_end = static_cast<double>(i + 1) / pieces;
        intervals[i].hamiltonian = random_hermitian(rng, dim, scale, traceless);
    }
    return UnitaryPath::schedule(std::move(intervals));
}

// H(t) = H0 + sin(2πt/τ)·H1 + cos(πt/τ)·H2, smooth in t
inline UnitaryPath random_smooth_path(std::mt19937_64& rng, int dim, double scale = 1.0,
                                      double tau = 1.0) {
    const Matrix h0 = random_hermitian(rng, dim, scale);
    const Matrix h1 = random_hermitian(rng, dim, 0.7 * scale);
    const Matrix h2 = random_hermitian(rng, dim, 0.5 * scale);
    return UnitaryPath::generator(dim, tau, [=](double t) {
        return Matrix(h0 + std::sin(2.0 * M_PI * t / tau) * h1 + std::cos(M_PI * t / tau) * h2);
    });
}

// random density with the requested number of distinct levels; multiplicities
// are spread randomly over the remaining dimensions
inline SpectralDecomposition random_density(std::mt19937_64& rng, int dim, int levels) {
    std::uniform_real_distribution<double> uni(0.1, 1.0);
    std::vector<double> probs(levels);
    std::vector<int> mult(levels, 1);
    const int extra = dim - levels;
    for (int i = 0; i < extra; ++i) mult[static_cast<int>(rng() % levels)] += 1;
    double total = 0.0;
    for (int i = 0; i < levels; ++i) {
        probs[i] = uni(rng) * (i + 1);  // spread to keep levels distinct
        total += probs[i] * mult[i];
    }
    const Matrix h = random_hermitian(rng, dim, 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Matrix q = es.eigenvectors();
    Matrix rho = Matrix::Zero(dim, dim);
    int col = 0;
    for (int i = 0; i < levels; ++i)
        for (int r = 0; r < mult[i]; ++r, ++col) rho += (probs[i] / total) * (q.col(col) * q.col(col).adjoint());
    return hermitian_eig(rho, kDefaultDegeneracyTol, /*density_input=*/true);
}

// scaling-and-squaring Taylor series for exp(M); independent of the spectral
// route used by the implementation
inline Matrix taylor_expm(const Matrix& m) {
    int squarings = 0;
    double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    Matrix scaled = m;
    while (norm > 0.5) {
        scaled *= 0.5;
        norm *= 0.5;
        ++squarings;
    }
    const int dim = static_cast<int>(m.rows());
    Matrix result = Matrix::Identity(dim, dim);
    Matrix term = Matrix::Identity(dim, dim);
    for (int k = 1; k <= 24; ++k) {
        term = term * scaled / static_cast<double>(k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

// Geodesically closed solid angle of the Bloch curve traced by `start` under
// the sampled unitaries, from the discrete Pancharatnam product
//   Π = Π_i <φ_i|φ_{i+1}> · <φ_last|φ_0>.
// The geometric phase of the closed polygon is −arg(Π) = −Ω/2, so
// Ω = 2·arg(Π), reported in [0, 4π).  Independent of every
// connection-integral code path.
inline double bloch_path_solid_angle(const std::vector<Matrix>& samples, const Vector& start) {
    Complex product{1.0, 0.0};
    Vector prev = samples.front() * start;
    const Vector first = prev;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const Vector cur = samples[i] * start;
        product *= prev.dot(cur);
        prev = cur;
    }
    product *= prev.dot(first);  // geodesic closure
    double omega = 2.0 * std::arg(product);
    const double period = 4.0 * M_PI;
    omega = std::fmod(omega, period);
    if (omega < 0.0) omega += period;
    return omega;
}

inline double wrap_angle_distance(double a, double b) {
    return std::abs(Complex(std::polar(1.0, a)) - Complex(std::polar(1.0, b)));
}

}  // namespace ogp::testing
