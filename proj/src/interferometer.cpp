#include "ogp/interferometer.hpp"

#include <cmath>

namespace ogp {

namespace {

void check_operators(const Purification& psi, const Matrix& u_s, const Matrix& u_a, const Matrix& v_s,
                     const Matrix& v_a) {
    if (psi.amplitudes.size() != static_cast<Eigen::Index>(psi.system_dim) * psi.ancilla_dim)
        throw std::invalid_argument("interferometer: purification amplitudes have the wrong length");
    const auto expect = [](const Matrix& m, int d, const char* name) {
        if (m.rows() != d || m.cols() != d)
            throw std::invalid_argument(std::string("interferometer: ") + name + " has wrong dimension");
        if (!is_unitary(m))
            throw std::invalid_argument(std::string("interferometer: ") + name + " is not unitary");
    };
    expect(u_s, psi.system_dim, "U_s");
    expect(v_s, psi.system_dim, "V_s");
    expect(u_a, psi.ancilla_dim, "U_a");
    expect(v_a, psi.ancilla_dim, "V_a");
}

// (X ⊗ Y)|v> with v indexed s·Na + a, via the N×N reshape: X · M · Yᵀ
Vector apply_kron(const Matrix& x, const Matrix& y, const Vector& v, int ns, int na) {
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        v.data(), ns, na);
    const Matrix res = x * m * y.transpose();
    Vector out(ns * na);
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a) out(s * na + a) = res(s, a);
    return out;
}

}  // namespace

Matrix Purification::partial_trace_ancilla() const {
    Matrix rho = Matrix::Zero(system_dim, system_dim);
    for (int s = 0; s < system_dim; ++s)
        for (int t = 0; t < system_dim; ++t) {
            Complex sum{0.0, 0.0};
            for (int a = 0; a < ancilla_dim; ++a)
                sum += amplitudes(s * ancilla_dim + a) * std::conj(amplitudes(t * ancilla_dim + a));
            rho(s, t) = sum;
        }
    return rho;
}

Purification purify_pseudopure(int n_dim, double epsilon, int n) {
    if (n_dim < 2) throw std::invalid_argument("purify_pseudopure: N must be >= 2");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("purify_pseudopure: epsilon must lie in [0, 1]");
    if (n < 0 || n >= n_dim) throw std::invalid_argument("purify_pseudopure: pure index out of range");
    Purification psi;
    psi.system_dim = n_dim;
    psi.ancilla_dim = n_dim;
    psi.amplitudes = Vector::Zero(n_dim * n_dim);
    const double background = std::sqrt((1.0 - epsilon) / n_dim);
    for (int k = 0; k < n_dim; ++k)
        psi.amplitudes(k * n_dim + k) =
            (k == n) ? std::sqrt(epsilon + (1.0 - epsilon) / n_dim) : background;
    return psi;
}

std::vector<double> uniform_chi_grid(int points) {
    if (points < 2) throw std::invalid_argument("uniform_chi_grid: need at least two points");
    std::vector<double> chis(points);
    for (int i = 0; i < points; ++i) chis[i] = 2.0 * M_PI * i / points;
    return chis;
}

std::vector<InterferogramPoint> interferogram(const Purification& psi, const Matrix& u_s,
                                              const Matrix& u_a, const Matrix& v_s, const Matrix& v_a,
                                              const std::vector<double>& chi_grid) {
    check_operators(psi, u_s, u_a, v_s, v_a);
    const Vector arm_u = apply_kron(u_s, u_a, psi.amplitudes, psi.system_dim, psi.ancilla_dim);
    const Vector arm_v = apply_kron(v_s, v_a, psi.amplitudes, psi.system_dim, psi.ancilla_dim);
    std::vector<InterferogramPoint> out;
    out.reserve(chi_grid.size());
    for (double chi : chi_grid) {
        const Vector superposed = std::polar(1.0, chi) * arm_u + arm_v;
        out.push_back({chi, superposed.squaredNorm()});
    }
    return out;
}

Complex interference_cross_term(const Purification& psi, const Matrix& u_s, const Matrix& u_a,
                                const Matrix& v_s, const Matrix& v_a) {
    check_operators(psi, u_s, u_a, v_s, v_a);
    const Vector arm_u = apply_kron(u_s, u_a, psi.amplitudes, psi.system_dim, psi.ancilla_dim);
    const Vector arm_v = apply_kron(v_s, v_a, psi.amplitudes, psi.system_dim, psi.ancilla_dim);
    return arm_u.dot(arm_v);  // <U arm | V arm>
}

InterferogramFit fit_interferogram(const std::vector<InterferogramPoint>& points) {
    if (points.size() < 8) throw std::invalid_argument("fit_interferogram: need at least 8 points");
    double lo = points.front().chi, hi = points.front().chi;
    for (const auto& p : points) {
        lo = std::min(lo, p.chi);
        hi = std::max(hi, p.chi);
    }
    if (hi - lo < 0.9 * 2.0 * M_PI)
        throw std::invalid_argument("fit_interferogram: points must span at least one period");

    // linear least squares for I = A + p·cosχ + q·sinχ
    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (const auto& pt : points) {
        const Eigen::Vector3d row(1.0, std::cos(pt.chi), std::sin(pt.chi));
        normal += row * row.transpose();
        rhs += pt.intensity * row;
    }
    const Eigen::Vector3d sol = normal.ldlt().solve(rhs);
    InterferogramFit fit;
    fit.mean = sol(0);
    const double amplitude = std::hypot(sol(1), sol(2));
    fit.visibility = (fit.mean != 0.0) ? amplitude / fit.mean : 0.0;
    fit.defined = std::abs(fit.visibility) >= 1e-12 && fit.mean > 0.0;
    fit.shift = fit.defined ? std::atan2(sol(2), sol(1)) : 0.0;
    return fit;
}

std::vector<InterferogramPoint> conditional_circuit_readout(const Purification& psi, const Matrix& u_s,
                                                            const Matrix& u_a, const Matrix& v_s,
                                                            const Matrix& v_a,
                                                            const std::vector<double>& chi_grid) {
    check_operators(psi, u_s, u_a, v_s, v_a);
    const int ns = psi.system_dim, na = psi.ancilla_dim;
    const int block = ns * na;

    // auxiliary-pair Hadamard mixing acting on the four state chunks
    const auto hadamard_pair = [&](std::vector<Vector>& chunks) {
        std::vector<Vector> mixed(4, Vector::Zero(block));
        for (int out = 0; out < 4; ++out)
            for (int in = 0; in < 4; ++in) {
                const int x = out >> 1, y = out & 1, xp = in >> 1, yp = in & 1;
                const double sign = ((x & xp) ^ (y & yp)) ? -1.0 : 1.0;
                mixed[out] += 0.5 * sign * chunks[in];
            }
        chunks = std::move(mixed);
    };

    std::vector<InterferogramPoint> out;
    out.reserve(chi_grid.size());
    for (double chi : chi_grid) {
        std::vector<Vector> chunks(4, Vector::Zero(block));
        chunks[0] = psi.amplitudes;  // |Γ> = |0>|0>⊗|Ψ>
        hadamard_pair(chunks);
        for (int c = 0; c < 4; ++c) {
            const bool upper = (c >> 1) == 0;  // first auxiliary qubit selects the arm
            chunks[c] = upper ? Vector(std::polar(1.0, chi) * apply_kron(u_s, u_a, chunks[c], ns, na))
                              : apply_kron(v_s, v_a, chunks[c], ns, na);
        }
        hadamard_pair(chunks);
        out.push_back({chi, chunks[0].squaredNorm()});
    }
    return out;
}

TwoParticleOperators pseudopure_measurement_operators(int n_dim, int n, int m,
                                                      const Matrix& u_parallel) {
    if (n == m) throw std::invalid_argument("pseudopure_measurement_operators: n and m must differ");
    if (n < 0 || m < 0 || n >= n_dim || m >= n_dim)
        throw std::invalid_argument("pseudopure_measurement_operators: indices out of range");
    const int shift = ((m - n) % n_dim + n_dim) % n_dim;
    const Matrix w = cyclic_shift_unitary(n_dim);
    Matrix w_pow = Matrix::Identity(n_dim, n_dim);
    for (int p = 0; p < shift; ++p) w_pow = w * w_pow;
    TwoParticleOperators ops;
    ops.u_s = w_pow;
    ops.u_a = w_pow;
    ops.v_s = u_parallel;
    ops.v_a = u_parallel.transpose();
    return ops;
}

}  // namespace ogp
