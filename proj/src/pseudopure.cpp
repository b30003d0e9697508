#include "ogp/pseudopure.hpp"

#include "ogp/format.hpp"

#include <cmath>

namespace ogp {

PhaseResult gamma1_closed(const PseudopureParams& p, double nodal_tol, PairMember member) {
    p.validate();
    const double n = p.n_dim, e = p.epsilon, eta = p.eta, half = 0.5 * p.solid_angle;
    const Complex z = (n - 2.0) * (1.0 - e) +
                      eta * (1.0 + (n - 1.0) * e) * std::polar(1.0, -half) +
                      eta * (1.0 - e) * std::polar(1.0, half);
    return phase_functional(member == PairMember::n ? z : std::conj(z), nodal_tol);
}

double gamma2_argument(const PseudopureParams& p) {
    p.validate();
    const double n = p.n_dim, e = p.epsilon, eta2 = p.eta * p.eta;
    return (n - 2.0) * (1.0 - e) + (2.0 + (n - 2.0) * e) * (eta2 - 1.0) +
           2.0 * eta2 * std::sqrt((1.0 - e) * (1.0 + (n - 1.0) * e)) * std::cos(p.solid_angle);
}

PhaseResult gamma2_closed(const PseudopureParams& p, double nodal_tol) {
    return phase_functional(Complex(gamma2_argument(p), 0.0), nodal_tol);
}

double l1_nodal_residual(const PseudopureParams& p) {
    p.validate();
    const double n = p.n_dim, e = p.epsilon, eta = p.eta, half = 0.5 * p.solid_angle;
    const double re = (n - 2.0) * (1.0 - e) + eta * (2.0 + (n - 2.0) * e) * std::cos(half);
    const double im = eta * n * e * std::sin(half);
    return re * re + im * im;
}

std::optional<double> l1_nodal_eta(int n_dim, double epsilon) {
    if (n_dim < 3)
        throw std::invalid_argument("l1_nodal_eta: defined for N >= 3 (for N = 2 the nodal set is η = 0)");
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("l1_nodal_eta: epsilon must lie in (0, 1]");
    const double n = n_dim;
    const double eta = (n - 2.0) * (1.0 - epsilon) / (2.0 + (n - 2.0) * epsilon);
    if (eta > 1.0) return std::nullopt;  // exactly when ε < (N−4)/(2(N−2))
    return eta;
}

std::optional<double> l2_nodal_eta_squared(int n_dim, double epsilon, double omega) {
    if (n_dim < 2) throw std::invalid_argument("l2_nodal_eta_squared: N must be >= 2");
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("l2_nodal_eta_squared: epsilon must lie in (0, 1]");
    const double n = n_dim, e = epsilon, c = std::cos(omega);
    const double denom = 2.0 + (n - 2.0) * e + 2.0 * std::sqrt((1.0 - e) * (1.0 + (n - 1.0) * e)) * c;
    if (std::abs(denom) < 1e-14)
        throw std::domain_error("l2_nodal_eta_squared: singular configuration (vanishing denominator)");
    if (c < 0.0) {
        // admissible noise window; empty for N = 2 (negative upper bound)
        const double nm2 = n - 2.0;
        const double upper = (nm2 * nm2 - 4.0 * c * c) / (4.0 * (n - 1.0) * c * c + nm2 * nm2);
        if (e > upper) return std::nullopt;
        if (n_dim >= 3 && e < (n - 4.0) / (2.0 * nm2)) return std::nullopt;
    }
    const double eta2 = (2.0 * (n - 2.0) * e - n + 4.0) / denom;
    if (eta2 < 0.0 || eta2 > 1.0) return std::nullopt;
    return eta2;
}

double f_eta(double eta, int n_dim) {
    if (n_dim < 3) throw std::invalid_argument("f_eta: N must be >= 3");
    const double radicand = eta * (n_dim - 2.0 - eta);
    if (radicand < 0.0) throw std::domain_error("f_eta: negative radicand (eta outside [0, N-2])");
    return eta * eta + eta - 1.0 + (2.0 * eta * eta / (n_dim - 2.0)) * std::sqrt(radicand);
}

std::vector<double> f_eta_roots(int n_dim, double tol, int scan_points) {
    if (scan_points < 2) throw std::invalid_argument("f_eta_roots: need at least two scan points");
    std::vector<double> roots;
    double x0 = 0.0, f0 = f_eta(0.0, n_dim);
    for (int i = 1; i <= scan_points; ++i) {
        const double x1 = static_cast<double>(i) / scan_points;
        const double f1 = f_eta(x1, n_dim);
        if (f0 == 0.0) roots.push_back(x0);
        else if (f0 * f1 < 0.0) {
            double a = x0, b = x1, fa = f0;
            while (b - a > tol) {
                const double mid = 0.5 * (a + b);
                const double fm = f_eta(mid, n_dim);
                if (fm == 0.0) { a = b = mid; break; }
                if (fa * fm < 0.0) b = mid;
                else { a = mid; fa = fm; }
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0) roots.push_back(x0);
    return roots;
}

Figure1Data figure1_data(const std::vector<int>& dims, const std::vector<double>& eta_grid) {
    for (double eta : eta_grid)
        if (eta < 0.0 || eta > 1.0)
            throw std::invalid_argument("figure1_data: eta grid must lie within [0, 1]");
    Figure1Data out;
    for (int n : dims) {
        for (double eta : eta_grid) out.rows.push_back({eta, n, f_eta(eta, n)});
        for (double root : f_eta_roots(n)) out.roots.push_back({n, root});
    }
    return out;
}

std::string figure1_csv(const Figure1Data& data) {
    std::string out;
    for (const auto& r : data.roots)
        out += "# root N=" + std::to_string(r.n_dim) + " eta=" + format_sig17(r.eta) + "\n";
    out += "eta,N,f\n";
    for (const auto& r : data.rows)
        out += format_sig17(r.eta) + "," + std::to_string(r.n_dim) + "," + format_sig17(r.f) + "\n";
    return out;
}

SpectralDecomposition pseudopure_density(int n_dim, double epsilon, int n) {
    if (n_dim < 2) throw std::invalid_argument("pseudopure_density: N must be >= 2");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("pseudopure_density: epsilon must lie in [0, 1]");
    if (n < 0 || n >= n_dim) throw std::invalid_argument("pseudopure_density: pure index out of range");

    const Matrix id = Matrix::Identity(n_dim, n_dim);
    SpectralDecomposition rho;
    if (epsilon == 0.0) {
        rho.levels.push_back({1.0 / n_dim, n_dim, id});
        return rho;
    }
    Matrix pn = Matrix::Zero(n_dim, n_dim);
    pn(n, n) = 1.0;
    rho.levels.push_back({(1.0 + (n_dim - 1.0) * epsilon) / n_dim, 1, pn});
    rho.levels.push_back({(1.0 - epsilon) / n_dim, n_dim - 1, id - pn});
    return rho;
}

}  // namespace ogp
