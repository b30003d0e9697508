// pseudopure.hpp — closed-form l=1 and l=2 phases for pseudopure state pairs,
// their nodal structure, and the common-nodal function f(η, N).

#pragma once

#include "ogp/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ogp {

// the tuple (N, ε, η, Ω): Hilbert dimension, pseudopure purity, pure-state
// visibility, and geodesically closed solid angle (4π-periodic in formulas)
struct PseudopureParams {
    int n_dim = 2;
    double epsilon = 1.0;
    double eta = 1.0;
    double solid_angle = 0.0;

    void validate() const {
        if (n_dim < 2) throw std::invalid_argument("PseudopureParams: N must be >= 2");
        if (!(epsilon > 0.0) || epsilon > 1.0)
            throw std::invalid_argument("PseudopureParams: epsilon must lie in (0, 1]");
        if (eta < 0.0 || eta > 1.0)
            throw std::invalid_argument("PseudopureParams: eta must lie in [0, 1]");
    }
};

// which member of the pseudopure pair (ρ_n, ρ_m) the phase refers to; the two
// l=1 phases are complex conjugates of each other
enum class PairMember { n, m };

// γ^{(1)} = Φ[(N−2)(1−ε) + η(1+(N−1)ε)e^{−iΩ/2} + η(1−ε)e^{iΩ/2}].  The
// equivalent arctan form only holds on the principal branch (positive real
// part); the complex argument is the defining expression and is used here.
PhaseResult gamma1_closed(const PseudopureParams& p, double nodal_tol = kDefaultNodalTol,
                          PairMember member = PairMember::n);

// γ^{(2)} = Φ[(N−2)(1−ε) + (2+(N−2)ε)(η²−1) + 2η²√((1−ε)(1+(N−1)ε))·cosΩ],
// exactly ±1 whenever defined
PhaseResult gamma2_closed(const PseudopureParams& p, double nodal_tol = kDefaultNodalTol);
double gamma2_argument(const PseudopureParams& p);

// left-hand side of the l=1 nodal condition; zero characterizes nodal points
double l1_nodal_residual(const PseudopureParams& p);

// nodal visibility η = (N−2)(1−ε)/(2+(N−2)ε) at Ω = 2π (N >= 3); nullopt when
// η > 1, i.e. exactly when ε < (N−4)/(2(N−2))
std::optional<double> l1_nodal_eta(int n_dim, double epsilon);

// nodal η² of the l=2 surface; nullopt outside [0,1] or, for cosΩ < 0,
// outside the admissible noise window
std::optional<double> l2_nodal_eta_squared(int n_dim, double epsilon, double omega);

// f(η,N) = η² + η − 1 + (2η²/(N−2))√(η(N−2−η)); zeros are the common nodal
// points of γ^{(1)} and γ^{(2)}
double f_eta(double eta, int n_dim);

// all sign-change roots of f(·,N) on [0,1] at scan resolution, refined by
// bisection to `tol` (the bracketing endpoints f(0)=−1 < 0 < f(1) guarantee
// at least one)
std::vector<double> f_eta_roots(int n_dim, double tol = 1e-13, int scan_points = 10000);

struct Figure1Row {
    double eta = 0.0;
    int n_dim = 0;
    double f = 0.0;
};

struct Figure1Root {
    int n_dim = 0;
    double eta = 0.0;
};

struct Figure1Data {
    std::vector<Figure1Row> rows;
    std::vector<Figure1Root> roots;
};

Figure1Data figure1_data(const std::vector<int>& dims, const std::vector<double>& eta_grid);

// CSV with header `eta,N,f`, one `# root N=<n> eta=<value>` comment per root,
// 17 significant digits
std::string figure1_csv(const Figure1Data& data);

// ρ_n = (1−ε)/N·I + ε|n><n| as explicit levels: the nondegenerate eigenvalue
// (1+(N−1)ε)/N on |n> and the (N−1)-fold (1−ε)/N on its complement.  ε = 0 is
// the maximally mixed single-level case; ε = 1 adds an explicit zero level.
SpectralDecomposition pseudopure_density(int n_dim, double epsilon, int n);

}  // namespace ogp
