#include "ogp/selftest.hpp"

#include "ogp/interferometer.hpp"
#include "ogp/phases.hpp"
#include "ogp/presets.hpp"
#include "ogp/pseudopure.hpp"

#include <cmath>
#include <random>

namespace ogp {

namespace {

Matrix random_hermitian(std::mt19937_64& rng, int dim, double scale, bool traceless) {
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

UnitaryPath random_schedule(std::mt19937_64& rng, int dim, int pieces, double scale, bool traceless) {
    std::vector<GeneratorInterval> intervals(pieces);
    for (int i = 0; i < pieces; ++i) {
        intervals[i].t_begin = static_cast<double>(i) / pieces;
        intervals[i].t_end = static_cast<double>(i + 1) / pieces;
        intervals[i].hamiltonian = random_hermitian(rng, dim, scale, traceless);
    }
    return UnitaryPath::schedule(std::move(intervals));
}

SelftestCase check_pi_shift(std::uint64_t seed) {
    SelftestCase c{"qubit-pi-shift", false, 0.0, 1e-8};
    const TimeGrid grid = TimeGrid::uniform(1000, 1.0);
    const auto basis = OrthonormalBasis::computational(2);
    int evaluated = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::mt19937_64 rng(derive_seed(seed, trial));
        const auto path = random_schedule(rng, 2, 3, 2.5, /*traceless=*/true);
        const auto res = pure_offdiagonal_phase(path, basis, IndexTuple({0, 1}), grid);
        if (!res.value.defined) continue;  // interchanging paths have no off-diagonal amplitude
        ++evaluated;
        c.metric = std::max(c.metric, std::abs(res.value.phase + Complex{1.0, 0.0}));
    }
    c.passed = evaluated > 0 && c.metric < c.bound;
    return c;
}

SelftestCase check_bloch_closed_form(std::uint64_t) {
    SelftestCase c{"bloch-vector-l1-closed-form", false, 0.0, 1e-6};
    const TimeGrid grid = TimeGrid::uniform(4000, 1.0);
    for (double eps : {0.3, 0.7}) {
        for (double omega : {1.0, 2.5, 4.5}) {
            const double theta = std::acos(1.0 - omega / (2.0 * M_PI));
            const auto path = precession_path(1.0);
            const auto basis = precession_basis(theta);
            const auto rho = pseudopure_density(2, eps, 0).conjugated(basis.matrix());
            const auto engine = mixed_offdiagonal_phase_nondeg(path, rho, basis, IndexTuple({0}), grid);
            const Complex expected =
                std::polar(1.0, -std::atan2(eps * std::sin(0.5 * omega), std::cos(0.5 * omega)));
            c.metric = std::max(c.metric, phase_distance(engine.phase, expected));
        }
    }
    c.passed = c.metric < c.bound;
    return c;
}

SelftestCase check_mixture_freeze(std::uint64_t seed) {
    SelftestCase c{"random-mixture-freeze", false, 0.0, 1e-8};
    const TimeGrid grid = TimeGrid::uniform(2000, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::mt19937_64 rng(derive_seed(seed, 100 + trial));
        const auto path = random_schedule(rng, 3, 2, 1.5, false);
        const auto family = build_parallel_family(path, pseudopure_density(3, 0.0, 0), grid);
        c.metric = std::max(c.metric, max_abs(family.u - Matrix::Identity(3, 3)));
    }
    c.passed = c.metric < c.bound;
    return c;
}

SelftestCase check_gamma2_sign(std::uint64_t) {
    SelftestCase c{"gamma2-sign-law", false, 0.0, 1e-6};
    const int n_dim = 4;
    const auto basis = OrthonormalBasis::computational(n_dim);
    const TimeGrid grid = TimeGrid::uniform(800, 1.0);
    for (double eps : {0.25, 0.6, 0.9}) {
        for (double eta : {0.2, 0.55, 0.85}) {
            for (double omega : {0.7, 2.0, 3.9}) {
                const PseudopureParams p{n_dim, eps, eta, omega};
                const auto closed = gamma2_closed(p, 1e-6);
                if (!closed.defined) continue;
                const auto path = block_path_for(n_dim, 0, 1, eta, omega);
                const auto engine = mixed_offdiagonal_phase_degenerate(
                    path, pseudopure_density(n_dim, eps, 0), basis, IndexTuple({0, 1}), grid);
                c.metric = std::max(c.metric, phase_distance(engine.phase, closed.phase));
            }
        }
    }
    c.passed = c.metric < c.bound;
    return c;
}

SelftestCase check_figure1_roots(std::uint64_t) {
    SelftestCase c{"figure1-roots", false, 0.0, 1e-12};
    for (int n = 3; n <= 6; ++n) {
        const auto roots = f_eta_roots(n);
        if (roots.empty()) return c;
        for (double root : roots) {
            if (root <= 0.0 || root >= 1.0) return c;
            c.metric = std::max(c.metric, std::abs(f_eta(root, n)));
        }
    }
    c.passed = c.metric < c.bound;
    return c;
}

SelftestCase check_interferometer(std::uint64_t) {
    SelftestCase c{"interferometer-agreement", false, 0.0, 1e-4};
    struct Setup {
        int n_dim, n, m;
        double eps, eta, omega;
    };
    const auto chis = uniform_chi_grid(64);
    for (const Setup& s : {Setup{2, 0, 1, 1.0, 0.6, 2.0}, Setup{4, 0, 2, 0.5, 0.7, 2.5}}) {
        const auto path = block_path_for(s.n_dim, s.n, s.m, s.eta, s.omega);
        const TimeGrid grid = TimeGrid::uniform(1000, 1.0);
        const auto rho_n = pseudopure_density(s.n_dim, s.eps, s.n);
        const auto family = build_parallel_family(path, rho_n, grid);
        const auto ops = pseudopure_measurement_operators(s.n_dim, s.n, s.m, family.u);
        const auto psi = purify_pseudopure(s.n_dim, s.eps, s.n);

        const auto pattern = interferogram(psi, ops.u_s, ops.u_a, ops.v_s, ops.v_a, chis);
        const auto circuit = conditional_circuit_readout(psi, ops.u_s, ops.u_a, ops.v_s, ops.v_a, chis);
        const auto fit = fit_interferogram(pattern);
        const auto engine = mixed_offdiagonal_phase_degenerate(
            path, pseudopure_density(s.n_dim, s.eps, 0), OrthonormalBasis::computational(s.n_dim),
            IndexTuple({s.n, s.m}), grid);
        if (!fit.defined || !engine.defined) return c;
        c.metric = std::max(c.metric, phase_distance(std::polar(1.0, fit.shift), engine.phase));
        for (std::size_t i = 0; i < pattern.size(); ++i)
            c.metric = std::max(c.metric,
                                std::abs(circuit[i].intensity - 0.25 * pattern[i].intensity));
        if (s.eps == 1.0)
            c.metric = std::max(c.metric, phase_distance(std::polar(1.0, fit.shift), Complex{-1.0, 0.0}));
    }
    c.passed = c.metric < c.bound;
    return c;
}

SelftestCase check_gauge_quick(std::uint64_t seed) {
    SelftestCase c{"gauge-invariance", false, 0.0, 1e-7};
    const TimeGrid grid = TimeGrid::uniform(kDefaultGridSteps, 1.0);
    {
        std::mt19937_64 rng(derive_seed(seed, 200));
        const auto path = random_schedule(rng, 2, 2, 2.0, true);
        const auto rep = pure_gauge_invariance_report(path, OrthonormalBasis::computational(2),
                                                      IndexTuple({0, 1}), grid, kDefaultNodalTol, 3, seed);
        c.metric = std::max(c.metric, rep.max_deviation);
    }
    {
        const auto path = block_path_for(3, 0, 1, 0.6, 2.0);
        const auto rep = degenerate_gauge_invariance_report(path, pseudopure_density(3, 0.5, 0),
                                                            OrthonormalBasis::computational(3),
                                                            IndexTuple({0}), grid, kDefaultNodalTol, 3,
                                                            seed + 1);
        c.metric = std::max(c.metric, rep.max_deviation);
    }
    c.passed = c.metric < c.bound;
    return c;
}

SelftestCase check_nodal_bounds(std::uint64_t) {
    SelftestCase c{"nodal-bounds", false, 0.0, 0.5};
    const double threshold = 1.0 / 6.0;  // (N−4)/(2(N−2)) at N = 5
    for (int i = 1; i <= 19; ++i) {
        const double eps = i * 0.05;
        const bool physical = l1_nodal_eta(5, eps).has_value();
        if (physical != (eps >= threshold - 1e-12)) c.metric = 1.0;
    }
    for (int i = 1; i <= 9; ++i)
        for (double omega : {0.6 * M_PI, 0.9 * M_PI, 1.2 * M_PI})
            if (l2_nodal_eta_squared(2, i * 0.1, omega)) c.metric = 1.0;
    c.passed = c.metric < c.bound;
    return c;
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed) {
    SelftestReport report;
    report.cases.push_back(check_pi_shift(seed));
    report.cases.push_back(check_bloch_closed_form(seed));
    report.cases.push_back(check_mixture_freeze(seed));
    report.cases.push_back(check_gamma2_sign(seed));
    report.cases.push_back(check_figure1_roots(seed));
    report.cases.push_back(check_interferometer(seed));
    report.cases.push_back(check_gauge_quick(seed));
    report.cases.push_back(check_nodal_bounds(seed));
    return report;
}

}  // namespace ogp
