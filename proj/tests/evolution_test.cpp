#include "ogp/evolution.hpp"

#include "ogp/phases.hpp"
#include "ogp/presets.hpp"
#include "ogp/pseudopure.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ogp;
using namespace ogp::testing;

namespace {

// piecewise-smooth two-interval family for convergence studies; generators
// vary inside each half, so product integration has measurable error
UnitaryPath two_interval_smooth(std::mt19937_64& rng, int dim, double scale) {
    const Matrix a0 = random_hermitian(rng, dim, scale);
    const Matrix a1 = random_hermitian(rng, dim, scale);
    const Matrix b0 = random_hermitian(rng, dim, scale);
    const Matrix b1 = random_hermitian(rng, dim, scale);
    return UnitaryPath::generator(dim, 1.0, [=](double t) {
        if (t < 0.5) return Matrix(a0 + std::sin(3.0 * t) * a1);
        return Matrix(b0 + std::cos(2.0 * t) * b1);
    });
}

}  // namespace

TEST_CASE("time grid construction") {
    const auto grid = TimeGrid::uniform(4, 2.0);
    CHECK(grid.steps() == 4);
    CHECK(grid.node(0) == 0.0);
    CHECK(grid.node(4) == 2.0);
    CHECK_THROWS_AS(TimeGrid::uniform(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid::from_nodes({0.0, 0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid::from_nodes({0.1, 0.5}), std::invalid_argument);
}

TEST_CASE("schedule validation") {
    const Matrix h = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(UnitaryPath::schedule({{0.0, 0.5, h}, {0.6, 1.0, h}}), std::invalid_argument);
    CHECK_THROWS_AS(UnitaryPath::schedule({{0.0, 0.5, h}, {0.4, 1.0, h}}), std::invalid_argument);
    Matrix skew(2, 2);
    skew << 0.0, 1.0, 2.0, 0.0;
    CHECK_THROWS_AS(UnitaryPath::schedule({{0.0, 1.0, skew}}), std::invalid_argument);
}

TEST_CASE("evolve: zero generator stays at the identity") {
    const auto path = UnitaryPath::schedule({{0.0, 1.0, Matrix::Zero(3, 3)}});
    const auto samples = evolve(path, TimeGrid::uniform(16, 1.0));
    for (const auto& u : samples) CHECK(max_abs(u - Matrix::Identity(3, 3)) < 1e-14);
}

TEST_CASE("evolve: constant sigma_z/2 over pi") {
    const auto path = UnitaryPath::schedule({{0.0, M_PI, 0.5 * block_sigma(2, 0, 1, 2)}});
    const auto samples = evolve(path, TimeGrid::uniform(64, M_PI));
    Matrix expected(2, 2);
    expected << std::polar(1.0, -M_PI / 2.0), 0.0, 0.0, std::polar(1.0, M_PI / 2.0);
    CHECK(max_abs(samples.back() - expected) < 1e-12);
    for (const auto& u : samples) CHECK(unitarity_residual(u) < 1e-12);
}

TEST_CASE("evolve: piecewise-constant schedules integrate exactly at any resolution") {
    std::mt19937_64 rng(42);
    const auto path = random_schedule(rng, 3, 3, 2.0);
    const Matrix coarse = evolve(path, TimeGrid::uniform(7, 1.0)).back();
    const Matrix fine = evolve(path, TimeGrid::uniform(1000, 1.0)).back();
    CHECK(max_abs(coarse - fine) < 1e-12);
}

TEST_CASE("evolve: halving the step on a two-interval schedule is second order") {
    std::mt19937_64 rng(9);
    const auto path = two_interval_smooth(rng, 2, 1.5);
    const Matrix reference = evolve(path, TimeGrid::uniform(5120, 1.0)).back();
    const double coarse = max_abs(evolve(path, TimeGrid::uniform(256, 1.0)).back() - reference);
    const double fine = max_abs(evolve(path, TimeGrid::uniform(512, 1.0)).back() - reference);
    CHECK(coarse / fine >= 3.5);
}

TEST_CASE("connection factor basics") {
    const auto basis = OrthonormalBasis::computational(2);
    const auto grid = TimeGrid::uniform(500, 1.0);

    SUBCASE("no dynamics") {
        const auto path = UnitaryPath::schedule({{0.0, 1.0, Matrix::Zero(2, 2)}});
        CHECK(std::abs(connection_factor(path, basis, 0, grid) - Complex{1.0, 0.0}) < 1e-12);
    }

    SUBCASE("constant sigma_z/2 accumulates e^{it/2}") {
        const auto path = UnitaryPath::schedule({{0.0, 1.0, 0.5 * block_sigma(2, 0, 1, 2)}});
        const Complex d0 = connection_factor(path, basis, 0, grid);
        CHECK(std::abs(d0 - std::polar(1.0, 0.5)) < 1e-12);
        const Complex d1 = connection_factor(path, basis, 1, grid);
        CHECK(std::abs(d1 - std::polar(1.0, -0.5)) < 1e-12);
    }

    SUBCASE("trapezoid and midpoint rules agree on a random smooth path") {
        std::mt19937_64 rng(17);
        const auto path = random_smooth_path(rng, 3, 1.2);
        const auto fine = TimeGrid::uniform(10000, 1.0);
        const auto b3 = OrthonormalBasis::computational(3);
        for (int k = 0; k < 3; ++k) {
            const Complex mid = connection_factor(path, b3, k, fine, Quadrature::midpoint);
            const Complex trap = connection_factor(path, b3, k, fine, Quadrature::trapezoid);
            CHECK(std::abs(mid - trap) < 1e-8);
            CHECK(std::abs(std::abs(mid) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("parallel transport unitary removes pure gauge motion") {
    const auto basis = OrthonormalBasis::computational(3);
    const auto grid = TimeGrid::uniform(600, 1.0);

    SUBCASE("diagonal path collapses to the identity") {
        Matrix d = Matrix::Zero(3, 3);
        d(0, 0) = 0.7;
        d(1, 1) = -1.3;
        d(2, 2) = 0.4;
        const auto path = UnitaryPath::schedule({{0.0, 1.0, d}});
        CHECK(max_abs(parallel_transport_unitary(path, basis, grid) - Matrix::Identity(3, 3)) < 1e-10);
    }

    SUBCASE("zero generator collapses to the identity") {
        const auto path = UnitaryPath::schedule({{0.0, 1.0, Matrix::Zero(3, 3)}});
        CHECK(max_abs(parallel_transport_unitary(path, basis, grid) - Matrix::Identity(3, 3)) < 1e-12);
    }
}

TEST_CASE("parallel transport agrees with an independent Pancharatnam chain") {
    std::mt19937_64 rng(29);
    const auto path = random_smooth_path(rng, 2, 1.4);
    const auto basis = OrthonormalBasis::computational(2);
    const auto grid = TimeGrid::uniform(4000, 1.0);

    // discrete chain: phases fixed so each step overlap has zero argument
    const auto us = evolve(path, grid);
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(2);
    for (int i = 0; i + 1 <= grid.steps(); ++i)
        for (int k = 0; k < 2; ++k)
            phi(k) -= std::arg((basis.vec(k).adjoint() * us[i].adjoint() * us[i + 1] * basis.vec(k))(0));
    Vector d(2);
    for (int k = 0; k < 2; ++k) d(k) = std::polar(1.0, phi(k));
    const Matrix chain = us.back() * basis.matrix() * d.asDiagonal() * basis.matrix().adjoint();

    const Matrix engine = parallel_transport_unitary(path, basis, grid);
    CHECK(max_abs(engine - chain) < 1e-6);
}

TEST_CASE("subspace parallel transport") {
    std::mt19937_64 rng(51);
    const auto grid = TimeGrid::uniform(800, 1.0);

    SUBCASE("rank-1 projector reduces to the connection factor") {
        const auto path = random_schedule(rng, 3, 2, 1.5);
        const auto basis = OrthonormalBasis::computational(3);
        const Matrix p = basis.vec(1) * basis.vec(1).adjoint();
        const Matrix alpha = subspace_parallel_transport(path, p, grid);
        const Complex d = connection_factor(path, basis, 1, grid);
        CHECK(max_abs(alpha - d * p) < 1e-10);
    }

    SUBCASE("full projector yields the inverse evolution") {
        const auto path = random_schedule(rng, 4, 3, 1.8);
        const Matrix alpha = subspace_parallel_transport(path, Matrix::Identity(4, 4), grid);
        const Matrix u_final = evolve(path, grid).back();
        CHECK(max_abs(u_final * alpha - Matrix::Identity(4, 4)) < 1e-10);
    }

    SUBCASE("rank-2 projector under a constant generator has a closed form") {
        const Matrix h = random_hermitian(rng, 4, 1.3);
        const auto path = UnitaryPath::schedule({{0.0, 1.0, h}});
        Matrix p = Matrix::Zero(4, 4);
        p(0, 0) = 1.0;
        p(2, 2) = 1.0;
        const Matrix alpha = subspace_parallel_transport(path, p, grid);
        // constant H makes U†HU constant, so the ordered exponential collapses
        const Matrix closed = p * taylor_expm(Complex{0.0, 1.0} * (p * h * p)) * p;
        CHECK(max_abs(alpha - closed) < 1e-8);
        // partial isometry on range(P)
        CHECK(max_abs(alpha * alpha.adjoint() - p) < 1e-8);
        CHECK(max_abs(alpha.adjoint() * alpha - p) < 1e-8);
    }

    SUBCASE("non-projector input is rejected") {
        const auto path = random_schedule(rng, 2, 1, 1.0);
        CHECK_THROWS_AS(subspace_parallel_transport(path, 0.5 * Matrix::Identity(2, 2), grid),
                        std::invalid_argument);
    }
}

TEST_CASE("parallel family construction") {
    std::mt19937_64 rng(77);
    const auto grid = TimeGrid::uniform(1200, 1.0);

    SUBCASE("nondegenerate states reproduce the diagonal transporter") {
        const auto rho = random_density(rng, 4, 4);  // all multiplicities one
        const auto basis = family_eigenbasis(rho);
        const auto path = random_schedule(rng, 4, 2, 1.5);
        const auto family = build_parallel_family(path, rho, grid);
        const Matrix direct = parallel_transport_unitary(path, basis, grid);
        CHECK(max_abs(family.u - direct) < 1e-10);
        CHECK(unitarity_residual(family.v) < 1e-10);
    }

    SUBCASE("maximally mixed states freeze") {
        const auto path = random_schedule(rng, 3, 3, 2.0);
        const auto family = build_parallel_family(path, pseudopure_density(3, 0.0, 0), grid);
        CHECK(max_abs(family.u - Matrix::Identity(3, 3)) < 1e-10);
    }

    SUBCASE("pseudopure block path matches the shared-transporter closed form") {
        const int n_dim = 4;
        const double eta = 0.64, omega = 2.1;
        const auto path = block_path_for(n_dim, 0, 1, eta, omega);
        const auto family = build_parallel_family(path, pseudopure_density(n_dim, 0.55, 0), grid);

        // directly evaluate U^∥ = I − P_nm + U_nm(|n><n| d_n + |m><m| d_m):
        // both connection integrands are constant per segment of the sector path
        const double descent = 2.0 * std::acos(eta);
        const double sweep = omega / (2.0 * (1.0 - eta * eta));
        const Matrix u_nm =
            taylor_expm(Complex{0.0, -0.5 * sweep} * block_sigma(n_dim, 0, 1, 2)) *
            taylor_expm(Complex{0.0, -0.5 * descent} * block_sigma(n_dim, 0, 1, 0));
        const Complex d_n = std::polar(1.0, 0.5 * sweep * std::cos(descent));
        const Complex d_m = std::conj(d_n);
        Matrix rest = Matrix::Identity(n_dim, n_dim);
        rest(0, 0) = 0.0;
        rest(1, 1) = 0.0;
        Matrix pn = Matrix::Zero(n_dim, n_dim), pm = Matrix::Zero(n_dim, n_dim);
        pn(0, 0) = 1.0;
        pm(1, 1) = 1.0;
        const Matrix closed = rest + u_nm * (d_n * pn + d_m * pm);
        CHECK(max_abs(family.u - closed) < 1e-8);

        // the partner state shares the same parallel transporter
        const auto partner = build_parallel_family(path, pseudopure_density(n_dim, 0.55, 1), grid);
        CHECK(max_abs(partner.u - family.u) < 1e-10);
    }

    SUBCASE("incomplete projector sets are rejected") {
        const auto path = random_schedule(rng, 3, 1, 1.0);
        SpectralDecomposition partial;
        Matrix p = Matrix::Zero(3, 3);
        p(0, 0) = 1.0;
        partial.levels.push_back({1.0, 1, p});
        CHECK_THROWS_AS(build_parallel_family(path, partial, grid), std::invalid_argument);
    }
}

TEST_CASE("transporters stay unitary at the default grid") {
    std::mt19937_64 rng(101);
    const auto grid = TimeGrid::uniform(kDefaultGridSteps, 1.0);
    const auto path = random_smooth_path(rng, 4, 1.2);
    const auto rho = random_density(rng, 4, 2);  // one degenerate level
    const auto family = build_parallel_family(path, rho, grid);
    CHECK(unitarity_residual(family.v) < 1e-8);
    CHECK(unitarity_residual(family.u) < 1e-8);
}

TEST_CASE("subspace transport converges at second order on smooth schedules") {
    std::mt19937_64 rng(13);
    const auto path = random_smooth_path(rng, 4, 1.0);
    Matrix p = Matrix::Zero(4, 4);
    p(1, 1) = 1.0;
    p(3, 3) = 1.0;
    const Matrix reference = subspace_parallel_transport(path, p, TimeGrid::uniform(10240, 1.0));
    const double coarse =
        max_abs(subspace_parallel_transport(path, p, TimeGrid::uniform(512, 1.0)) - reference);
    const double fine =
        max_abs(subspace_parallel_transport(path, p, TimeGrid::uniform(1024, 1.0)) - reference);
    CHECK(coarse / fine >= 3.0);
    CHECK(coarse / fine <= 4.5);
}

TEST_CASE("gauge covariance of the parallel transporter") {
    std::mt19937_64 rng(19);
    const auto grid = TimeGrid::uniform(kDefaultGridSteps, 1.0);

    SUBCASE("diagonal gauges leave U-parallel unchanged") {
        const auto path = random_schedule(rng, 2, 2, 1.6);
        const auto basis = OrthonormalBasis::computational(2);
        const Matrix reference = parallel_transport_unitary(path, basis, grid);
        for (int trial = 0; trial < 4; ++trial) {
            const auto tilted = apply_random_diagonal_gauge(path, basis, grid, derive_seed(5, trial));
            CHECK(max_abs(parallel_transport_unitary(tilted, basis, grid) - reference) < 1e-7);
        }
    }

    SUBCASE("block gauges leave the family transporter unchanged") {
        const auto rho = pseudopure_density(3, 0.5, 0);
        const auto path = block_path_for(3, 0, 1, 0.7, 1.9);
        const Matrix reference = build_parallel_family(path, rho, grid).u;
        for (int trial = 0; trial < 4; ++trial) {
            const auto tilted = apply_random_block_gauge(path, {rho}, grid, derive_seed(6, trial));
            CHECK(max_abs(build_parallel_family(tilted, rho, grid).u - reference) < 1e-7);
        }
    }
}

TEST_CASE("sampled paths reproduce generator paths") {
    std::mt19937_64 rng(83);
    const auto path = random_schedule(rng, 3, 2, 1.5);
    const auto grid = TimeGrid::uniform(4000, 1.0);
    const auto resampled = UnitaryPath::samples(grid.nodes(), evolve(path, grid));
    const auto basis = OrthonormalBasis::computational(3);

    // the schedule's generator jumps at t = 0.5, which caps the accuracy of
    // the finite-difference route near that node
    for (int k = 0; k < 3; ++k) {
        const Complex a = connection_factor(path, basis, k, grid);
        const Complex b = connection_factor(resampled, basis, k, grid);
        CHECK(std::abs(a - b) < 1e-8);
    }
    const Matrix pa = parallel_transport_unitary(path, basis, grid);
    const Matrix pb = parallel_transport_unitary(resampled, basis, grid);
    CHECK(max_abs(pa - pb) < 1e-8);

    SUBCASE("off-node evaluation requires the interpolation flag") {
        const auto coarse = TimeGrid::uniform(3000, 1.0);  // nodes not all sample nodes
        CHECK_THROWS_AS(evolve(resampled, coarse), std::invalid_argument);
        const auto interpolating =
            UnitaryPath::samples(grid.nodes(), evolve(path, grid), /*allow_interpolation=*/true);
        const Matrix mid = interpolating.sample_at(0.500125);
        CHECK(unitarity_residual(mid) < 1e-9);
        const Matrix exact = evolve(path, TimeGrid::from_nodes({0.0, 0.500125, 1.0}))[1];
        // geodesic interpolation between dense samples tracks the true path
        CHECK(max_abs(mid - exact) < 1e-6);
    }
}

TEST_CASE("sampled-path validation") {
    const auto grid = TimeGrid::uniform(8, 1.0);
    std::vector<Matrix> us(grid.steps() + 1, Matrix::Identity(2, 2));
    us[0](0, 0) = 1.5;  // not the identity
    CHECK_THROWS_AS(UnitaryPath::samples(grid.nodes(), us), std::invalid_argument);
    us[0](0, 0) = 1.0;
    us[4](0, 1) = 0.5;  // breaks unitarity
    CHECK_THROWS_AS(UnitaryPath::samples(grid.nodes(), us), std::invalid_argument);
}
