#include "ogp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ogp {

namespace {

constexpr Complex kImag{0.0, 1.0};

void check_grid(const UnitaryPath& path, const TimeGrid& grid) {
    const double tau = path.duration();
    if (std::abs(grid.duration() - tau) > 1e-9 * std::max(tau, 1.0))
        throw std::invalid_argument("grid does not span [0, duration] of the path");
}

}  // namespace

// ---------------------------------------------------------------------------
// UnitaryPath
// ---------------------------------------------------------------------------

UnitaryPath UnitaryPath::schedule(std::vector<GeneratorInterval> intervals) {
    if (intervals.empty()) throw std::invalid_argument("UnitaryPath: empty schedule");
    std::sort(intervals.begin(), intervals.end(),
              [](const GeneratorInterval& x, const GeneratorInterval& y) { return x.t_begin < y.t_begin; });
    if (std::abs(intervals.front().t_begin) > 1e-15)
        throw std::invalid_argument("UnitaryPath: schedule must start at t = 0");
    const int dim = static_cast<int>(intervals.front().hamiltonian.rows());
    double t = 0.0;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& iv = intervals[i];
        if (!(iv.t_end > iv.t_begin))
            throw std::invalid_argument("UnitaryPath: interval " + std::to_string(i) + " has nonpositive length");
        if (std::abs(iv.t_begin - t) > 1e-12 * std::max(1.0, t))
            throw std::invalid_argument("UnitaryPath: schedule has a gap or overlap at interval " +
                                        std::to_string(i));
        if (iv.hamiltonian.rows() != dim || iv.hamiltonian.cols() != dim)
            throw std::invalid_argument("UnitaryPath: inconsistent generator dimensions");
        if (!is_hermitian(iv.hamiltonian))
            throw std::invalid_argument("UnitaryPath: generator of interval " + std::to_string(i) +
                                        " is not Hermitian");
        t = iv.t_end;
    }
    UnitaryPath p;
    p.dim_ = dim;
    p.duration_ = t;
    p.intervals_ = std::move(intervals);
    return p;
}

UnitaryPath UnitaryPath::generator(int dim, double duration, Generator h) {
    if (dim < 1) throw std::invalid_argument("UnitaryPath: dim must be >= 1");
    if (!(duration > 0.0)) throw std::invalid_argument("UnitaryPath: duration must be > 0");
    if (!h) throw std::invalid_argument("UnitaryPath: null generator");
    UnitaryPath p;
    p.dim_ = dim;
    p.duration_ = duration;
    p.generator_ = std::move(h);
    p.generator_at(0.5 * duration);  // dimension/Hermiticity spot check
    return p;
}

UnitaryPath UnitaryPath::samples(std::vector<double> times, std::vector<Matrix> unitaries,
                                 bool allow_interpolation) {
    if (times.size() != unitaries.size() || times.size() < 2)
        throw std::invalid_argument("UnitaryPath: need matching times/unitaries, at least two samples");
    if (std::abs(times.front()) > 1e-15) throw std::invalid_argument("UnitaryPath: samples must start at t = 0");
    const int dim = static_cast<int>(unitaries.front().rows());
    if (max_abs(unitaries.front() - Matrix::Identity(dim, dim)) > 1e-12)
        throw std::invalid_argument("UnitaryPath: U(0) must be the identity");
    unitaries.front() = Matrix::Identity(dim, dim);
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("UnitaryPath: sample times must increase strictly");
    for (std::size_t i = 0; i < unitaries.size(); ++i) {
        const auto& u = unitaries[i];
        if (u.rows() != dim || u.cols() != dim)
            throw std::invalid_argument("UnitaryPath: inconsistent sample dimensions");
        if (unitarity_residual(u) > 1e-10)
            throw std::invalid_argument("UnitaryPath: sample " + std::to_string(i) +
                                        " exceeds the unitarity residual bound");
    }
    UnitaryPath p;
    p.dim_ = dim;
    p.duration_ = times.back();
    p.sampled_ = true;
    p.interpolate_ = allow_interpolation;
    p.sample_times_ = std::move(times);
    p.sample_unitaries_ = std::move(unitaries);
    return p;
}

Matrix UnitaryPath::generator_at(double t) const {
    if (sampled_) throw std::logic_error("UnitaryPath: sampled paths have no generator");
    if (generator_) {
        Matrix h = generator_(t);
        if (h.rows() != dim_ || h.cols() != dim_)
            throw std::invalid_argument("UnitaryPath: generator returned wrong dimension");
        if (!is_hermitian(h))
            throw std::invalid_argument("UnitaryPath: generator is not Hermitian at t = " + std::to_string(t));
        return h;
    }
    // left-closed lookup; t = 0 falls into the first interval
    for (const auto& iv : intervals_)
        if (t <= iv.t_end) return iv.hamiltonian;
    return intervals_.back().hamiltonian;
}

int UnitaryPath::constant_interval(double t0, double t1) const {
    if (sampled_ || generator_) return -1;
    for (std::size_t i = 0; i < intervals_.size(); ++i)
        if (t0 >= intervals_[i].t_begin - 1e-15 && t1 <= intervals_[i].t_end + 1e-15)
            return static_cast<int>(i);
    return -1;
}

void UnitaryPath::breakpoints_in(double a, double b, std::vector<double>& out) const {
    out.clear();
    for (const auto& iv : intervals_)
        if (iv.t_begin > a + 1e-15 && iv.t_begin < b - 1e-15) out.push_back(iv.t_begin);
}

Matrix UnitaryPath::sample_at(double t) const {
    if (!sampled_) throw std::logic_error("UnitaryPath: sample_at requires a sampled path");
    const auto& ts = sample_times_;
    const double tol = 1e-12 * std::max(1.0, duration_);
    auto it = std::lower_bound(ts.begin(), ts.end(), t - tol);
    if (it != ts.end() && std::abs(*it - t) <= tol)
        return sample_unitaries_[static_cast<std::size_t>(it - ts.begin())];
    if (!interpolate_)
        throw std::invalid_argument("UnitaryPath: t is not a sample node and interpolation is disabled");
    if (t < ts.front() - tol || t > ts.back() + tol)
        throw std::invalid_argument("UnitaryPath: t outside [0, duration]");
    const std::size_t hi = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
    const std::size_t lo = hi - 1;
    const double s = (t - ts[lo]) / (ts[hi] - ts[lo]);
    // geodesic: exp(s log(U_hi U_lo†)) U_lo, via the spectrum of the unitary ratio
    const Matrix ratio = sample_unitaries_[hi] * sample_unitaries_[lo].adjoint();
    Eigen::ComplexEigenSolver<Matrix> es(ratio);
    if (es.info() != Eigen::Success) throw std::runtime_error("UnitaryPath: interpolation eigensolver failed");
    Vector powered(dim_);
    for (int i = 0; i < dim_; ++i) powered(i) = std::polar(1.0, s * std::arg(es.eigenvalues()(i)));
    const Matrix frac = es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().inverse();
    return frac * sample_unitaries_[lo];
}

// ---------------------------------------------------------------------------
// walks
// ---------------------------------------------------------------------------

namespace {

// half-step exponentials, cached per schedule interval
struct HalfStepCache {
    int interval = -1;
    double dt = -1.0;
    Matrix half;

    const Matrix& get(const UnitaryPath& path, int interval_idx, double dt_step, const Matrix& h) {
        if (interval_idx < 0) {
            half = expm_antihermitian(h, 0.5 * dt_step);
            interval = -1;
        } else if (interval != interval_idx || dt != dt_step) {
            half = expm_antihermitian(path.interval_hamiltonian(interval_idx), 0.5 * dt_step);
            interval = interval_idx;
            dt = dt_step;
        }
        return half;
    }
};

// shared driver for generator paths: midpoint-rule product integration with
// sub-steps split at schedule breakpoints, so piecewise-constant schedules
// integrate exactly.  `on_substep(tm, dt, half, h)` runs before U is advanced;
// `on_node` runs after each full grid step.
template <typename SubStep, typename Node>
Matrix drive_generator(const UnitaryPath& path, const TimeGrid& grid, Matrix& u, SubStep on_substep,
                       Node on_node) {
    HalfStepCache cache;
    std::vector<double> cuts;
    for (int i = 0; i < grid.steps(); ++i) {
        const double a = grid.node(i), b = grid.node(i + 1);
        path.breakpoints_in(a, b, cuts);
        double left = a;
        for (std::size_t c = 0; c <= cuts.size(); ++c) {
            const double right = (c < cuts.size()) ? cuts[c] : b;
            const double dt = right - left;
            if (dt <= 0.0) { left = right; continue; }
            const double tm = 0.5 * (left + right);
            const int idx = path.constant_interval(left, right);
            const Matrix h = (idx >= 0) ? path.interval_hamiltonian(idx) : path.generator_at(tm);
            const Matrix& half = cache.get(path, idx, dt, h);
            on_substep(tm, dt, half, h, u);
            u = half * (half * u);
            left = right;
        }
        on_node(i + 1, u);
    }
    return u;
}

Matrix walk_generator(const UnitaryPath& path, const TimeGrid& grid, const StepObserver& observe) {
    Matrix u = Matrix::Identity(path.dim(), path.dim());
    Matrix u_mid, conn;
    return drive_generator(
        path, grid, u,
        [&](double tm, double dt, const Matrix& half, const Matrix& h, const Matrix& u_now) {
            if (!observe) return;
            u_mid.noalias() = half * u_now;
            conn.noalias() = u_mid.adjoint() * (-kImag * h) * u_mid;
            observe(PathStep{tm, dt, conn});
        },
        [](int, const Matrix&) {});
}

// symmetric finite-difference U̇ at node i of a resolved node list
Matrix node_derivative(const std::vector<const Matrix*>& us, const std::vector<double>& ts, int i,
                       bool uniform) {
    const int n = static_cast<int>(us.size()) - 1;
    auto u = [&](int j) -> const Matrix& { return *us[j]; };
    if (uniform && n >= 4) {
        const double h = (ts.back() - ts.front()) / n;
        if (i >= 2 && i <= n - 2)
            return (-u(i + 2) + 8.0 * u(i + 1) - 8.0 * u(i - 1) + u(i - 2)) / (12.0 * h);
        if (i == 0)
            return (-25.0 * u(0) + 48.0 * u(1) - 36.0 * u(2) + 16.0 * u(3) - 3.0 * u(4)) / (12.0 * h);
        if (i == 1)
            return (-3.0 * u(0) - 10.0 * u(1) + 18.0 * u(2) - 6.0 * u(3) + u(4)) / (12.0 * h);
        if (i == n - 1)
            return (3.0 * u(n) + 10.0 * u(n - 1) - 18.0 * u(n - 2) + 6.0 * u(n - 3) - u(n - 4)) /
                   (12.0 * h);
        return (25.0 * u(n) - 48.0 * u(n - 1) + 36.0 * u(n - 2) - 16.0 * u(n - 3) + 3.0 * u(n - 4)) /
               (12.0 * h);
    }
    if (i > 0 && i < n) {
        const double hm = ts[i] - ts[i - 1], hp = ts[i + 1] - ts[i];
        const double wma = -hp / (hm * (hm + hp));
        const double wmi = (hp - hm) / (hm * hp);
        const double wpl = hm / (hp * (hm + hp));
        return wma * u(i - 1) + wmi * u(i) + wpl * u(i + 1);
    }
    if (i == 0) return (u(1) - u(0)) / (ts[1] - ts[0]);
    return (u(n) - u(n - 1)) / (ts[n] - ts[n - 1]);
}

Matrix walk_sampled(const UnitaryPath& path, const TimeGrid& grid, const StepObserver& observe) {
    const int n = grid.steps();
    std::vector<const Matrix*> us(n + 1, nullptr);
    std::deque<Matrix> held;  // interpolated matrices, when any
    const auto& ts = path.sample_times();
    const double tol = 1e-12 * std::max(1.0, path.duration());
    for (int i = 0; i <= n; ++i) {
        const double t = grid.node(i);
        auto it = std::lower_bound(ts.begin(), ts.end(), t - tol);
        if (it != ts.end() && std::abs(*it - t) <= tol) {
            us[i] = &path.sample_unitaries()[static_cast<std::size_t>(it - ts.begin())];
        } else {
            held.push_back(path.sample_at(t));
            us[i] = &held.back();
        }
    }
    if (observe) {
        bool uniform = true;
        const double h0 = grid.duration() / n;
        for (int i = 0; i < n; ++i)
            if (std::abs((grid.node(i + 1) - grid.node(i)) - h0) > 1e-9 * h0) { uniform = false; break; }
        auto connection_at = [&](int i) {
            Matrix a = us[i]->adjoint() * node_derivative(us, grid.nodes(), i, uniform);
            return Matrix(0.5 * (a - a.adjoint()));  // the exact connection is anti-Hermitian
        };
        Matrix a_prev = connection_at(0);
        for (int i = 0; i < n; ++i) {
            Matrix a_next = connection_at(i + 1);
            const Matrix a_mid = 0.5 * (a_prev + a_next);
            observe(PathStep{0.5 * (grid.node(i) + grid.node(i + 1)),
                             grid.node(i + 1) - grid.node(i), a_mid});
            a_prev = std::move(a_next);
        }
    }
    return *us[n];
}

}  // namespace

Matrix walk_path(const UnitaryPath& path, const TimeGrid& grid, const StepObserver& observe) {
    check_grid(path, grid);
    return path.has_generator() ? walk_generator(path, grid, observe)
                                : walk_sampled(path, grid, observe);
}

std::vector<Matrix> evolve(const UnitaryPath& path, const TimeGrid& grid) {
    check_grid(path, grid);
    const int n = grid.steps();
    std::vector<Matrix> out;
    out.reserve(n + 1);
    if (!path.has_generator()) {
        for (int i = 0; i <= n; ++i) out.push_back(path.sample_at(grid.node(i)));
        return out;
    }
    Matrix u = Matrix::Identity(path.dim(), path.dim());
    out.push_back(u);
    drive_generator(
        path, grid, u,
        [](double, double, const Matrix&, const Matrix&, const Matrix&) {},
        [&](int, const Matrix& u_node) { out.push_back(u_node); });
    return out;
}

Complex connection_factor(const UnitaryPath& path, const OrthonormalBasis& basis, int k,
                          const TimeGrid& grid, Quadrature rule) {
    if (basis.dim() != path.dim()) throw std::invalid_argument("connection_factor: dimension mismatch");
    if (k < 0 || k >= path.dim()) throw std::invalid_argument("connection_factor: state index out of range");
    const Vector psi = basis.vec(k);

    if (rule == Quadrature::trapezoid && path.has_generator()) {
        // node-based rule, used as an independent cross-check of the midpoint walk
        const auto us = evolve(path, grid);
        auto integrand = [&](int i) {
            const Matrix h = path.generator_at(grid.node(i));
            const Vector moved = us[i] * psi;
            return -(moved.adjoint() * h * moved)(0).real();
        };
        double theta = 0.0;
        double y_prev = integrand(0);
        for (int i = 0; i < grid.steps(); ++i) {
            const double y_next = integrand(i + 1);
            theta += 0.5 * (y_prev + y_next) * (grid.node(i + 1) - grid.node(i));
            y_prev = y_next;
        }
        return std::polar(1.0, -theta);
    }

    double theta = 0.0;
    walk_path(path, grid, [&](const PathStep& s) {
        theta += (psi.adjoint() * s.connection * psi)(0).imag() * s.dt;
    });
    return std::polar(1.0, -theta);
}

Matrix parallel_transport_unitary(const UnitaryPath& path, const OrthonormalBasis& basis,
                                  const TimeGrid& grid) {
    if (basis.dim() != path.dim())
        throw std::invalid_argument("parallel_transport_unitary: dimension mismatch");
    const int dim = path.dim();
    const Matrix& b = basis.matrix();
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    Matrix a_basis;
    const Matrix u_final = walk_path(path, grid, [&](const PathStep& s) {
        a_basis.noalias() = b.adjoint() * s.connection * b;
        for (int k = 0; k < dim; ++k) theta(k) += a_basis(k, k).imag() * s.dt;
    });
    Vector d(dim);
    for (int k = 0; k < dim; ++k) d(k) = std::polar(1.0, -theta(k));
    return u_final * b * d.asDiagonal() * b.adjoint();
}

Matrix projector_range_basis(const Matrix& projector, int rank) {
    if (!is_projector(projector)) throw std::invalid_argument("projector_range_basis: not a projector");
    const int dim = static_cast<int>(projector.rows());
    if (rank < 1 || rank > dim) throw std::invalid_argument("projector_range_basis: bad rank");
    if (rank == dim) return Matrix::Identity(dim, dim);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(projector));
    if (es.info() != Eigen::Success) throw std::runtime_error("projector_range_basis: eigensolver failed");
    if (es.eigenvalues()(dim - rank) < 0.5 ||
        (dim - rank - 1 >= 0 && es.eigenvalues()(dim - rank - 1) > 0.5))
        throw std::invalid_argument("projector_range_basis: rank does not match the projector");
    return es.eigenvectors().rightCols(rank);
}

namespace {

// per-level transport, restricted to an orthonormal basis of the level
struct LevelTransport {
    Matrix range;             // dim x m, orthonormal columns spanning the projector
    Matrix alpha;             // m x m running exponential product
    Complex phase{1.0, 0.0};  // scalar fast path for m == 1
    int m = 0;

    void init(const Matrix& projector, int multiplicity) {
        m = multiplicity;
        range = projector_range_basis(projector, m);
        if (m > 1) alpha = Matrix::Identity(m, m);
    }

    void step(const Matrix& connection, double dt) {
        if (m == 1) {
            const Complex g = (range.col(0).adjoint() * connection * range.col(0))(0);
            phase *= std::polar(1.0, -g.imag() * dt);
        } else {
            // α <- exp(−B†AB dt) α = exp(−iK dt) α with K = −iB†AB Hermitian
            const Matrix k = -kImag * Matrix(range.adjoint() * connection * range);
            alpha = expm_antihermitian(hermitize(k), dt) * alpha;
        }
    }

    Matrix assemble(int dim) const {
        if (m == 1) return phase * (range * range.adjoint());
        Matrix out(dim, dim);
        out.noalias() = range * alpha * range.adjoint();
        return out;
    }
};

}  // namespace

Matrix subspace_parallel_transport(const UnitaryPath& path, const Matrix& projector,
                                   const TimeGrid& grid) {
    if (projector.rows() != path.dim() || projector.cols() != path.dim())
        throw std::invalid_argument("subspace_parallel_transport: dimension mismatch");
    if (!is_projector(projector))
        throw std::invalid_argument("subspace_parallel_transport: not a projector");
    const int rank = static_cast<int>(std::lround(projector.trace().real()));
    LevelTransport lt;
    lt.init(projector, rank);
    walk_path(path, grid, [&](const PathStep& s) { lt.step(s.connection, s.dt); });
    return lt.assemble(path.dim());
}

std::vector<ParallelFamily> build_parallel_families(const UnitaryPath& path,
                                                    const std::vector<SpectralDecomposition>& rhos,
                                                    const TimeGrid& grid) {
    const int dim = path.dim();
    std::vector<std::vector<LevelTransport>> transports(rhos.size());
    for (std::size_t s = 0; s < rhos.size(); ++s) {
        const auto& rho = rhos[s];
        if (rho.dim() != dim) throw std::invalid_argument("build_parallel_family: dimension mismatch");
        if (!rho.complete())
            throw std::invalid_argument(
                "build_parallel_family: level projectors do not resolve the identity "
                "(complete the kernel level first)");
        transports[s].resize(rho.levels.size());
        for (std::size_t k = 0; k < rho.levels.size(); ++k)
            transports[s][k].init(rho.levels[k].projector, rho.levels[k].multiplicity);
    }
    const Matrix u_final = walk_path(path, grid, [&](const PathStep& st) {
        for (auto& state : transports)
            for (auto& lt : state) lt.step(st.connection, st.dt);
    });
    std::vector<ParallelFamily> out(rhos.size());
    for (std::size_t s = 0; s < rhos.size(); ++s) {
        Matrix v = Matrix::Zero(dim, dim);
        for (const auto& lt : transports[s]) v += lt.assemble(dim);
        out[s].v = v;
        out[s].u = u_final * v;
        out[s].u_final = u_final;
    }
    return out;
}

ParallelFamily build_parallel_family(const UnitaryPath& path, const SpectralDecomposition& rho,
                                     const TimeGrid& grid) {
    return build_parallel_families(path, {rho}, grid).front();
}

}  // namespace ogp
