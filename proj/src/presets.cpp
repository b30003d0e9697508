#include "ogp/presets.hpp"

#include <cmath>

namespace ogp {

namespace {
constexpr Complex kImag{0.0, 1.0};
}

Matrix block_sigma(int dim, int n, int m, int axis) {
    if (dim < 2 || n < 0 || m < 0 || n >= dim || m >= dim || n == m)
        throw std::invalid_argument("block_sigma: need two distinct levels inside dim");
    Matrix s = Matrix::Zero(dim, dim);
    switch (axis) {
        case 0: s(n, m) = 1.0; s(m, n) = 1.0; break;
        case 1: s(n, m) = -kImag; s(m, n) = kImag; break;
        case 2: s(n, n) = 1.0; s(m, m) = -1.0; break;
        default: throw std::invalid_argument("block_sigma: axis must be 0, 1 or 2");
    }
    return s;
}

OrthonormalBasis precession_basis(double polar_angle) {
    const double c = std::cos(0.5 * polar_angle), s = std::sin(0.5 * polar_angle);
    Matrix b(2, 2);
    b << c, -s,
         s,  c;
    return OrthonormalBasis::from_columns(std::move(b));
}

UnitaryPath precession_path(double turns, double tau) {
    const double omega = 2.0 * M_PI * turns / tau;
    GeneratorInterval iv;
    iv.t_begin = 0.0;
    iv.t_end = tau;
    iv.hamiltonian = 0.5 * omega * block_sigma(2, 0, 1, 2);
    return UnitaryPath::schedule({iv});
}

UnitaryPath block_rotation_path(int dim, int n, int m, const std::array<double, 3>& axis, double angle,
                                double tau) {
    const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (!(norm > 0.0)) throw std::invalid_argument("block_rotation_path: zero rotation axis");
    Matrix h = Matrix::Zero(dim, dim);
    for (int c = 0; c < 3; ++c) h += (axis[c] / norm) * block_sigma(dim, n, m, c);
    GeneratorInterval iv;
    iv.t_begin = 0.0;
    iv.t_end = tau;
    iv.hamiltonian = 0.5 * (angle / tau) * h;
    return UnitaryPath::schedule({iv});
}

UnitaryPath block_path_for(int dim, int n, int m, double eta, double omega, double tau) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("block_path_for: eta must lie in [0, 1]");

    if (eta >= 1.0) {
        // full cycle about a tilted axis: η = 1 for any enclosed solid angle
        double wrapped = std::fmod(omega, 4.0 * M_PI);
        if (wrapped < 0.0) wrapped += 4.0 * M_PI;
        const double tilt = std::acos(1.0 - wrapped / (2.0 * M_PI));
        return block_rotation_path(dim, n, m, {std::sin(tilt), 0.0, std::cos(tilt)}, 2.0 * M_PI, tau);
    }
    if (eta > 1.0 - 1e-9)
        throw std::invalid_argument("block_path_for: eta is too close to 1 for the sector construction");

    const double descent = 2.0 * std::acos(eta);              // meridian arc length
    const double sweep = omega / (2.0 * (1.0 - eta * eta));   // azimuthal angle at polar `descent`
    GeneratorInterval first;
    first.t_begin = 0.0;
    first.t_end = 0.5 * tau;
    first.hamiltonian = (descent / tau) * block_sigma(dim, n, m, 0);
    if (sweep == 0.0) {
        first.t_end = tau;
        first.hamiltonian = 0.5 * (descent / tau) * block_sigma(dim, n, m, 0);
        return UnitaryPath::schedule({first});
    }
    GeneratorInterval second;
    second.t_begin = 0.5 * tau;
    second.t_end = tau;
    second.hamiltonian = (sweep / tau) * block_sigma(dim, n, m, 2);
    return UnitaryPath::schedule({first, second});
}

}  // namespace ogp
