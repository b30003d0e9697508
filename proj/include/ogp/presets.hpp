// presets.hpp — named unitary paths covering the worked examples: full-cycle
// precession and two-level block rotations embedded in a larger space.

#pragma once

#include "ogp/evolution.hpp"

#include <array>

namespace ogp {

// Pauli operators of the two-level subspace span{|n>, |m>} embedded in dim
Matrix block_sigma(int dim, int n, int m, int axis);  // axis: 0 = x, 1 = y, 2 = z

// basis {|θ+>, |θ->} whose first vector sits at polar angle θ (azimuth 0) on
// the qubit Bloch sphere; under precession about z it traces the circle of
// polar angle θ
OrthonormalBasis precession_basis(double polar_angle);

// qubit path H = (2π·turns/τ)·σ_z/2; `turns` full revolutions over [0, τ]
UnitaryPath precession_path(double turns, double tau = 1.0);

// U(t) = I − P_nm + U_nm(t) with U_nm a rotation by `angle` about the unit
// Bloch axis of the {n, m} subspace, spread uniformly over [0, τ]
UnitaryPath block_rotation_path(int dim, int n, int m, const std::array<double, 3>& axis, double angle,
                                double tau = 1.0);

// Block path realizing a prescribed pure-state visibility η = |<n|U_nm(τ)|n>|
// and geodesically closed solid angle Ω of the traced |n> Bloch curve:
//   η < 1: meridian descent by 2·arccos(η) about x, then azimuthal sweep by
//          Ω/(2(1−η²)) about z (the enclosed sector has area Ω exactly);
//   η = 1: full-cycle precession about an axis tilted by arccos(1 − Ω/2π).
UnitaryPath block_path_for(int dim, int n, int m, double eta, double omega, double tau = 1.0);

}  // namespace ogp
