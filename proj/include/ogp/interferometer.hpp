// interferometer.hpp — two-particle interferometry for the l=2 mixed-state
// phase: purifications, intensity patterns versus the variable phase χ, cosine
// fits, and the conditional two-auxiliary-qubit circuit.

#pragma once

#include "ogp/linalg.hpp"

#include <vector>

namespace ogp {

// pure state on system ⊗ ancilla whose ancilla partial trace is a target
// density; amplitudes indexed as s * ancilla_dim + a
struct Purification {
    int system_dim = 0;
    int ancilla_dim = 0;
    Vector amplitudes;

    Matrix partial_trace_ancilla() const;
};

// |Ψ_n> = √((1−ε)/N) Σ_{k≠n} |k>⊗|φ_k> + √(ε+(1−ε)/N) |n>⊗|φ_n>, with the
// ancilla basis computational
Purification purify_pseudopure(int n_dim, double epsilon, int n);

struct InterferogramPoint {
    double chi = 0.0;
    double intensity = 0.0;
};

std::vector<double> uniform_chi_grid(int points = 64);  // [0, 2π)

// I(χ) = |e^{iχ}(U_s⊗U_a)|Ψ> + (V_s⊗V_a)|Ψ>|²; the sweep supplies the e^{iχ}
std::vector<InterferogramPoint> interferogram(const Purification& psi, const Matrix& u_s,
                                              const Matrix& u_a, const Matrix& v_s, const Matrix& v_a,
                                              const std::vector<double>& chi_grid);

// cross term c = <Ψ|(U_s†V_s)⊗(U_a†V_a)|Ψ>, so that I(χ) = 2 + 2Re(e^{−iχ}c)
Complex interference_cross_term(const Purification& psi, const Matrix& u_s, const Matrix& u_a,
                                const Matrix& v_s, const Matrix& v_a);

// least-squares fit I(χ) = mean + amplitude·cos(χ − shift), amplitude >= 0;
// a vanishing contrast (amplitude/mean < 1e−12) leaves the shift undefined,
// mirroring nodal points
struct InterferogramFit {
    double shift = 0.0;
    double visibility = 0.0;  // amplitude / mean
    double mean = 0.0;
    bool defined = false;
};

InterferogramFit fit_interferogram(const std::vector<InterferogramPoint>& points);

// Conditional-circuit variant: |0>|0>⊗|Ψ>, Hadamards on the auxiliary pair,
// the conditional transformation (00 ↦ e^{iχ}U_s⊗U_a, 11 ↦ V_s⊗V_a; the
// blocks the construction leaves open are completed as 01 ↦ e^{iχ}U_s⊗U_a,
// 10 ↦ V_s⊗V_a), Hadamards again, probability of the 00 channel.  The result
// is I(χ)/4 pointwise.
std::vector<InterferogramPoint> conditional_circuit_readout(const Purification& psi, const Matrix& u_s,
                                                            const Matrix& u_a, const Matrix& v_s,
                                                            const Matrix& v_a,
                                                            const std::vector<double>& chi_grid);

// the operator choice measuring γ^{(2)} of the pseudopure pair (ρ_n, ρ_m):
// U_s = U_a = W^{m−n}, V_s = U_n^∥, V_a = (U_n^∥)^T in the ancilla basis
struct TwoParticleOperators {
    Matrix u_s, u_a, v_s, v_a;
};

TwoParticleOperators pseudopure_measurement_operators(int n_dim, int n, int m,
                                                      const Matrix& u_parallel);

}  // namespace ogp
