#pragma once

#include "kzdk/jordan.hpp"
#include "kzdk/ring.hpp"

#include <array>

namespace kzdk {

/// The 3-point KZ ODE  kappa f'(x) = (Omega_12/x + Omega_23/(x-1)) f(x)
/// on V1 (x) V2 (x) V3, regular singular points at 0 and 1.
struct KZSystem {
    std::array<ModuleSpec, 3> factors;
    std::vector<Rep> reps;
    Rep composite;  // triple tensor product (diagonal action)
    Matrix omega12, omega23, omega13;
    Complex kappa;

    Eigen::Index dim() const { return composite.dim(); }
};

KZSystem make_kz_system(const std::array<ModuleSpec, 3>& specs, Complex kappa);

/// Analytic spectrum of the two-slot Casimir on a pair of family modules,
/// as (eigenvalue, algebraic multiplicity) in a fixed deterministic order.
std::vector<std::pair<Complex, int>> pair_spectrum(const ModuleSpec& a, const ModuleSpec& b);

/// Expected Jordan profile (chain length -> count) per eigenvalue.
struct PairCase {
    Complex lambda;
    int mult;
    std::vector<std::pair<std::size_t, int>> profile;
};
std::vector<PairCase> pair_case_table(const ModuleSpec& a, const ModuleSpec& b);

/// Jordan data of omega12 (which = 12) or omega23 (which = 23) on the full
/// triple space, computed against the analytic pair spectrum.
JordanData spectral_data(const KZSystem& sys, int which);

/// Truncated series solution at a regular singular point.
/// At point 0:  f(x) = x^{lambda/kappa} sum_{m<=M, j<=logDegree} x^m (ln x)^j w[m][j];
/// at point 1 the same in y = 1-x with exponent (1-x)^{lambda/kappa}.
struct AsymptoticSolution {
    int point = 0;
    Complex lambda;
    int log_degree = 0;
    int order = 0;
    Complex kappa;
    std::vector<std::vector<Vector>> coeffs;  // coeffs[m][j]

    Vector eval(Complex x) const;
    std::pair<Vector, Vector> eval_with_derivative(Complex x) const;  // (f, f')
    double kz_residual(const Matrix& om12, const Matrix& om23, Complex x) const;
};

/// One solution per chain vector, normalized by the leading log-polynomial
/// x^{Omega/kappa} v^{(i)} (coefficients v^{(i-j)}/(j! kappa^j)).
std::vector<AsymptoticSolution> series_at0(const KZSystem& sys, const JordanChain& chain, int M);
std::vector<AsymptoticSolution> series_at1(const KZSystem& sys, const JordanChain& chain, int M);

struct FundamentalFrame {
    int point = 0;
    std::vector<AsymptoticSolution> solutions;
    Matrix leading;  // chain vectors as columns, same order as solutions
    double condition_number = 0;
};

FundamentalFrame frame_at(const KZSystem& sys, int point, int M);

/// Connection matrix between the x = 0 and x = 1 solution frames, matched at
/// x* = 1/2 with adaptive series order (cap 60); the frames are canonically
/// normalized, so the result does not depend on the chain choices.
Matrix associator(const KZSystem& sys, int M = 40);

/// Regularized ordered-product form
///   t^{-Omega23/kappa} Pexp(int_t^{1-t} (Omega12/z + Omega23/(z-1)) dz / kappa) t^{Omega12/kappa}
/// with midpoint factors on a log-scaled grid near both endpoints.
///
/// endpoint_order > 0 multiplies the pure power regularizers by the first
/// endpoint_order series corrections of the local frames; the pure form
/// (endpoint_order = 0) converges only like t^{1 - gap/kappa} where gap is
/// the largest spectral gap of the local exponent, and diverges for gaps
/// beyond kappa, so the corrected form is the default.
Matrix associator_pexp(const KZSystem& sys, double t, long steps, int endpoint_order = 8);

/// sigma = P exp(i pi Omega12 / kappa) : V_A (x) V_B -> V_B (x) V_A.
Matrix braiding(const Rep& A, const Rep& B, Complex kappa);

/// Loop around 0 in the phi_0 frame: exp(2 pi i Omega12 / kappa).
Matrix monodromy0(const KZSystem& sys);

/// Fourth-order transport of f along the real segment [x0, x1] (fallback /
/// cross-check for the series frames).
Matrix rk4_transport(const Matrix& om12, const Matrix& om23, Complex kappa, double x0, double x1,
                     int steps);

}  // namespace kzdk
