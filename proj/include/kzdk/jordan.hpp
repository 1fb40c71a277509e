#pragma once

#include "kzdk/types.hpp"

namespace kzdk {

/// One Jordan chain: (M - lambda) vecs[i] = vecs[i-1], vecs[-1] = 0,
/// so vecs[0] is a true eigenvector and vecs.back() the bottom of the chain.
struct JordanChain {
    Complex lambda;
    std::vector<Vector> vecs;
    std::size_t size() const { return vecs.size(); }
};

struct JordanData {
    std::vector<JordanChain> chains;

    Eigen::Index total_dim() const {
        Eigen::Index n = 0;
        for (const auto& c : chains) n += static_cast<Eigen::Index>(c.size());
        return n;
    }
    /// (chain length -> count) for a given eigenvalue, matched within tol.
    std::vector<std::pair<std::size_t, int>> block_profile(Complex lambda, double tol = 1e-8) const;
};

/// Jordan chains of M against analytically supplied eigenvalues; the
/// multiplicities must sum to dim(M). Eigenvalues are never detected
/// numerically: kernels of (M - lambda)^s are rank-revealed against the
/// given values, and an inconsistent list raises NumericalError.
/// Deterministic pivoting, so reruns are bit-stable.
JordanData jordan_chains(const Matrix& M, const std::vector<std::pair<Complex, int>>& eigenvalues,
                         double tol = 1e-9);

/// exp(s*M), exact on each Jordan block (finite nilpotent sum).
Matrix expm_times(const Matrix& M, const JordanData& jd, Complex s);

/// x^{M/kappa} on the principal branch, via expm_times(M, jd, log(x)/kappa).
/// Exact for the nilpotent parts; throws on x = 0.
Matrix power_with_log(const Matrix& M, const JordanData& jd, Complex x, Complex kappa);

/// Unique v with (M - mu) v = b. mu must avoid the spectrum; a singular
/// system signals a genericity violation and raises ExcludedParameterError.
Vector solve_shifted(const Matrix& M, Complex mu, const Vector& b, double tol = kResidualTol);

/// Rank-revealing kernel basis (columns). The threshold is rel_tol times
/// max(largest singular value, scale_floor); the floor keeps powers of
/// nilpotent matrices from being ranked against their own noise.
Matrix kernel_basis(const Matrix& M, double rel_tol = 1e-10, double scale_floor = 0.0);

/// Append the component of v orthogonal to the columns of Q (normalized) if
/// it exceeds tol; returns false when v is numerically inside span(Q).
bool orthonormal_extend(Matrix& Q, const Vector& v, double tol, Vector* out = nullptr);

}  // namespace kzdk
