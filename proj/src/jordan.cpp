#include "kzdk/jordan.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <map>
#include <sstream>

namespace kzdk {

std::vector<std::pair<std::size_t, int>> JordanData::block_profile(Complex lambda, double tol) const {
    std::map<std::size_t, int> prof;
    for (const auto& c : chains)
        if (std::abs(c.lambda - lambda) <= tol) prof[c.size()]++;
    return {prof.begin(), prof.end()};
}

Matrix kernel_basis(const Matrix& M, double rel_tol, double scale_floor) {
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = std::max(sv.size() ? sv(0) : 0.0, scale_floor);
    const double thresh = (scale > 0) ? rel_tol * scale : rel_tol;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    return svd.matrixV().rightCols(M.cols() - rank);
}

bool orthonormal_extend(Matrix& Q, const Vector& v, double tol, Vector* out) {
    Vector r = v;
    if (Q.cols() > 0) r -= Q * (Q.adjoint() * r);
    if (Q.cols() > 0) r -= Q * (Q.adjoint() * r);  // one reorthogonalization pass
    if (r.norm() <= tol) return false;
    r.normalize();
    Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
    Q.col(Q.cols() - 1) = r;
    if (out) *out = r;
    return true;
}

JordanData jordan_chains(const Matrix& M, const std::vector<std::pair<Complex, int>>& eigenvalues,
                         double tol) {
    const Eigen::Index n = M.rows();
    Eigen::Index total = 0;
    for (const auto& [lam, mult] : eigenvalues) total += mult;
    if (total != n) throw SpecError("jordan_chains: multiplicities do not sum to dim");

    const double scale = std::max(1.0, op_norm(M));
    JordanData out;

    for (const auto& [lam, mult] : eigenvalues) {
        const Matrix A = M - lam * ident(n);
        // kernel filtration of powers up to the algebraic multiplicity
        std::vector<Matrix> kernels;  // kernels[s-1] = ker A^s
        std::vector<Eigen::Index> kdim;
        Matrix P = ident(n);
        const double anorm = std::max(1.0, op_norm(A));
        double afloor = 1.0;
        Eigen::Index reached = 0;
        while (reached < mult) {
            P = A * P;
            afloor *= anorm;
            Matrix K = kernel_basis(P, tol, afloor);
            if (!kdim.empty() && K.cols() <= kdim.back()) break;  // stabilized early
            kernels.push_back(K);
            kdim.push_back(K.cols());
            reached = kdim.back();
            if (kernels.size() > static_cast<std::size_t>(mult)) break;
        }
        if (reached != mult) {
            std::ostringstream os;
            os << "jordan_chains: eigenvalue " << lam << " inconsistent with matrix (kernel of power reaches "
               << reached << ", multiplicity " << mult << ")";
            throw NumericalError(os.str());
        }
        const std::size_t smax = kernels.size();

        // Top-down chain extraction: at level s, pick vectors of ker A^s
        // independent of ker A^{s-1} and of longer chains descended to s.
        std::vector<JordanChain> local;
        for (std::size_t s = smax; s >= 1; --s) {
            Matrix Q(n, 0);
            if (s >= 2)
                for (Eigen::Index c = 0; c < kernels[s - 2].cols(); ++c)
                    orthonormal_extend(Q, kernels[s - 2].col(c), 1e-8);
            for (const auto& ch : local)
                if (ch.size() > s) orthonormal_extend(Q, ch.vecs[s - 1], 1e-8);
            for (Eigen::Index c = 0; c < kernels[s - 1].cols(); ++c) {
                Vector top;
                if (!orthonormal_extend(Q, kernels[s - 1].col(c), 1e-8, &top)) continue;
                JordanChain ch;
                ch.lambda = lam;
                ch.vecs.assign(s, Vector());
                ch.vecs[s - 1] = top;
                for (std::size_t i = s - 1; i >= 1; --i) ch.vecs[i - 1] = A * ch.vecs[i];
                local.push_back(std::move(ch));
            }
        }
        // orthonormalize simple eigenvectors among themselves (deterministic order)
        {
            Matrix Q(n, 0);
            for (auto& ch : local)
                if (ch.size() == 1) {
                    Vector v;
                    if (orthonormal_extend(Q, ch.vecs[0], 1e-10, &v)) ch.vecs[0] = v;
                }
        }
        for (auto& ch : local) {
            for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
                const double res = (A * ch.vecs[i + 1] - ch.vecs[i]).norm();
                if (res > tol * scale * 10)
                    throw NumericalError("jordan_chains: chain relation residual too large");
            }
            const double res0 = (A * ch.vecs[0]).norm();
            if (res0 > tol * scale * 10) throw NumericalError("jordan_chains: eigenvector residual too large");
            out.chains.push_back(std::move(ch));
        }
    }
    if (out.total_dim() != n) throw NumericalError("jordan_chains: chain lengths do not sum to dim");
    return out;
}

Matrix expm_times(const Matrix& M, const JordanData& jd, Complex s) {
    const Eigen::Index n = M.rows();
    if (jd.total_dim() != n) throw SpecError("expm_times: jordan data does not match matrix");
    Matrix C(n, n), B = Matrix::Zero(n, n);
    Eigen::Index off = 0;
    for (const auto& ch : jd.chains) {
        const Eigen::Index L = static_cast<Eigen::Index>(ch.size());
        for (Eigen::Index i = 0; i < L; ++i) C.col(off + i) = ch.vecs[i];
        const Complex el = std::exp(s * ch.lambda);
        Complex pw = 1.0;
        for (Eigen::Index k = 0; k < L; ++k) {  // pw = s^k / k!
            for (Eigen::Index i = 0; i + k < L; ++i) B(off + i, off + i + k) = el * pw;
            pw *= s / static_cast<double>(k + 1);
        }
        off += L;
    }
    Eigen::PartialPivLU<Matrix> lu(C);
    return C * B * lu.inverse();
}

Matrix power_with_log(const Matrix& M, const JordanData& jd, Complex x, Complex kappa) {
    if (x == Complex(0, 0)) throw SpecError("power_with_log: x = 0");
    return expm_times(M, jd, principal_log(x) / kappa);
}

Vector solve_shifted(const Matrix& M, Complex mu, const Vector& b, double tol) {
    const Eigen::Index n = M.rows();
    const Matrix S = M - mu * ident(n);
    Eigen::FullPivLU<Matrix> lu(S);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw ExcludedParameterError("solve_shifted: singular shift (parameters in the excluded set)");
    Vector v = lu.solve(b);
    const double res = (S * v - b).norm();
    if (res > tol * std::max(1.0, b.norm()))
        throw NumericalError("solve_shifted: residual above tolerance");
    return v;
}

}  // namespace kzdk
