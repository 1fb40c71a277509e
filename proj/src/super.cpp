#include "kzdk/super.hpp"

#include <Eigen/SVD>

namespace kzdk {

double op_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.jacobiSvd().singularValues()(0);
}

Complex principal_log(Complex x) {
    if (x == Complex(0.0, 0.0)) throw SpecError("principal_log: x = 0");
    if (x.imag() == 0.0) x = Complex(x.real(), +0.0);
    return std::log(x);
}

Parities parity_product(const Parities& a, const Parities& b) {
    Parities out;
    out.reserve(a.size() * b.size());
    for (int pa : a)
        for (int pb : b) out.push_back((pa + pb) & 1);
    return out;
}

Parities parity_product(const std::vector<Parities>& factors) {
    if (factors.empty()) return Parities{0};
    Parities acc = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) acc = parity_product(acc, factors[k]);
    return acc;
}

Matrix super_kron(const Matrix& A, const Parities& pa, const Matrix& B, const Parities& pb) {
    const Eigen::Index da = A.rows(), db = B.rows();
    Matrix C = Matrix::Zero(da * db, da * db);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index g = 0; g < da; ++g) {
            const Complex Aag = A(a, g);
            if (Aag == Complex(0, 0)) continue;
            for (Eigen::Index b = 0; b < db; ++b)
                for (Eigen::Index d = 0; d < db; ++d) {
                    const Complex Bbd = B(b, d);
                    if (Bbd == Complex(0, 0)) continue;
                    const int sign = (pa[g] * ((pb[b] + pb[d]) & 1)) & 1;
                    C(a * db + b, g * db + d) = (sign ? -1.0 : 1.0) * Aag * Bbd;
                }
        }
    return C;
}

GradedMatrix super_kron(const GradedMatrix& A, const GradedMatrix& B) {
    return {super_kron(A.mat, A.par, B.mat, B.par), parity_product(A.par, B.par)};
}

GradedMatrix act_in_slot(const GradedMatrix& x, std::size_t slot, const std::vector<Parities>& factors) {
    if (slot >= factors.size()) throw SpecError("act_in_slot: slot out of range");
    if (static_cast<std::size_t>(x.dim()) != factors[slot].size())
        throw SpecError("act_in_slot: operator dimension does not match slot");
    GradedMatrix acc = (slot == 0)
                           ? x
                           : GradedMatrix{ident(static_cast<Eigen::Index>(factors[0].size())), factors[0]};
    for (std::size_t k = 1; k < factors.size(); ++k) {
        GradedMatrix f{ident(static_cast<Eigen::Index>(factors[k].size())), factors[k]};
        acc = super_kron(acc, k == slot ? x : f);
    }
    return acc;
}

namespace {

struct Shape {
    std::vector<Eigen::Index> dims;
    Eigen::Index total = 1;
    explicit Shape(const std::vector<Parities>& factors) {
        for (const auto& f : factors) {
            dims.push_back(static_cast<Eigen::Index>(f.size()));
            total *= dims.back();
        }
    }
    void decode(Eigen::Index flat, std::vector<Eigen::Index>& idx) const {
        idx.resize(dims.size());
        for (std::size_t k = dims.size(); k-- > 0;) {
            idx[k] = flat % dims[k];
            flat /= dims[k];
        }
    }
    Eigen::Index encode(const std::vector<Eigen::Index>& idx) const {
        Eigen::Index flat = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + idx[k];
        return flat;
    }
};

}  // namespace

Matrix embed_two_slot(const Matrix& X, std::size_t i, std::size_t j, const std::vector<Parities>& factors) {
    if (i >= j || j >= factors.size()) throw SpecError("embed_two_slot: bad slots");
    const auto& pi = factors[i];
    const auto& pj = factors[j];
    const Eigen::Index di = static_cast<Eigen::Index>(pi.size());
    const Eigen::Index dj = static_cast<Eigen::Index>(pj.size());
    if (X.rows() != di * dj) throw SpecError("embed_two_slot: operator dimension mismatch");

    const Shape sh(factors);
    Matrix out = Matrix::Zero(sh.total, sh.total);
    std::vector<Eigen::Index> cidx, ridx;
    // sign = (-1)^{p(X entry) * sum of parities left of i  +  p(B part) * sum strictly between i and j}
    for (Eigen::Index col = 0; col < sh.total; ++col) {
        sh.decode(col, cidx);
        int pleft = 0, pmid = 0;
        for (std::size_t k = 0; k < i; ++k) pleft += factors[k][cidx[k]];
        for (std::size_t k = i + 1; k < j; ++k) pmid += factors[k][cidx[k]];
        const Eigen::Index g = cidx[i], d = cidx[j];
        ridx = cidx;
        for (Eigen::Index a = 0; a < di; ++a)
            for (Eigen::Index b = 0; b < dj; ++b) {
                const Complex v = X(a * dj + b, g * dj + d);
                if (v == Complex(0, 0)) continue;
                const int pA = (pi[a] + pi[g]) & 1;
                const int pB = (pj[b] + pj[d]) & 1;
                const int sgn = ((pA + pB) * pleft + pB * pmid) & 1;
                ridx[i] = a;
                ridx[j] = b;
                out(sh.encode(ridx), col) += (sgn ? -1.0 : 1.0) * v;
            }
    }
    return out;
}

Matrix graded_permutation(const std::vector<std::size_t>& perm, const std::vector<Parities>& factors) {
    const std::size_t N = perm.size();
    if (N != factors.size()) throw SpecError("graded_permutation: size mismatch");
    const Shape sh(factors);
    Matrix P = Matrix::Zero(sh.total, sh.total);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index col = 0; col < sh.total; ++col) {
        sh.decode(col, idx);
        Eigen::Index row = 0;
        for (std::size_t k = 0; k < N; ++k) row = row * sh.dims[perm[k]] + idx[perm[k]];
        int sgn = 0;
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t l = k + 1; l < N; ++l)
                if (perm[k] > perm[l]) sgn += factors[perm[k]][idx[perm[k]]] * factors[perm[l]][idx[perm[l]]];
        P(row, col) = (sgn & 1) ? -1.0 : 1.0;
    }
    return P;
}

Matrix graded_swap(const Parities& pa, const Parities& pb) {
    return graded_permutation({1, 0}, {pa, pb});
}

}  // namespace kzdk
