#include "kzdk/category.hpp"

#include "kzdk/super.hpp"

#include <Eigen/LU>
#include <numbers>

namespace kzdk {

namespace {

constexpr double kPi = std::numbers::pi;

Matrix plain_kron(const Matrix& A, const Matrix& B) {
    Matrix C(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            C.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return C;
}

Matrix inv(const Matrix& M) { return Eigen::PartialPivLU<Matrix>(M).inverse(); }

// Assemble an operator on d_left (x) (sum_i S_i) (x) d_right from per-block
// operators M_i on d_left (x) S_i (x) d_right.
Matrix middle_blkdiag(Eigen::Index dl, const std::vector<std::pair<Eigen::Index, Matrix>>& blocks,
                      Eigen::Index dr) {
    Eigen::Index ds = 0;
    for (const auto& [d, m] : blocks) ds += d;
    const Eigen::Index D = dl * ds * dr;
    Matrix out = Matrix::Zero(D, D);
    Eigen::Index off = 0;
    for (const auto& [d, M] : blocks) {
        for (Eigen::Index al = 0; al < dl; ++al)
            for (Eigen::Index bl = 0; bl < dl; ++bl)
                for (Eigen::Index as = 0; as < d; ++as)
                    for (Eigen::Index bs = 0; bs < d; ++bs)
                        for (Eigen::Index ar = 0; ar < dr; ++ar)
                            for (Eigen::Index br = 0; br < dr; ++br)
                                out((al * ds + off + as) * dr + ar, (bl * ds + off + bs) * dr + br) =
                                    M((al * d + as) * dr + ar, (bl * d + bs) * dr + br);
        off += d;
    }
    return out;
}

DecompositionResult fuse_pair(const ModuleSpec& a, const ModuleSpec& b, Complex kappa) {
    DecomposeOptions opt;
    opt.kappa = kappa;
    return decompose(build_module(a), build_module(b), opt);
}

}  // namespace

const char* axiom_name(Axiom a) {
    switch (a) {
        case Axiom::Pentagon: return "pentagon";
        case Axiom::HexagonPlus: return "hexagonPlus";
        case Axiom::HexagonMinus: return "hexagonMinus";
        case Axiom::BetaBraid: return "betaBraid";
        case Axiom::Equivariance: return "equivariance";
        case Axiom::Unitality: return "unitality";
    }
    return "?";
}

Matrix associator_on(const std::array<ModuleSpec, 3>& mods, Complex kappa, int M) {
    return associator(make_kz_system(mods, kappa), M);
}

Matrix fused_associator(const std::array<ModuleSpec, 4>& mods, int fuse_pos, Complex kappa, int M) {
    if (fuse_pos < 0 || fuse_pos > 2) throw SpecError("fused_associator: fuse must be 0, 1 or 2");
    const auto dec = fuse_pair(mods[fuse_pos], mods[fuse_pos + 1], kappa);
    int d[4];
    for (int i = 0; i < 4; ++i) d[i] = mods[i].dim();

    std::vector<std::pair<Eigen::Index, Matrix>> blocks;
    for (const auto& s : dec.blocks) {
        std::array<ModuleSpec, 3> triple;
        if (fuse_pos == 0)
            triple = {s, mods[2], mods[3]};
        else if (fuse_pos == 1)
            triple = {mods[0], s, mods[3]};
        else
            triple = {mods[0], mods[1], s};
        blocks.emplace_back(s.dim(), associator_on(triple, kappa, M));
    }

    Eigen::Index dl = 1, dr = 1;
    for (int i = 0; i < fuse_pos; ++i) dl *= d[i];
    for (int i = fuse_pos + 2; i < 4; ++i) dr *= d[i];
    const Matrix body = middle_blkdiag(dl, blocks, dr);

    // conjugate the fused slot back to the standard tensor basis
    const Matrix L = plain_kron(plain_kron(ident(dl), dec.change_of_basis), ident(dr));
    return L * body * inv(L);
}

Matrix fused_braiding_1_23(const std::array<ModuleSpec, 3>& mods, Complex kappa) {
    auto sys = make_kz_system(mods, kappa);
    const auto dec = fuse_pair(mods[1], mods[2], kappa);
    const Matrix om = sys.omega12 + sys.omega13;
    // analytic spectrum of Omega_{1,(23)} = union over the fused summands
    std::vector<std::pair<Complex, int>> eigs;
    for (const auto& s : dec.blocks)
        for (auto [lam, mult] : pair_spectrum(mods[0], s)) {
            bool merged = false;
            for (auto& [l0, m0] : eigs)
                if (std::abs(l0 - lam) < 1e-12) {
                    m0 += mult;
                    merged = true;
                    break;
                }
            if (!merged) eigs.emplace_back(lam, mult);
        }
    JordanData jd = jordan_chains(om, eigs);
    const Matrix half = expm_times(om, jd, Complex(0, kPi) / kappa);
    std::vector<Parities> pars{sys.reps[0].par, sys.reps[1].par, sys.reps[2].par};
    return graded_permutation({1, 2, 0}, pars) * half;
}

AxiomReport pentagon_residual(const std::array<ModuleSpec, 4>& mods, const CategoryOptions& opt) {
    std::vector<ModuleSpec> all(mods.begin(), mods.end());
    auto gen = genericity(all, opt.kappa);
    if (!gen.generic())
        throw ExcludedParameterError("pentagon: excluded parameters: " + gen.violations.front().condition);

    int d[4];
    for (int i = 0; i < 4; ++i) d[i] = mods[i].dim();
    const Matrix a123 = associator_on({mods[0], mods[1], mods[2]}, opt.kappa, opt.order);
    const Matrix a234 = associator_on({mods[1], mods[2], mods[3]}, opt.kappa, opt.order);
    const Matrix lhs1 = plain_kron(a123, ident(d[3]));
    const Matrix lhs2 = fused_associator(mods, 1, opt.kappa, opt.order);
    const Matrix lhs3 = plain_kron(ident(d[0]), a234);
    const Matrix rhs1 = fused_associator(mods, 0, opt.kappa, opt.order);
    const Matrix rhs2 = fused_associator(mods, 2, opt.kappa, opt.order);

    AxiomReport rep;
    rep.axiom = Axiom::Pentagon;
    rep.operands = all;
    rep.tolerance = opt.tol;
    rep.residual = op_norm(lhs3 * lhs2 * lhs1 - rhs2 * rhs1);
    rep.passed = rep.residual < rep.tolerance;
    return rep;
}

AxiomReport hexagon_residual(const std::array<ModuleSpec, 3>& mods, int sign, const CategoryOptions& opt) {
    if (sign != 1 && sign != -1) throw SpecError("hexagon: sign must be +-1");
    std::vector<ModuleSpec> all(mods.begin(), mods.end());
    auto gen = genericity(all, opt.kappa);
    if (!gen.generic())
        throw ExcludedParameterError("hexagon: excluded parameters: " + gen.violations.front().condition);

    auto rep0 = build_module(mods[0]);
    auto rep1 = build_module(mods[1]);
    auto rep2 = build_module(mods[2]);
    const Eigen::Index d1 = rep1.dim(), d2 = rep2.dim();

    const Matrix a123 = associator_on({mods[0], mods[1], mods[2]}, opt.kappa, opt.order);
    const Matrix a231 = associator_on({mods[1], mods[2], mods[0]}, opt.kappa, opt.order);
    const Matrix a213 = associator_on({mods[1], mods[0], mods[2]}, opt.kappa, opt.order);

    Matrix s1_23 = fused_braiding_1_23(mods, opt.kappa);
    Matrix s12 = braiding(rep0, rep1, opt.kappa);
    Matrix s13 = braiding(rep0, rep2, opt.kappa);
    if (sign < 0) {
        s1_23 = inv(s1_23);
        s12 = inv(s12);
        s13 = inv(s13);
    }
    // lhs: (V1 V2) V3 -> V1 (V2 V3) -> (V2 V3) V1 -> V2 (V3 V1)
    const Matrix lhs = a231 * s1_23 * a123;
    // rhs: (V1 V2) V3 -> (V2 V1) V3 -> V2 (V1 V3) -> V2 (V3 V1)
    const Matrix rhs = plain_kron(ident(d1), s13) * a213 * plain_kron(s12, ident(d2));

    AxiomReport rep;
    rep.axiom = (sign > 0) ? Axiom::HexagonPlus : Axiom::HexagonMinus;
    rep.operands = all;
    rep.tolerance = opt.tol;
    rep.residual = op_norm(lhs - rhs);
    rep.passed = rep.residual < rep.tolerance;
    return rep;
}

AxiomReport equivariance_residual(const Matrix& alpha, const std::array<ModuleSpec, 3>& mods,
                                  const CategoryOptions& opt) {
    std::vector<Rep> reps;
    for (const auto& m : mods) reps.push_back(build_module(m));
    double r = 0;
    for (int k = 0; k < 4; ++k) {
        Matrix dact = diagonal_action(reps, k);
        r = std::max(r, op_norm(alpha * dact - dact * alpha));
    }
    AxiomReport rep;
    rep.axiom = Axiom::Equivariance;
    rep.operands.assign(mods.begin(), mods.end());
    rep.tolerance = opt.tol;
    rep.residual = r;
    rep.passed = r < rep.tolerance;
    return rep;
}

namespace {

Matrix beta_triple(const std::array<ModuleSpec, 3>& t, int sign, const CategoryOptions& opt) {
    const Matrix af = associator_on(t, opt.kappa, opt.order);
    const Matrix ab = associator_on({t[1], t[0], t[2]}, opt.kappa, opt.order);
    Matrix s = braiding(build_module(t[0]), build_module(t[1]), opt.kappa);
    if (sign < 0) s = inv(s).eval();
    return ab * plain_kron(s, ident(t[2].dim())) * inv(af);
}

// beta^{pm}_{A,B,(CD)} on the current ordering of four factors (fuses the
// last pair); swaps the first two entries of `order`.
Matrix beta12_fused(std::array<ModuleSpec, 4>& order, int sign, const CategoryOptions& opt) {
    const Matrix af = fused_associator(order, 2, opt.kappa, opt.order);
    std::array<ModuleSpec, 4> swapped{order[1], order[0], order[2], order[3]};
    const Matrix ab = fused_associator(swapped, 2, opt.kappa, opt.order);
    Matrix s = braiding(build_module(order[0]), build_module(order[1]), opt.kappa);
    if (sign < 0) s = inv(s).eval();
    const Eigen::Index drest = order[2].dim() * order[3].dim();
    Matrix out = ab * plain_kron(s, ident(drest)) * inv(af);
    order = swapped;
    return out;
}

Matrix beta23_lifted(std::array<ModuleSpec, 4>& order, int sign, const CategoryOptions& opt) {
    const Matrix b = beta_triple({order[1], order[2], order[3]}, sign, opt);
    Matrix out = plain_kron(ident(order[0].dim()), b);
    std::swap(order[1], order[2]);
    return out;
}

}  // namespace

AxiomReport beta_braid_residual(const std::array<ModuleSpec, 4>& mods, int sign,
                                const CategoryOptions& opt) {
    if (sign != 1 && sign != -1) throw SpecError("beta_braid: sign must be +-1");
    std::vector<ModuleSpec> all(mods.begin(), mods.end());
    auto gen = genericity(all, opt.kappa);
    if (!gen.generic())
        throw ExcludedParameterError("beta_braid: excluded parameters: " +
                                     gen.violations.front().condition);

    // beta^pm_{X,Y,Z} beta^-+_{Y,X,Z} = Id on the first three operands
    const std::array<ModuleSpec, 3> t{mods[0], mods[1], mods[2]};
    const Matrix bp = beta_triple(t, sign, opt);
    const Matrix bm = beta_triple({mods[1], mods[0], mods[2]}, -sign, opt);
    const Eigen::Index dt = t[0].dim() * t[1].dim() * t[2].dim();
    double resid = op_norm(bp * bm - ident(dt));

    // braid relation beta12 beta23 beta12 = beta23 beta12 beta23 on all four
    std::array<ModuleSpec, 4> ol = mods, orr = mods;
    const Matrix l1 = beta12_fused(ol, sign, opt);
    const Matrix l2 = beta23_lifted(ol, sign, opt);
    const Matrix l3 = beta12_fused(ol, sign, opt);
    const Matrix r1 = beta23_lifted(orr, sign, opt);
    const Matrix r2 = beta12_fused(orr, sign, opt);
    const Matrix r3 = beta23_lifted(orr, sign, opt);
    resid = std::max(resid, op_norm(l3 * l2 * l1 - r3 * r2 * r1));

    AxiomReport rep;
    rep.axiom = Axiom::BetaBraid;
    rep.operands = all;
    rep.tolerance = opt.tol;
    rep.residual = resid;
    rep.passed = resid < rep.tolerance;
    return rep;
}

AxiomReport unitality_residual(const ModuleSpec& x, const ModuleSpec& y, const CategoryOptions& opt) {
    const Matrix a = associator_on({x, ModuleSpec::atypical(0.0), y}, opt.kappa, opt.order);
    AxiomReport rep;
    rep.axiom = Axiom::Unitality;
    rep.operands = {x, ModuleSpec::atypical(0.0), y};
    rep.tolerance = opt.tol;
    rep.residual = op_norm(a - ident(a.rows()));
    rep.passed = rep.residual < rep.tolerance;
    return rep;
}

}  // namespace kzdk
