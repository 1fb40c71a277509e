#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "kzdk/jordan.hpp"
#include "kzdk/modules.hpp"
#include "kzdk/super.hpp"

#include <random>

using namespace kzdk;

namespace {

// Independent sign-rule oracle: apply (A (x) B)(e_g (x) e_d) = (-1)^{p(B)p(g)} Ae_g (x) Be_d
// entry by entry, with homogeneous matrix-unit decomposition of B.
Matrix kron_oracle(const Matrix& A, const Parities& pa, const Matrix& B, const Parities& pb) {
    const Eigen::Index da = A.rows(), db = B.rows();
    Matrix C = Matrix::Zero(da * db, da * db);
    for (Eigen::Index g = 0; g < da; ++g)
        for (Eigen::Index d = 0; d < db; ++d)
            for (Eigen::Index a = 0; a < da; ++a)
                for (Eigen::Index b = 0; b < db; ++b) {
                    const int pB = (pb[b] + pb[d]) & 1;
                    const double s = (pB * pa[g]) & 1 ? -1.0 : 1.0;
                    C(a * db + b, g * db + d) += s * A(a, g) * B(b, d);
                }
    return C;
}

GradedMatrix random_graded(int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::bernoulli_distribution coin(0.5);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(u(rng), u(rng));
    Parities p(dim);
    for (auto& x : p) x = coin(rng);
    return {m, p};
}

double mnorm(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("super_kron: identities and scalars") {
    Parities p2{0, 1};
    CHECK(mnorm(super_kron(ident(2), p2, ident(2), p2) - ident(4)) == 0.0);

    auto T1 = build_module(ModuleSpec::typical(0.7, 0.3));
    auto T2 = build_module(ModuleSpec::typical(-1.3, 0.9));
    Matrix EE = super_kron(T1.E, T1.par, T2.E, T2.par);
    CHECK(mnorm(EE - (0.7 * -1.3) * ident(4)) < 1e-15);
}

TEST_CASE("super_kron: psi- (x) psi+ sign table on T (x) T") {
    auto T1 = build_module(ModuleSpec::typical(0.4, 0.1));
    auto T2 = build_module(ModuleSpec::typical(0.25, -0.6));
    Matrix C = super_kron(T1.psi_minus, T1.par, T2.psi_plus, T2.par);
    // single entry: row (down,up) <- col (up,down), sign +, value e2
    Matrix expect = Matrix::Zero(4, 4);
    expect(2, 1) = 0.25;
    CHECK(mnorm(C - expect) < 1e-15);
    // full 16-entry table against the hand-expanded rule
    CHECK(mnorm(C - kron_oracle(T1.psi_minus, T1.par, T2.psi_plus, T2.par)) < 1e-15);
}

TEST_CASE("super_kron: oracle agreement and associativity on random graded matrices") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        auto A = random_graded(2 + trial % 3, rng);
        auto B = random_graded(2 + (trial / 3) % 3, rng);
        auto C = random_graded(2, rng);
        CHECK(mnorm(super_kron(A, B).mat - kron_oracle(A.mat, A.par, B.mat, B.par)) < 1e-14);
        Matrix lhs = super_kron(super_kron(A, B), C).mat;
        Matrix rhs = super_kron(A, super_kron(B, C)).mat;
        CHECK(mnorm(lhs - rhs) < 1e-13);
    }
}

TEST_CASE("super_kron: equals plain Kronecker for even operators") {
    std::mt19937_64 rng(7);
    auto A = random_graded(3, rng);
    auto B = random_graded(2, rng);
    // zero out odd parts
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (A.par[i] != A.par[j]) A.mat(i, j) = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (B.par[i] != B.par[j]) B.mat(i, j) = 0;
    Matrix plain(6, 6);
    for (int a = 0; a < 3; ++a)
        for (int g = 0; g < 3; ++g)
            for (int b = 0; b < 2; ++b)
                for (int d = 0; d < 2; ++d) plain(a * 2 + b, g * 2 + d) = A.mat(a, g) * B.mat(b, d);
    CHECK(mnorm(super_kron(A, B).mat - plain) < 1e-15);
}

TEST_CASE("act_in_slot: placement, signs, anticommutation") {
    auto T = build_module(ModuleSpec::typical(0.5, 0.2));
    std::vector<Parities> pars{T.par, T.par};

    // even x, any slot: plain Kronecker placement
    Matrix n2 = act_in_slot({T.N, T.par}, 1, pars).mat;
    Matrix plain = Matrix::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int d = 0; d < 2; ++d) plain(a * 2 + b, a * 2 + d) = T.N(b, d);
    CHECK(mnorm(n2 - plain) < 1e-15);

    // psi+ in slot 2 equals super_kron(I, psi+), signs (-1)^{p(first index)} on odd rows
    Matrix lifted = act_in_slot({T.psi_plus, T.par}, 1, pars).mat;
    CHECK(mnorm(lifted - super_kron(ident(2), T.par, T.psi_plus, T.par)) == 0.0);
    CHECK(lifted(0 * 2 + 0, 0 * 2 + 1) == Complex(0.5, 0));   // even first index: +e
    CHECK(lifted(1 * 2 + 0, 1 * 2 + 1) == Complex(-0.5, 0));  // odd first index: -e

    // odd operators in distinct slots anticommute
    Matrix a = act_in_slot({T.psi_minus, T.par}, 0, pars).mat;
    Matrix b = act_in_slot({T.psi_plus, T.par}, 1, pars).mat;
    CHECK(mnorm(a * b + b * a) < 1e-15);

    CHECK_THROWS_AS(act_in_slot({T.N, T.par}, 2, pars), SpecError);
}

TEST_CASE("embed_two_slot: reproduces act compositions on triples") {
    auto T = build_module(ModuleSpec::typical(0.5, 0.2));
    auto P = build_module(ModuleSpec::projective(0.4));
    std::vector<Parities> pars{T.par, P.par, T.par};
    // X = psi- (x) psi+ on slots (0,2)
    Matrix X = super_kron(T.psi_minus, T.par, T.psi_plus, T.par);
    Matrix direct = embed_two_slot(X, 0, 2, pars);
    Matrix comp = act_in_slot({T.psi_minus, T.par}, 0, pars).mat *
                  act_in_slot({T.psi_plus, T.par}, 2, pars).mat;
    CHECK(mnorm(direct - comp) < 1e-14);
    // two-slot identity case: embedding into the pair itself is the identity map
    std::vector<Parities> two{T.par, T.par};
    CHECK(mnorm(embed_two_slot(X, 0, 1, two) - X) == 0.0);
}

TEST_CASE("graded permutation: swap squares to identity, signs") {
    auto P = build_module(ModuleSpec::projective(0.0));
    Matrix s = graded_swap(P.par, P.par);
    Matrix back = graded_swap(P.par, P.par);
    CHECK(mnorm(back * s - ident(16)) == 0.0);
    // odd-odd pair picks up a minus sign: basis index 0 is odd in P
    CHECK(s(0 * 4 + 0, 0 * 4 + 0) == Complex(-1, 0));
    // even-even stays +: index 1 even
    CHECK(s(1 * 4 + 1, 1 * 4 + 1) == Complex(1, 0));
    // 3-cycle consistency: applying (2,3,1) then (3,1,2) orderings returns identity
    auto T = build_module(ModuleSpec::typical(0.3, 0.0));
    std::vector<Parities> pars{T.par, P.par, T.par};
    Matrix c1 = graded_permutation({1, 2, 0}, pars);
    std::vector<Parities> rot{P.par, T.par, T.par};
    Matrix c2 = graded_permutation({1, 2, 0}, rot);
    std::vector<Parities> rot2{T.par, T.par, P.par};
    Matrix c3 = graded_permutation({1, 2, 0}, rot2);
    CHECK(mnorm(c3 * c2 * c1 - ident(16)) == 0.0);
}

TEST_CASE("jordan_chains: identity and family cases") {
    JordanData jd = jordan_chains(ident(2), {{1.0, 2}});
    CHECK(jd.chains.size() == 2);
    CHECK(jd.chains[0].size() == 1);

    // T_{e,n} (x) T_{-e,n'}: one eigenvalue, two 1-chains and one 2-chain
    const Complex e = 0.37, n1 = 0.21, n2 = -0.53;
    auto A = build_module(ModuleSpec::typical(e, n1));
    auto B = build_module(ModuleSpec::typical(-e, n2));
    Matrix om = tensor_casimir({A, B}, 0, 1);
    const Complex lam = e * (n2 - n1) - e * e;
    JordanData jt = jordan_chains(om, {{lam, 4}});
    auto prof = jt.block_profile(lam);
    REQUIRE(prof.size() == 2);
    CHECK(prof[0] == std::pair<std::size_t, int>{1, 2});
    CHECK(prof[1] == std::pair<std::size_t, int>{2, 1});

    // P (x) P: nilpotent with rank 6; 5 eigenvectors, 4 size-2 blocks, 1 size-3
    auto P1 = build_module(ModuleSpec::projective(0.4));
    auto P2 = build_module(ModuleSpec::projective(-1.1));
    Matrix opp = tensor_casimir({P1, P2}, 0, 1);
    JordanData jp = jordan_chains(opp, {{0.0, 16}});
    auto pp = jp.block_profile(0.0);
    REQUIRE(pp.size() == 3);
    CHECK(pp[0] == std::pair<std::size_t, int>{1, 5});
    CHECK(pp[1] == std::pair<std::size_t, int>{2, 4});
    CHECK(pp[2] == std::pair<std::size_t, int>{3, 1});
}

TEST_CASE("jordan_chains: reconstruction and inconsistent input") {
    const Complex e = 0.29, n1 = 1.21, n2 = 0.4;
    auto A = build_module(ModuleSpec::typical(e, n1));
    auto B = build_module(ModuleSpec::typical(-e, n2));
    Matrix om = tensor_casimir({A, B}, 0, 1);
    const Complex lam = e * (n2 - n1) - e * e;
    JordanData jd = jordan_chains(om, {{lam, 4}});
    // assemble block form via the chain basis and conjugate back
    Matrix C(4, 4), J = Matrix::Zero(4, 4);
    Eigen::Index off = 0;
    for (const auto& ch : jd.chains) {
        for (std::size_t i = 0; i < ch.size(); ++i) {
            C.col(off + i) = ch.vecs[i];
            J(off + i, off + i) = ch.lambda;
            if (i > 0) J(off + i - 1, off + i) = 1.0;
        }
        off += ch.size();
    }
    CHECK(mnorm(C * J * C.inverse() - om) < 1e-10);

    CHECK_THROWS_AS(jordan_chains(om, {{lam + 1.0, 4}}), NumericalError);
}

TEST_CASE("power_with_log: closed forms and oracle") {
    // diagonal lambda I at x = 1
    JordanData jid = jordan_chains(2.5 * ident(3), {{2.5, 3}});
    CHECK(mnorm(power_with_log(2.5 * ident(3), jid, 1.0, 1.3) - ident(3)) < 1e-14);

    // 2x2 nilpotent Jordan block: [[1, ln x / kappa], [0, 1]]
    Matrix Jb = Matrix::Zero(2, 2);
    Jb(0, 1) = 1.0;
    JordanData jj = jordan_chains(Jb, {{0.0, 2}});
    const Complex x = 0.71, kappa = 1.9;
    Matrix p = power_with_log(Jb, jj, x, kappa);
    CHECK(std::abs(p(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(p(1, 1) - 1.0) < 1e-14);
    CHECK(std::abs(p(0, 1) - std::log(0.71) / 1.9) < 1e-14);
    CHECK(std::abs(p(1, 0)) < 1e-14);

    // Omega_12 on P0 (x) P0 at x = 0.3, kappa = sqrt(2): term-by-term scalar series
    auto P0 = build_module(ModuleSpec::projective(0.0));
    Matrix om = tensor_casimir({P0, P0}, 0, 1);
    JordanData jd = jordan_chains(om, {{0.0, 16}});
    const Complex xx = 0.3, kap = std::sqrt(2.0);
    Matrix got = power_with_log(om, jd, xx, kap);
    Matrix want = Matrix::Zero(16, 16);
    Matrix pw = ident(16);
    Complex c = 1.0;
    for (int i = 0; i <= 3; ++i) {  // nilpotency degree 3
        want += c * pw;
        pw = pw * om;
        c *= std::log(0.3) / (kap * static_cast<double>(i + 1));
    }
    CHECK(mnorm(got - want) < 1e-12);

    // group property on the principal branch
    Matrix g1 = power_with_log(om, jd, 0.4, kap);
    Matrix g2 = power_with_log(om, jd, 1.7, kap);
    Matrix g12 = power_with_log(om, jd, 0.4 * 1.7, kap);
    CHECK(mnorm(g1 * g2 - g12) < 1e-12);

    // cross-check expm_times against Eigen's matrix exponential
    const Complex s(0.3, -0.8);
    Matrix ref = (s * om).exp();
    CHECK(mnorm(expm_times(om, jd, s) - ref) < 1e-11);

    CHECK_THROWS_AS(power_with_log(om, jd, 0.0, kap), SpecError);
}

TEST_CASE("solve_shifted: closed forms, oracle, singular shift") {
    Vector b0(2);
    b0 << Complex(1, 2), Complex(-3, 0.5);
    Vector v = solve_shifted(Matrix::Zero(2, 2), 1.0, b0);
    CHECK((v + b0).norm() < 1e-14);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    Vector ones = Vector::Ones(2);
    Vector w = solve_shifted(d, 1.0, ones);
    CHECK(std::abs(w(0) - 1.0) < 1e-14);
    CHECK(std::abs(w(1) - 0.5) < 1e-14);

    // first KZ recursion step against a dense LU oracle
    auto T1 = build_module(ModuleSpec::typical(0.31, 0.12));
    auto T2 = build_module(ModuleSpec::typical(0.22, -0.4));
    auto T3 = build_module(ModuleSpec::typical(0.17, 0.9));
    std::vector<Rep> f{T1, T2, T3};
    Matrix om12 = tensor_casimir(f, 0, 1), om23 = tensor_casimir(f, 1, 2);
    const Complex kappa = 1.0;
    const Complex lam = 0.31 * 0.22 + 0.31 * (-0.4 + 0.5) + 0.22 * (0.12 + 0.5);  // delta++
    Eigen::ComplexEigenSolver<Matrix> es(om12);
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < 8; ++i)
        if (std::abs(es.eigenvalues()(i) - lam) < 1e-9) pick = i;
    Vector v0 = es.eigenvectors().col(pick);
    Vector rhs = om23 * v0;
    Vector v1 = solve_shifted(om12, lam + kappa, rhs);
    Vector oracle = (om12 - (lam + kappa) * ident(8)).fullPivLu().solve(rhs);
    CHECK((v1 - oracle).norm() < 1e-12);

    CHECK_THROWS_AS(solve_shifted(d, 2.0, ones), ExcludedParameterError);
}
