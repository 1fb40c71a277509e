#include "kzdk/kz.hpp"

#include "kzdk/super.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace kzdk {

namespace {
constexpr double kPi = std::numbers::pi;
}

KZSystem make_kz_system(const std::array<ModuleSpec, 3>& specs, Complex kappa) {
    if (kappa == Complex(0, 0)) throw SpecError("make_kz_system: kappa = 0");
    KZSystem sys;
    sys.factors = specs;
    sys.kappa = kappa;
    for (const auto& s : specs) sys.reps.push_back(build_module(s));
    sys.composite = tensor_product(tensor_product(sys.reps[0], sys.reps[1]), sys.reps[2]);
    sys.omega12 = tensor_casimir(sys.reps, 0, 1);
    sys.omega13 = tensor_casimir(sys.reps, 0, 2);
    sys.omega23 = tensor_casimir(sys.reps, 1, 2);
    return sys;
}

std::vector<PairCase> pair_case_table(const ModuleSpec& a, const ModuleSpec& b) {
    using K = ModuleKind;
    const K ka = a.kind, kb = b.kind;
    auto simple = [](Complex lam, int mult) {
        return PairCase{lam, mult, {{1, mult}}};
    };
    if (ka == K::Atypical && kb == K::Atypical) return {simple(0.0, 1)};
    if (ka == K::Atypical && kb == K::Typical) return {simple(b.e * a.n, 2)};
    if (ka == K::Typical && kb == K::Atypical) return {simple(a.e * b.n, 2)};
    if ((ka == K::Atypical && kb == K::Projective) || (ka == K::Projective && kb == K::Atypical))
        return {simple(0.0, 4)};
    if (ka == K::Typical && kb == K::Typical) {
        if (a.e + b.e == Complex(0, 0)) {
            const Complex lam = a.e * (b.n - a.n) - a.e * a.e;
            return {PairCase{lam, 4, {{1, 2}, {2, 1}}}};
        }
        const Complex dpp = a.e * b.e + a.e * (b.n + 0.5) + b.e * (a.n + 0.5);
        const Complex dmm = a.e * b.e + a.e * (b.n - 0.5) + b.e * (a.n - 0.5);
        return {simple(dpp, 2), simple(dmm, 2)};
    }
    if ((ka == K::Typical && kb == K::Projective) || (ka == K::Projective && kb == K::Typical)) {
        const Complex e = (ka == K::Typical) ? a.e : b.e;
        const Complex np = (ka == K::Projective) ? a.n : b.n;
        return {simple(e * (np + 1.0), 2), PairCase{e * np, 4, {{2, 2}}}, simple(e * (np - 1.0), 2)};
    }
    // P (x) P: nilpotent; 5 eigenvectors, 4 size-2 blocks, 1 size-3 block
    return {PairCase{0.0, 16, {{1, 5}, {2, 4}, {3, 1}}}};
}

std::vector<std::pair<Complex, int>> pair_spectrum(const ModuleSpec& a, const ModuleSpec& b) {
    std::vector<std::pair<Complex, int>> out;
    for (const auto& c : pair_case_table(a, b)) out.emplace_back(c.lambda, c.mult);
    return out;
}

JordanData spectral_data(const KZSystem& sys, int which) {
    if (which != 12 && which != 23) throw SpecError("spectral_data: which must be 12 or 23");
    const ModuleSpec& a = (which == 12) ? sys.factors[0] : sys.factors[1];
    const ModuleSpec& b = (which == 12) ? sys.factors[1] : sys.factors[2];
    const int other = static_cast<int>((which == 12) ? sys.reps[2].dim() : sys.reps[0].dim());
    auto eigs = pair_spectrum(a, b);
    for (auto& [lam, mult] : eigs) mult *= other;
    const Matrix& om = (which == 12) ? sys.omega12 : sys.omega23;
    return jordan_chains(om, eigs);
}

// ---------------------------------------------------------------------------
// series solutions

Vector AsymptoticSolution::eval(Complex x) const { return eval_with_derivative(x).first; }

std::pair<Vector, Vector> AsymptoticSolution::eval_with_derivative(Complex x) const {
    const Complex t = (point == 0) ? x : Complex(1.0) - x;
    const Complex lt = principal_log(t);
    const Complex rho = lambda / kappa;
    const Eigen::Index D = coeffs[0][0].size();
    const int J = log_degree;
    std::vector<Complex> lpow(J + 1, 1.0);
    for (int j = 1; j <= J; ++j) lpow[j] = lpow[j - 1] * lt;

    Vector val = Vector::Zero(D), der = Vector::Zero(D);
    Complex tm = 1.0;
    for (int m = 0; m <= order; ++m) {
        for (int j = 0; j <= J; ++j) {
            const Vector& w = coeffs[m][j];
            val += tm * lpow[j] * w;
            Complex dcoef = (rho + static_cast<double>(m)) * lpow[j];
            if (j > 0) dcoef += static_cast<double>(j) * lpow[j - 1];
            der += tm * dcoef * w;
        }
        tm *= t;
    }
    const Complex tpow = std::exp(rho * lt);
    val *= tpow;
    der *= tpow / t;
    if (point == 1) der = -der;
    return {val, der};
}

double AsymptoticSolution::kz_residual(const Matrix& om12, const Matrix& om23, Complex x) const {
    auto [f, df] = eval_with_derivative(x);
    Vector rhs = om12 * f / x + om23 * f / (x - 1.0);
    return (kappa * df - rhs).norm();
}

namespace {

// Coefficients of t^{lambda/kappa} sum_{m,j} t^m (ln t)^j w[m][j] solving
// kappa g' = (A/t - B sum_s t^s) g, all solutions (columns) at once:
//   (A - (lambda + m kappa)) w[m][j] = kappa (j+1) w[m][j+1] + B sum_{p<m} w[p][j].
// Resonances lambda + m kappa in spec(A) are the excluded set.
std::vector<std::vector<Matrix>> series_recursion(const Matrix& A, const Matrix& B, Complex lambda,
                                                  Complex kappa, int M, const std::vector<Matrix>& lead,
                                                  const std::vector<Complex>& spectrumA) {
    const Eigen::Index D = A.rows();
    const int J = static_cast<int>(lead.size()) - 1;
    const Eigen::Index S = lead[0].cols();
    for (int m = 1; m <= M; ++m)
        for (const auto& mu : spectrumA)
            if (std::abs(lambda + static_cast<double>(m) * kappa - mu) < 1e-9)
                throw ExcludedParameterError(
                    "series: resonance lambda + m*kappa in spec(Omega) (excluded parameters)");

    std::vector<std::vector<Matrix>> W(M + 1, std::vector<Matrix>(J + 1, Matrix::Zero(D, S)));
    std::vector<Matrix> running(J + 1, Matrix::Zero(D, S));
    for (int j = 0; j <= J; ++j) W[0][j] = lead[j];
    for (int m = 1; m <= M; ++m) {
        for (int j = 0; j <= J; ++j) running[j] += W[m - 1][j];
        const Matrix shifted = A - (lambda + static_cast<double>(m) * kappa) * ident(D);
        Eigen::PartialPivLU<Matrix> lu(shifted);
        for (int j = J; j >= 0; --j) {
            Matrix rhs = B * running[j];
            if (j < J) rhs += kappa * static_cast<double>(j + 1) * W[m][j + 1];
            W[m][j] = lu.solve(rhs);
        }
    }
    return W;
}

std::vector<AsymptoticSolution> series_for_chain(const KZSystem& sys, const JordanChain& chain, int M,
                                                 int point) {
    const Matrix& A = (point == 0) ? sys.omega12 : sys.omega23;
    const Matrix& B = (point == 0) ? sys.omega23 : sys.omega12;
    const ModuleSpec& sa = (point == 0) ? sys.factors[0] : sys.factors[1];
    const ModuleSpec& sb = (point == 0) ? sys.factors[1] : sys.factors[2];
    std::vector<Complex> specA;
    for (const auto& [lam, mult] : pair_spectrum(sa, sb)) specA.push_back(lam);

    const Eigen::Index D = sys.dim();
    const int L = static_cast<int>(chain.size());
    // leading log-polynomial of solution i is x^{Omega/kappa} v^{(i)}
    std::vector<Matrix> lead(L, Matrix::Zero(D, L));
    for (int i = 0; i < L; ++i) {
        Complex c = 1.0;
        for (int j = 0; j <= i; ++j) {
            lead[j].col(i) = c * chain.vecs[i - j];
            c /= (sys.kappa * static_cast<double>(j + 1));
        }
    }
    auto W = series_recursion(A, B, chain.lambda, sys.kappa, M, lead, specA);

    std::vector<AsymptoticSolution> out;
    for (int i = 0; i < L; ++i) {
        AsymptoticSolution s;
        s.point = point;
        s.lambda = chain.lambda;
        s.log_degree = i;
        s.order = M;
        s.kappa = sys.kappa;
        s.coeffs.assign(M + 1, std::vector<Vector>(i + 1));
        for (int m = 0; m <= M; ++m)
            for (int j = 0; j <= i; ++j) s.coeffs[m][j] = W[m][j].col(i);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

std::vector<AsymptoticSolution> series_at0(const KZSystem& sys, const JordanChain& chain, int M) {
    return series_for_chain(sys, chain, M, 0);
}

std::vector<AsymptoticSolution> series_at1(const KZSystem& sys, const JordanChain& chain, int M) {
    return series_for_chain(sys, chain, M, 1);
}

FundamentalFrame frame_at(const KZSystem& sys, int point, int M) {
    if (point != 0 && point != 1) throw SpecError("frame_at: point must be 0 or 1");
    JordanData jd = spectral_data(sys, point == 0 ? 12 : 23);
    FundamentalFrame fr;
    fr.point = point;
    const Eigen::Index D = sys.dim();
    fr.leading = Matrix(D, D);
    Eigen::Index col = 0;
    for (const auto& chain : jd.chains) {
        auto sols = series_for_chain(sys, chain, M, point);
        for (std::size_t i = 0; i < sols.size(); ++i) {
            fr.leading.col(col++) = chain.vecs[i];
            fr.solutions.push_back(std::move(sols[i]));
        }
    }
    Eigen::JacobiSVD<Matrix> svd(fr.leading);
    const auto& sv = svd.singularValues();
    fr.condition_number = sv(0) / sv(sv.size() - 1);
    return fr;
}

namespace {

double tail_ratio(const FundamentalFrame& fr, Complex xstar) {
    double worst = 0;
    for (const auto& s : fr.solutions) {
        double last = 0;
        const double val = std::max(s.eval(xstar).norm(), 1e-300);
        const Complex t = (s.point == 0) ? xstar : Complex(1.0) - xstar;
        const double tm = std::pow(std::abs(t), s.order);
        for (const auto& w : s.coeffs[s.order]) last = std::max(last, w.norm() * tm);
        worst = std::max(worst, last / val);
    }
    return worst;
}

Matrix frame_value(const FundamentalFrame& fr, Complex x) {
    const Eigen::Index D = fr.leading.rows();
    Matrix F(D, D);
    for (Eigen::Index k = 0; k < D; ++k) F.col(k) = fr.solutions[k].eval(x);
    return F;
}

}  // namespace

Matrix associator(const KZSystem& sys, int M) {
    const Complex xstar = 0.5;
    const int cap = std::max(M, 60);
    int order = M;
    FundamentalFrame f0, f1;
    while (true) {
        f0 = frame_at(sys, 0, order);
        f1 = frame_at(sys, 1, order);
        const double tr = std::max(tail_ratio(f0, xstar), tail_ratio(f1, xstar));
        if (tr < 1e-13 || order >= cap) break;
        order = std::min(cap, order + 10);
    }
    const Matrix F = frame_value(f0, xstar);
    const Matrix G = frame_value(f1, xstar);
    // alpha = W G(x*)^{-1} F(x*) V^{-1}; canonical given the (asvj) normalization
    Matrix psi0 = F * Eigen::PartialPivLU<Matrix>(f0.leading).inverse();
    Matrix psi1 = G * Eigen::PartialPivLU<Matrix>(f1.leading).inverse();
    Eigen::FullPivLU<Matrix> lu1(psi1);
    if (!lu1.isInvertible()) throw NumericalError("associator: frame matrix singular");
    return lu1.inverse() * psi0;
}

namespace {

// exp(X) * M by a short Taylor series; X is one small integration step
void apply_exp(const Matrix& X, Matrix& M) {
    Matrix term = X * M;
    M += term;
    for (int k = 2; k <= 40; ++k) {
        term = (X * term) / static_cast<double>(k);
        M += term;
        if (term.cwiseAbs().maxCoeff() <= 1e-18 * std::max(1.0, M.cwiseAbs().maxCoeff())) break;
    }
}

// weight x parity blocks of the composite; N is diagonal in the printed bases
std::vector<std::vector<Eigen::Index>> nblock_indices(const Rep& rep) {
    const Eigen::Index D = rep.dim();
    double offdiag = 0;
    for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index j = 0; j < D; ++j)
            if (i != j) offdiag = std::max(offdiag, std::abs(rep.N(i, j)));
    if (offdiag > 1e-10) {
        std::vector<Eigen::Index> all(D);
        for (Eigen::Index i = 0; i < D; ++i) all[i] = i;
        return {all};
    }
    std::vector<std::vector<Eigen::Index>> blocks;
    std::vector<Complex> labels;
    for (Eigen::Index i = 0; i < D; ++i) {
        const Complex key = rep.N(i, i) + Complex(0, 1000.0 * rep.par[i]);
        bool found = false;
        for (std::size_t b = 0; b < labels.size(); ++b)
            if (std::abs(labels[b] - key) < 1e-7) {
                blocks[b].push_back(i);
                found = true;
                break;
            }
        if (!found) {
            labels.push_back(key);
            blocks.push_back({i});
        }
    }
    return blocks;
}

Matrix submatrix(const Matrix& M, const std::vector<Eigen::Index>& idx) {
    Matrix out(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) out(a, b) = M(idx[a], idx[b]);
    return out;
}

}  // namespace

Matrix associator_pexp(const KZSystem& sys, double t, long steps, int endpoint_order) {
    if (!(t > 0 && t < 0.5)) throw SpecError("associator_pexp: need 0 < t < 1/2");
    if (steps < 2) throw SpecError("associator_pexp: need at least 2 steps");
    if (endpoint_order < 0) throw SpecError("associator_pexp: endpoint_order < 0");
    const Eigen::Index D = sys.dim();

    // log-scaled grid: z = exp(u) on [t, 1/2], z = 1 - exp(v) on [1/2, 1-t]
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(steps) + 1);
    const long half = steps / 2, rest = steps - half;
    const double u0 = std::log(t), u1 = std::log(0.5);
    for (long k = 0; k <= half; ++k)
        grid.push_back(std::exp(u0 + (u1 - u0) * static_cast<double>(k) / static_cast<double>(half)));
    for (long k = 1; k <= rest; ++k)
        grid.push_back(1.0 -
                       std::exp(u1 + (u0 - u1) * static_cast<double>(k) / static_cast<double>(rest)));

    // regularized endpoint matrices: pure powers t^{Omega/kappa} at order 0,
    // times the first endpoint_order series corrections otherwise
    Matrix psi0, psi1;
    if (endpoint_order == 0) {
        JordanData jd12 = spectral_data(sys, 12), jd23 = spectral_data(sys, 23);
        const Complex lt = std::log(t);
        psi0 = expm_times(sys.omega12, jd12, lt / sys.kappa);
        psi1 = expm_times(sys.omega23, jd23, lt / sys.kappa);
    } else {
        auto f0 = frame_at(sys, 0, endpoint_order);
        auto f1 = frame_at(sys, 1, endpoint_order);
        psi0 = frame_value(f0, t) * Eigen::PartialPivLU<Matrix>(f0.leading).inverse();
        psi1 = frame_value(f1, 1.0 - t) * Eigen::PartialPivLU<Matrix>(f1.leading).inverse();
    }

    // alpha = psi1(1-t)^{-1} Pexp(t -> 1-t) psi0(t), associated as
    // [Pexp(1/2 -> 1-t)^{-1} psi1]^{-1} [Pexp(t -> 1/2) psi0] so that no
    // intermediate carries the full t^{gap} dynamic range
    // the fundamental matrices are weight-block diagonal (all ingredients are);
    // verified below, with a full-width fallback otherwise
    auto blocks = nblock_indices(sys.composite);
    double offmass = 0;
    for (const auto& idx : blocks) {
        std::vector<bool> inb(D, false);
        for (auto i : idx) inb[i] = true;
        for (auto i : idx)
            for (Eigen::Index j = 0; j < D; ++j)
                if (!inb[j]) offmass = std::max({offmass, std::abs(psi0(i, j)), std::abs(psi1(i, j))});
    }
    if (offmass > 1e-8) {
        std::vector<Eigen::Index> all(D);
        for (Eigen::Index i = 0; i < D; ++i) all[i] = i;
        blocks = {all};
    }

    const std::size_t mid = static_cast<std::size_t>(half);
    for (const auto& idx : blocks) {
        const Matrix A = submatrix(sys.omega12, idx), B = submatrix(sys.omega23, idx);
        // one exponential per step: exact step integral plus the Magnus
        // commutator term, so the ordering error is fourth order
        const Matrix C = (A * B - B * A) / (sys.kappa * sys.kappa);
        Matrix rows0 = submatrix(psi0, idx), rows1 = submatrix(psi1, idx);
        auto step_gen = [&](double z0, double z1) -> Matrix {
            const Complex ca = std::log(z1 / z0) / sys.kappa;
            const Complex cb = std::log((1.0 - z1) / (1.0 - z0)) / sys.kappa;
            const double h = z1 - z0;
            const double zm = 0.5 * (z0 + z1);
            const double cc = h * h * h / (12.0 * zm * zm * (zm - 1.0) * (zm - 1.0));
            return ca * A + cb * B + cc * C;
        };
        for (std::size_t k = 0; k < mid; ++k) {  // ascend t -> 1/2
            const Matrix X = step_gen(grid[k], grid[k + 1]);
            apply_exp(X, rows0);
        }
        for (std::size_t k = grid.size() - 1; k > mid; --k) {  // descend 1-t -> 1/2
            const Matrix X = -step_gen(grid[k - 1], grid[k]);
            apply_exp(X, rows1);
        }
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) {
                psi0(idx[a], idx[b]) = rows0(a, b);
                psi1(idx[a], idx[b]) = rows1(a, b);
            }
    }
    Eigen::FullPivLU<Matrix> lu(psi1);
    if (!lu.isInvertible()) throw NumericalError("associator_pexp: transported frame singular");
    return lu.inverse() * psi0;
}

Matrix braiding(const Rep& A, const Rep& B, Complex kappa) {
    if (A.factors.size() != 1 || B.factors.size() != 1)
        throw SpecError("braiding: expects family modules");
    const Matrix om = tensor_casimir({A, B}, 0, 1);
    JordanData jd = jordan_chains(om, pair_spectrum(A.factors[0], B.factors[0]));
    const Matrix half = power_with_log(om, jd, Complex(-1.0, 0.0), kappa);  // ln(-1) = +i pi
    return graded_swap(A.par, B.par) * half;
}

Matrix monodromy0(const KZSystem& sys) {
    JordanData jd = spectral_data(sys, 12);
    return expm_times(sys.omega12, jd, Complex(0, 2.0 * kPi) / sys.kappa);
}

Matrix rk4_transport(const Matrix& om12, const Matrix& om23, Complex kappa, double x0, double x1,
                     int steps) {
    const Eigen::Index D = om12.rows();
    auto rhs = [&](double x, const Matrix& F) -> Matrix {
        return (om12 / x + om23 / (x - 1.0)) * F / kappa;
    };
    Matrix F = ident(D);
    const double h = (x1 - x0) / steps;
    double x = x0;
    for (int k = 0; k < steps; ++k) {
        Matrix k1 = rhs(x, F);
        Matrix k2 = rhs(x + h / 2, F + (h / 2) * k1);
        Matrix k3 = rhs(x + h / 2, F + (h / 2) * k2);
        Matrix k4 = rhs(x + h, F + h * k3);
        F += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        x += h;
    }
    return F;
}

}  // namespace kzdk
