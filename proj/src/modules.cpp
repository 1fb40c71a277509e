#include "kzdk/modules.hpp"

#include <cmath>
#include <sstream>

namespace kzdk {

namespace {

std::string num_str(Complex z) {
    std::ostringstream os;
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
    return os.str();
}

double parse_number(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            const double p = std::stod(s.substr(0, slash));
            const double q = std::stod(s.substr(slash + 1));
            if (q == 0.0) throw SpecError("module spec: zero denominator in '" + s + "'");
            return p / q;
        }
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw SpecError("module spec: trailing characters in number '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw SpecError("module spec: cannot parse number '" + s + "'");
    } catch (const std::out_of_range&) {
        throw SpecError("module spec: number out of range '" + s + "'");
    }
}

}  // namespace

std::string ModuleSpec::str() const {
    std::string s = parity_reversed ? "Pi*" : "";
    switch (kind) {
        case ModuleKind::Typical: return s + "T:" + num_str(e) + "," + num_str(n);
        case ModuleKind::Atypical: return s + "A:" + num_str(n);
        case ModuleKind::Projective: return s + "P:" + num_str(n);
    }
    return s;
}

ModuleSpec parse_module_spec(const std::string& input) {
    std::string s = input;
    bool rev = false;
    if (s.rfind("Pi*", 0) == 0) {
        rev = true;
        s = s.substr(3);
    }
    if (s.size() < 3 || s[1] != ':') throw SpecError("module spec: expected K:params in '" + input + "'");
    const char kind = s[0];
    const std::string rest = s.substr(2);
    if (kind == 'T') {
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw SpecError("module spec: T needs e,n in '" + input + "'");
        const double e = parse_number(rest.substr(0, comma));
        const double n = parse_number(rest.substr(comma + 1));
        if (e == 0.0) throw SpecError("module spec: typical module requires e != 0");
        return ModuleSpec::typical(e, n, rev);
    }
    if (kind == 'A') return ModuleSpec::atypical(parse_number(rest), rev);
    if (kind == 'P') return ModuleSpec::projective(parse_number(rest), rev);
    throw SpecError("module spec: unknown kind '" + std::string(1, kind) + "' in '" + input + "'");
}

Rep build_module(const ModuleSpec& spec) {
    Rep r;
    r.factors = {spec};
    switch (spec.kind) {
        case ModuleKind::Typical: {
            if (spec.e == Complex(0, 0)) throw SpecError("build_module: typical module requires e != 0");
            r.par = {0, 1};
            r.E = spec.e * ident(2);
            r.N = Matrix::Zero(2, 2);
            r.N(0, 0) = spec.n + 0.5;
            r.N(1, 1) = spec.n - 0.5;
            r.psi_plus = Matrix::Zero(2, 2);
            r.psi_plus(0, 1) = spec.e;
            r.psi_minus = Matrix::Zero(2, 2);
            r.psi_minus(1, 0) = 1.0;
            break;
        }
        case ModuleKind::Atypical: {
            r.par = {0};
            r.E = Matrix::Zero(1, 1);
            r.N = spec.n * ident(1);
            r.psi_plus = Matrix::Zero(1, 1);
            r.psi_minus = Matrix::Zero(1, 1);
            break;
        }
        case ModuleKind::Projective: {
            r.par = {1, 0, 0, 1};
            r.E = Matrix::Zero(4, 4);
            r.N = Matrix::Zero(4, 4);
            r.N(0, 0) = spec.n + 1.0;
            r.N(1, 1) = spec.n;
            r.N(2, 2) = spec.n;
            r.N(3, 3) = spec.n - 1.0;
            r.psi_plus = Matrix::Zero(4, 4);
            r.psi_plus(0, 1) = 0.5;
            r.psi_plus(0, 2) = 0.5;
            r.psi_plus(1, 3) = 0.5;
            r.psi_plus(2, 3) = -0.5;
            r.psi_minus = Matrix::Zero(4, 4);
            r.psi_minus(1, 0) = -0.5;
            r.psi_minus(2, 0) = 0.5;
            r.psi_minus(3, 1) = 0.5;
            r.psi_minus(3, 2) = 0.5;
            break;
        }
    }
    if (spec.parity_reversed)
        for (auto& p : r.par) p ^= 1;
    return r;
}

Rep parity_reverse(const Rep& rep) {
    Rep out = rep;
    for (auto& p : out.par) p ^= 1;
    for (auto& f : out.factors) f.parity_reversed = !f.parity_reversed;
    return out;
}

Matrix casimir(const Rep& r) {
    return r.N * r.E + r.E * r.N + r.psi_minus * r.psi_plus - r.psi_plus * r.psi_minus + r.E * r.E;
}

double relations_residual(const Rep& r) {
    double m = 0.0;
    auto upd = [&m](const Matrix& x) { m = std::max(m, x.cwiseAbs().maxCoeff()); };
    upd(r.N * r.psi_plus - r.psi_plus * r.N - r.psi_plus);
    upd(r.N * r.psi_minus - r.psi_minus * r.N + r.psi_minus);
    upd(r.psi_plus * r.psi_minus + r.psi_minus * r.psi_plus - r.E);
    upd(r.E * r.N - r.N * r.E);
    upd(r.E * r.psi_plus - r.psi_plus * r.E);
    upd(r.E * r.psi_minus - r.psi_minus * r.E);
    // parity structure: E,N even, psi+- odd
    for (Eigen::Index i = 0; i < r.dim(); ++i)
        for (Eigen::Index j = 0; j < r.dim(); ++j) {
            const bool same = r.par[i] == r.par[j];
            if (!same) m = std::max({m, std::abs(r.E(i, j)), std::abs(r.N(i, j))});
            if (same) m = std::max({m, std::abs(r.psi_plus(i, j)), std::abs(r.psi_minus(i, j))});
        }
    return m;
}

Matrix tensor_casimir(const std::vector<Rep>& factors, std::size_t i, std::size_t j) {
    if (i == j || i >= factors.size() || j >= factors.size())
        throw SpecError("tensor_casimir: bad slot indices");
    std::vector<Parities> pars;
    pars.reserve(factors.size());
    for (const auto& f : factors) pars.push_back(f.par);
    auto at = [&](const Matrix& x, std::size_t s) {
        return act_in_slot({x, factors[s].par}, s, pars).mat;
    };
    const Rep &A = factors[i], &B = factors[j];
    return at(A.N, i) * at(B.E, j) + at(A.E, i) * at(B.N, j) + at(A.psi_minus, i) * at(B.psi_plus, j) -
           at(A.psi_plus, i) * at(B.psi_minus, j) + at(A.E, i) * at(B.E, j);
}

Matrix diagonal_action(const std::vector<Rep>& factors, int k) {
    std::vector<Parities> pars;
    pars.reserve(factors.size());
    for (const auto& f : factors) pars.push_back(f.par);
    Eigen::Index D = 1;
    for (const auto& f : factors) D *= f.dim();
    Matrix acc = Matrix::Zero(D, D);
    for (std::size_t s = 0; s < factors.size(); ++s)
        acc += act_in_slot({factors[s].gen(k), factors[s].par}, s, pars).mat;
    return acc;
}

Rep tensor_product(const Rep& a, const Rep& b) {
    Rep out;
    out.factors = a.factors;
    out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
    out.par = parity_product(a.par, b.par);
    const std::vector<Parities> pars{a.par, b.par};
    auto delta = [&](const Matrix& xa, const Matrix& xb) -> Matrix {
        return act_in_slot({xa, a.par}, 0, pars).mat + act_in_slot({xb, b.par}, 1, pars).mat;
    };
    out.E = delta(a.E, b.E);
    out.N = delta(a.N, b.N);
    out.psi_plus = delta(a.psi_plus, b.psi_plus);
    out.psi_minus = delta(a.psi_minus, b.psi_minus);
    return out;
}

Rep dual_module(const Rep& rep) {
    Rep out = rep;
    out.E = -rep.E;
    out.N = -rep.N;
    out.psi_plus = rep.psi_minus;
    out.psi_minus = -rep.psi_plus;
    return out;
}

}  // namespace kzdk
