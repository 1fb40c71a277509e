#include "kzdk/ring.hpp"

#include "kzdk/jordan.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace kzdk {

namespace {

double dist_to_int(double x, long* nearest = nullptr) {
    const double r = std::round(x);
    if (nearest) *nearest = static_cast<long>(r);
    return std::abs(x - r);
}

// distance of a complex ratio to the integer lattice on the real axis
double dist_to_int(Complex z, long* nearest = nullptr) {
    const double d = dist_to_int(z.real(), nearest);
    return std::hypot(d, z.imag());
}

std::string cstr(Complex z) {
    std::ostringstream os;
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
    return os.str();
}

}  // namespace

GenericityReport genericity(const std::vector<ModuleSpec>& specs, Complex kappa, double tol) {
    GenericityReport rep;
    if (kappa == Complex(0, 0)) throw SpecError("genericity: kappa = 0");
    std::vector<Complex> es;
    for (const auto& s : specs)
        if (s.kind == ModuleKind::Typical) es.push_back(s.e);
    const std::size_t m = es.size();
    if (m > 16) throw SpecError("genericity: too many typical modules for subset enumeration");
    for (std::size_t mask = 1; mask < (1u << m); ++mask) {
        Complex sum = 0;
        int bits = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (1u << i)) {
                sum += es[i];
                ++bits;
            }
        long k = 0;
        const double d = dist_to_int(sum / kappa, &k);
        const bool bad = (bits == 1) ? (d < tol) : (d < tol && k != 0);
        if (bad) {
            std::ostringstream os;
            os << "sum(e)/kappa = " << cstr(sum / kappa) << " for subset {";
            bool first = true;
            for (std::size_t i = 0; i < m; ++i)
                if (mask & (1u << i)) {
                    os << (first ? "" : ",") << "e=" << cstr(es[i]);
                    first = false;
                }
            os << "} lies in " << (bits == 1 ? "Z" : "Z\\{0}");
            rep.violations.push_back({os.str(), d});
        }
    }
    // the T (x) P spectral gap adds 2e/kappa not in Z\{0}
    for (const auto& e : es) {
        long k = 0;
        const double d = dist_to_int(2.0 * e / kappa, &k);
        if (d < tol && k != 0)
            rep.violations.push_back({"2e/kappa = " + cstr(2.0 * e / kappa) + " lies in Z\\{0}", d});
    }
    return rep;
}

namespace {

struct NBlock {
    Complex nu;
    int parity;
    Matrix V;  // D x k basis of the (nu, parity) weight block
};

// Split the composite space into N-eigenvalue x parity blocks. Uses the
// coordinate basis when N is diagonal (bit-stable), otherwise diagonalizes
// within each parity block.
std::vector<NBlock> weight_blocks(const Rep& rep, double tol) {
    const Eigen::Index D = rep.dim();
    double offdiag = 0;
    for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index j = 0; j < D; ++j)
            if (i != j) offdiag = std::max(offdiag, std::abs(rep.N(i, j)));
    std::vector<NBlock> blocks;
    auto insert = [&](Complex nu, int par, const Vector& v) {
        for (auto& b : blocks)
            if (b.parity == par && std::abs(b.nu - nu) < 1e-7) {
                b.V.conservativeResize(Eigen::NoChange, b.V.cols() + 1);
                b.V.col(b.V.cols() - 1) = v;
                return;
            }
        NBlock nb{nu, par, Matrix(D, 1)};
        nb.V.col(0) = v;
        blocks.push_back(std::move(nb));
    };
    if (offdiag < tol) {
        for (Eigen::Index i = 0; i < D; ++i) insert(rep.N(i, i), rep.par[i], Vector::Unit(D, i));
    } else {
        for (int par = 0; par <= 1; ++par) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index i = 0; i < D; ++i)
                if (rep.par[i] == par) idx.push_back(i);
            if (idx.empty()) continue;
            Matrix sub(idx.size(), idx.size());
            for (std::size_t a = 0; a < idx.size(); ++a)
                for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = rep.N(idx[a], idx[b]);
            Eigen::ComplexEigenSolver<Matrix> es(sub);
            for (std::size_t c = 0; c < idx.size(); ++c) {
                Vector v = Vector::Zero(D);
                for (std::size_t a = 0; a < idx.size(); ++a) v(idx[a]) = es.eigenvectors()(a, c);
                insert(es.eigenvalues()(c), par, v);
            }
        }
    }
    std::sort(blocks.begin(), blocks.end(), [](const NBlock& a, const NBlock& b) {
        if (std::abs(a.nu.real() - b.nu.real()) > 1e-9) return a.nu.real() > b.nu.real();
        if (std::abs(a.nu.imag() - b.nu.imag()) > 1e-9) return a.nu.imag() > b.nu.imag();
        return a.parity < b.parity;
    });
    return blocks;
}

struct RawBlock {
    ModuleSpec spec;
    std::vector<Vector> cols;  // block columns in the family's printed basis order
};

bool spec_close(const ModuleSpec& a, const ModuleSpec& b, double tol) {
    return a.kind == b.kind && a.parity_reversed == b.parity_reversed && std::abs(a.e - b.e) < tol &&
           std::abs(a.n - b.n) < tol;
}

}  // namespace

std::string DecompositionResult::summands_str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < summands.size(); ++i) {
        if (i) os << " + ";
        if (summands[i].multiplicity > 1) os << summands[i].multiplicity << "*";
        os << summands[i].spec.str();
    }
    return os.str();
}

FamilyHooks classical_hooks() {
    FamilyHooks h;
    h.build = [](const ModuleSpec& s) { return build_module(s); };
    h.p_columns = [](const Vector& t, const Vector& r, const Vector& l,
                     const Vector& b) -> std::array<Vector, 4> {
        return {r, 0.5 * t + b, 0.5 * t - b, l};
    };
    h.nil_casimir = [](const Rep& c) { return casimir(c); };
    return h;
}

DecompositionResult decompose_composite(const Rep& rep, const FamilyHooks& hooks,
                                        const DecomposeOptions& opt) {
    const Eigen::Index D = rep.dim();
    // E must act as a scalar on any product of category objects
    Complex e_tot = 0;
    for (Eigen::Index i = 0; i < D; ++i) e_tot += rep.E(i, i);
    e_tot /= static_cast<double>(D);
    if ((rep.E - e_tot * ident(D)).cwiseAbs().maxCoeff() > 1e-9)
        throw NumericalError("decompose: E does not act as a scalar");

    if (opt.kappa == Complex(0, 0)) throw SpecError("decompose: kappa = 0");
    const bool zero_e = std::abs(e_tot) <= 1e-12;
    if (!zero_e) {
        long nearest = 0;
        const double d = dist_to_int(e_tot / opt.kappa, &nearest);
        if (d < opt.near_tol && !(opt.force && d > 1e-12)) {
            std::ostringstream os;
            os << "decompose: total E/kappa = " << cstr(e_tot / opt.kappa) << " is within " << d << " of "
               << nearest << " (excluded set)";
            throw ExcludedParameterError(os.str());
        }
    }

    auto blocks = weight_blocks(rep, 1e-10);
    std::vector<RawBlock> raw;

    if (!zero_e) {
        // every indecomposable is typical: one block per highest vector
        for (const auto& blk : blocks) {
            Matrix K = kernel_basis(rep.psi_plus * blk.V, 1e-9, std::max(1.0, op_norm(rep.psi_plus)));
            for (Eigen::Index c = 0; c < K.cols(); ++c) {
                Vector top = blk.V * K.col(c);
                top.normalize();
                RawBlock rb;
                rb.spec = ModuleSpec::typical(e_tot, blk.nu - 0.5, blk.parity == 1);
                rb.cols = {top, rep.psi_minus * top};
                raw.push_back(std::move(rb));
            }
        }
    } else {
        const Matrix omega = hooks.nil_casimir(rep);
        for (const auto& blk : blocks) {
            const Matrix OV = omega * blk.V;
            // projective blocks: one per independent Casimir image direction
            Eigen::JacobiSVD<Matrix> svd(OV, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const double thresh = 1e-9 * std::max(1.0, op_norm(omega));
            Eigen::Index rank = 0;
            for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()(i) > thresh) ++rank;
            Matrix Qb(D, 0);
            for (Eigen::Index c = 0; c < rank; ++c) {
                const Vector bdir = svd.matrixU().col(c);
                // min-norm t with Omega t = -2 b, t inside this weight block
                Vector coeff = svd.solve(-2.0 * bdir);
                Vector t = blk.V * coeff;
                Vector b = -0.5 * (omega * t);
                RawBlock rb;
                rb.spec = ModuleSpec::projective(blk.nu, blk.parity == 1);
                const Vector r = rep.psi_plus * t, l = rep.psi_minus * t;
                auto cols = hooks.p_columns(t, r, l, b);
                rb.cols = {cols[0], cols[1], cols[2], cols[3]};
                raw.push_back(std::move(rb));
                orthonormal_extend(Qb, b, 1e-12);
            }
            // atypical blocks: joint kernel of psi+- beyond the Casimir images
            Matrix stacked(2 * D, blk.V.cols());
            stacked << rep.psi_plus * blk.V, rep.psi_minus * blk.V;
            Matrix H0 = kernel_basis(stacked, 1e-9, std::max(1.0, op_norm(rep.psi_plus)));
            for (Eigen::Index c = 0; c < H0.cols(); ++c) {
                Vector v;
                if (!orthonormal_extend(Qb, blk.V * H0.col(c), 1e-8, &v)) continue;
                RawBlock rb;
                rb.spec = ModuleSpec::atypical(blk.nu, blk.parity == 1);
                rb.cols = {v};
                raw.push_back(std::move(rb));
            }
        }
    }

    std::stable_sort(raw.begin(), raw.end(), [](const RawBlock& a, const RawBlock& b) {
        if (std::abs(a.spec.n.real() - b.spec.n.real()) > 1e-9) return a.spec.n.real() > b.spec.n.real();
        if (a.spec.parity_reversed != b.spec.parity_reversed) return !a.spec.parity_reversed;
        return static_cast<int>(a.spec.kind) < static_cast<int>(b.spec.kind);
    });

    Eigen::Index used = 0;
    for (const auto& rb : raw) used += static_cast<Eigen::Index>(rb.cols.size());
    if (used != D) {
        std::ostringstream os;
        os << "decompose: block dimensions sum to " << used << ", expected " << D;
        throw NumericalError(os.str());
    }

    DecompositionResult res;
    res.change_of_basis = Matrix(D, D);
    Eigen::Index off = 0;
    for (const auto& rb : raw) {
        for (std::size_t c = 0; c < rb.cols.size(); ++c) res.change_of_basis.col(off + c) = rb.cols[c];
        off += static_cast<Eigen::Index>(rb.cols.size());
    }
    Eigen::FullPivLU<Matrix> lu(res.change_of_basis);
    if (!lu.isInvertible()) throw NumericalError("decompose: change of basis is singular");
    const Matrix Cinv = lu.inverse();

    // certificate: conjugated generators must be block diagonal with the
    // printed family matrices on the diagonal
    double resid = 0;
    for (int k = 0; k < 4; ++k) {
        Matrix conj = Cinv * rep.gen(k) * res.change_of_basis;
        Eigen::Index o = 0;
        for (const auto& rb : raw) {
            const Rep fam = hooks.build(rb.spec);
            const Eigen::Index dd = fam.dim();
            conj.block(o, o, dd, dd) -= fam.gen(k);
            o += dd;
        }
        resid = std::max(resid, conj.cwiseAbs().maxCoeff());
    }
    res.certificate_residual = resid;
    if (resid > opt.tol) {
        std::ostringstream os;
        os << "decompose: certificate residual " << resid << " above " << opt.tol;
        throw NumericalError(os.str());
    }

    for (const auto& rb : raw) {
        res.blocks.push_back(rb.spec);
        if (!res.summands.empty() && spec_close(res.summands.back().spec, rb.spec, 1e-7))
            res.summands.back().multiplicity++;
        else
            res.summands.push_back({rb.spec, 1});
    }
    return res;
}

DecompositionResult decompose(const Rep& A, const Rep& B, const DecomposeOptions& opt) {
    std::vector<ModuleSpec> specs = A.factors;
    specs.insert(specs.end(), B.factors.begin(), B.factors.end());
    auto rep = genericity(specs, opt.kappa, opt.force ? 1e-12 : opt.near_tol);
    if (!rep.generic())
        throw ExcludedParameterError("decompose: excluded parameters: " + rep.violations.front().condition);
    return decompose_composite(tensor_product(A, B), classical_hooks(), opt);
}

bool same_summands(const DecompositionResult& a, const DecompositionResult& b, double tol) {
    if (a.summands.size() != b.summands.size()) return false;
    std::vector<bool> taken(b.summands.size(), false);
    for (const auto& sa : a.summands) {
        bool found = false;
        for (std::size_t j = 0; j < b.summands.size(); ++j) {
            if (taken[j]) continue;
            if (spec_close(sa.spec, b.summands[j].spec, tol) &&
                sa.multiplicity == b.summands[j].multiplicity) {
                taken[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace kzdk
