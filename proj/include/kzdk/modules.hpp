#pragma once

#include "kzdk/super.hpp"

#include <array>
#include <optional>

namespace kzdk {

enum class ModuleKind { Typical, Atypical, Projective };

/// Label of a category object: T_{e,n}, A_n, P_n, optionally parity reversed.
struct ModuleSpec {
    ModuleKind kind = ModuleKind::Atypical;
    Complex e{0.0, 0.0};  // 0 for Atypical/Projective
    Complex n{0.0, 0.0};
    bool parity_reversed = false;

    static ModuleSpec typical(Complex e, Complex n, bool rev = false) {
        return {ModuleKind::Typical, e, n, rev};
    }
    static ModuleSpec atypical(Complex n, bool rev = false) { return {ModuleKind::Atypical, 0.0, n, rev}; }
    static ModuleSpec projective(Complex n, bool rev = false) {
        return {ModuleKind::Projective, 0.0, n, rev};
    }
    int dim() const {
        switch (kind) {
            case ModuleKind::Typical: return 2;
            case ModuleKind::Atypical: return 1;
            case ModuleKind::Projective: return 4;
        }
        return 0;
    }
    std::string str() const;
};

/// "T:e,n", "A:n", "P:n" with optional "Pi*" prefix; numbers decimal or "p/q".
ModuleSpec parse_module_spec(const std::string& s);

/// Concrete representation: generator matrices sharing one parity vector.
/// `factors` keeps the tensor history (a single entry for family modules).
struct Rep {
    std::vector<ModuleSpec> factors;
    Parities par;
    Matrix E, N, psi_plus, psi_minus;

    Eigen::Index dim() const { return E.rows(); }
    const Matrix& gen(int k) const {
        switch (k) {
            case 0: return E;
            case 1: return N;
            case 2: return psi_plus;
        }
        return psi_minus;
    }
    GradedMatrix graded(const Matrix& m) const { return {m, par}; }
};

/// The printed matrices of the three families, parity reversal as a flag.
/// Throws SpecError for Typical with e = 0.
Rep build_module(const ModuleSpec& spec);

/// Same matrices, flipped parity vector, parityReversed toggled.
Rep parity_reverse(const Rep& rep);

/// Casimir N E + E N + psi- psi+ - psi+ psi- + E^2 in the given rep.
Matrix casimir(const Rep& rep);

/// Residual of the gl(1|1) relations ([N,psi+-] = +-psi+-, {psi+,psi-} = E,
/// E central) as matrix identities; also checks generator parities.
double relations_residual(const Rep& rep);

/// Two-slot Casimir acting on the full product of `factors`, slots i < j.
Matrix tensor_casimir(const std::vector<Rep>& factors, std::size_t i, std::size_t j);

/// Tensor product with the primitive coproduct (x (x) 1 + 1 (x) x, super signs).
Rep tensor_product(const Rep& a, const Rep& b);

/// Diagonal action of generator k (0:E 1:N 2:psi+ 3:psi-) on a product.
Matrix diagonal_action(const std::vector<Rep>& factors, int k);

/// Chevalley-involution dual: omega(E) = -E, omega(N) = -N, omega(psi+-) = +-psi-+,
/// realized as supertranspose-conjugate. Used for sanity checks only.
Rep dual_module(const Rep& rep);

}  // namespace kzdk
