#pragma once

#include "kzdk/kz.hpp"

namespace kzdk {

enum class Axiom { Pentagon, HexagonPlus, HexagonMinus, BetaBraid, Equivariance, Unitality };

const char* axiom_name(Axiom a);

struct AxiomReport {
    Axiom axiom;
    std::vector<ModuleSpec> operands;
    double residual = 0;
    double tolerance = 0;
    bool passed = false;
};

struct CategoryOptions {
    Complex kappa{1.0, 0.0};
    int order = 40;    // series order floor for associators
    double tol = 1e-8;
};

/// Associator of a spec triple (local convenience around kz_engine).
Matrix associator_on(const std::array<ModuleSpec, 3>& mods, Complex kappa, int M = 40);

/// Associators with one fused pair, realized through the tensor-ring
/// decomposition of the fused slot: conjugate by the change of basis, apply
/// the family associators blockwise, conjugate back.
/// fuse = 0: alpha_{(12),3,4};  fuse = 1: alpha_{1,(23),4};  fuse = 2: alpha_{1,2,(34)}.
Matrix fused_associator(const std::array<ModuleSpec, 4>& mods, int fuse, Complex kappa, int M = 40);

/// Braiding of slot 1 with the fused pair (23): sigma_{1,(23)} as a matrix
/// coords(1,2,3) -> coords(2,3,1); exponent data stays analytic via the
/// decomposition of the fused slot.
Matrix fused_braiding_1_23(const std::array<ModuleSpec, 3>& mods, Complex kappa, int sign);

/// Pentagon (five fused/lifted associators on the 4-fold space).
AxiomReport pentagon_residual(const std::array<ModuleSpec, 4>& mods, const CategoryOptions& opt);

/// Hexagon for sigma^{+1} (sign=+1) or sigma^{-1} (sign=-1).
AxiomReport hexagon_residual(const std::array<ModuleSpec, 3>& mods, int sign, const CategoryOptions& opt);

/// Max generator-commutant norm of a given associator matrix.
AxiomReport equivariance_residual(const Matrix& alpha, const std::array<ModuleSpec, 3>& mods,
                                  const CategoryOptions& opt);

/// beta^pm = alpha (sigma^{pm1} (x) Id) alpha^{-1}; checks
/// beta^pm beta^-+ = Id on the first three operands and the braid relation
/// beta12 beta23 beta12 = beta23 beta12 beta23 on all four.
AxiomReport beta_braid_residual(const std::array<ModuleSpec, 4>& mods, int sign,
                                const CategoryOptions& opt);

/// Triangle with the unit object: alpha_{X,A0,Y} must be the identity.
AxiomReport unitality_residual(const ModuleSpec& x, const ModuleSpec& y, const CategoryOptions& opt);

}  // namespace kzdk
