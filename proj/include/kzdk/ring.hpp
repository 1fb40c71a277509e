#pragma once

#include "kzdk/modules.hpp"

#include <functional>

namespace kzdk {

struct Summand {
    ModuleSpec spec;
    int multiplicity = 1;
};

struct DecompositionResult {
    std::vector<Summand> summands;  // sorted by descending n-label, plain before Pi
    std::vector<ModuleSpec> blocks; // ungrouped, one per block, in column order
    Matrix change_of_basis;         // block basis columns in summand order
    double certificate_residual;    // max deviation of conjugated generators from family matrices
    std::string summands_str() const;
};

struct DecomposeOptions {
    Complex kappa{1.0, 0.0};
    double near_tol = 1e-6;  // refuse this close to the excluded set
    bool force = false;      // override the near-violation refusal
    double tol = 1e-9;
};

struct GenericityViolation {
    std::string condition;  // human-readable, e.g. "(e1+e2)/kappa = 1"
    double distance;        // distance to the offending integer
};

struct GenericityReport {
    std::vector<GenericityViolation> violations;
    bool generic() const { return violations.empty(); }
};

/// Category genericity over all nonempty subsets of the typical specs:
/// singletons need e/kappa away from Z, larger subsets need the sum away
/// from Z \ {0}. Also flags 2e/kappa in Z \ {0} (the T (x) P resonance gap).
GenericityReport genericity(const std::vector<ModuleSpec>& specs, Complex kappa, double tol = 1e-9);

/// How a decomposition engine certifies blocks of one family presentation.
struct FamilyHooks {
    std::function<Rep(const ModuleSpec&)> build;
    /// Printed-basis columns of a projective block from its (t, r, l, b) data.
    std::function<std::array<Vector, 4>(const Vector& t, const Vector& r, const Vector& l,
                                        const Vector& b)>
        p_columns;
    /// Nilpotent Casimir-type operator used to detect projective blocks at E = 0.
    std::function<Matrix(const Rep& composite)> nil_casimir;
};

FamilyHooks classical_hooks();

/// Split a composite with scalar E into indecomposable family blocks.
DecompositionResult decompose_composite(const Rep& composite, const FamilyHooks& hooks,
                                        const DecomposeOptions& opt);

/// Tensor-product decomposition of two classical modules, certificate included.
DecompositionResult decompose(const Rep& A, const Rep& B, const DecomposeOptions& opt = {});

/// Multiset equality of summand lists (labels compared within tol).
bool same_summands(const DecompositionResult& a, const DecompositionResult& b, double tol = 1e-8);

}  // namespace kzdk
