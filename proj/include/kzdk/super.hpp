#pragma once

#include "kzdk/types.hpp"

namespace kzdk {

/// Parity vector of a tensor product, row-major flattening (first factor slowest).
Parities parity_product(const Parities& a, const Parities& b);
Parities parity_product(const std::vector<Parities>& factors);

/// Super tensor product of operators.
///
/// Sign convention: (A (x) B)(u (x) v) = (-1)^{p(B) p(u)} Au (x) Bv on
/// homogeneous operators and states, with tensor states flattened plainly.
/// Entrywise, C[(a,b),(g,d)] = (-1)^{p(g) (p(b)+p(d))} A(a,g) B(b,d).
/// Koszul signs therefore attach to an odd operator acting in a right slot,
/// i.e. they come from the parities of the factors to its left.
GradedMatrix super_kron(const GradedMatrix& A, const GradedMatrix& B);
Matrix super_kron(const Matrix& A, const Parities& pa, const Matrix& B, const Parities& pb);

/// 1 (x) ... (x) x (x) ... (x) 1 with x in slot `slot` (0-based), Koszul signs
/// from the parities of the factors left of the slot when x is odd.
GradedMatrix act_in_slot(const GradedMatrix& x, std::size_t slot, const std::vector<Parities>& factors);

/// Embed a two-slot operator X on V_i (x) V_j (i < j) into the full product,
/// acting as identity elsewhere. X is decomposed into matrix units and each
/// unit pair is placed via act_in_slot, which reproduces the canonical
/// embedding (a (x) b)_{ij} = (a in slot i)(b in slot j).
Matrix embed_two_slot(const Matrix& X, std::size_t i, std::size_t j, const std::vector<Parities>& factors);

/// Graded permutation operator. `perm[k]` is the input factor placed at
/// output slot k; the matrix maps the flattened product of `factors` to the
/// flattened product in the permuted order, with the Koszul sign of
/// reordering homogeneous basis vectors (one -1 per inverted odd pair).
Matrix graded_permutation(const std::vector<std::size_t>& perm, const std::vector<Parities>& factors);

/// Two-factor swap V (x) W -> W (x) V, v (x) w -> (-1)^{p(v)p(w)} w (x) v.
Matrix graded_swap(const Parities& pa, const Parities& pb);

}  // namespace kzdk
