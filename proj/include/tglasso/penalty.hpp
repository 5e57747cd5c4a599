#pragma once
#include <tglasso/data.hpp>
#include <tglasso/tree.hpp>

namespace tglasso {

/// Σ_j Σ_v w_v ‖β^j_{G_v}‖₂, evaluated group by group from the derived
/// weights. λ is not included.
double penalty_flat(const CoefficientMatrix& b, const OutputTree& tree);

/// The same penalty through the (s, g) recursion
///   W_j(v) = s_v Σ_c |W_j(c)| + g_v ‖β^j_{G_v}‖₂,   W_j(leaf) = Σ_{m∈G_v} |β^j_m|,
/// summed over inputs at the root. Nodes with fixed weights have no (s, g)
/// and are rejected.
double penalty_recursive(const CoefficientMatrix& b, const OutputTree& tree);

/// J×|V| matrix of ‖β^j_{G_v}‖₂, accumulated bottom-up through the tree.
Matrix group_norms(const CoefficientMatrix& b, const OutputTree& tree);

} // namespace tglasso
