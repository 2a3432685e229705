// Three-qubit expansion in the basis {1, σx, σy, σz}^{⊗3}.
//
//   ρ = (1/8)(c·1⊗1⊗1 + α_i σ_i⊗1⊗1 + β_i 1⊗σ_i⊗1 + γ_i 1⊗1⊗σ_i
//            + R_ij σ_i⊗σ_j⊗1 + S_ij σ_i⊗1⊗σ_j + T_ij 1⊗σ_i⊗σ_j
//            + Q_ijk σ_i⊗σ_j⊗σ_k)
//
// Each coefficient is Tr(op · string); c = Tr(op) is 1 for density matrices.
#pragma once

#include <array>

#include "qmarg/state.hpp"

namespace qmarg {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

struct PauliExpansion {
  double identity = 1.0;
  Vec3 alpha{}, beta{}, gamma{};
  Mat3 R{}, S{}, T{};
  std::array<Mat3, 3> Q{};

  double q(int i, int j, int k) const { return Q[i][j][k]; }
  double max_abs_three_body() const;
};

/// Single-qubit Pauli matrix; index 0 is the identity, 1..3 are x, y, z.
const ComplexMatrix& pauli(int index);

/// Pauli string σ_a ⊗ σ_b ⊗ σ_c with indices in 0..3.
ComplexMatrix pauli_string(int a, int b, int c);

PauliExpansion pauli_expansion(const DensityMatrix& rho);

/// Expansion of any Hermitian 8×8 operator. Throws if an extracted
/// coefficient has an imaginary part above 1e-10 relative to the operator
/// scale.
PauliExpansion pauli_expansion_of_operator(const ComplexMatrix& op);

ComplexMatrix reconstruct(const PauliExpansion& e);

}  // namespace qmarg
