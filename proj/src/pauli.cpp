#include "qmarg/pauli.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qmarg {

const ComplexMatrix& pauli(int index) {
  static const std::array<ComplexMatrix, 4> table = [] {
    std::array<ComplexMatrix, 4> t;
    const Complex i(0.0, 1.0);
    t[0] = ComplexMatrix::Identity(2, 2);
    t[1] = (ComplexMatrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished();
    t[2] = (ComplexMatrix(2, 2) << 0.0, -i, i, 0.0).finished();
    t[3] = (ComplexMatrix(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();
    return t;
  }();
  if (index < 0 || index > 3) throw std::out_of_range("pauli index must be in 0..3");
  return table[index];
}

ComplexMatrix pauli_string(int a, int b, int c) { return kron(kron(pauli(a), pauli(b)), pauli(c)); }

double PauliExpansion::max_abs_three_body() const {
  double m = 0.0;
  for (const auto& slab : Q)
    for (const auto& row : slab)
      for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

PauliExpansion pauli_expansion_of_operator(const ComplexMatrix& op) {
  if (op.rows() != 8 || op.cols() != 8)
    throw std::invalid_argument("pauli_expansion needs a three-qubit (8x8) operator");
  const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
  auto coefficient = [&](int a, int b, int c) {
    const Complex t = (op * pauli_string(a, b, c)).trace();
    if (std::abs(t.imag()) > 1e-10 * scale)
      throw std::invalid_argument("operator is not Hermitian: Pauli coefficient (" +
                                  std::to_string(a) + std::to_string(b) + std::to_string(c) +
                                  ") has imaginary part " + std::to_string(t.imag()));
    return t.real();
  };

  PauliExpansion e;
  e.identity = coefficient(0, 0, 0);
  for (int i = 0; i < 3; ++i) {
    e.alpha[i] = coefficient(i + 1, 0, 0);
    e.beta[i] = coefficient(0, i + 1, 0);
    e.gamma[i] = coefficient(0, 0, i + 1);
    for (int j = 0; j < 3; ++j) {
      e.R[i][j] = coefficient(i + 1, j + 1, 0);
      e.S[i][j] = coefficient(i + 1, 0, j + 1);
      e.T[i][j] = coefficient(0, i + 1, j + 1);
      for (int k = 0; k < 3; ++k) e.Q[i][j][k] = coefficient(i + 1, j + 1, k + 1);
    }
  }
  return e;
}

PauliExpansion pauli_expansion(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2, 2})
    throw std::invalid_argument("pauli_expansion needs dims [2,2,2]");
  return pauli_expansion_of_operator(rho.matrix());
}

ComplexMatrix reconstruct(const PauliExpansion& e) {
  ComplexMatrix out = e.identity * pauli_string(0, 0, 0);
  for (int i = 0; i < 3; ++i) {
    out += e.alpha[i] * pauli_string(i + 1, 0, 0);
    out += e.beta[i] * pauli_string(0, i + 1, 0);
    out += e.gamma[i] * pauli_string(0, 0, i + 1);
    for (int j = 0; j < 3; ++j) {
      out += e.R[i][j] * pauli_string(i + 1, j + 1, 0);
      out += e.S[i][j] * pauli_string(i + 1, 0, j + 1);
      out += e.T[i][j] * pauli_string(0, i + 1, j + 1);
      for (int k = 0; k < 3; ++k) out += e.Q[i][j][k] * pauli_string(i + 1, j + 1, k + 1);
    }
  }
  return out / 8.0;
}

}  // namespace qmarg
