#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vcqa {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;

/// One weighted Pauli string. ops has one character per qubit from
/// {I, X, Y, Z}; ops[j-1] acts on qubit j. Qubit 1 is the most significant
/// bit of the computational-basis index.
struct PauliTerm {
  double coefficient = 0.0;
  std::string ops;
};

/// Hermitian operator as a real-weighted sum of Pauli strings over n qubits.
/// Duplicate strings are merged at construction; the operator is immutable
/// afterwards and safe to share across threads.
class PauliSum {
 public:
  PauliSum() = default;
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  static PauliSum zero(int n_qubits) { return PauliSum(n_qubits, {}); }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t{1} << n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  /// No X or Y anywhere: the operator is diagonal in the computational basis.
  bool is_diagonal() const { return diagonal_; }

  /// Diagonal entries; valid for any operator (off-diagonal strings have
  /// zero diagonal), cheap for diagonal ones.
  Eigen::VectorXd diagonal() const;

  /// H|psi> computed term by term without materializing the matrix.
  StateVector apply(const StateVector& psi) const;
  void apply_into(const StateVector& psi, StateVector& out) const;

  /// Re(<psi|H|psi>); throws if the imaginary residue exceeds 1e-10.
  double expectation(const StateVector& psi) const;

  /// Dense matrix, for small systems and cross-checks.
  Eigen::MatrixXcd to_dense() const;

  PauliSum scaled(double factor) const;

  /// Merged weighted sum; all addends must share the qubit count.
  static PauliSum weighted_sum(
      const std::vector<std::pair<double, const PauliSum*>>& parts);

  /// Frobenius-norm of the commutator [A, B]; exact zero when every term
  /// pair commutes trivially (e.g. two diagonal operators).
  static double commutator_norm(const PauliSum& a, const PauliSum& b);

  /// Bitmask/phase form of one string: P = weight * X^x_mask Z^z_mask with
  /// weight = coefficient * i^{#Y}.
  struct CompiledTerm {
    std::uint64_t x_mask = 0;
    std::uint64_t z_mask = 0;
    Complex weight{0.0, 0.0};
  };
  const std::vector<CompiledTerm>& compiled() const { return compiled_; }

 private:
  void compile();

  int n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
  std::vector<CompiledTerm> compiled_;
  bool diagonal_ = true;
};

/// Helpers for assembling the model Hamiltonians.
PauliTerm single_site_term(int n_qubits, int site, char op, double coeff);
PauliTerm two_site_term(int n_qubits, int site_a, int site_b, char op,
                        double coeff);

}  // namespace vcqa
