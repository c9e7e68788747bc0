#include "vcqa/pauli.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace vcqa {

namespace {

bool valid_op(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

// i^k for k in 0..3
Complex i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > 62)
    throw std::invalid_argument("PauliSum: unsupported qubit count");
  std::unordered_map<std::string, std::size_t> index;
  for (auto& term : terms) {
    if (static_cast<int>(term.ops.size()) != n_qubits)
      throw std::invalid_argument("PauliSum: string length " +
                                  std::to_string(term.ops.size()) +
                                  " does not match qubit count " +
                                  std::to_string(n_qubits));
    for (char c : term.ops)
      if (!valid_op(c))
        throw std::invalid_argument("PauliSum: invalid Pauli label '" +
                                    std::string(1, c) + "'");
    auto [it, inserted] = index.emplace(term.ops, terms_.size());
    if (inserted)
      terms_.push_back(std::move(term));
    else
      terms_[it->second].coefficient += term.coefficient;
  }
  compile();
}

void PauliSum::compile() {
  compiled_.clear();
  compiled_.reserve(terms_.size());
  diagonal_ = true;
  for (const auto& term : terms_) {
    CompiledTerm c;
    int n_y = 0;
    for (int q = 0; q < n_qubits_; ++q) {
      // qubit q+1 sits at bit (n_qubits - 1 - q) of the basis index
      const std::uint64_t bit = std::uint64_t{1} << (n_qubits_ - 1 - q);
      switch (term.ops[q]) {
        case 'X': c.x_mask |= bit; break;
        case 'Y': c.x_mask |= bit; c.z_mask |= bit; ++n_y; break;
        case 'Z': c.z_mask |= bit; break;
        default: break;
      }
    }
    c.weight = term.coefficient * i_power(n_y);
    if (c.x_mask != 0) diagonal_ = false;
    compiled_.push_back(c);
  }
}

Eigen::VectorXd PauliSum::diagonal() const {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
  for (const auto& c : compiled_) {
    if (c.x_mask != 0) continue;
    const double w = c.weight.real();
    for (std::size_t b = 0; b < dim(); ++b) {
      const int parity = std::popcount(b & c.z_mask) & 1;
      diag[static_cast<Eigen::Index>(b)] += parity ? -w : w;
    }
  }
  return diag;
}

void PauliSum::apply_into(const StateVector& psi, StateVector& out) const {
  if (psi.size() != static_cast<Eigen::Index>(dim()))
    throw std::invalid_argument("PauliSum::apply: dimension mismatch");
  out.setZero(psi.size());
  const std::size_t d = dim();
  for (const auto& c : compiled_) {
    if (c.x_mask == 0) {
      for (std::size_t b = 0; b < d; ++b) {
        const int parity = std::popcount(b & c.z_mask) & 1;
        out[b] += (parity ? -c.weight : c.weight) * psi[b];
      }
    } else {
      for (std::size_t b = 0; b < d; ++b) {
        const int parity = std::popcount(b & c.z_mask) & 1;
        out[b ^ c.x_mask] += (parity ? -c.weight : c.weight) * psi[b];
      }
    }
  }
}

StateVector PauliSum::apply(const StateVector& psi) const {
  StateVector out(psi.size());
  apply_into(psi, out);
  return out;
}

double PauliSum::expectation(const StateVector& psi) const {
  const Complex value = psi.dot(apply(psi));
  if (std::abs(value.imag()) > 1e-10 * (1.0 + std::abs(value.real())))
    throw std::runtime_error("PauliSum::expectation: non-real value " +
                             std::to_string(value.imag()));
  return value.real();
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& c : compiled_) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const int parity =
          std::popcount(static_cast<std::uint64_t>(b) & c.z_mask) & 1;
      m(b ^ static_cast<Eigen::Index>(c.x_mask), b) +=
          parity ? -c.weight : c.weight;
    }
  }
  return m;
}

PauliSum PauliSum::scaled(double factor) const {
  std::vector<PauliTerm> terms = terms_;
  for (auto& t : terms) t.coefficient *= factor;
  return PauliSum(n_qubits_, std::move(terms));
}

PauliSum PauliSum::weighted_sum(
    const std::vector<std::pair<double, const PauliSum*>>& parts) {
  if (parts.empty()) throw std::invalid_argument("weighted_sum: no parts");
  const int n = parts.front().second->n_qubits();
  std::vector<PauliTerm> terms;
  for (const auto& [weight, op] : parts) {
    if (op->n_qubits() != n)
      throw std::invalid_argument("weighted_sum: qubit count mismatch");
    for (const auto& t : op->terms())
      terms.push_back({weight * t.coefficient, t.ops});
  }
  return PauliSum(n, std::move(terms));
}

double PauliSum::commutator_norm(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("commutator_norm: qubit count mismatch");
  if (a.is_diagonal() && b.is_diagonal()) return 0.0;
  // Pauli strings multiply as X^x1 Z^z1 X^x2 Z^z2 =
  // (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}; the commutator stays a string sum
  // whose Frobenius norm is sqrt(2^N sum |c|^2).
  std::map<std::pair<std::uint64_t, std::uint64_t>, Complex> acc;
  for (const auto& ta : a.compiled_) {
    for (const auto& tb : b.compiled_) {
      const double sign_ab =
          (std::popcount(ta.z_mask & tb.x_mask) & 1) ? -1.0 : 1.0;
      const double sign_ba =
          (std::popcount(tb.z_mask & ta.x_mask) & 1) ? -1.0 : 1.0;
      const Complex coeff = ta.weight * tb.weight * (sign_ab - sign_ba);
      if (coeff == Complex{0.0, 0.0}) continue;
      acc[{ta.x_mask ^ tb.x_mask, ta.z_mask ^ tb.z_mask}] += coeff;
    }
  }
  double sum_sq = 0.0;
  for (const auto& [key, coeff] : acc) sum_sq += std::norm(coeff);
  return std::sqrt(std::ldexp(sum_sq, a.n_qubits()));
}

PauliTerm single_site_term(int n_qubits, int site, char op, double coeff) {
  if (site < 1 || site > n_qubits)
    throw std::invalid_argument("site index out of range");
  PauliTerm t{coeff, std::string(static_cast<std::size_t>(n_qubits), 'I')};
  t.ops[site - 1] = op;
  return t;
}

PauliTerm two_site_term(int n_qubits, int site_a, int site_b, char op,
                        double coeff) {
  if (site_a < 1 || site_a > n_qubits || site_b < 1 || site_b > n_qubits ||
      site_a == site_b)
    throw std::invalid_argument("site pair out of range");
  PauliTerm t{coeff, std::string(static_cast<std::size_t>(n_qubits), 'I')};
  t.ops[site_a - 1] = op;
  t.ops[site_b - 1] = op;
  return t;
}

}  // namespace vcqa
