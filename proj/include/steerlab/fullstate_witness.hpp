#pragma once

// Witness kernels built from complete knowledge of a qubit target state:
// |psi><psi| expanded over Pauli strings, each local Pauli factor written as
// a signed sum of the two projectors of its eigenbasis.

#include <string>
#include <vector>

#include "steerlab/tensor_core.hpp"

namespace steerlab {

/// Local frame. The identity is measured in the computational basis with both
/// outcomes weighted equally.
enum class Observable { identity, x, y, z };

char observable_symbol(Observable o);

/// Eigenbasis (columns for outcomes 0 and 1) measured for an observable:
/// computational for identity and z, |+>,|-> for x, |+i>,|-i> for y.
Matrix observable_basis(Observable o);

struct TomographicTerm {
    std::vector<Observable> observables;
    std::vector<int> outcomes;
    double coefficient = 0.0;
};

/// Largest supported qubit count; the term list grows as 8^N.
inline constexpr std::size_t kMaxFullstateQubits = 6;

/// Terms with sum_t c_t (x)_k Pi(observable_k, outcome_k) = |psi><psi|.
/// Pauli strings with vanishing expectation are dropped.
std::vector<TomographicTerm> decompose(const StateVector& psi);

/// sum_t c_t (x)_k Pi(observable_k, outcome_k).
Matrix reconstruct(const std::vector<TomographicTerm>& terms, const QuditRegister& reg);

/// sum_t c_t P(outcomes_t | observables_t), equal to <psi|rho|psi>.
double evaluate_fullstate_kernel(const std::vector<TomographicTerm>& terms, const DensityOperator& rho);

/// (1 + sqrt(2)) / 3.
double wstate_threshold();
bool wstate_verdict(double kernel_value);

/// (|0..01> + |0..10> + ... + |10..0>) / sqrt(n).
StateVector w_state(std::size_t n);
/// (|0..0> + |1..1>) / sqrt(2).
StateVector ghz_state(std::size_t n);

/// Largest kernel reachable when some nonempty proper subset of parties
/// answers every observable with a fixed outcome (identity answered as z)
/// and the rest hold the best quantum state.
double fullstate_brute_force(const std::vector<TomographicTerm>& terms, const QuditRegister& reg);

/// Rows "observables outcomes coefficient", e.g. "XZI 010 0.125".
std::string format_terms(const std::vector<TomographicTerm>& terms);

} // namespace steerlab
