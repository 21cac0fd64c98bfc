#pragma once

#include <cstddef>
#include <vector>

#include "steerlab/witness_kernel.hpp"

namespace steerlab {

/// gamma_2 = 0, gamma_q = 2(q - 3) + 1 + gamma_{q-1}.
long long gamma(int q);

/// (q + sqrt((2(q^2 - 2q + 2) + gamma_q) / d)) / 2. The normative bound for every q.
double closed_form_bound(int q, int d);

/// Largest eigenvalue of F^dagger|0><0|F + (q - 1)|0><0| on one qudit.
/// Agrees with closed_form_bound only for q = 2; for q >= 3 it is a diagnostic.
double eigenvalue_bound(int q, int d);

/// eigenvalue_bound(2, d) = 1 + 1/sqrt(d).
double eigenvalue_bound_q2(int d);

/// A deterministic preexisting-state strategy: the untrusted parties A_s
/// declare a fixed outcome per term; the trusted parties B_s answer with the
/// best joint quantum state.
struct CheatingStrategy {
    /// Untrusted parties, ascending; a nonempty proper subset.
    std::vector<std::size_t> untrusted;
    /// declared[i][m]: outcome announced by untrusted[i] in term m.
    std::vector<std::vector<int>> declared;
};

struct BruteForceOptions {
    std::size_t max_parties = 4;
    int max_dimension = 3;
    std::size_t max_settings = 2;
};

struct BruteForceResult {
    double value = 0.0;
    CheatingStrategy strategy;
    std::size_t strategies_examined = 0;
};

/// Hermitian operator on B_s whose largest eigenvalue is the kernel value the
/// trusted side can reach against `strategy`.
LinearOperator strategy_operator(const WitnessSpec& spec, const CheatingStrategy& strategy);

/// Kernel value reached by `strategy` (largest eigenvalue of strategy_operator).
double replay_strategy(const WitnessSpec& spec, const CheatingStrategy& strategy);

/// Maximum of replay_strategy over all untrusted subsets (bitmask ascending)
/// and all declared-outcome tables (lexicographic); the first maximizer wins
/// ties. Mixed strategies cannot do better: the kernel is linear in the
/// strategy, so its maximum over the convex hull is attained at a
/// deterministic point.
///
/// Specs outside `options` raise CapExceeded. Passing options above the
/// defaults prints a warning on stderr, since the strategy count grows as
/// d^(|A_s| q).
BruteForceResult brute_force_bound(const WitnessSpec& spec, const BruteForceOptions& options = {});

} // namespace steerlab
