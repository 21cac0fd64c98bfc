#pragma once

// Steering-witness kernels built from joint modular constraints on outcomes of
// one global measurement per term:
//
//     W = sum_m P( all constraints of term m hold | settings of term m ).
//
// Every term is evaluated exactly as Tr[P_m rho] where P_m is the orthogonal
// projector onto the outcome tuples that satisfy the term's constraints.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steerlab/fidelity_bounds.hpp"
#include "steerlab/graph_states.hpp"
#include "steerlab/tensor_core.hpp"

namespace steerlab {

/// Local measurement of one party within one term. Ids 1 and 2 name the
/// computational and Fourier-conjugate bases. A basis override (columns are the
/// measurement eigenvectors) replaces the named basis while keeping the id as
/// the label that constraints refer to.
struct LocalSetting {
    int id = 1;
    std::optional<Matrix> basis;
};

struct Participant {
    std::size_t party = 0;
    int setting = 1;
    bool operator==(const Participant&) const = default;
};

/// sum of participants' outcomes == target (mod modulus).
struct Constraint {
    std::vector<Participant> participants;
    int modulus = 2;
    int target = 0;

    bool satisfied_by(std::span<const int> outcomes) const;
};

struct WitnessTerm {
    std::vector<LocalSetting> settings;
    std::vector<Constraint> constraints;

    bool satisfied_by(std::span<const int> outcomes) const;
};

class WitnessSpec {
public:
    WitnessSpec(QuditRegister reg, std::vector<WitnessTerm> terms);

    const QuditRegister& reg() const { return reg_; }
    const std::vector<WitnessTerm>& terms() const { return terms_; }
    std::size_t q() const { return terms_.size(); }

private:
    QuditRegister reg_;
    std::vector<WitnessTerm> terms_;
};

/// Measurement basis (columns) used by `party` under `setting`.
Matrix setting_basis(const QuditRegister& reg, std::size_t party, const LocalSetting& setting);

/// One term per color class Y_m: parties in Y_m measure setting 2, the rest
/// setting 1, and every j in Y_m contributes v_j^(2) + sum_{i ~ j} v_i^(1) = 0 mod d.
WitnessSpec spec_from_graph(const ColoredGraph& graph);

/// Conjugates every listed party's measurement bases by its unitary, so that
/// the result evaluated on U rho U^dagger equals the input evaluated on rho.
/// A conjugated basis that coincides (up to vector phases) with a named basis
/// is relabeled to that id; otherwise it is stored as an override.
WitnessSpec apply_local_conjugation(const WitnessSpec& spec, const std::map<std::size_t, LinearOperator>& unitaries);

/// Moves party i to position new_position[i].
WitnessSpec permute_parties(const WitnessSpec& spec, std::span<const std::size_t> new_position);

/// Orthogonal projector onto the constraint-satisfying outcomes of a term.
LinearOperator term_projector(const WitnessTerm& term, const QuditRegister& reg);
/// sum_m P_m.
LinearOperator kernel_operator(const WitnessSpec& spec);

/// Born probabilities of all outcome tuples (indexed like the register) of the term's measurement.
std::vector<double> term_outcome_distribution(const WitnessTerm& term, const DensityOperator& rho);
std::vector<double> term_outcome_distribution(const WitnessTerm& term, const StateVector& psi);

double term_probability(const WitnessTerm& term, const DensityOperator& rho);
double term_probability(const WitnessTerm& term, const StateVector& psi);

double evaluate_kernel(const WitnessSpec& spec, const DensityOperator& rho);
double evaluate_kernel(const WitnessSpec& spec, const StateVector& psi);
/// Kernel on the maximally mixed state: sum_m (#satisfying outcomes) / D.
double evaluate_kernel_maximally_mixed(const WitnessSpec& spec);

/// Same register and, term by term in some order, equal projectors.
bool equivalent(const WitnessSpec& a, const WitnessSpec& b, double tol = 1e-10);

enum class KernelProvenance { simulated, user_supplied };
std::string to_string(KernelProvenance provenance);

struct SteeringReport {
    double kernel_value = 0.0;
    double classical_bound = 0.0;
    bool steerable = false;
    double margin = 0.0;
    FidelityWindow fidelity_window;
    KernelProvenance provenance = KernelProvenance::simulated;
};

SteeringReport report(const WitnessSpec& spec, const DensityOperator& rho, double bound);
/// For a measured kernel value supplied from outside.
SteeringReport report_from_value(double kernel_value, std::size_t q, int d, double bound);

} // namespace steerlab
