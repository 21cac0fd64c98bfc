#pragma once

// Two-qubit gates driven by measuring the middle qubits (parties 2 and 3) of a
// four-qubit cluster; the outputs live on parties 1 and 4. Party 1 carries the
// alpha input, party 4 the beta input.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steerlab/fidelity_bounds.hpp"
#include "steerlab/witness_kernel.hpp"

namespace steerlab {

enum class Cluster { horseshoe, box };

std::string to_string(Cluster cluster);
/// "horseshoe" or "box".
Cluster parse_cluster(std::string_view name);

struct GateTarget {
    Cluster kind;
    /// (H x H) CZ for the horseshoe, CZ (H x H) CZ for the box.
    LinearOperator unitary;
};

GateTarget gate_target(Cluster cluster);

/// Ideal cluster: the chain |G_4> for the horseshoe, the 4-cycle for the box.
StateVector cluster_state(Cluster cluster);

struct AngleSetting {
    double alpha = 0.0;
    double beta = 0.0;
};

/// (0,0), (0,pi), (pi,0), (pi,pi), then (-pi/2,-pi/2), (-pi/2,pi/2), (pi/2,-pi/2), (pi/2,pi/2).
const std::array<AngleSetting, 8>& standard_settings();

/// (|0> + sign e^{i alpha} |1>) / sqrt(2) with sign = +1 or -1.
Vector angle_state(double alpha, int sign);

/// |(-alpha)_+> |(-beta)_+>.
StateVector input_state(double alpha, double beta);

/// unitary |In>.
StateVector target_output(Cluster cluster, AngleSetting setting);

/// Byproduct correction for branch (s2, s3), applied after the measurement.
LinearOperator byproduct_correction(Cluster cluster, int s2, int s3);

struct BranchOutcome {
    int s2 = 0;
    int s3 = 0;
    double probability = 0.0;
    /// Empty when the branch has zero probability.
    std::optional<DensityOperator> post_state;
    std::optional<DensityOperator> corrected_state;
    /// Fidelity of corrected_state with the target output; 0 for empty branches.
    double corrected_fidelity = 0.0;
};

/// Projects parties 2 and 3 of a four-qubit source onto |alpha_s2> |beta_s3>
/// for each of the four branches (s2, s3 in lexicographic order).
std::vector<BranchOutcome> run_branching(const DensityOperator& source, Cluster cluster, AngleSetting setting);

/// Mean over the settings of the s2 = s3 = 0 branch fidelity, with the branch
/// weighted as if it occurred with its ideal probability 1/4:
/// F = (1/|S|) sum_S 4 P(+,+) <Out|rho_out|Out>. Throws NumericalError if a
/// postselected branch has zero probability.
double computation_fidelity(const DensityOperator& source, Cluster cluster,
                            std::span<const AngleSetting> settings = standard_settings());

/// Same mean, but each postselected state normalized by its actual probability.
double postselected_fidelity(const DensityOperator& source, Cluster cluster,
                             std::span<const AngleSetting> settings = standard_settings());

/// Mean over the settings of the probability-weighted corrected fidelity over
/// all four branches (feed-forward instead of postselection).
double feedforward_fidelity(const DensityOperator& source, Cluster cluster,
                            std::span<const AngleSetting> settings = standard_settings());

/// sum_S Tr[(|alpha_+><alpha_+|_2 (x) |beta_+><beta_+|_3 (x) |Out><Out|_{1,4}) rho].
double wcz_kernel(const DensityOperator& rho, Cluster cluster,
                  std::span<const AngleSetting> settings = standard_settings());

/// (W - 1, W/4 + 1/2) for a four-qubit kernel W in [0, 2].
FidelityWindow fcomp_window(double kernel_w4);

struct ProcessBounds {
    double process_lower = 0.0;
    double average_lower = 0.0;
};

/// (W/2, (2W + 1)/5) for W in [0, 2].
ProcessBounds process_and_average_bounds(double kernel_w4);

/// Chain witness for |G_4>.
WitnessSpec w4_spec();
/// Chain witness rotated by H on parties 1 and 4, for |G'_4> = (H_1 H_4)|G_4>.
WitnessSpec w4_prime_spec();
/// Two-term witness of the box cluster.
WitnessSpec w4box_spec();
/// Box witness rotated by H on every party and with parties 2 and 3 swapped.
WitnessSpec w4box_prime_spec();

} // namespace steerlab
