#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "steerlab/witness_kernel.hpp"

namespace steerlab {

/// (p / D) I + (1 - p) |psi><psi|.
DensityOperator werner_mix(const StateVector& psi, double p);

/// Noise weight p* with kernel(werner_mix(psi, p*)) == bound. The kernel is
/// affine in p, so p* = (W(0) - bound) / (W(0) - W(1)) from the pure-state and
/// maximally-mixed evaluations. Throws ValidationError when W(0) <= bound or
/// W(1) >= bound.
double threshold(const WitnessSpec& spec, const StateVector& psi, double bound);

/// Same crossing found by bisection on full density-matrix evaluations, to `tol` in p.
double threshold_bisection(const WitnessSpec& spec, const StateVector& psi, double bound, double tol = 1e-10);

struct RobustnessPoint {
    std::string graph_kind;
    std::size_t n = 0;
    int d = 0;
    std::size_t q = 0;
    double bound = 0.0;
    double kernel_pure = 0.0;
    double kernel_mixed = 0.0;
    double p_threshold = 0.0;
};

struct SweepResult {
    std::vector<RobustnessPoint> points;
    /// Set when a grid point exceeded the simulation caps; later points are dropped.
    bool truncated = false;
    std::string truncation_reason;
};

/// Thresholds for the graph-state preset `graph_kind` over every (n, d) of the
/// grid, n outer and d inner, against the closed-form bound.
SweepResult sweep(const std::string& graph_kind, const std::vector<std::size_t>& n_values,
                  const std::vector<int>& d_values);

RobustnessPoint robustness_point(const std::string& graph_kind, std::size_t n, int d);

} // namespace steerlab
