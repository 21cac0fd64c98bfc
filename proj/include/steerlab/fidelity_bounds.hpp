#pragma once

#include <cstddef>
#include <vector>

#include "steerlab/tensor_core.hpp"

namespace steerlab {

class WitnessSpec;

/// Fidelity interval. `lower`/`upper` are clamped to [0, 1]; the raw values
/// are kept because a negative raw lower bound flags a kernel below 1.
struct FidelityWindow {
    double lower = 0.0;
    double upper = 1.0;
    double raw_lower = 0.0;
    double raw_upper = 1.0;

    static FidelityWindow from_raw(double raw_lower, double raw_upper);
};

/// Fidelity above which a state near a q-colorable graph state is genuinely
/// multipartite steerable: closed_form_bound(q, d) / 2.
double fidelity_threshold(int q, int d);

/// (W - 1, W / 2) for a measured kernel W in [0, q].
FidelityWindow sandwich(double kernel_value, int q, int d);

/// Local dimensions of the degrees of freedom of a particle pair. Party layout
/// of the joint register: (A_1, B_1, A_2, B_2, ...), each with dimension d_k.
struct DofSystem {
    std::vector<int> dims;

    explicit DofSystem(std::vector<int> dof_dims);
    int d_min() const;
    std::size_t dof_count() const { return dims.size(); }
    QuditRegister joint_register() const;
};

/// (x)_k (1/d_k) sum_{v,v'} omega_k^{v v'} |v>_{A_k} |v'>_{B_k}.
StateVector build_hyper_state(const DofSystem& dofs);

struct MultiDofResult {
    /// W_2 of the two-vertex witness on each DOF's reduced state.
    std::vector<double> per_dof_kernels;
    /// prod_k W_k / 2.
    double product = 0.0;
    /// (1 + 1/sqrt(d_min)) / 2.
    double threshold = 0.0;
    bool steerable = false;
};

MultiDofResult multidof_kernel(const DensityOperator& rho, const DofSystem& dofs);

/// The two-vertex witness of DOF k written on the full joint register (other
/// parties measured in the computational basis and unconstrained), so that it
/// can be evaluated on the joint state without a partial trace.
WitnessSpec dof_spec_on_joint(const DofSystem& dofs, std::size_t k);

/// Fidelity criterion for steering in every DOF: F_S > 1/sqrt(d_min).
bool multidof_fidelity_verdict(double fidelity, int d_min);

} // namespace steerlab
