#include "steerlab/fidelity_bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "steerlab/classical_bound.hpp"
#include "steerlab/witness_kernel.hpp"

namespace steerlab {

namespace {

constexpr double kRangeSlack = 1e-9;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace

FidelityWindow FidelityWindow::from_raw(double raw_lower, double raw_upper) {
    return {clamp01(raw_lower), clamp01(raw_upper), raw_lower, raw_upper};
}

double fidelity_threshold(int q, int d) { return closed_form_bound(q, d) / 2.0; }

FidelityWindow sandwich(double kernel_value, int q, int d) {
    if (q < 2 || d < 2) {
        throw ValidationError("sandwich: q and d must be >= 2");
    }
    if (!(kernel_value >= -kRangeSlack && kernel_value <= q + kRangeSlack)) {
        throw ValidationError("kernel value " + std::to_string(kernel_value) + " lies outside [0, " +
                              std::to_string(q) + "]");
    }
    return FidelityWindow::from_raw(kernel_value - 1.0, kernel_value / 2.0);
}

DofSystem::DofSystem(std::vector<int> dof_dims) : dims(std::move(dof_dims)) {
    if (dims.empty()) {
        throw ValidationError("at least one degree of freedom is required");
    }
    for (int d : dims) {
        if (d < 2) {
            throw ValidationError("every DOF dimension must be >= 2");
        }
    }
}

int DofSystem::d_min() const { return *std::min_element(dims.begin(), dims.end()); }

QuditRegister DofSystem::joint_register() const {
    std::vector<int> parties;
    for (int d : dims) {
        parties.push_back(d);
        parties.push_back(d);
    }
    return QuditRegister(std::move(parties));
}

StateVector build_hyper_state(const DofSystem& dofs) {
    // Validates the cap before the product is assembled.
    const QuditRegister joint = dofs.joint_register();
    std::optional<StateVector> state;
    for (int d : dofs.dims) {
        const QuditRegister pair({d, d});
        Vector amps(d * d);
        const Matrix z = z_generalized(d).matrix();
        for (int v = 0; v < d; ++v) {
            for (int w = 0; w < d; ++w) {
                amps(v * d + w) = z((v * w) % d, (v * w) % d) / static_cast<double>(d);
            }
        }
        StateVector factor(pair, std::move(amps));
        state = state ? kron(*state, factor) : factor;
    }
    return *state;
}

WitnessSpec dof_spec_on_joint(const DofSystem& dofs, std::size_t k) {
    if (k >= dofs.dof_count()) {
        throw ValidationError("DOF index out of range");
    }
    const WitnessSpec local = spec_from_graph(two_vertex(dofs.dims[k]).graph);
    const QuditRegister joint = dofs.joint_register();
    const std::size_t a = 2 * k;
    std::vector<WitnessTerm> terms;
    for (const WitnessTerm& t : local.terms()) {
        WitnessTerm term;
        term.settings.resize(joint.parties());
        term.settings[a] = t.settings[0];
        term.settings[a + 1] = t.settings[1];
        term.constraints = t.constraints;
        for (Constraint& c : term.constraints) {
            for (Participant& p : c.participants) {
                p.party += a;
            }
        }
        terms.push_back(std::move(term));
    }
    return {joint, std::move(terms)};
}

MultiDofResult multidof_kernel(const DensityOperator& rho, const DofSystem& dofs) {
    if (!(rho.reg() == dofs.joint_register())) {
        throw ValidationError("multidof_kernel: state register does not match the DOF layout");
    }
    MultiDofResult r;
    r.product = 1.0;
    for (std::size_t k = 0; k < dofs.dof_count(); ++k) {
        const std::array<std::size_t, 2> pair{2 * k, 2 * k + 1};
        const DensityOperator reduced = partial_trace(rho, pair);
        const WitnessSpec spec = spec_from_graph(two_vertex(dofs.dims[k]).graph);
        const double w = evaluate_kernel(spec, reduced);
        r.per_dof_kernels.push_back(w);
        r.product *= 0.5 * w;
    }
    r.threshold = 0.5 * (1.0 + 1.0 / std::sqrt(static_cast<double>(dofs.d_min())));
    r.steerable = r.product > r.threshold;
    return r;
}

bool multidof_fidelity_verdict(double fidelity, int d_min) {
    if (d_min < 2) {
        throw ValidationError("d_min must be >= 2");
    }
    return fidelity > 1.0 / std::sqrt(static_cast<double>(d_min));
}

} // namespace steerlab
