#include "steerlab/noise_robustness.hpp"

#include "steerlab/classical_bound.hpp"

namespace steerlab {

DensityOperator werner_mix(const StateVector& psi, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("noise weight p must lie in [0, 1]");
    }
    return DensityOperator::mixture(DensityOperator::maximally_mixed(psi.reg()), DensityOperator::from_pure(psi), p);
}

namespace {

struct Endpoints {
    double pure;
    double mixed;
};

Endpoints endpoints(const WitnessSpec& spec, const StateVector& psi, double bound) {
    const Endpoints e{evaluate_kernel(spec, psi), evaluate_kernel_maximally_mixed(spec)};
    if (!(e.pure > bound)) {
        throw ValidationError("no crossing: the noiseless kernel " + std::to_string(e.pure) +
                              " does not exceed the bound " + std::to_string(bound));
    }
    if (!(e.mixed < bound)) {
        throw ValidationError("no crossing: the fully mixed kernel " + std::to_string(e.mixed) +
                              " is not below the bound " + std::to_string(bound));
    }
    return e;
}

} // namespace

double threshold(const WitnessSpec& spec, const StateVector& psi, double bound) {
    const Endpoints e = endpoints(spec, psi, bound);
    return (e.pure - bound) / (e.pure - e.mixed);
}

double threshold_bisection(const WitnessSpec& spec, const StateVector& psi, double bound, double tol) {
    endpoints(spec, psi, bound);
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (evaluate_kernel(spec, werner_mix(psi, mid)) > bound) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

RobustnessPoint robustness_point(const std::string& graph_kind, std::size_t n, int d) {
    const Preset preset = make_preset(graph_kind, n, d);
    const WitnessSpec spec = spec_from_graph(preset.graph);
    RobustnessPoint pt;
    pt.graph_kind = graph_kind;
    pt.n = preset.graph.n_vertices();
    pt.d = d;
    pt.q = spec.q();
    pt.bound = closed_form_bound(static_cast<int>(pt.q), d);
    pt.kernel_pure = evaluate_kernel(spec, preset.state);
    pt.kernel_mixed = evaluate_kernel_maximally_mixed(spec);
    pt.p_threshold = threshold(spec, preset.state, pt.bound);
    return pt;
}

SweepResult sweep(const std::string& graph_kind, const std::vector<std::size_t>& n_values,
                  const std::vector<int>& d_values) {
    SweepResult result;
    for (std::size_t n : n_values) {
        for (int d : d_values) {
            try {
                result.points.push_back(robustness_point(graph_kind, n, d));
            } catch (const CapExceeded& e) {
                result.truncated = true;
                result.truncation_reason = "n=" + std::to_string(n) + " d=" + std::to_string(d) + ": " + e.what();
                return result;
            }
        }
    }
    return result;
}

} // namespace steerlab
