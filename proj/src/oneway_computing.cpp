#include "steerlab/oneway_computing.hpp"

#include <cmath>
#include <numbers>

namespace steerlab {

namespace {

constexpr double kZeroProbability = 1e-14;
constexpr double kRangeSlack = 1e-9;

const QuditRegister& four_qubits() {
    static const QuditRegister reg({2, 2, 2, 2});
    return reg;
}

const QuditRegister& two_qubits() {
    static const QuditRegister reg({2, 2});
    return reg;
}

Matrix cz() {
    Matrix m = Matrix::Identity(4, 4);
    m(3, 3) = -1.0;
    return m;
}

Matrix hh() {
    const Matrix h = qft_matrix(2).matrix();
    return kron(LinearOperator(QuditRegister({2}), h), LinearOperator(QuditRegister({2}), h)).matrix();
}

Matrix pauli_x() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Matrix pauli_z() {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = -1.0;
    return m;
}

Matrix kron2(const Matrix& a, const Matrix& b) {
    return kron(LinearOperator(QuditRegister({2}), a), LinearOperator(QuditRegister({2}), b)).matrix();
}

/// Full-register index of (o1, m2, m3, o4).
Eigen::Index full_index(int o1, int m2, int m3, int o4) { return o1 * 8 + m2 * 4 + m3 * 2 + o4; }

void require_four_qubits(const DensityOperator& rho) {
    if (!(rho.reg() == four_qubits())) {
        throw ValidationError("one-way computing needs a source on four qubits");
    }
}

/// Unnormalized state of parties 1 and 4 after projecting parties 2, 3 onto a (x) b.
Matrix conditioned_output(const DensityOperator& rho, const Vector& a, const Vector& b) {
    const Matrix& m = rho.matrix();
    Matrix out = Matrix::Zero(4, 4);
    for (int o = 0; o < 4; ++o) {
        for (int op = 0; op < 4; ++op) {
            Complex acc = 0.0;
            for (int x = 0; x < 4; ++x) {
                const Complex bra = std::conj(a(x / 2) * b(x % 2));
                for (int y = 0; y < 4; ++y) {
                    const Complex ket = a(y / 2) * b(y % 2);
                    acc += bra * m(full_index(o / 2, x / 2, x % 2, o % 2), full_index(op / 2, y / 2, y % 2, op % 2)) * ket;
                }
            }
            out(o, op) = acc;
        }
    }
    return out;
}

double expectation(const Matrix& rho, const Vector& psi) { return psi.dot(rho * psi).real(); }

void require_kernel_range(double w) {
    if (!(w >= -kRangeSlack && w <= 2.0 + kRangeSlack)) {
        throw ValidationError("four-qubit kernel must lie in [0, 2], got " + std::to_string(w));
    }
}

void require_settings(std::span<const AngleSetting> settings) {
    if (settings.empty()) {
        throw ValidationError("at least one angle setting is required");
    }
}

WitnessSpec hadamard_all(const WitnessSpec& spec, std::initializer_list<std::size_t> parties) {
    std::map<std::size_t, LinearOperator> u;
    for (std::size_t p : parties) {
        u.emplace(p, qft_matrix(2));
    }
    return apply_local_conjugation(spec, u);
}

} // namespace

std::string to_string(Cluster cluster) { return cluster == Cluster::horseshoe ? "horseshoe" : "box"; }

Cluster parse_cluster(std::string_view name) {
    if (name == "horseshoe") {
        return Cluster::horseshoe;
    }
    if (name == "box") {
        return Cluster::box;
    }
    throw ValidationError("unknown cluster '" + std::string(name) + "' (expected horseshoe or box)");
}

GateTarget gate_target(Cluster cluster) {
    const Matrix u = cluster == Cluster::horseshoe ? Matrix(hh() * cz()) : Matrix(cz() * hh() * cz());
    return {cluster, LinearOperator(two_qubits(), u)};
}

StateVector cluster_state(Cluster cluster) {
    return cluster == Cluster::horseshoe ? horseshoe4(2).state : box4(2).state;
}

const std::array<AngleSetting, 8>& standard_settings() {
    constexpr double pi = std::numbers::pi;
    static const std::array<AngleSetting, 8> settings{{
        {0.0, 0.0},
        {0.0, pi},
        {pi, 0.0},
        {pi, pi},
        {-pi / 2, -pi / 2},
        {-pi / 2, pi / 2},
        {pi / 2, -pi / 2},
        {pi / 2, pi / 2},
    }};
    return settings;
}

Vector angle_state(double alpha, int sign) {
    if (sign != 1 && sign != -1) {
        throw ValidationError("angle_state sign must be +1 or -1");
    }
    Vector v(2);
    v(0) = 1.0 / std::numbers::sqrt2;
    v(1) = static_cast<double>(sign) * std::polar(1.0, alpha) / std::numbers::sqrt2;
    return v;
}

StateVector input_state(double alpha, double beta) {
    const QuditRegister one({2});
    return kron(StateVector(one, angle_state(-alpha, 1)), StateVector(one, angle_state(-beta, 1)));
}

StateVector target_output(Cluster cluster, AngleSetting setting) {
    const StateVector in = input_state(setting.alpha, setting.beta);
    return {two_qubits(), gate_target(cluster).unitary.matrix() * in.amplitudes()};
}

LinearOperator byproduct_correction(Cluster cluster, int s2, int s3) {
    if ((s2 != 0 && s2 != 1) || (s3 != 0 && s3 != 1)) {
        throw ValidationError("branch bits must be 0 or 1");
    }
    const Matrix id = Matrix::Identity(2, 2);
    const Matrix x = pauli_x();
    const Matrix z = pauli_z();
    Matrix c = Matrix::Identity(4, 4);
    if (cluster == Cluster::horseshoe) {
        c = kron2(s2 ? x : id, s3 ? x : id);
    } else {
        if (s2) {
            c = kron2(x, z) * c;
        }
        if (s3) {
            c = kron2(z, x) * c;
        }
    }
    return {two_qubits(), c};
}

std::vector<BranchOutcome> run_branching(const DensityOperator& source, Cluster cluster, AngleSetting setting) {
    require_four_qubits(source);
    const StateVector target = target_output(cluster, setting);
    std::vector<BranchOutcome> branches;
    for (int s2 = 0; s2 < 2; ++s2) {
        for (int s3 = 0; s3 < 2; ++s3) {
            BranchOutcome b;
            b.s2 = s2;
            b.s3 = s3;
            const Matrix out = conditioned_output(source, angle_state(setting.alpha, s2 ? -1 : 1),
                                                  angle_state(setting.beta, s3 ? -1 : 1));
            b.probability = out.trace().real();
            if (b.probability > kZeroProbability) {
                Matrix post = out / b.probability;
                post = 0.5 * (post + post.adjoint()).eval();
                const Matrix c = byproduct_correction(cluster, s2, s3).matrix();
                Matrix corrected = c * post * c.adjoint();
                b.corrected_fidelity = expectation(corrected, target.amplitudes());
                b.post_state = DensityOperator::from_matrix(two_qubits(), std::move(post), DensityOperator::Check::basic);
                b.corrected_state =
                    DensityOperator::from_matrix(two_qubits(), std::move(corrected), DensityOperator::Check::basic);
            }
            branches.push_back(std::move(b));
        }
    }
    return branches;
}

double computation_fidelity(const DensityOperator& source, Cluster cluster, std::span<const AngleSetting> settings) {
    require_settings(settings);
    double sum = 0.0;
    for (const AngleSetting& s : settings) {
        const BranchOutcome b = run_branching(source, cluster, s).front();
        if (!b.post_state) {
            throw NumericalError("postselected branch s2 = s3 = 0 has zero probability at alpha = " +
                                 std::to_string(s.alpha) + ", beta = " + std::to_string(s.beta));
        }
        sum += 4.0 * b.probability * b.corrected_fidelity;
    }
    return sum / static_cast<double>(settings.size());
}

double postselected_fidelity(const DensityOperator& source, Cluster cluster, std::span<const AngleSetting> settings) {
    require_settings(settings);
    double sum = 0.0;
    for (const AngleSetting& s : settings) {
        const BranchOutcome b = run_branching(source, cluster, s).front();
        if (!b.post_state) {
            throw NumericalError("postselected branch s2 = s3 = 0 has zero probability");
        }
        sum += b.corrected_fidelity;
    }
    return sum / static_cast<double>(settings.size());
}

double feedforward_fidelity(const DensityOperator& source, Cluster cluster, std::span<const AngleSetting> settings) {
    require_settings(settings);
    double sum = 0.0;
    for (const AngleSetting& s : settings) {
        for (const BranchOutcome& b : run_branching(source, cluster, s)) {
            sum += b.probability * b.corrected_fidelity;
        }
    }
    return sum / static_cast<double>(settings.size());
}

double wcz_kernel(const DensityOperator& rho, Cluster cluster, std::span<const AngleSetting> settings) {
    require_four_qubits(rho);
    require_settings(settings);
    double sum = 0.0;
    for (const AngleSetting& s : settings) {
        const Vector a = angle_state(s.alpha, 1);
        const Vector b = angle_state(s.beta, 1);
        const Vector out = target_output(cluster, s).amplitudes();
        Vector psi(16);
        for (int o1 = 0; o1 < 2; ++o1) {
            for (int m2 = 0; m2 < 2; ++m2) {
                for (int m3 = 0; m3 < 2; ++m3) {
                    for (int o4 = 0; o4 < 2; ++o4) {
                        psi(full_index(o1, m2, m3, o4)) = out(o1 * 2 + o4) * a(m2) * b(m3);
                    }
                }
            }
        }
        sum += expectation(rho.matrix(), psi);
    }
    return sum;
}

FidelityWindow fcomp_window(double kernel_w4) {
    require_kernel_range(kernel_w4);
    return FidelityWindow::from_raw(kernel_w4 - 1.0, kernel_w4 / 4.0 + 0.5);
}

ProcessBounds process_and_average_bounds(double kernel_w4) {
    require_kernel_range(kernel_w4);
    return {kernel_w4 / 2.0, (2.0 * kernel_w4 + 1.0) / 5.0};
}

WitnessSpec w4_spec() { return spec_from_graph(chain(4, 2).graph); }

WitnessSpec w4_prime_spec() { return hadamard_all(w4_spec(), {0, 3}); }

WitnessSpec w4box_spec() { return spec_from_graph(box4(2).graph); }

WitnessSpec w4box_prime_spec() {
    const std::array<std::size_t, 4> swap23{0, 2, 1, 3};
    return permute_parties(hadamard_all(w4box_spec(), {0, 1, 2, 3}), swap23);
}

} // namespace steerlab
