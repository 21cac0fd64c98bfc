#include "steerlab/fullstate_witness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "steerlab/format.hpp"

namespace steerlab {

namespace {

constexpr double kDropCoefficient = 1e-15;
constexpr std::size_t kMaxBruteForceQubits = 4;

const std::array<Observable, 4> kFrame{Observable::identity, Observable::x, Observable::y, Observable::z};

void require_qubits(const QuditRegister& reg) {
    for (std::size_t k = 0; k < reg.parties(); ++k) {
        if (reg.dim(k) != 2) {
            throw ValidationError("full-state witnesses are defined for qubits only");
        }
    }
    if (reg.parties() > kMaxFullstateQubits) {
        throw CapExceeded("full-state decomposition supports at most " + std::to_string(kMaxFullstateQubits) +
                          " qubits");
    }
}

/// Physical setting actually measured: identity is read out in the z basis.
Observable measured(Observable o) { return o == Observable::identity ? Observable::z : o; }

/// <psi| P |psi> for the Pauli string `ops` (party 0 most significant).
double pauli_expectation(const Vector& psi, const std::vector<Observable>& ops) {
    const std::size_t n = ops.size();
    const auto dim = static_cast<std::size_t>(psi.size());
    Complex acc = 0.0;
    for (std::size_t x = 0; x < dim; ++x) {
        std::size_t y = x;
        Complex phase = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t bit = std::size_t{1} << (n - 1 - k);
            const bool one = (x & bit) != 0;
            switch (ops[k]) {
            case Observable::identity:
                break;
            case Observable::x:
                y ^= bit;
                break;
            case Observable::y:
                y ^= bit;
                phase *= one ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
                break;
            case Observable::z:
                if (one) {
                    phase = -phase;
                }
                break;
            }
        }
        // P|x> = phase |y>.
        acc += std::conj(psi(static_cast<Eigen::Index>(y))) * phase * psi(static_cast<Eigen::Index>(x));
    }
    return acc.real();
}

Matrix kron_raw(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix setting_unitary(const std::vector<Observable>& ops) {
    Matrix u = Matrix::Ones(1, 1);
    for (Observable o : ops) {
        u = kron_raw(u, observable_basis(o));
    }
    return u;
}

Matrix local_projector(Observable o, int outcome) {
    const Vector b = observable_basis(o).col(outcome);
    return b * b.adjoint();
}

std::size_t outcome_index(const std::vector<int>& outcomes) {
    std::size_t idx = 0;
    for (int v : outcomes) {
        idx = idx * 2 + static_cast<std::size_t>(v);
    }
    return idx;
}

} // namespace

char observable_symbol(Observable o) {
    switch (o) {
    case Observable::identity:
        return 'I';
    case Observable::x:
        return 'X';
    case Observable::y:
        return 'Y';
    case Observable::z:
        return 'Z';
    }
    return '?';
}

Matrix observable_basis(Observable o) {
    const double r = 1.0 / std::numbers::sqrt2;
    Matrix b(2, 2);
    switch (o) {
    case Observable::identity:
    case Observable::z:
        b = Matrix::Identity(2, 2);
        break;
    case Observable::x:
        b << r, r, r, -r;
        break;
    case Observable::y:
        b << r, r, Complex(0.0, r), Complex(0.0, -r);
        break;
    }
    return b;
}

std::vector<TomographicTerm> decompose(const StateVector& psi) {
    require_qubits(psi.reg());
    const std::size_t n = psi.reg().parties();
    const Vector amps = psi.normalized().amplitudes();
    const double scale = std::ldexp(1.0, -static_cast<int>(n));
    std::vector<TomographicTerm> terms;
    std::vector<Observable> ops(n);
    for (std::size_t s = 0; s < (std::size_t{1} << (2 * n)); ++s) {
        for (std::size_t k = 0; k < n; ++k) {
            ops[k] = kFrame[(s >> (2 * (n - 1 - k))) & 3];
        }
        const double c = pauli_expectation(amps, ops) * scale;
        if (std::abs(c) < kDropCoefficient) {
            continue;
        }
        for (std::size_t v = 0; v < (std::size_t{1} << n); ++v) {
            TomographicTerm t;
            t.observables = ops;
            t.outcomes.resize(n);
            double sign = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                t.outcomes[k] = static_cast<int>((v >> (n - 1 - k)) & 1);
                if (ops[k] != Observable::identity && t.outcomes[k] == 1) {
                    sign = -sign;
                }
            }
            t.coefficient = c * sign;
            terms.push_back(std::move(t));
        }
    }
    return terms;
}

Matrix reconstruct(const std::vector<TomographicTerm>& terms, const QuditRegister& reg) {
    require_qubits(reg);
    const auto dim = static_cast<Eigen::Index>(reg.total_dim());
    Matrix sum = Matrix::Zero(dim, dim);
    for (const TomographicTerm& t : terms) {
        if (t.observables.size() != reg.parties()) {
            throw ValidationError("term does not match the register");
        }
        Matrix p = Matrix::Ones(1, 1);
        for (std::size_t k = 0; k < reg.parties(); ++k) {
            p = kron_raw(p, local_projector(t.observables[k], t.outcomes[k]));
        }
        sum += t.coefficient * p;
    }
    return sum;
}

double evaluate_fullstate_kernel(const std::vector<TomographicTerm>& terms, const DensityOperator& rho) {
    require_qubits(rho.reg());
    std::map<std::vector<Observable>, std::vector<double>> distributions;
    double value = 0.0;
    for (const TomographicTerm& t : terms) {
        if (t.observables.size() != rho.reg().parties()) {
            throw ValidationError("term does not match the register of the state");
        }
        std::vector<Observable> setting(t.observables.size());
        std::transform(t.observables.begin(), t.observables.end(), setting.begin(), measured);
        auto it = distributions.find(setting);
        if (it == distributions.end()) {
            const Matrix u = setting_unitary(setting);
            const Matrix rotated = u.adjoint() * rho.matrix() * u;
            std::vector<double> probs(static_cast<std::size_t>(rotated.rows()));
            for (Eigen::Index i = 0; i < rotated.rows(); ++i) {
                probs[static_cast<std::size_t>(i)] = rotated(i, i).real();
            }
            it = distributions.emplace(std::move(setting), std::move(probs)).first;
        }
        value += t.coefficient * it->second[outcome_index(t.outcomes)];
    }
    return value;
}

double wstate_threshold() { return (1.0 + std::numbers::sqrt2) / 3.0; }

bool wstate_verdict(double kernel_value) { return kernel_value > wstate_threshold(); }

StateVector w_state(std::size_t n) {
    if (n < 2) {
        throw ValidationError("a W state needs at least two qubits");
    }
    const QuditRegister reg = QuditRegister::uniform(n, 2);
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
    for (std::size_t k = 0; k < n; ++k) {
        amps(static_cast<Eigen::Index>(std::size_t{1} << k)) = 1.0 / std::sqrt(static_cast<double>(n));
    }
    return {reg, std::move(amps)};
}

StateVector ghz_state(std::size_t n) {
    if (n < 2) {
        throw ValidationError("a GHZ state needs at least two qubits");
    }
    const QuditRegister reg = QuditRegister::uniform(n, 2);
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
    amps(0) = 1.0 / std::numbers::sqrt2;
    amps(amps.size() - 1) = 1.0 / std::numbers::sqrt2;
    return {reg, std::move(amps)};
}

double fullstate_brute_force(const std::vector<TomographicTerm>& terms, const QuditRegister& reg) {
    require_qubits(reg);
    const std::size_t n = reg.parties();
    if (n < 2) {
        throw ValidationError("brute force needs at least two parties");
    }
    if (n > kMaxBruteForceQubits) {
        throw CapExceeded("full-state brute force supports at most " + std::to_string(kMaxBruteForceQubits) +
                          " qubits");
    }
    auto setting_slot = [](Observable o) { return static_cast<std::size_t>(measured(o)) - 1; };
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> untrusted;
        std::vector<std::size_t> trusted;
        for (std::size_t k = 0; k < n; ++k) {
            ((mask >> (n - 1 - k)) & 1 ? untrusted : trusted).push_back(k);
        }
        std::vector<Matrix> ops;
        ops.reserve(terms.size());
        for (const TomographicTerm& t : terms) {
            Matrix p = Matrix::Ones(1, 1);
            for (std::size_t k : trusted) {
                p = kron_raw(p, local_projector(t.observables[k], t.outcomes[k]));
            }
            ops.push_back(t.coefficient * p);
        }
        // Each untrusted party answers x, y and z with one fixed bit each.
        const std::size_t entries = 3 * untrusted.size();
        for (std::size_t table = 0; table < (std::size_t{1} << entries); ++table) {
            const auto dim = static_cast<Eigen::Index>(std::size_t{1} << trusted.size());
            Matrix sum = Matrix::Zero(dim, dim);
            for (std::size_t ti = 0; ti < terms.size(); ++ti) {
                const TomographicTerm& t = terms[ti];
                bool match = true;
                for (std::size_t u = 0; u < untrusted.size() && match; ++u) {
                    const std::size_t k = untrusted[u];
                    const int declared = static_cast<int>((table >> (3 * u + setting_slot(t.observables[k]))) & 1);
                    match = declared == t.outcomes[k];
                }
                if (match) {
                    sum += ops[ti];
                }
            }
            best = std::max(best, hermitian_max_eigenvalue(Matrix(0.5 * (sum + sum.adjoint()))));
        }
    }
    return best;
}

std::string format_terms(const std::vector<TomographicTerm>& terms) {
    std::ostringstream os;
    for (const TomographicTerm& t : terms) {
        for (Observable o : t.observables) {
            os << observable_symbol(o);
        }
        os << ' ';
        for (int v : t.outcomes) {
            os << v;
        }
        os << ' ' << format_number(t.coefficient) << '\n';
    }
    return os.str();
}

} // namespace steerlab
