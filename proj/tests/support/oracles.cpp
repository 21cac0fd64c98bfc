#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steerlab/rng.hpp"

namespace oracle {

using steerlab::Complex;

int count_above(const Matrix& h, double x) {
    const Eigen::Index n = h.rows();
    Matrix a = h;
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) -= x;
    }
    // Right-looking LDL^dagger without pivoting; a vanishing pivot is nudged,
    // which moves x by far less than the bisection tolerance.
    const double tiny = 1e-300 + 1e-14 * (h.cwiseAbs().maxCoeff() + std::abs(x));
    int positive = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        double pivot = a(k, k).real();
        if (std::abs(pivot) < tiny) {
            pivot = tiny;
        }
        if (pivot > 0) {
            ++positive;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const Complex l = a(i, k) / pivot;
            for (Eigen::Index j = k + 1; j < n; ++j) {
                a(i, j) -= l * std::conj(a(j, k));
            }
        }
    }
    return positive;
}

double max_eigenvalue(const Matrix& h, double tol) {
    double radius = 0.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        radius = std::max(radius, h.row(i).cwiseAbs().sum());
    }
    double lo = -radius - 1.0;
    double hi = radius + 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (count_above(h, mid) > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Vector graph_state_amplitudes(std::size_t n, int d, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        total *= static_cast<std::size_t>(d);
    }
    Vector amps(static_cast<Eigen::Index>(total));
    std::vector<int> v(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (std::size_t k = n; k-- > 0;) {
            v[k] = static_cast<int>(rest % static_cast<std::size_t>(d));
            rest /= static_cast<std::size_t>(d);
        }
        long long exponent = 0;
        for (const auto& [i, j] : edges) {
            exponent += static_cast<long long>(v[i]) * v[j];
        }
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(exponent % d) / d;
        amps(static_cast<Eigen::Index>(idx)) = std::polar(std::pow(static_cast<double>(d), -0.5 * static_cast<double>(n)), angle);
    }
    return amps;
}

namespace {

Matrix basis_of(const steerlab::WitnessSpec& spec, const steerlab::WitnessTerm& term, std::size_t k) {
    const int d = spec.reg().dim(k);
    const steerlab::LocalSetting& s = term.settings[k];
    if (s.basis) {
        return *s.basis;
    }
    Matrix b = Matrix::Identity(d, d);
    if (s.id == 2) {
        // Columns F^dagger |v>: entries omega^{-jv} / sqrt(d).
        for (int j = 0; j < d; ++j) {
            for (int v = 0; v < d; ++v) {
                b(j, v) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), -2.0 * std::numbers::pi * j * v / d);
            }
        }
    }
    return b;
}

std::vector<int> digits(std::size_t idx, const std::vector<int>& dims) {
    std::vector<int> v(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        v[k] = static_cast<int>(idx % static_cast<std::size_t>(dims[k]));
        idx /= static_cast<std::size_t>(dims[k]);
    }
    return v;
}

bool satisfied(const steerlab::WitnessTerm& term, const std::vector<int>& v) {
    for (const steerlab::Constraint& c : term.constraints) {
        long long sum = 0;
        for (const steerlab::Participant& p : c.participants) {
            sum += v[p.party];
        }
        if (((sum - c.target) % c.modulus + c.modulus) % c.modulus != 0) {
            return false;
        }
    }
    return true;
}

std::vector<double> distribution(const steerlab::WitnessSpec& spec, const steerlab::WitnessTerm& term, const Matrix& rho) {
    const std::vector<int> dims(spec.reg().dims().begin(), spec.reg().dims().end());
    Matrix u = Matrix::Ones(1, 1);
    for (std::size_t k = 0; k < dims.size(); ++k) {
        u = kron(u, basis_of(spec, term, k));
    }
    std::vector<double> p(static_cast<std::size_t>(u.cols()));
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        p[static_cast<std::size_t>(c)] = u.col(c).dot(rho * u.col(c)).real();
    }
    return p;
}

} // namespace

double kernel(const steerlab::WitnessSpec& spec, const Matrix& rho) {
    const std::vector<int> dims(spec.reg().dims().begin(), spec.reg().dims().end());
    double w = 0.0;
    for (const steerlab::WitnessTerm& term : spec.terms()) {
        const std::vector<double> p = distribution(spec, term, rho);
        for (std::size_t idx = 0; idx < p.size(); ++idx) {
            if (satisfied(term, digits(idx, dims))) {
                w += p[idx];
            }
        }
    }
    return w;
}

std::pair<double, double> sampled_kernel(const steerlab::WitnessSpec& spec, const Matrix& rho, std::size_t samples,
                                         std::uint64_t seed) {
    const std::vector<int> dims(spec.reg().dims().begin(), spec.reg().dims().end());
    steerlab::SplitMix64 rng(seed);
    double mean = 0.0;
    double variance = 0.0;
    for (const steerlab::WitnessTerm& term : spec.terms()) {
        const std::vector<double> p = distribution(spec, term, rho);
        std::vector<double> cdf(p.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            acc += std::max(0.0, p[i]);
            cdf[i] = acc;
        }
        std::size_t hits = 0;
        for (std::size_t s = 0; s < samples; ++s) {
            const double u = rng.uniform() * acc;
            const std::size_t idx = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            if (satisfied(term, digits(std::min(idx, p.size() - 1), dims))) {
                ++hits;
            }
        }
        const double f = static_cast<double>(hits) / static_cast<double>(samples);
        mean += f;
        variance += f * (1.0 - f) / static_cast<double>(samples);
    }
    return {mean, std::sqrt(variance)};
}

Matrix random_hermitian(int n, std::uint64_t seed) {
    steerlab::SplitMix64 rng(seed);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    return 0.5 * (a + a.adjoint());
}

Matrix random_unitary(int n, std::uint64_t seed) {
    steerlab::SplitMix64 rng(seed);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    return Matrix(a.householderQr().householderQ());
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

} // namespace oracle
