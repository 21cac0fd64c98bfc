#include "steerlab/classical_bound.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>

namespace steerlab {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kMaxStrategies = 5e7;

void require_qd(int q, int d) {
    if (q < 2) {
        throw ValidationError("color count q must be >= 2, got " + std::to_string(q));
    }
    if (d < 2) {
        throw ValidationError("dimension d must be >= 2, got " + std::to_string(d));
    }
}

std::size_t distinct_settings(const WitnessSpec& spec, std::size_t party) {
    std::vector<Matrix> seen;
    for (const WitnessTerm& term : spec.terms()) {
        const Matrix b = setting_basis(spec.reg(), party, term.settings[party]);
        const bool known = std::any_of(seen.begin(), seen.end(), [&](const Matrix& s) {
            return (s - b).cwiseAbs().maxCoeff() <= 1e-12;
        });
        if (!known) {
            seen.push_back(b);
        }
    }
    return seen.size();
}

/// Projector on the trusted parties for one term, given the untrusted declarations.
Matrix conditioned_term(const WitnessSpec& spec, std::size_t m, std::span<const std::size_t> untrusted,
                        std::span<const int> declared_for_term, std::span<const std::size_t> trusted,
                        const QuditRegister& trusted_reg) {
    const WitnessTerm& term = spec.terms()[m];
    const auto n = static_cast<Eigen::Index>(trusted_reg.total_dim());
    Matrix q = Matrix::Zero(n, n);
    std::vector<int> full(spec.reg().parties(), 0);
    for (std::size_t i = 0; i < untrusted.size(); ++i) {
        full[untrusted[i]] = declared_for_term[i];
    }
    for (std::size_t idx = 0; idx < trusted_reg.total_dim(); ++idx) {
        const std::vector<int> y = trusted_reg.digits(idx);
        for (std::size_t j = 0; j < trusted.size(); ++j) {
            full[trusted[j]] = y[j];
        }
        if (term.satisfied_by(full)) {
            q(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = 1.0;
        }
    }
    for (std::size_t j = 0; j < trusted.size(); ++j) {
        const LocalSetting& s = term.settings[trusted[j]];
        if (s.basis || s.id != 1) {
            const std::array<std::size_t, 1> target{j};
            detail::conjugate(q, trusted_reg, setting_basis(spec.reg(), trusted[j], s), target);
        }
    }
    return q;
}

void check_strategy(const WitnessSpec& spec, const CheatingStrategy& strategy) {
    const std::size_t n = spec.reg().parties();
    if (strategy.untrusted.empty() || strategy.untrusted.size() >= n) {
        throw ValidationError("untrusted set must be a nonempty proper subset of the parties");
    }
    detail::check_targets(spec.reg(), strategy.untrusted);
    if (strategy.declared.size() != strategy.untrusted.size()) {
        throw ValidationError("one declaration row per untrusted party is required");
    }
    for (std::size_t i = 0; i < strategy.declared.size(); ++i) {
        if (strategy.declared[i].size() != spec.q()) {
            throw ValidationError("one declared outcome per term is required");
        }
        for (int v : strategy.declared[i]) {
            if (v < 0 || v >= spec.reg().dim(strategy.untrusted[i])) {
                throw ValidationError("declared outcome out of range");
            }
        }
    }
}

} // namespace

long long gamma(int q) {
    if (q < 2) {
        throw ValidationError("gamma: q must be >= 2");
    }
    long long g = 0;
    for (int k = 3; k <= q; ++k) {
        g += 2LL * (k - 3) + 1;
    }
    return g;
}

double closed_form_bound(int q, int d) {
    require_qd(q, d);
    const double qq = q;
    const double inner = (2.0 * (qq * qq - 2.0 * qq + 2.0) + static_cast<double>(gamma(q))) / d;
    return 0.5 * (qq + std::sqrt(inner));
}

double eigenvalue_bound(int q, int d) {
    require_qd(q, d);
    const Matrix f = qft_matrix(d).matrix();
    Matrix e0 = Matrix::Zero(d, d);
    e0(0, 0) = 1.0;
    const Matrix op = f.adjoint() * e0 * f + static_cast<double>(q - 1) * e0;
    return hermitian_max_eigenvalue(Matrix(0.5 * (op + op.adjoint())));
}

double eigenvalue_bound_q2(int d) { return eigenvalue_bound(2, d); }

LinearOperator strategy_operator(const WitnessSpec& spec, const CheatingStrategy& strategy) {
    check_strategy(spec, strategy);
    const std::vector<std::size_t> trusted = detail::complement(spec.reg(), strategy.untrusted);
    const QuditRegister trusted_reg = spec.reg().subset(trusted);
    detail::require_density_cap(trusted_reg.total_dim());
    const auto n = static_cast<Eigen::Index>(trusted_reg.total_dim());
    Matrix sum = Matrix::Zero(n, n);
    std::vector<int> column(strategy.untrusted.size());
    for (std::size_t m = 0; m < spec.q(); ++m) {
        for (std::size_t i = 0; i < column.size(); ++i) {
            column[i] = strategy.declared[i][m];
        }
        sum += conditioned_term(spec, m, strategy.untrusted, column, trusted, trusted_reg);
    }
    return {trusted_reg, std::move(sum)};
}

double replay_strategy(const WitnessSpec& spec, const CheatingStrategy& strategy) {
    return hermitian_max_eigenvalue(strategy_operator(spec, strategy).matrix());
}

BruteForceResult brute_force_bound(const WitnessSpec& spec, const BruteForceOptions& options) {
    const BruteForceOptions defaults;
    if (options.max_parties > defaults.max_parties || options.max_dimension > defaults.max_dimension ||
        options.max_settings > defaults.max_settings) {
        std::cerr << "warning: brute-force caps raised above the defaults (parties " << defaults.max_parties
                  << ", d " << defaults.max_dimension << ", settings " << defaults.max_settings
                  << "); the strategy count grows as d^(|A_s| q)\n";
    }
    const QuditRegister& reg = spec.reg();
    const std::size_t n = reg.parties();
    if (n < 2) {
        throw ValidationError("brute-force bound needs at least two parties");
    }
    if (n > options.max_parties) {
        throw CapExceeded("brute-force bound: " + std::to_string(n) + " parties exceed the cap of " +
                          std::to_string(options.max_parties));
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (reg.dim(k) > options.max_dimension) {
            throw CapExceeded("brute-force bound: local dimension " + std::to_string(reg.dim(k)) +
                              " exceeds the cap of " + std::to_string(options.max_dimension));
        }
        if (distinct_settings(spec, k) > options.max_settings) {
            throw CapExceeded("brute-force bound: party " + std::to_string(k + 1) + " uses more than " +
                              std::to_string(options.max_settings) + " settings");
        }
    }

    const std::size_t q = spec.q();
    BruteForceResult best;
    best.value = -1.0;
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> untrusted;
        for (std::size_t k = 0; k < n; ++k) {
            if (mask & (std::size_t{1} << k)) {
                untrusted.push_back(k);
            }
        }
        const std::vector<std::size_t> trusted = detail::complement(reg, untrusted);
        const QuditRegister trusted_reg = reg.subset(trusted);
        const QuditRegister untrusted_reg = reg.subset(untrusted);

        double count = std::pow(static_cast<double>(untrusted_reg.total_dim()), static_cast<double>(q));
        if (count > kMaxStrategies) {
            throw CapExceeded("brute-force bound: too many declared-outcome tables");
        }

        // Conditioned projector for every (term, declared column) pair.
        std::vector<std::vector<Matrix>> cache(q);
        for (std::size_t m = 0; m < q; ++m) {
            cache[m].reserve(untrusted_reg.total_dim());
            for (std::size_t col = 0; col < untrusted_reg.total_dim(); ++col) {
                const std::vector<int> declared = untrusted_reg.digits(col);
                cache[m].push_back(conditioned_term(spec, m, untrusted, declared, trusted, trusted_reg));
            }
        }

        // Declaration table flattened row-major over (untrusted party, term),
        // enumerated lexicographically: the last entry varies fastest.
        const std::size_t entries = untrusted.size() * q;
        std::vector<int> table(entries, 0);
        while (true) {
            const auto dim = static_cast<Eigen::Index>(trusted_reg.total_dim());
            Matrix op = Matrix::Zero(dim, dim);
            for (std::size_t m = 0; m < q; ++m) {
                std::size_t col = 0;
                for (std::size_t i = 0; i < untrusted.size(); ++i) {
                    col = col * static_cast<std::size_t>(reg.dim(untrusted[i])) +
                          static_cast<std::size_t>(table[i * q + m]);
                }
                op += cache[m][col];
            }
            const double value = hermitian_max_eigenvalue(op);
            ++best.strategies_examined;
            if (value > best.value + kTieTolerance) {
                best.value = value;
                best.strategy.untrusted = untrusted;
                best.strategy.declared.assign(untrusted.size(), std::vector<int>(q));
                for (std::size_t i = 0; i < untrusted.size(); ++i) {
                    for (std::size_t m = 0; m < q; ++m) {
                        best.strategy.declared[i][m] = table[i * q + m];
                    }
                }
            }

            std::size_t pos = entries;
            while (pos-- > 0) {
                if (++table[pos] < reg.dim(untrusted[pos / q])) {
                    break;
                }
                table[pos] = 0;
            }
            if (pos == static_cast<std::size_t>(-1)) {
                break;
            }
        }
    }
    return best;
}

} // namespace steerlab
