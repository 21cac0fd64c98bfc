#include "steerlab/witness_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace steerlab {

namespace {

constexpr double kBasisMatchTol = 1e-10;

bool is_identity_setting(const LocalSetting& s) { return !s.basis && s.id == 1; }

/// Calls fn(index, digits) for every basis index of reg in ascending order.
template <typename Fn>
void for_each_outcome(const QuditRegister& reg, Fn&& fn) {
    std::vector<int> digits(reg.parties(), 0);
    const std::size_t total = reg.total_dim();
    for (std::size_t idx = 0; idx < total; ++idx) {
        fn(idx, std::span<const int>(digits));
        for (std::size_t k = reg.parties(); k-- > 0;) {
            if (++digits[k] < reg.dim(k)) {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Named basis id whose vectors match `basis` column by column up to phases, or 0.
int match_named_basis(const Matrix& basis) {
    const int d = static_cast<int>(basis.rows());
    for (int id : {1, 2}) {
        const Matrix named = measurement_basis_matrix(d, id);
        bool same = true;
        for (int v = 0; v < d && same; ++v) {
            same = std::abs(named.col(v).dot(basis.col(v))) >= 1.0 - kBasisMatchTol;
        }
        if (same) {
            return id;
        }
    }
    return 0;
}

} // namespace

bool Constraint::satisfied_by(std::span<const int> outcomes) const {
    long long sum = 0;
    for (const Participant& p : participants) {
        sum += outcomes[p.party];
    }
    return ((sum - target) % modulus + modulus) % modulus == 0;
}

bool WitnessTerm::satisfied_by(std::span<const int> outcomes) const {
    return std::all_of(constraints.begin(), constraints.end(),
                       [&](const Constraint& c) { return c.satisfied_by(outcomes); });
}

WitnessSpec::WitnessSpec(QuditRegister reg, std::vector<WitnessTerm> terms)
    : reg_(std::move(reg)), terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw ValidationError("witness needs at least one term");
    }
    for (std::size_t m = 0; m < terms_.size(); ++m) {
        WitnessTerm& term = terms_[m];
        const std::string where = "term " + std::to_string(m + 1);
        if (term.settings.size() != reg_.parties()) {
            throw ValidationError(where + ": one setting per party is required");
        }
        for (std::size_t k = 0; k < term.settings.size(); ++k) {
            const LocalSetting& s = term.settings[k];
            if (s.id != 1 && s.id != 2) {
                throw ValidationError(where + ": setting id must be 1 or 2");
            }
            if (s.basis) {
                const LinearOperator b(QuditRegister({reg_.dim(k)}), *s.basis);
                if (!b.is_unitary(1e-10)) {
                    throw ValidationError(where + ": basis override for party " + std::to_string(k + 1) +
                                          " is not orthonormal");
                }
            }
        }
        for (Constraint& c : term.constraints) {
            if (c.participants.empty()) {
                throw ValidationError(where + ": constraint without participants");
            }
            if (c.modulus < 2) {
                throw ValidationError(where + ": constraint modulus must be >= 2");
            }
            c.target = ((c.target % c.modulus) + c.modulus) % c.modulus;
            std::vector<bool> seen(reg_.parties(), false);
            for (const Participant& p : c.participants) {
                if (p.party >= reg_.parties()) {
                    throw ValidationError(where + ": constraint references party outside the register");
                }
                if (seen[p.party]) {
                    throw ValidationError(where + ": party " + std::to_string(p.party + 1) +
                                          " appears twice in one constraint");
                }
                seen[p.party] = true;
                if (p.setting != term.settings[p.party].id) {
                    throw ValidationError(where + ": constraint uses setting " + std::to_string(p.setting) +
                                          " for party " + std::to_string(p.party + 1) +
                                          ", which the term measures with setting " +
                                          std::to_string(term.settings[p.party].id));
                }
            }
        }
    }
}

Matrix setting_basis(const QuditRegister& reg, std::size_t party, const LocalSetting& setting) {
    if (setting.basis) {
        return *setting.basis;
    }
    return measurement_basis_matrix(reg.dim(party), setting.id);
}

WitnessSpec spec_from_graph(const ColoredGraph& graph) {
    require_proper_coloring(graph);
    const QuditRegister reg = QuditRegister::uniform(graph.n_vertices(), graph.d());
    std::vector<WitnessTerm> terms;
    terms.reserve(graph.q());
    for (std::size_t m = 0; m < graph.q(); ++m) {
        WitnessTerm term;
        term.settings.resize(graph.n_vertices());
        for (std::size_t k = 0; k < graph.n_vertices(); ++k) {
            term.settings[k].id = graph.color_of(k) == m ? 2 : 1;
        }
        for (std::size_t j : graph.colors()[m]) {
            Constraint c;
            c.modulus = graph.d();
            c.participants.push_back({j, 2});
            for (std::size_t i : graph.neighbors(j)) {
                c.participants.push_back({i, 1});
            }
            term.constraints.push_back(std::move(c));
        }
        terms.push_back(std::move(term));
    }
    return {reg, std::move(terms)};
}

WitnessSpec apply_local_conjugation(const WitnessSpec& spec,
                                    const std::map<std::size_t, LinearOperator>& unitaries) {
    for (const auto& [party, u] : unitaries) {
        if (party >= spec.reg().parties()) {
            throw ValidationError("conjugation targets a party outside the register");
        }
        if (u.reg().parties() != 1 || u.reg().dim(0) != spec.reg().dim(party)) {
            throw ValidationError("conjugating unitary for party " + std::to_string(party + 1) +
                                  " has the wrong dimension");
        }
        if (!u.is_unitary()) {
            throw ValidationError("conjugating operator for party " + std::to_string(party + 1) + " is not unitary");
        }
    }
    std::vector<WitnessTerm> terms = spec.terms();
    for (WitnessTerm& term : terms) {
        for (const auto& [party, u] : unitaries) {
            LocalSetting& s = term.settings[party];
            const Matrix rotated = u.matrix() * setting_basis(spec.reg(), party, s);
            const int named = match_named_basis(rotated);
            if (named == 0) {
                s.basis = rotated;
                continue;
            }
            s.basis.reset();
            if (named != s.id) {
                for (Constraint& c : term.constraints) {
                    for (Participant& p : c.participants) {
                        if (p.party == party) {
                            p.setting = named;
                        }
                    }
                }
                s.id = named;
            }
        }
    }
    return {spec.reg(), std::move(terms)};
}

WitnessSpec permute_parties(const WitnessSpec& spec, std::span<const std::size_t> new_position) {
    const std::size_t n = spec.reg().parties();
    if (new_position.size() != n) {
        throw ValidationError("permutation length does not match the register");
    }
    std::vector<bool> hit(n, false);
    for (std::size_t p : new_position) {
        if (p >= n || hit[p]) {
            throw ValidationError("not a permutation of the parties");
        }
        hit[p] = true;
    }
    std::vector<int> dims(n);
    for (std::size_t k = 0; k < n; ++k) {
        dims[new_position[k]] = spec.reg().dim(k);
    }
    std::vector<WitnessTerm> terms;
    for (const WitnessTerm& old : spec.terms()) {
        WitnessTerm term;
        term.settings.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            term.settings[new_position[k]] = old.settings[k];
        }
        term.constraints = old.constraints;
        for (Constraint& c : term.constraints) {
            for (Participant& p : c.participants) {
                p.party = new_position[p.party];
            }
        }
        terms.push_back(std::move(term));
    }
    return {QuditRegister(std::move(dims)), std::move(terms)};
}

LinearOperator term_projector(const WitnessTerm& term, const QuditRegister& reg) {
    detail::require_density_cap(reg.total_dim());
    const auto n = static_cast<Eigen::Index>(reg.total_dim());
    Matrix p = Matrix::Zero(n, n);
    for_each_outcome(reg, [&](std::size_t idx, std::span<const int> digits) {
        if (term.satisfied_by(digits)) {
            p(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = 1.0;
        }
    });
    for (std::size_t k = 0; k < reg.parties(); ++k) {
        if (!is_identity_setting(term.settings[k])) {
            const std::array<std::size_t, 1> target{k};
            detail::conjugate(p, reg, setting_basis(reg, k, term.settings[k]), target);
        }
    }
    return {reg, std::move(p)};
}

LinearOperator kernel_operator(const WitnessSpec& spec) {
    detail::require_density_cap(spec.reg().total_dim());
    const auto n = static_cast<Eigen::Index>(spec.reg().total_dim());
    Matrix sum = Matrix::Zero(n, n);
    for (const WitnessTerm& term : spec.terms()) {
        sum += term_projector(term, spec.reg()).matrix();
    }
    return {spec.reg(), std::move(sum)};
}

std::vector<double> term_outcome_distribution(const WitnessTerm& term, const DensityOperator& rho) {
    const QuditRegister& reg = rho.reg();
    if (term.settings.size() != reg.parties()) {
        throw ValidationError("term and state registers differ");
    }
    Matrix m = rho.matrix();
    for (std::size_t k = 0; k < reg.parties(); ++k) {
        if (!is_identity_setting(term.settings[k])) {
            const std::array<std::size_t, 1> target{k};
            detail::conjugate(m, reg, setting_basis(reg, k, term.settings[k]).adjoint(), target);
        }
    }
    std::vector<double> probs(reg.total_dim());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    return probs;
}

std::vector<double> term_outcome_distribution(const WitnessTerm& term, const StateVector& psi) {
    const QuditRegister& reg = psi.reg();
    if (term.settings.size() != reg.parties()) {
        throw ValidationError("term and state registers differ");
    }
    Matrix column = psi.amplitudes();
    for (std::size_t k = 0; k < reg.parties(); ++k) {
        if (!is_identity_setting(term.settings[k])) {
            const std::array<std::size_t, 1> target{k};
            detail::apply_to_rows(column, reg, setting_basis(reg, k, term.settings[k]).adjoint(), target);
        }
    }
    std::vector<double> probs(reg.total_dim());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] = std::norm(column(static_cast<Eigen::Index>(i), 0));
    }
    return probs;
}

namespace {

double satisfied_mass(const WitnessTerm& term, const QuditRegister& reg, const std::vector<double>& probs) {
    double total = 0.0;
    for_each_outcome(reg, [&](std::size_t idx, std::span<const int> digits) {
        if (term.satisfied_by(digits)) {
            total += probs[idx];
        }
    });
    return total;
}

} // namespace

double term_probability(const WitnessTerm& term, const DensityOperator& rho) {
    return satisfied_mass(term, rho.reg(), term_outcome_distribution(term, rho));
}

double term_probability(const WitnessTerm& term, const StateVector& psi) {
    return satisfied_mass(term, psi.reg(), term_outcome_distribution(term, psi));
}

double evaluate_kernel(const WitnessSpec& spec, const DensityOperator& rho) {
    if (!(spec.reg() == rho.reg())) {
        throw ValidationError("evaluate_kernel: witness and state registers differ");
    }
    double sum = 0.0;
    for (const WitnessTerm& term : spec.terms()) {
        sum += term_probability(term, rho);
    }
    return sum;
}

double evaluate_kernel(const WitnessSpec& spec, const StateVector& psi) {
    if (!(spec.reg() == psi.reg())) {
        throw ValidationError("evaluate_kernel: witness and state registers differ");
    }
    const StateVector unit = psi.normalized();
    double sum = 0.0;
    for (const WitnessTerm& term : spec.terms()) {
        sum += term_probability(term, unit);
    }
    return sum;
}

double evaluate_kernel_maximally_mixed(const WitnessSpec& spec) {
    double sum = 0.0;
    for (const WitnessTerm& term : spec.terms()) {
        std::size_t hits = 0;
        for_each_outcome(spec.reg(), [&](std::size_t, std::span<const int> digits) {
            if (term.satisfied_by(digits)) {
                ++hits;
            }
        });
        sum += static_cast<double>(hits) / static_cast<double>(spec.reg().total_dim());
    }
    return sum;
}

bool equivalent(const WitnessSpec& a, const WitnessSpec& b, double tol) {
    if (!(a.reg() == b.reg()) || a.q() != b.q()) {
        return false;
    }
    std::vector<Matrix> rest;
    for (const WitnessTerm& t : b.terms()) {
        rest.push_back(term_projector(t, b.reg()).matrix());
    }
    for (const WitnessTerm& t : a.terms()) {
        const Matrix p = term_projector(t, a.reg()).matrix();
        auto hit = std::find_if(rest.begin(), rest.end(),
                                [&](const Matrix& r) { return (r - p).cwiseAbs().maxCoeff() <= tol; });
        if (hit == rest.end()) {
            return false;
        }
        rest.erase(hit);
    }
    return true;
}

std::string to_string(KernelProvenance provenance) {
    return provenance == KernelProvenance::simulated ? "simulated" : "user_supplied";
}

SteeringReport report_from_value(double kernel_value, std::size_t q, int d, double bound) {
    SteeringReport r;
    r.kernel_value = kernel_value;
    r.classical_bound = bound;
    r.steerable = kernel_value > bound;
    r.margin = kernel_value - bound;
    r.fidelity_window = sandwich(kernel_value, static_cast<int>(q), d);
    r.provenance = KernelProvenance::user_supplied;
    return r;
}

SteeringReport report(const WitnessSpec& spec, const DensityOperator& rho, double bound) {
    const double kernel = evaluate_kernel(spec, rho);
    const auto dims = spec.reg().dims();
    SteeringReport r = report_from_value(kernel, spec.q(), *std::min_element(dims.begin(), dims.end()), bound);
    r.provenance = KernelProvenance::simulated;
    return r;
}

} // namespace steerlab
