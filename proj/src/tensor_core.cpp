#include "steerlab/tensor_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <string_view>

#include "steerlab/rng.hpp"

namespace steerlab {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPositivityTol = 1e-9;
// Shifted Cholesky is O(D^3); above this size only the basic checks run.
constexpr std::size_t kPositivityCheckMaxDim = 1024;

Complex omega_power(int d, long long exponent) {
    const long long r = ((exponent % d) + d) % d;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(d);
    return {std::cos(angle), std::sin(angle)};
}

void require_dimension(int d) {
    if (d < 2) {
        throw ValidationError("local dimension must be >= 2, got " + std::to_string(d));
    }
}

bool hermitian_within(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = r; c < m.cols(); ++c) {
            if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

DimensionCaps caps_from_env_value(const char* value) {
    DimensionCaps caps;
    if (value == nullptr || *value == '\0') {
        return caps;
    }
    std::string_view text(value);
    std::size_t parsed = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
    if (ec != std::errc{} || ptr != text.data() + text.size() || parsed < 2) {
        throw ValidationError("STEERLAB_CAP must be an integer >= 2, got '" + std::string(text) + "'");
    }
    caps.max_density_dim = parsed;
    caps.max_state_dim = std::max(caps.max_state_dim, parsed);
    return caps;
}

const DimensionCaps& dimension_caps() {
    static const DimensionCaps caps = caps_from_env_value(std::getenv("STEERLAB_CAP"));
    return caps;
}

// ---------------------------------------------------------------------------
// QuditRegister

QuditRegister::QuditRegister(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw ValidationError("register needs at least one party");
    }
    const std::size_t cap = dimension_caps().max_state_dim;
    for (int d : dims_) {
        require_dimension(d);
        if (total_ > cap / static_cast<std::size_t>(d)) {
            throw CapExceeded("register dimension exceeds cap of " + std::to_string(cap) + " amplitudes");
        }
        total_ *= static_cast<std::size_t>(d);
    }
    strides_.resize(dims_.size());
    std::size_t stride = 1;
    for (std::size_t k = dims_.size(); k-- > 0;) {
        strides_[k] = stride;
        stride *= static_cast<std::size_t>(dims_[k]);
    }
}

QuditRegister QuditRegister::uniform(std::size_t parties, int d) {
    return QuditRegister(std::vector<int>(parties, d));
}

std::vector<int> QuditRegister::digits(std::size_t index) const {
    std::vector<int> out(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
        out[k] = static_cast<int>(index % static_cast<std::size_t>(dims_[k]));
        index /= static_cast<std::size_t>(dims_[k]);
    }
    return out;
}

std::size_t QuditRegister::index(std::span<const int> digits) const {
    if (digits.size() != dims_.size()) {
        throw ValidationError("digit count does not match register");
    }
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (digits[k] < 0 || digits[k] >= dims_[k]) {
            throw ValidationError("digit out of range for party " + std::to_string(k + 1));
        }
        idx += static_cast<std::size_t>(digits[k]) * strides_[k];
    }
    return idx;
}

QuditRegister QuditRegister::subset(std::span<const std::size_t> parties) const {
    std::vector<int> dims;
    dims.reserve(parties.size());
    for (std::size_t p : parties) {
        dims.push_back(dim(p));
    }
    return QuditRegister(std::move(dims));
}

QuditRegister QuditRegister::concat(const QuditRegister& other) const {
    std::vector<int> dims = dims_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    return QuditRegister(std::move(dims));
}

// ---------------------------------------------------------------------------
// States and operators

StateVector::StateVector(QuditRegister reg, Vector amplitudes) : reg_(std::move(reg)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != reg_.total_dim()) {
        throw ValidationError("amplitude count does not match register dimension");
    }
}

StateVector StateVector::basis(const QuditRegister& reg, std::span<const int> digits) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
    v(static_cast<Eigen::Index>(reg.index(digits))) = 1.0;
    return {reg, std::move(v)};
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        throw NumericalError("cannot normalize the zero vector");
    }
    return {reg_, amps_ / n};
}

LinearOperator::LinearOperator(QuditRegister reg, Matrix matrix) : reg_(std::move(reg)), m_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(reg_.total_dim());
    if (m_.rows() != n || m_.cols() != n) {
        throw ValidationError("operator shape does not match register dimension");
    }
}

bool LinearOperator::is_unitary(double tol) const {
    const Matrix prod = m_.adjoint() * m_;
    return (prod - Matrix::Identity(prod.rows(), prod.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool LinearOperator::is_hermitian(double tol) const { return hermitian_within(m_, tol); }

DensityOperator DensityOperator::from_matrix(QuditRegister reg, Matrix matrix, Check check) {
    const auto n = static_cast<Eigen::Index>(reg.total_dim());
    detail::require_density_cap(reg.total_dim());
    if (matrix.rows() != n || matrix.cols() != n) {
        throw ValidationError("density matrix shape does not match register dimension");
    }
    if (!hermitian_within(matrix, kHermitianTol)) {
        throw ValidationError("density matrix is not Hermitian");
    }
    if (std::abs(matrix.trace() - Complex(1.0)) > kTraceTol) {
        throw ValidationError("density matrix trace differs from 1");
    }
    if (check == Check::full && reg.total_dim() <= kPositivityCheckMaxDim) {
        Matrix shifted = matrix;
        shifted.diagonal().array() += kPositivityTol + 1e-12;
        Eigen::LLT<Matrix> llt(shifted);
        if (llt.info() != Eigen::Success) {
            throw ValidationError("density matrix has an eigenvalue below -1e-9");
        }
    }
    return {std::move(reg), std::move(matrix)};
}

DensityOperator DensityOperator::from_pure(const StateVector& psi) {
    detail::require_density_cap(psi.reg().total_dim());
    const StateVector unit = psi.normalized();
    return {unit.reg(), unit.amplitudes() * unit.amplitudes().adjoint()};
}

DensityOperator DensityOperator::maximally_mixed(const QuditRegister& reg) {
    detail::require_density_cap(reg.total_dim());
    const auto n = static_cast<Eigen::Index>(reg.total_dim());
    return {reg, Matrix::Identity(n, n) / static_cast<double>(n)};
}

DensityOperator DensityOperator::mixture(const DensityOperator& a, const DensityOperator& b, double weight) {
    if (!(a.reg() == b.reg())) {
        throw ValidationError("cannot mix density operators on different registers");
    }
    if (!(weight >= 0.0 && weight <= 1.0)) {
        throw ValidationError("mixture weight must lie in [0, 1]");
    }
    return {a.reg(), weight * a.matrix() + (1.0 - weight) * b.matrix()};
}

LinearOperator identity(const QuditRegister& reg) {
    detail::require_density_cap(reg.total_dim());
    const auto n = static_cast<Eigen::Index>(reg.total_dim());
    return {reg, Matrix::Identity(n, n)};
}

LinearOperator qft_matrix(int d) {
    require_dimension(d);
    Matrix f(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int v = 0; v < d; ++v) {
        for (int w = 0; w < d; ++w) {
            f(v, w) = omega_power(d, static_cast<long long>(v) * w) * scale;
        }
    }
    return {QuditRegister({d}), std::move(f)};
}

LinearOperator z_generalized(int d) {
    require_dimension(d);
    Matrix z = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        z(k, k) = omega_power(d, k);
    }
    return {QuditRegister({d}), std::move(z)};
}

Matrix measurement_basis_matrix(int d, int setting) {
    require_dimension(d);
    switch (setting) {
    case 1:
        return Matrix::Identity(d, d);
    case 2:
        return qft_matrix(d).matrix().adjoint();
    default:
        throw ValidationError("measurement setting must be 1 or 2, got " + std::to_string(setting));
    }
}

std::vector<StateVector> measurement_basis(int d, int setting) {
    const Matrix b = measurement_basis_matrix(d, setting);
    const QuditRegister reg({d});
    std::vector<StateVector> out;
    out.reserve(static_cast<std::size_t>(d));
    for (int v = 0; v < d; ++v) {
        out.emplace_back(reg, b.col(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tensor products

namespace {

Matrix kron_matrix(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

} // namespace

LinearOperator kron(const LinearOperator& a, const LinearOperator& b) {
    QuditRegister reg = a.reg().concat(b.reg());
    detail::require_density_cap(reg.total_dim());
    return {std::move(reg), kron_matrix(a.matrix(), b.matrix())};
}

StateVector kron(const StateVector& a, const StateVector& b) {
    QuditRegister reg = a.reg().concat(b.reg());
    Vector out(static_cast<Eigen::Index>(reg.total_dim()));
    const Eigen::Index nb = b.amplitudes().size();
    for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
        out.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
    }
    return {std::move(reg), std::move(out)};
}

DensityOperator kron(const DensityOperator& a, const DensityOperator& b) {
    QuditRegister reg = a.reg().concat(b.reg());
    detail::require_density_cap(reg.total_dim());
    return DensityOperator::from_matrix(std::move(reg), kron_matrix(a.matrix(), b.matrix()),
                                        DensityOperator::Check::basic);
}

// ---------------------------------------------------------------------------
// Local actions

namespace detail {

void require_density_cap(std::size_t dim) {
    const std::size_t cap = dimension_caps().max_density_dim;
    if (dim > cap) {
        throw CapExceeded("explicit matrix dimension " + std::to_string(dim) + " exceeds cap of " +
                          std::to_string(cap));
    }
}

void check_targets(const QuditRegister& reg, std::span<const std::size_t> targets) {
    if (targets.empty()) {
        throw ValidationError("target list is empty");
    }
    std::vector<bool> seen(reg.parties(), false);
    for (std::size_t t : targets) {
        if (t >= reg.parties()) {
            throw ValidationError("party index " + std::to_string(t + 1) + " out of range");
        }
        if (seen[t]) {
            throw ValidationError("duplicate party index " + std::to_string(t + 1));
        }
        seen[t] = true;
    }
}

std::vector<std::size_t> party_offsets(const QuditRegister& reg, std::span<const std::size_t> parties) {
    std::vector<std::size_t> offsets{0};
    for (std::size_t p : parties) {
        const auto d = static_cast<std::size_t>(reg.dim(p));
        std::vector<std::size_t> next;
        next.reserve(offsets.size() * d);
        for (std::size_t base : offsets) {
            for (std::size_t v = 0; v < d; ++v) {
                next.push_back(base + v * reg.stride(p));
            }
        }
        offsets = std::move(next);
    }
    return offsets;
}

std::vector<std::size_t> complement(const QuditRegister& reg, std::span<const std::size_t> parties) {
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < reg.parties(); ++k) {
        if (std::find(parties.begin(), parties.end(), k) == parties.end()) {
            rest.push_back(k);
        }
    }
    return rest;
}

void apply_to_rows(Matrix& m, const QuditRegister& reg, const Matrix& op, std::span<const std::size_t> targets) {
    check_targets(reg, targets);
    const std::vector<std::size_t> target_offsets = party_offsets(reg, targets);
    if (static_cast<std::size_t>(op.rows()) != target_offsets.size() || op.rows() != op.cols()) {
        throw ValidationError("operator dimension does not match the product of target dimensions");
    }
    const std::vector<std::size_t> rest = complement(reg, targets);
    const std::vector<std::size_t> rest_offsets = party_offsets(reg, rest);
    const auto t = static_cast<Eigen::Index>(target_offsets.size());
    Matrix block(t, m.cols());
    for (std::size_t base : rest_offsets) {
        for (Eigen::Index i = 0; i < t; ++i) {
            block.row(i) = m.row(static_cast<Eigen::Index>(base + target_offsets[static_cast<std::size_t>(i)]));
        }
        const Matrix updated = op * block;
        for (Eigen::Index i = 0; i < t; ++i) {
            m.row(static_cast<Eigen::Index>(base + target_offsets[static_cast<std::size_t>(i)])) = updated.row(i);
        }
    }
}

void conjugate(Matrix& m, const QuditRegister& reg, const Matrix& op, std::span<const std::size_t> targets) {
    apply_to_rows(m, reg, op, targets);
    m.adjointInPlace();
    apply_to_rows(m, reg, op, targets);
    m.adjointInPlace();
}

} // namespace detail

StateVector apply_local(const LinearOperator& op, std::span<const std::size_t> targets, const StateVector& state) {
    Matrix column = state.amplitudes();
    detail::apply_to_rows(column, state.reg(), op.matrix(), targets);
    return {state.reg(), column.col(0)};
}

DensityOperator apply_local(const LinearOperator& op, std::span<const std::size_t> targets,
                            const DensityOperator& rho) {
    Matrix m = rho.matrix();
    detail::conjugate(m, rho.reg(), op.matrix(), targets);
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw ValidationError("apply_local on a density operator requires a trace-preserving (unitary) op");
    }
    return DensityOperator::from_matrix(rho.reg(), 0.5 * (m + m.adjoint()), DensityOperator::Check::basic);
}

LinearOperator embed(const LinearOperator& op, std::span<const std::size_t> targets, const QuditRegister& reg) {
    detail::require_density_cap(reg.total_dim());
    const auto n = static_cast<Eigen::Index>(reg.total_dim());
    Matrix m = Matrix::Identity(n, n);
    detail::apply_to_rows(m, reg, op.matrix(), targets);
    return {reg, std::move(m)};
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep) {
    if (keep.empty()) {
        throw ValidationError("partial_trace needs at least one kept party");
    }
    detail::check_targets(rho.reg(), keep);
    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    const std::vector<std::size_t> traced = detail::complement(rho.reg(), kept);
    const std::vector<std::size_t> keep_off = detail::party_offsets(rho.reg(), kept);
    const std::vector<std::size_t> trace_off = detail::party_offsets(rho.reg(), traced);

    const auto k = static_cast<Eigen::Index>(keep_off.size());
    Matrix out = Matrix::Zero(k, k);
    const Matrix& m = rho.matrix();
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            Complex sum = 0.0;
            for (std::size_t t : trace_off) {
                sum += m(static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(a)] + t),
                         static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(b)] + t));
            }
            out(a, b) = sum;
        }
    }
    return DensityOperator::from_matrix(rho.reg().subset(kept), std::move(out), DensityOperator::Check::basic);
}

double hermitian_max_eigenvalue(const LinearOperator& op) {
    if (!op.is_hermitian()) {
        throw ValidationError("hermitian_max_eigenvalue: operator is not Hermitian within 1e-10");
    }
    return hermitian_max_eigenvalue(op.matrix());
}

double fidelity_with_pure(const DensityOperator& rho, const StateVector& psi) {
    if (!(rho.reg() == psi.reg())) {
        throw ValidationError("fidelity_with_pure: register mismatch");
    }
    const Vector& a = psi.amplitudes();
    return a.dot(rho.matrix() * a).real();
}

double overlap_probability(const StateVector& a, const StateVector& b) {
    if (!(a.reg() == b.reg())) {
        throw ValidationError("overlap_probability: register mismatch");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

StateVector random_pure_state(const QuditRegister& reg, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Vector v(static_cast<Eigen::Index>(reg.total_dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        v(i) = Complex(re, im);
    }
    return StateVector(reg, std::move(v)).normalized();
}

DensityOperator random_mixed_state(const QuditRegister& reg, std::uint64_t seed) {
    const StateVector purified = random_pure_state(reg.concat(reg), seed);
    // Reduce directly from amplitudes: rho = A A^dagger with A the (D x D) reshape.
    const auto n = static_cast<Eigen::Index>(reg.total_dim());
    Matrix a(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            a(r, c) = purified.amplitudes()(r * n + c);
        }
    }
    detail::require_density_cap(reg.total_dim());
    Matrix rho = a * a.adjoint();
    return DensityOperator::from_matrix(reg, 0.5 * (rho + rho.adjoint()), DensityOperator::Check::basic);
}

} // namespace steerlab
