#pragma once

// Dense complex linear algebra over small composite qudit Hilbert spaces.
//
// Index convention: for a register with local dimensions (d_0, ..., d_{N-1})
// the basis index of |v_0 v_1 ... v_{N-1}> is sum_k v_k * stride_k with party 0
// the most significant digit, i.e. the ordering produced by repeated Kronecker
// products kron(kron(a_0, a_1), ...).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "steerlab/errors.hpp"

namespace steerlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Upper limits on dense representations.
struct DimensionCaps {
    std::size_t max_state_dim = std::size_t{1} << 22;
    std::size_t max_density_dim = std::size_t{1} << 12;
};

/// Caps in effect for this process. STEERLAB_CAP=<n> overrides the
/// explicit-matrix cap (and raises the state cap if n exceeds it). Read once.
const DimensionCaps& dimension_caps();

/// Parses a STEERLAB_CAP value; null or empty leaves the defaults.
DimensionCaps caps_from_env_value(const char* value);

class QuditRegister {
public:
    explicit QuditRegister(std::vector<int> dims);
    static QuditRegister uniform(std::size_t parties, int d);

    std::span<const int> dims() const { return dims_; }
    int dim(std::size_t party) const { return dims_.at(party); }
    std::size_t parties() const { return dims_.size(); }
    std::size_t total_dim() const { return total_; }
    std::size_t stride(std::size_t party) const { return strides_.at(party); }

    std::vector<int> digits(std::size_t index) const;
    std::size_t index(std::span<const int> digits) const;

    /// Register formed by the listed parties, in the listed order.
    QuditRegister subset(std::span<const std::size_t> parties) const;
    QuditRegister concat(const QuditRegister& other) const;

    bool operator==(const QuditRegister& other) const { return dims_ == other.dims_; }

private:
    std::vector<int> dims_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 1;
};

class StateVector {
public:
    StateVector(QuditRegister reg, Vector amplitudes);

    /// Computational basis vector |digits>.
    static StateVector basis(const QuditRegister& reg, std::span<const int> digits);

    const QuditRegister& reg() const { return reg_; }
    const Vector& amplitudes() const { return amps_; }
    Complex amplitude(std::size_t index) const { return amps_(static_cast<Eigen::Index>(index)); }

    double norm() const { return amps_.norm(); }
    StateVector normalized() const;

private:
    QuditRegister reg_;
    Vector amps_;
};

class LinearOperator {
public:
    LinearOperator(QuditRegister reg, Matrix matrix);

    const QuditRegister& reg() const { return reg_; }
    const Matrix& matrix() const { return m_; }
    Complex operator()(std::size_t r, std::size_t c) const {
        return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    LinearOperator adjoint() const { return {reg_, m_.adjoint()}; }
    bool is_unitary(double tol = 1e-10) const;
    bool is_hermitian(double tol = 1e-10) const;

private:
    QuditRegister reg_;
    Matrix m_;
};

class DensityOperator {
public:
    enum class Check {
        /// Hermitian and unit trace, O(D^2).
        basic,
        /// basic plus positivity (eigenvalues >= -1e-9) via a shifted Cholesky factorization.
        full,
    };

    static DensityOperator from_matrix(QuditRegister reg, Matrix matrix, Check check = Check::full);
    static DensityOperator from_pure(const StateVector& psi);
    static DensityOperator maximally_mixed(const QuditRegister& reg);
    /// weight * a + (1 - weight) * b.
    static DensityOperator mixture(const DensityOperator& a, const DensityOperator& b, double weight);

    const QuditRegister& reg() const { return reg_; }
    const Matrix& matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }

private:
    DensityOperator(QuditRegister reg, Matrix matrix) : reg_(std::move(reg)), m_(std::move(matrix)) {}

    QuditRegister reg_;
    Matrix m_;
};

LinearOperator identity(const QuditRegister& reg);

/// Quantum Fourier transform: entry (v, w) = omega^{vw} / sqrt(d), omega = exp(2 pi i / d).
LinearOperator qft_matrix(int d);

/// diag(1, omega, ..., omega^{d-1}).
LinearOperator z_generalized(int d);

/// Setting 1: computational basis {|v>}. Setting 2: Fourier-conjugate basis {F^dagger |v>}.
std::vector<StateVector> measurement_basis(int d, int setting);

/// Columns are the vectors returned by measurement_basis().
Matrix measurement_basis_matrix(int d, int setting);

LinearOperator kron(const LinearOperator& a, const LinearOperator& b);
StateVector kron(const StateVector& a, const StateVector& b);
DensityOperator kron(const DensityOperator& a, const DensityOperator& b);

/// Applies `op` to the listed parties (first target = most significant factor of op).
StateVector apply_local(const LinearOperator& op, std::span<const std::size_t> targets, const StateVector& state);
/// rho -> op rho op^dagger on the listed parties.
DensityOperator apply_local(const LinearOperator& op, std::span<const std::size_t> targets, const DensityOperator& rho);
/// Full-register matrix of op acting on `targets`, identity elsewhere.
LinearOperator embed(const LinearOperator& op, std::span<const std::size_t> targets, const QuditRegister& reg);

/// Reduced state on `keep`; kept parties stay in ascending register order
/// whatever order they are listed in. Duplicates are rejected.
DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep);

/// All eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi; see jacobi.cpp.
std::vector<double> hermitian_eigenvalues(const Matrix& hermitian);
double hermitian_max_eigenvalue(const Matrix& hermitian);
double hermitian_max_eigenvalue(const LinearOperator& op);

/// <psi| rho |psi>.
double fidelity_with_pure(const DensityOperator& rho, const StateVector& psi);
/// |<a|b>|^2; the phase-insensitive notion of pure-state equality.
double overlap_probability(const StateVector& a, const StateVector& b);

/// Complex-Gaussian amplitudes, normalized.
StateVector random_pure_state(const QuditRegister& reg, std::uint64_t seed);
/// Reduced state of a random pure state on reg (x) reg.
DensityOperator random_mixed_state(const QuditRegister& reg, std::uint64_t seed);

namespace detail {

/// Index offsets contributed by every digit combination of `parties` (first party most significant).
std::vector<std::size_t> party_offsets(const QuditRegister& reg, std::span<const std::size_t> parties);
/// The complementary parties of `parties`, ascending.
std::vector<std::size_t> complement(const QuditRegister& reg, std::span<const std::size_t> parties);
void check_targets(const QuditRegister& reg, std::span<const std::size_t> targets);

/// rows <- (op on targets) * rows, treating every column of `m` as a state vector.
void apply_to_rows(Matrix& m, const QuditRegister& reg, const Matrix& op, std::span<const std::size_t> targets);
/// m <- (op on targets) m (op on targets)^dagger.
void conjugate(Matrix& m, const QuditRegister& reg, const Matrix& op, std::span<const std::size_t> targets);

void require_density_cap(std::size_t dim);

} // namespace detail

} // namespace steerlab
