// Cyclic Jacobi eigenvalue iteration for Hermitian matrices.
//
// A Hermitian H = A + iB is embedded as the real symmetric matrix
//     S = [ A  -B ]
//         [ B   A ]
// whose spectrum is that of H with every eigenvalue doubled. S is diagonalized
// by cyclic row-by-row Jacobi rotations until the off-diagonal Frobenius norm
// drops below 1e-13 * max(1, ||S||_F), with at most 100 sweeps.

#include <algorithm>
#include <cmath>

#include "steerlab/tensor_core.hpp"

namespace steerlab {

namespace {

constexpr double kOffDiagonalThreshold = 1e-13;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Eigen::MatrixXd& s) {
    double sum = 0.0;
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
        for (Eigen::Index c = 0; c < s.cols(); ++c) {
            if (r != c) {
                sum += s(r, c) * s(r, c);
            }
        }
    }
    return std::sqrt(sum);
}

void rotate(Eigen::MatrixXd& s, Eigen::Index p, Eigen::Index q) {
    const double apq = s(p, q);
    if (apq == 0.0) {
        return;
    }
    const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double sn = t * c;
    for (Eigen::Index k = 0; k < s.rows(); ++k) {
        const double akp = s(k, p);
        const double akq = s(k, q);
        s(k, p) = c * akp - sn * akq;
        s(k, q) = sn * akp + c * akq;
    }
    for (Eigen::Index k = 0; k < s.cols(); ++k) {
        const double apk = s(p, k);
        const double aqk = s(q, k);
        s(p, k) = c * apk - sn * aqk;
        s(q, k) = sn * apk + c * aqk;
    }
    s(p, q) = 0.0;
    s(q, p) = 0.0;
}

} // namespace

std::vector<double> hermitian_eigenvalues(const Matrix& hermitian) {
    const Eigen::Index n = hermitian.rows();
    if (n == 0 || hermitian.cols() != n) {
        throw ValidationError("hermitian_eigenvalues: matrix must be square and non-empty");
    }
    if ((hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw ValidationError("hermitian_eigenvalues: matrix is not Hermitian within 1e-10");
    }

    Eigen::MatrixXd s(2 * n, 2 * n);
    const Eigen::MatrixXd re = 0.5 * (hermitian.real() + hermitian.real().transpose());
    const Eigen::MatrixXd im = 0.5 * (hermitian.imag() - hermitian.imag().transpose());
    s.topLeftCorner(n, n) = re;
    s.bottomRightCorner(n, n) = re;
    s.topRightCorner(n, n) = -im;
    s.bottomLeftCorner(n, n) = im;

    const double scale = std::max(1.0, s.norm());
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(s) <= kOffDiagonalThreshold * scale) {
            converged = true;
            break;
        }
        for (Eigen::Index p = 0; p < 2 * n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < 2 * n; ++q) {
                rotate(s, p, q);
            }
        }
    }
    if (!converged && off_diagonal_norm(s) > kOffDiagonalThreshold * scale) {
        throw NumericalError("Jacobi iteration did not converge within 100 sweeps");
    }

    std::vector<double> doubled(static_cast<std::size_t>(2 * n));
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        doubled[static_cast<std::size_t>(i)] = s(i, i);
    }
    std::sort(doubled.begin(), doubled.end());
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < eig.size(); ++i) {
        eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    }
    return eig;
}

double hermitian_max_eigenvalue(const Matrix& hermitian) { return hermitian_eigenvalues(hermitian).back(); }

} // namespace steerlab
