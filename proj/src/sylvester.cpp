#include "sylvester.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "blockade/errors.hpp"

namespace blockade::detail {

ShiftedLyapunov::ShiftedLyapunov(const Eigen::MatrixXcd& H) {
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(H);
    if (schur.info() != Eigen::Success) throw SolverError("Schur decomposition did not converge");
    Q_ = schur.matrixU();
    T_ = schur.matrixT();
    Tadj_ = T_.adjoint();
    double scale = 0.0;
    for (Eigen::Index i = 0; i < T_.rows(); ++i) scale = std::max(scale, std::abs(T_(i, i)));
    pivot_floor_ = 1e-300 + 1e-15 * scale;
}

double ShiftedLyapunov::min_decay() const {
    double m = INFINITY;
    for (Eigen::Index i = 0; i < T_.rows(); ++i) m = std::min(m, std::abs(T_(i, i).imag()));
    return m;
}

Eigen::MatrixXcd ShiftedLyapunov::solve(const Eigen::MatrixXcd& Y, std::complex<double> scale,
                                        std::complex<double> shift) const {
    const Eigen::Index d = T_.rows();
    const std::complex<double> I(0.0, 1.0);
    // T X - X T^dag + mu X = C in the Schur basis.
    const std::complex<double> mu = I * shift / scale;
    Eigen::MatrixXcd X = (I / scale) * (Q_.adjoint() * Y * Q_);
    Eigen::VectorXcd rhs(d);
    for (Eigen::Index j = d - 1; j >= 0; --j) {
        rhs = X.col(j);
        if (j + 1 < d) rhs.noalias() += X.rightCols(d - j - 1) * Tadj_.col(j).tail(d - j - 1);
        const std::complex<double> sigma = std::conj(T_(j, j)) - mu;
        for (Eigen::Index i = d - 1; i >= 0; --i) {
            std::complex<double> piv = T_(i, i) - sigma;
            if (std::abs(piv) < pivot_floor_) piv = pivot_floor_;
            const std::complex<double> xi = rhs(i) / piv;
            rhs(i) = xi;
            if (i > 0) rhs.head(i).noalias() -= xi * T_.col(i).head(i);
        }
        X.col(j) = rhs;
    }
    return Q_ * X * Q_.adjoint();
}

}  // namespace blockade::detail
