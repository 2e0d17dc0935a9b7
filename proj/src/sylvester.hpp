#pragma once

#include <complex>

#include <Eigen/Dense>

namespace blockade::detail {

// Solves scale * (-i) (H X - X H^dag) - shift * X = Y for X, with H fixed, via a complex
// Schur form H = Q T Q^dag and column-wise triangular back substitution.
class ShiftedLyapunov {
public:
    explicit ShiftedLyapunov(const Eigen::MatrixXcd& H);

    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& Y, std::complex<double> scale,
                           std::complex<double> shift) const;

    // Smallest |Im| over the Schur diagonal; zero means the unshifted map is singular.
    double min_decay() const;

private:
    Eigen::MatrixXcd Q_;
    Eigen::MatrixXcd T_;
    Eigen::MatrixXcd Tadj_;
    double pivot_floor_ = 0.0;
};

}  // namespace blockade::detail
