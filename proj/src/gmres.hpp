#pragma once

#include <functional>

#include <Eigen/Dense>

namespace blockade::detail {

using LinearMap = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

struct GmresResult {
    Eigen::VectorXcd x;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

// Restarted GMRES with optional right preconditioner; tolerance is relative to |b|.
GmresResult gmres(const LinearMap& A, const Eigen::VectorXcd& b, const LinearMap* right_precond,
                  const Eigen::VectorXcd& x0, double tol, int restart, int max_iterations);

}  // namespace blockade::detail
