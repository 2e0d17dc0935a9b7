#include "gmres.hpp"

#include <cmath>
#include <vector>

namespace blockade::detail {

GmresResult gmres(const LinearMap& A, const Eigen::VectorXcd& b, const LinearMap* right_precond,
                  const Eigen::VectorXcd& x0, double tol, int restart, int max_iterations) {
    using Vec = Eigen::VectorXcd;
    using C = std::complex<double>;
    GmresResult out;
    out.x = x0.size() == b.size() ? x0 : Vec::Zero(b.size());
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        out.x.setZero();
        out.converged = true;
        return out;
    }
    auto precond = [&](const Vec& v) { return right_precond ? (*right_precond)(v) : v; };

    while (out.iterations < max_iterations) {
        Vec r = b - A(out.x);
        double beta = r.norm();
        out.relative_residual = beta / bnorm;
        if (out.relative_residual <= tol) {
            out.converged = true;
            return out;
        }
        const int m = restart;
        std::vector<Vec> V;
        V.reserve(static_cast<std::size_t>(m + 1));
        V.push_back(r / beta);
        Eigen::MatrixXcd Hh = Eigen::MatrixXcd::Zero(m + 1, m);
        std::vector<C> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
        Vec g = Vec::Zero(m + 1);
        g(0) = beta;
        int j = 0;
        for (; j < m && out.iterations < max_iterations; ++j) {
            ++out.iterations;
            Vec w = A(precond(V[static_cast<std::size_t>(j)]));
            // Modified Gram-Schmidt, applied twice for stability.
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= j; ++i) {
                    const C h = V[static_cast<std::size_t>(i)].dot(w);
                    Hh(i, j) += h;
                    w -= h * V[static_cast<std::size_t>(i)];
                }
            const double hn = w.norm();
            Hh(j + 1, j) = hn;
            for (int i = 0; i < j; ++i) {
                const C t = cs[static_cast<std::size_t>(i)] * Hh(i, j) + sn[static_cast<std::size_t>(i)] * Hh(i + 1, j);
                Hh(i + 1, j) = -std::conj(sn[static_cast<std::size_t>(i)]) * Hh(i, j) +
                               std::conj(cs[static_cast<std::size_t>(i)]) * Hh(i + 1, j);
                Hh(i, j) = t;
            }
            const C a = Hh(j, j);
            const double bb = std::abs(Hh(j + 1, j));
            const double den = std::sqrt(std::norm(a) + bb * bb);
            C c, s;
            if (den == 0.0) {
                c = 1.0;
                s = 0.0;
            } else if (std::abs(a) == 0.0) {
                c = 0.0;
                s = 1.0;
            } else {
                c = std::abs(a) / den;
                // Rotation [c s; -conj(s) c] maps (a, bb) to (a/|a| den, 0).
                s = (a / std::abs(a)) * bb / den;
            }
            cs[static_cast<std::size_t>(j)] = c;
            sn[static_cast<std::size_t>(j)] = s;
            Hh(j, j) = c * a + s * Hh(j + 1, j);
            Hh(j + 1, j) = 0.0;
            g(j + 1) = -std::conj(s) * g(j);
            g(j) = c * g(j);
            out.relative_residual = std::abs(g(j + 1)) / bnorm;
            if (hn == 0.0 || out.relative_residual <= tol) {
                ++j;
                break;
            }
            V.push_back(w / hn);
        }
        const int k = j;
        Vec y = Hh.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
        Vec update = Vec::Zero(b.size());
        for (int i = 0; i < k; ++i) update += y(i) * V[static_cast<std::size_t>(i)];
        out.x += precond(update);
        if (out.relative_residual <= tol) {
            const double true_res = (b - A(out.x)).norm() / bnorm;
            out.relative_residual = true_res;
            if (true_res <= 10.0 * tol) {
                out.converged = true;
                return out;
            }
        }
    }
    out.relative_residual = (b - A(out.x)).norm() / bnorm;
    out.converged = out.relative_residual <= 10.0 * tol;
    return out;
}

}  // namespace blockade::detail
