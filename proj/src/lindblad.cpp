#include "blockade/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/Polynomials>

#include "blockade/errors.hpp"
#include "gmres.hpp"
#include "sylvester.hpp"

namespace blockade {

namespace {

using RowMajorDense = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

SparseMatrix sparse_identity(std::size_t n) {
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setIdentity();
    return m;
}

DenseMatrix jump_map(const std::vector<JumpOperator>& jumps, const DenseMatrix& X) {
    DenseMatrix out = DenseMatrix::Zero(X.rows(), X.cols());
    for (const auto& j : jumps) {
        const DenseMatrix oX = j.op.matrix() * X;
        out.noalias() += j.rate * (oX * j.op.matrix().adjoint());
    }
    return out;
}

DensityMatrix physical(DenseMatrix rho) {
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw SolverError("steady state has vanishing trace");
    rho /= tr.real();
    return DensityMatrix{std::move(rho)};
}

double residual_inf(const Liouvillian& L, const DensityMatrix& rho) {
    return (L.superoperator() * vectorize(rho.data)).cwiseAbs().maxCoeff();
}

SteadyStateResult solve_iterative(const Liouvillian& L, const SteadyStateOptions& opt) {
    const std::size_t d = L.dim();
    const DenseMatrix heff = L.effective_hamiltonian();
    detail::ShiftedLyapunov lyap(heff);
    double scale = 1.0;
    for (Eigen::Index i = 0; i < heff.rows(); ++i) scale = std::max(scale, std::abs(heff(i, i)));
    if (lyap.min_decay() < 1e-13 * scale)
        throw SolverError("iterative steady state: a Schur mode has no decay (the no-jump map is singular)");

    auto s_inv = [&](const DenseMatrix& Y) { return lyap.solve(Y, 1.0, 0.0); };
    // Fixed point of the jump chain: sigma + J(S^{-1} sigma) + u tr(sigma) = u, u = |0><0|.
    detail::LinearMap A = [&](const DenseVector& v) {
        const DenseMatrix s = unvectorize(v, d);
        DenseMatrix out = s + jump_map(L.jumps(), s_inv(s));
        out(0, 0) += s.trace();
        return vectorize(out);
    };
    DenseMatrix u = DenseMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    u(0, 0) = 1.0;
    const DenseVector b = vectorize(u);
    const auto g = detail::gmres(A, b, nullptr, b, opt.gmres_tolerance, opt.gmres_restart, opt.gmres_max_iterations);
    if (!g.converged)
        throw SolverError("iterative steady state: GMRES stalled at relative residual " +
                          std::to_string(g.relative_residual));
    SteadyStateResult r;
    r.rho = physical(-s_inv(unvectorize(g.x, d)));
    r.iterations = g.iterations;
    r.method_used = SteadyMethod::iterative;
    return r;
}

SteadyStateResult solve_direct(const Liouvillian& L) {
    const std::size_t d = L.dim();
    const auto D = static_cast<Eigen::Index>(d * d);
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(L.superoperator().nonZeros()) + d);
    const SparseMatrix& S = L.superoperator();
    for (Eigen::Index r = 1; r < S.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(S, r); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
    for (std::size_t i = 0; i < d; ++i) trip.emplace_back(0, static_cast<Eigen::Index>(i * d + i), Complex(1.0, 0.0));
    Eigen::SparseMatrix<Complex, Eigen::ColMajor> A(D, D);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<Complex, Eigen::ColMajor>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverError("direct steady state: factorization failed (" + lu.lastErrorMessage() + ")");
    DenseVector rhs = DenseVector::Zero(D);
    rhs(0) = 1.0;
    const DenseVector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("direct steady state: solve failed");
    SteadyStateResult r;
    r.rho = physical(unvectorize(x, d));
    r.method_used = SteadyMethod::direct;
    return r;
}

SteadyStateResult solve_evolve(const Liouvillian& L, const SteadyStateOptions& opt) {
    double kmax = 0.0;
    for (const auto& j : L.jumps()) kmax = std::max(kmax, j.rate);
    if (kmax <= 0.0) throw SolverError("evolve fallback: no dissipation");
    const double t = opt.evolve_time_units / kmax;
    const auto ev = evolve(L, DensityMatrix::basis_state(0, L.dim()), t, t / opt.evolve_steps);
    SteadyStateResult r;
    r.rho = physical(ev.rho.data);
    r.iterations = ev.linear_iterations;
    r.method_used = SteadyMethod::evolve;
    return r;
}

SteadyStateResult run_method(const Liouvillian& L, SteadyMethod m, const SteadyStateOptions& opt) {
    switch (m) {
        case SteadyMethod::iterative: return solve_iterative(L, opt);
        case SteadyMethod::direct: return solve_direct(L);
        case SteadyMethod::evolve: return solve_evolve(L, opt);
        case SteadyMethod::automatic: break;
    }
    throw SolverError("unresolved steady-state method");
}

}  // namespace

double DensityMatrix::hermiticity_error() const { return (data - data.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (data + data.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const { return (data * data).trace().real(); }

DensityMatrix DensityMatrix::basis_state(std::size_t index, std::size_t dim) {
    if (index >= dim) throw DimensionError("basis_state: index out of range");
    DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return DensityMatrix{std::move(m)};
}

DensityMatrix DensityMatrix::pure(const DenseVector& psi) {
    const DenseVector n = psi / psi.norm();
    return DensityMatrix{n * n.adjoint()};
}

DenseVector vectorize(const DenseMatrix& rho) {
    DenseVector v(rho.size());
    Eigen::Map<RowMajorDense>(v.data(), rho.rows(), rho.cols()) = rho;
    return v;
}

DenseMatrix unvectorize(const DenseVector& v, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    if (v.size() != d * d) throw DimensionError("unvectorize: size mismatch");
    return Eigen::Map<const RowMajorDense>(v.data(), d, d);
}

Liouvillian::Liouvillian(SparseOperator hamiltonian, std::vector<JumpOperator> jumps)
    : h_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
    for (const auto& j : jumps_)
        if (j.op.dim() != h_.dim()) throw DimensionError("Liouvillian: jump operator dimension mismatch");
    jumps_.erase(std::remove_if(jumps_.begin(), jumps_.end(), [](const JumpOperator& j) { return j.rate == 0.0; }),
                 jumps_.end());
    const SparseMatrix id = sparse_identity(dim());
    const SparseMatrix& H = h_.matrix();
    const Complex I(0.0, 1.0);
    SparseMatrix L = SparseMatrix(Eigen::kroneckerProduct(H, id)) * (-I) +
                     SparseMatrix(Eigen::kroneckerProduct(id, SparseMatrix(H.transpose()))) * I;
    for (const auto& j : jumps_) {
        const SparseMatrix& o = j.op.matrix();
        const SparseMatrix odo = o.adjoint() * o;
        L += SparseMatrix(Eigen::kroneckerProduct(o, SparseMatrix(o.conjugate()))) * Complex(j.rate, 0.0);
        L -= SparseMatrix(Eigen::kroneckerProduct(odo, id)) * Complex(0.5 * j.rate, 0.0);
        L -= SparseMatrix(Eigen::kroneckerProduct(id, SparseMatrix(odo.transpose()))) * Complex(0.5 * j.rate, 0.0);
    }
    L.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return std::abs(v) > kDropTolerance; });
    L.makeCompressed();
    super_ = std::move(L);
}

DenseMatrix Liouvillian::effective_hamiltonian() const {
    DenseMatrix h = h_.dense();
    for (const auto& j : jumps_) h -= Complex(0.0, 0.5 * j.rate) * DenseMatrix(j.op.matrix().adjoint() * j.op.matrix());
    return h;
}

DenseMatrix Liouvillian::apply(const DenseMatrix& rho) const {
    return unvectorize(super_ * vectorize(rho), dim());
}

double Liouvillian::trace_preservation_error() const {
    const std::size_t d = dim();
    DenseVector w = DenseVector::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t i = 0; i < d; ++i) w(static_cast<Eigen::Index>(i * d + i)) = 1.0;
    const DenseVector row = super_.transpose() * w;
    return row.cwiseAbs().maxCoeff();
}

std::vector<JumpOperator> build_jumps(const ModelParams& p, const TruncationSpec& t) {
    const auto m = mode_operators(t);
    std::vector<JumpOperator> out;
    auto add = [&](const SparseOperator& o, double rate, const char* label) {
        if (rate > 0.0) out.push_back({o, rate, label});
    };
    add(m.a_L, p.kappa_L, "a_L");
    add(m.a_R, p.kappa_R, "a_R");
    add(m.b, p.kappa_b * (p.n_bar_b + 1.0), "b");
    add(m.b.adjoint(), p.kappa_b * p.n_bar_b, "b_dag");
    return out;
}

Liouvillian build_liouvillian(const ModelParams& p, const TruncationSpec& t) {
    require_valid(p);
    t.validate();
    return Liouvillian(build_h_I(p, t), build_jumps(p, t));
}

std::string to_string(SteadyMethod m) {
    switch (m) {
        case SteadyMethod::automatic: return "automatic";
        case SteadyMethod::iterative: return "iterative";
        case SteadyMethod::direct: return "direct";
        case SteadyMethod::evolve: return "evolve";
    }
    return "?";
}

SteadyStateResult steady_state(const Liouvillian& L, const SteadyStateOptions& opt) {
    if (L.jumps().empty()) throw PreconditionError("steady_state: the Liouvillian has no dissipation");
    std::vector<SteadyMethod> chain;
    SteadyMethod first = opt.method;
    if (first == SteadyMethod::automatic)
        first = L.dim() <= opt.direct_max_dim ? SteadyMethod::direct : SteadyMethod::iterative;
    chain.push_back(first);
    if (opt.allow_fallback) {
        if (first == SteadyMethod::direct) chain.push_back(SteadyMethod::iterative);
        if (first == SteadyMethod::iterative) chain.push_back(SteadyMethod::direct);
        if (first != SteadyMethod::evolve) chain.push_back(SteadyMethod::evolve);
    }
    std::string notes;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        try {
            SteadyStateResult r = run_method(L, chain[i], opt);
            r.residual = residual_inf(L, r.rho);
            r.fell_back = i > 0;
            if (r.residual <= opt.residual_tolerance || i + 1 == chain.size()) {
                r.note = notes;
                return r;
            }
            notes += to_string(chain[i]) + ": residual " + std::to_string(r.residual) + "; ";
        } catch (const Error& e) {
            notes += to_string(chain[i]) + ": " + e.what() + "; ";
            if (i + 1 == chain.size()) throw SolverError("steady_state failed: " + notes);
        }
    }
    throw SolverError("steady_state failed: " + notes);
}

EvolveResult evolve(const Liouvillian& L, const DensityMatrix& rho0, double t_final, double dt, const EvolveOptions& opt) {
    if (rho0.dim() != L.dim()) throw DimensionError("evolve: initial state dimension mismatch");
    if (t_final < 0.0 || dt <= 0.0) throw PreconditionError("evolve: need t_final >= 0 and dt > 0");
    EvolveResult out;
    out.rho = rho0;
    if (t_final == 0.0) return out;

    const int steps = std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-9)));
    const double h = t_final / steps;
    const std::size_t d = L.dim();

    // Denominator of the (1,3) Pade approximant of exp: Q(z) = -(1/24)(z - r1)(z - r2)(z - r3).
    Eigen::Vector4d coeffs(-24.0, 18.0, -6.0, 1.0);
    Eigen::PolynomialSolver<double, 3> poly(coeffs);
    const auto roots = poly.roots();

    detail::ShiftedLyapunov lyap(L.effective_hamiltonian());
    const SparseMatrix& S = L.superoperator();
    DenseVector y = vectorize(rho0.data);
    const Complex tr0 = rho0.trace();
    // Previous step's solutions seed each shifted solve.
    std::array<DenseVector, 3> warm;

    for (int n = 0; n < steps; ++n) {
        DenseVector v = y + (0.25 * h) * (S * y);
        for (int i = 0; i < 3; ++i) {
            const Complex r = roots(i);
            detail::LinearMap A = [&](const DenseVector& x) { return DenseVector(h * (S * x) - r * x); };
            detail::LinearMap P = [&](const DenseVector& x) {
                return vectorize(lyap.solve(unvectorize(x, d), Complex(h, 0.0), r));
            };
            const auto g = detail::gmres(A, v, &P, warm[static_cast<std::size_t>(i)], opt.gmres_tolerance,
                                         opt.gmres_restart, opt.gmres_max_iterations);
            if (!g.converged)
                throw SolverError("evolve: shifted solve stalled at relative residual " +
                                  std::to_string(g.relative_residual));
            out.linear_iterations += g.iterations;
            warm[static_cast<std::size_t>(i)] = g.x;
            v = g.x;
        }
        y = -24.0 * v;
        Complex tr = 0.0;
        for (std::size_t i = 0; i < d; ++i) tr += y(static_cast<Eigen::Index>(i * d + i));
        out.max_trace_drift = std::max(out.max_trace_drift, std::abs(tr - tr0));
    }
    out.steps = steps;
    out.rho = DensityMatrix{unvectorize(y, d)};
    return out;
}

Observables observables(const DensityMatrix& rho, const TruncationSpec& t) {
    if (rho.dim() != t.dim()) throw DimensionError("observables: density matrix does not match truncation");
    const int nL = t.levels(Mode::L), nR = t.levels(Mode::R), nb = t.levels(Mode::b);
    Observables o;
    o.P_L.assign(static_cast<std::size_t>(nL), 0.0);
    o.P_R.assign(static_cast<std::size_t>(nR), 0.0);
    std::vector<double> Pb(static_cast<std::size_t>(nb), 0.0);
    for (int mL = 0; mL < nL; ++mL)
        for (int mR = 0; mR < nR; ++mR)
            for (int k = 0; k < nb; ++k) {
                const Eigen::Index idx = (mL * nR + mR) * nb + k;
                const double p = rho.data(idx, idx).real();
                o.P_L[static_cast<std::size_t>(mL)] += p;
                o.P_R[static_cast<std::size_t>(mR)] += p;
                Pb[static_cast<std::size_t>(k)] += p;
            }
    auto moments = [](const std::vector<double>& P, double& n1, double& n2) {
        n1 = n2 = 0.0;
        for (std::size_t m = 0; m < P.size(); ++m) {
            n1 += static_cast<double>(m) * P[m];
            n2 += static_cast<double>(m) * (static_cast<double>(m) - 1.0) * P[m];
        }
    };
    double l2 = 0.0, r2 = 0.0;
    moments(o.P_L, o.n_L, l2);
    moments(o.P_R, o.n_R, r2);
    if (o.n_L >= 1e-14) o.g2_L = l2 / (o.n_L * o.n_L);
    if (o.n_R >= 1e-14) o.g2_R = r2 / (o.n_R * o.n_R);
    for (int k = 0; k < nb; ++k) o.n_b += k * Pb[static_cast<std::size_t>(k)];
    o.tail_L = o.P_L.back();
    o.tail_R = o.P_R.back();
    o.tail_b = Pb.back();
    return o;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("trace_distance: dimension mismatch");
    const DenseMatrix diff = a.data - b.data;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace blockade
