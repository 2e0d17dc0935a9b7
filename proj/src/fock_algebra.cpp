#include "blockade/fock_algebra.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "blockade/errors.hpp"

namespace blockade {

namespace {

SparseMatrix pruned(SparseMatrix m) {
    m.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return std::abs(v) > kDropTolerance; });
    m.makeCompressed();
    return m;
}

void require_cutoff(int n_max, const char* what) {
    if (n_max < 1) throw PreconditionError(std::string(what) + ": cutoff must be >= 1, got " + std::to_string(n_max));
}

// sqrt(small! / large!) for small <= large.
double factorial_ratio_sqrt(int small, int large) {
    if (large > 30) return std::exp(0.5 * (std::lgamma(small + 1.0) - std::lgamma(large + 1.0)));
    double r = 1.0;
    for (int i = small + 1; i <= large; ++i) r /= static_cast<double>(i);
    return std::sqrt(r);
}

}  // namespace

int TruncationSpec::levels(Mode m) const {
    switch (m) {
        case Mode::L: return n_max_L + 1;
        case Mode::R: return n_max_R + 1;
        case Mode::b: return n_max_b + 1;
    }
    return 0;
}

std::size_t TruncationSpec::dim() const {
    return static_cast<std::size_t>(n_max_L + 1) * static_cast<std::size_t>(n_max_R + 1) *
           static_cast<std::size_t>(n_max_b + 1);
}

double TruncationSpec::estimated_superoperator_bytes() const {
    // Roughly 24 stored entries per superoperator row, 24 bytes each incl. index.
    const double d = static_cast<double>(dim());
    return d * d * 24.0 * 24.0;
}

void TruncationSpec::validate() const {
    if (n_max_L < 1 || n_max_R < 1 || n_max_b < 1 || k_max_analytic < 1)
        throw PreconditionError("truncation: all cutoffs must be >= 1");
    if (estimated_superoperator_bytes() > memory_budget_bytes)
        throw MemoryBudgetError("truncation: dimension " + std::to_string(dim()) +
                                " exceeds the memory budget of " + std::to_string(memory_budget_bytes) + " bytes");
}

SparseOperator::SparseOperator(SparseMatrix m) : m_(pruned(std::move(m))) {}

SparseOperator SparseOperator::identity(std::size_t n) {
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setIdentity();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::zero(std::size_t n) {
    return SparseOperator(SparseMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

SparseOperator SparseOperator::from_triplets(std::size_t n, const std::vector<Triplet>& entries) {
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& t : entries)
        if (t.row() < 0 || t.col() < 0 || static_cast<std::size_t>(t.row()) >= n ||
            static_cast<std::size_t>(t.col()) >= n)
            throw DimensionError("from_triplets: index out of range");
    m.setFromTriplets(entries.begin(), entries.end());
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::from_dense(const DenseMatrix& d) {
    if (d.rows() != d.cols()) throw DimensionError("from_dense: matrix not square");
    return SparseOperator(SparseMatrix(d.sparseView()));
}

Complex SparseOperator::coeff(std::size_t r, std::size_t c) const {
    return m_.coeff(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

std::vector<Triplet> SparseOperator::entries() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (Eigen::Index r = 0; r < m_.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m_, r); it; ++it) out.emplace_back(it.row(), it.col(), it.value());
    return out;
}

SparseOperator SparseOperator::adjoint() const { return SparseOperator(SparseMatrix(m_.adjoint())); }
SparseOperator SparseOperator::transpose() const { return SparseOperator(SparseMatrix(m_.transpose())); }

SparseOperator SparseOperator::operator+(const SparseOperator& o) const {
    if (dim() != o.dim()) throw DimensionError("operator+: dimension mismatch");
    return SparseOperator(SparseMatrix(m_ + o.m_));
}

SparseOperator SparseOperator::operator-(const SparseOperator& o) const {
    if (dim() != o.dim()) throw DimensionError("operator-: dimension mismatch");
    return SparseOperator(SparseMatrix(m_ - o.m_));
}

SparseOperator SparseOperator::operator*(const SparseOperator& o) const {
    if (dim() != o.dim()) throw DimensionError("operator*: dimension mismatch");
    return SparseOperator(SparseMatrix(m_ * o.m_));
}

SparseOperator SparseOperator::operator*(Complex s) const { return SparseOperator(SparseMatrix(m_ * s)); }

SparseOperator annihilation(int n_max) {
    require_cutoff(n_max, "annihilation");
    std::vector<Triplet> t;
    for (int n = 1; n <= n_max; ++n) t.emplace_back(n - 1, n, Complex(std::sqrt(static_cast<double>(n)), 0.0));
    return SparseOperator::from_triplets(static_cast<std::size_t>(n_max + 1), t);
}

SparseOperator creation(int n_max) { return annihilation(n_max).adjoint(); }

SparseOperator number_operator(int n_max) {
    require_cutoff(n_max, "number_operator");
    std::vector<Triplet> t;
    for (int n = 1; n <= n_max; ++n) t.emplace_back(n, n, Complex(n, 0.0));
    return SparseOperator::from_triplets(static_cast<std::size_t>(n_max + 1), t);
}

SparseOperator kron(const SparseOperator& a, const SparseOperator& b) {
    SparseMatrix out = Eigen::kroneckerProduct(a.matrix(), b.matrix());
    return SparseOperator(std::move(out));
}

SparseOperator kron_embed(const SparseOperator& op, Mode slot, const TruncationSpec& t) {
    const auto expected = static_cast<std::size_t>(t.levels(slot));
    if (op.dim() != expected)
        throw DimensionError("kron_embed: operator dimension " + std::to_string(op.dim()) +
                             " does not match slot dimension " + std::to_string(expected));
    const auto idL = SparseOperator::identity(static_cast<std::size_t>(t.levels(Mode::L)));
    const auto idR = SparseOperator::identity(static_cast<std::size_t>(t.levels(Mode::R)));
    const auto idb = SparseOperator::identity(static_cast<std::size_t>(t.levels(Mode::b)));
    switch (slot) {
        case Mode::L: return kron(kron(op, idR), idb);
        case Mode::R: return kron(kron(idL, op), idb);
        case Mode::b: return kron(kron(idL, idR), op);
    }
    return op;
}

double laguerre(int n, double alpha, double x) {
    if (n < 0) throw PreconditionError("laguerre: negative degree");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

Complex displacement_element(int k, int l, Complex beta) {
    if (k < 0 || l < 0) throw PreconditionError("displacement_element: negative index");
    const double x = std::norm(beta);
    const double envelope = std::exp(-0.5 * x);
    if (l >= k) {
        Complex pw(1.0, 0.0);
        const Complex base = -std::conj(beta);
        for (int i = 0; i < l - k; ++i) pw *= base;
        return factorial_ratio_sqrt(k, l) * envelope * pw * laguerre(k, l - k, x);
    }
    Complex pw(1.0, 0.0);
    for (int i = 0; i < k - l; ++i) pw *= beta;
    return factorial_ratio_sqrt(l, k) * envelope * pw * laguerre(l, k - l, x);
}

DenseMatrix displacement_dense(Complex beta, int n_max) {
    require_cutoff(n_max, "displacement_matrix");
    DenseMatrix d(n_max + 1, n_max + 1);
    for (int k = 0; k <= n_max; ++k)
        for (int l = 0; l <= n_max; ++l) d(k, l) = displacement_element(k, l, beta);
    return d;
}

SparseOperator displacement_matrix(Complex beta, int n_max) {
    return SparseOperator::from_dense(displacement_dense(beta, n_max));
}

Complex franck_condon(int k, int k2, double eta1, double eta2) {
    return displacement_element(k, k2, Complex(eta2 - eta1, 0.0));
}

}  // namespace blockade
