#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace blockade {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<Complex>;

inline constexpr double kDropTolerance = 1e-14;

enum class Mode { L = 0, R = 1, b = 2 };

struct TruncationSpec {
    int n_max_L = 3;
    int n_max_R = 3;
    int n_max_b = 12;
    int k_max_analytic = 15;
    // Upper bound on the estimated superoperator footprint.
    double memory_budget_bytes = 2.0e9;

    int levels(Mode m) const;
    std::size_t dim() const;
    double estimated_superoperator_bytes() const;
    // Throws PreconditionError or MemoryBudgetError.
    void validate() const;
};

// Complex sparse matrix with entries below kDropTolerance removed.
class SparseOperator {
public:
    SparseOperator() = default;
    explicit SparseOperator(SparseMatrix m);

    static SparseOperator identity(std::size_t n);
    static SparseOperator zero(std::size_t n);
    static SparseOperator from_triplets(std::size_t n, const std::vector<Triplet>& entries);
    static SparseOperator from_dense(const DenseMatrix& m);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    std::size_t nnz() const { return static_cast<std::size_t>(m_.nonZeros()); }
    const SparseMatrix& matrix() const { return m_; }
    DenseMatrix dense() const { return DenseMatrix(m_); }
    Complex coeff(std::size_t r, std::size_t c) const;
    std::vector<Triplet> entries() const;

    SparseOperator adjoint() const;
    SparseOperator transpose() const;

    SparseOperator operator+(const SparseOperator& o) const;
    SparseOperator operator-(const SparseOperator& o) const;
    SparseOperator operator*(const SparseOperator& o) const;
    SparseOperator operator*(Complex s) const;
    friend SparseOperator operator*(Complex s, const SparseOperator& a) { return a * s; }

private:
    SparseMatrix m_;
};

SparseOperator annihilation(int n_max);
SparseOperator creation(int n_max);
SparseOperator number_operator(int n_max);

SparseOperator kron(const SparseOperator& a, const SparseOperator& b);
SparseOperator kron_embed(const SparseOperator& op, Mode slot, const TruncationSpec& t);

// Generalized Laguerre polynomial L_n^alpha(x) by upward recurrence.
double laguerre(int n, double alpha, double x);

// <k|D(beta)|l> with D(beta) = exp(beta b^dag - conj(beta) b).
Complex displacement_element(int k, int l, Complex beta);
DenseMatrix displacement_dense(Complex beta, int n_max);
SparseOperator displacement_matrix(Complex beta, int n_max);

// <k~(eta1)|k2~(eta2)> = <k|D(eta2 - eta1)|k2>.
Complex franck_condon(int k, int k2, double eta1, double eta2);

}  // namespace blockade
