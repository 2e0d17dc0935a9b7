#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "blockade/model.hpp"

namespace blockade {

struct DensityMatrix {
    DenseMatrix data;

    std::size_t dim() const { return static_cast<std::size_t>(data.rows()); }
    Complex trace() const { return data.trace(); }
    double hermiticity_error() const;
    double min_eigenvalue() const;
    double purity() const;

    static DensityMatrix basis_state(std::size_t index, std::size_t dim);
    static DensityMatrix pure(const DenseVector& psi);
};

// Row-major vectorization: vec(rho)[i * dim + j] = rho(i, j).
DenseVector vectorize(const DenseMatrix& rho);
DenseMatrix unvectorize(const DenseVector& v, std::size_t dim);

struct JumpOperator {
    SparseOperator op;
    double rate = 0.0;
    std::string label;
};

class Liouvillian {
public:
    Liouvillian(SparseOperator hamiltonian, std::vector<JumpOperator> jumps);

    std::size_t dim() const { return h_.dim(); }
    const SparseMatrix& superoperator() const { return super_; }
    const SparseOperator& hamiltonian() const { return h_; }
    const std::vector<JumpOperator>& jumps() const { return jumps_; }
    // H - (i/2) sum rate o^dag o, over every jump channel.
    DenseMatrix effective_hamiltonian() const;
    DenseMatrix apply(const DenseMatrix& rho) const;
    // max |vec(I)^T L|, the defect of the trace functional as a left null vector.
    double trace_preservation_error() const;

private:
    SparseOperator h_;
    std::vector<JumpOperator> jumps_;
    SparseMatrix super_;
};

std::vector<JumpOperator> build_jumps(const ModelParams& p, const TruncationSpec& t);
Liouvillian build_liouvillian(const ModelParams& p, const TruncationSpec& t);

enum class SteadyMethod { automatic, iterative, direct, evolve };
std::string to_string(SteadyMethod m);

struct SteadyStateOptions {
    SteadyMethod method = SteadyMethod::automatic;
    double gmres_tolerance = 1e-13;
    int gmres_restart = 120;
    int gmres_max_iterations = 1200;
    double residual_tolerance = 1e-8;
    // automatic picks the direct factorization at or below this Hilbert dimension.
    std::size_t direct_max_dim = 48;
    bool allow_fallback = true;
    // Evolve-to-convergence fallback: duration in units of 1/max(kappa) and steps.
    double evolve_time_units = 2000.0;
    int evolve_steps = 400;
};

struct SteadyStateResult {
    DensityMatrix rho;
    double residual = 0.0;
    int iterations = 0;
    SteadyMethod method_used = SteadyMethod::automatic;
    bool fell_back = false;
    std::string note;
};

SteadyStateResult steady_state(const Liouvillian& L, const SteadyStateOptions& opt = {});

struct EvolveOptions {
    double gmres_tolerance = 1e-13;
    int gmres_restart = 60;
    int gmres_max_iterations = 600;
};

struct EvolveResult {
    DensityMatrix rho;
    int steps = 0;
    double max_trace_drift = 0.0;
    int linear_iterations = 0;
};

// Fixed-step, L-stable fourth-order rational integrator.
EvolveResult evolve(const Liouvillian& L, const DensityMatrix& rho0, double t_final, double dt,
                    const EvolveOptions& opt = {});

struct Observables {
    std::vector<double> P_L;  // P_L[m] for m = 0..n_max_L
    std::vector<double> P_R;
    std::optional<double> g2_L;
    std::optional<double> g2_R;
    double n_L = 0.0;
    double n_R = 0.0;
    double n_b = 0.0;
    // Population of the highest retained level of each mode.
    double tail_L = 0.0;
    double tail_R = 0.0;
    double tail_b = 0.0;
};

Observables observables(const DensityMatrix& rho, const TruncationSpec& t);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace blockade
