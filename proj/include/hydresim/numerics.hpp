#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hydresim {

using Vector = Eigen::VectorXd;

/// Triplet-assembled compressed sparse matrix with block helpers for the
/// 4x4 transport and 2x2 mechanics stencils. finalize() compresses and
/// drops explicitly stored zeros.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) { reset(rows, cols); }

    void reset(int rows, int cols);
    void add(int i, int j, double v);

    template <int B>
    void add_block(int brow, int bcol, const double* vals) // row-major B x B
    {
        for (int i = 0; i < B; ++i)
            for (int j = 0; j < B; ++j) add(B * brow + i, B * bcol + j, vals[B * i + j]);
    }

    void finalize();
    bool finalized() const { return finalized_; }

    /// Become a row-scaled copy of a finalized matrix (same pattern).
    void scaled_rows_from(const SparseMatrix& src, const Vector& row_weights);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int non_zeros() const { return static_cast<int>(mat_.nonZeros()); }

    const Eigen::SparseMatrix<double>& eigen() const { return mat_; }

    /// True when the sparsity pattern equals `other`'s (same compressed
    /// index structure), which permits symbolic factorization reuse.
    bool same_pattern(const SparseMatrix& other) const;

private:
    int rows_ = 0, cols_ = 0;
    bool finalized_ = false;
    std::vector<Eigen::Triplet<double>> triplets_;
    Eigen::SparseMatrix<double> mat_;
};

struct SolverStats {
    long symbolic_analyses = 0;
    long numeric_factorizations = 0;
    long solves = 0;
};

/// Sparse direct (LU) solver. Keeps the last sparsity pattern and reuses the
/// symbolic analysis when consecutive systems share it, which is the common
/// case inside a Newton loop.
class SparseDirectSolver {
public:
    SparseDirectSolver();
    ~SparseDirectSolver();
    SparseDirectSolver(SparseDirectSolver&&) noexcept;
    SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

    /// Factor A and solve A x = b. Throws SolverError on singular systems
    /// (empty rows are reported with their row index).
    Vector solve(const SparseMatrix& A, const Vector& b);

    const SolverStats& stats() const { return stats_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    SolverStats stats_;
};

/// One-shot convenience wrapper around SparseDirectSolver.
Vector sparse_direct_solve(const SparseMatrix& A, const Vector& b);

/// Matrix-market dump for offline debugging (flag-gated by callers).
void dump_matrix_market(const SparseMatrix& A, const std::string& path);
void dump_vector(const Vector& b, const std::string& path);

struct NewtonOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_iter = 25;
    double min_damping = 1.0 / 64.0; ///< damping schedule 1, 1/2, ..., min
    /// Residual level treated as numerically converged when the iteration
    /// can make no further progress (floating-point granularity of the
    /// assembled fluxes, which grows with transmissibility/volume ratios);
    /// in weighted norms this is a relative per-step storage error.
    double stall_tol = 1e-5;

    bool operator==(const NewtonOptions&) const = default;
};

struct NewtonReport {
    bool converged = false;
    bool stalled = false; ///< accepted at the progress floor, not at target
    int iterations = 0;
    int damped_steps = 0;
    int clip_events = 0;
    double initial_norm = 0.0;
    double final_norm = 0.0;
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<void(const Vector&, SparseMatrix&)>;
/// Optional projection applied after each update (e.g. saturation clipping);
/// returns the number of clipped entries.
using ProjectFn = std::function<int(Vector&)>;

/// Damped Newton iteration: full step first, then halved damping until the
/// residual norm decreases. x is updated in place; on non-convergence the
/// best iterate is kept and report.converged stays false.
///
/// `row_weights` (optional) non-dimensionalizes the equations: convergence
/// is measured on w .* F and the linear systems are row-scaled accordingly,
/// which leaves the Newton step unchanged but balances the pivoting.
NewtonReport newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, Vector& x,
                          const NewtonOptions& opts, SparseDirectSolver& solver,
                          const ProjectFn& project = nullptr,
                          const Vector* row_weights = nullptr);

} // namespace hydresim
