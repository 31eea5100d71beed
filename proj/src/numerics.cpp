#include "hydresim/numerics.hpp"

#include "hydresim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace hydresim {

void SparseMatrix::reset(int rows, int cols)
{
    rows_ = rows;
    cols_ = cols;
    finalized_ = false;
    triplets_.clear();
    mat_.resize(rows, cols);
    mat_.setZero();
}

void SparseMatrix::add(int i, int j, double v)
{
    if (v == 0.0) return;
    triplets_.emplace_back(i, j, v);
}

void SparseMatrix::finalize()
{
    mat_.setFromTriplets(triplets_.begin(), triplets_.end());
    mat_.prune(0.0); // duplicates may cancel; keep the stored pattern honest
    mat_.makeCompressed();
    triplets_.clear();
    finalized_ = true;
}

void SparseMatrix::scaled_rows_from(const SparseMatrix& src, const Vector& row_weights)
{
    if (!src.finalized()) throw SolverError("scaled_rows_from needs a finalized source");
    rows_ = src.rows_;
    cols_ = src.cols_;
    mat_ = src.mat_;
    double* vals = mat_.valuePtr();
    const int* inner = mat_.innerIndexPtr(); // row indices (column-major storage)
    for (Eigen::Index k = 0; k < mat_.nonZeros(); ++k) vals[k] *= row_weights[inner[k]];
    triplets_.clear();
    finalized_ = true;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const
{
    if (rows_ != other.rows_ || cols_ != other.cols_ || mat_.nonZeros() != other.mat_.nonZeros())
        return false;
    const auto n = mat_.nonZeros();
    for (Eigen::Index i = 0; i <= mat_.outerSize(); ++i)
        if (mat_.outerIndexPtr()[i] != other.mat_.outerIndexPtr()[i]) return false;
    for (Eigen::Index i = 0; i < n; ++i)
        if (mat_.innerIndexPtr()[i] != other.mat_.innerIndexPtr()[i]) return false;
    return true;
}

struct SparseDirectSolver::Impl {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Eigen::SparseMatrix<double> pattern; // values unused, structure only
    bool has_pattern = false;
};

SparseDirectSolver::SparseDirectSolver() : impl_(std::make_unique<Impl>()) {}
SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept = default;

namespace {

bool pattern_equal(const Eigen::SparseMatrix<double>& a, const Eigen::SparseMatrix<double>& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
    for (Eigen::Index i = 0; i <= a.outerSize(); ++i)
        if (a.outerIndexPtr()[i] != b.outerIndexPtr()[i]) return false;
    for (Eigen::Index i = 0; i < a.nonZeros(); ++i)
        if (a.innerIndexPtr()[i] != b.innerIndexPtr()[i]) return false;
    return true;
}

} // namespace

Vector SparseDirectSolver::solve(const SparseMatrix& A, const Vector& b)
{
    if (!A.finalized()) throw SolverError("solve called before SparseMatrix::finalize");
    if (A.rows() != A.cols()) throw SolverError("direct solver needs a square matrix");
    if (b.size() != A.rows()) throw SolverError("right-hand side length mismatch");

    const auto& M = A.eigen();

    // structurally empty rows make SuperLU-style factorizations fail opaquely;
    // report them by equation index instead
    std::vector<char> row_seen(M.rows(), 0);
    for (Eigen::Index k = 0; k < M.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(M, k); it; ++it)
            row_seen[it.row()] = 1;
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        if (!row_seen[i])
            throw SolverError("matrix row " + std::to_string(i) + " is empty (all-zero equation)");

    if (!impl_->has_pattern || !pattern_equal(impl_->pattern, M)) {
        impl_->lu.analyzePattern(M);
        impl_->pattern = M;
        impl_->has_pattern = true;
        ++stats_.symbolic_analyses;
    }
    impl_->lu.factorize(M);
    ++stats_.numeric_factorizations;
    if (impl_->lu.info() != Eigen::Success)
        throw SolverError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage());

    Vector x = impl_->lu.solve(b);
    ++stats_.solves;
    if (impl_->lu.info() != Eigen::Success) throw SolverError("sparse LU back-substitution failed");
    return x;
}

Vector sparse_direct_solve(const SparseMatrix& A, const Vector& b)
{
    SparseDirectSolver solver;
    return solver.solve(A, b);
}

void dump_matrix_market(const SparseMatrix& A, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw SolverError("cannot open '" + path + "' for writing");
    const auto& M = A.eigen();
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
    char buf[64];
    for (Eigen::Index k = 0; k < M.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(M, k); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row() + 1),
                          static_cast<long>(it.col() + 1), it.value());
            out << buf;
        }
}

void dump_vector(const Vector& b, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw SolverError("cannot open '" + path + "' for writing");
    out << "%%MatrixMarket matrix array real general\n" << b.size() << " 1\n";
    char buf[64];
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", b[i]);
        out << buf;
    }
}

NewtonReport newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, Vector& x,
                          const NewtonOptions& opts, SparseDirectSolver& solver,
                          const ProjectFn& project, const Vector* row_weights)
{
    auto weighted_norm = [&](const Vector& v) {
        if (!row_weights) return v.lpNorm<Eigen::Infinity>();
        return (row_weights->cwiseProduct(v)).lpNorm<Eigen::Infinity>();
    };

    NewtonReport report;
    Vector r = residual(x);
    double norm = weighted_norm(r);
    report.initial_norm = norm;
    const double target = std::max(opts.abs_tol, opts.rel_tol * norm);

    SparseMatrix J(static_cast<int>(x.size()), static_cast<int>(x.size()));
    SparseMatrix Jw;
    Vector best_x = x;
    double best_norm = norm;
    int bad_streak = 0;

    for (int it = 0; it < opts.max_iter; ++it) {
        if (norm <= target) {
            report.converged = true;
            report.final_norm = norm;
            return report;
        }
        jacobian(x, J);
        J.finalize();
        Vector dx;
        if (row_weights) {
            Jw.scaled_rows_from(J, *row_weights);
            dx = solver.solve(Jw, -row_weights->cwiseProduct(r));
        } else {
            dx = solver.solve(J, -r);
        }

        const double norm_before = norm;
        bool accepted = false;
        Vector least_bad_x;
        Vector least_bad_r;
        double least_bad_norm = 1e300;
        int least_bad_clips = 0;
        for (double damping = 1.0; damping >= opts.min_damping * (1.0 - 1e-12); damping *= 0.5) {
            Vector x_try = x + damping * dx;
            int clips = 0;
            if (project) clips = project(x_try);
            Vector r_try = residual(x_try);
            const double n_try = weighted_norm(r_try);
            if (n_try < norm || n_try <= target) {
                x = std::move(x_try);
                r = std::move(r_try);
                norm = n_try;
                report.clip_events += clips;
                if (damping < 1.0) ++report.damped_steps;
                accepted = true;
                break;
            }
            if (n_try < least_bad_norm) {
                least_bad_norm = n_try;
                least_bad_x = std::move(x_try);
                least_bad_r = std::move(r_try);
                least_bad_clips = clips;
            }
        }
        ++report.iterations;
        if (accepted) {
            bad_streak = 0;
            if (norm <= opts.stall_tol && norm > 0.5 * norm_before) {
                // progress has slowed to the assembly granularity floor
                report.stalled = true;
                report.converged = true;
                report.final_norm = norm;
                return report;
            }
        } else if (norm <= opts.stall_tol && bad_streak < 3 && least_bad_norm < 10.0 * norm) {
            // at the floating-point floor the line search may fail while a
            // refreshed Jacobian still polishes the iterate; allow a few
            // non-improving steps (the best iterate is kept either way)
            x = std::move(least_bad_x);
            r = std::move(least_bad_r);
            norm = least_bad_norm;
            report.clip_events += least_bad_clips;
            ++bad_streak;
        } else {
            report.stalled = true; // no damping factor reduces the residual
            break;
        }
        if (norm < best_norm) {
            best_norm = norm;
            best_x = x;
        }
    }

    if (!(norm <= target) && best_norm < norm) {
        x = best_x;
        norm = best_norm;
    }
    // the loop exited stalled or with max_iter exhausted; an iterate at the
    // numerical floor still counts as converged
    report.converged = norm <= target || norm <= opts.stall_tol;
    report.final_norm = norm;
    return report;
}

} // namespace hydresim
