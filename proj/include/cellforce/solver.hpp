#pragma once

#include "cellforce/elasticity.hpp"
#include "cellforce/error.hpp"
#include "cellforce/sparse.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace cellforce {

enum class SolverMethod { CgJacobi, Cholesky };

const char* to_string(SolverMethod method) noexcept;

struct SolverOptions {
    SolverMethod method = SolverMethod::CgJacobi;
    double tolerance = 1e-10;        ///< on ||K u - f|| / ||f||
    std::size_t max_iterations = 0;  ///< 0 means 20 times the number of dofs
    std::vector<double> initial_guess;  ///< CG only; empty means zero
};

struct SolveReport {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    SolverMethod method = SolverMethod::CgJacobi;
    double wall_time = 0.0;  ///< seconds, informational
    std::vector<double> residual_history;
};

/// Thrown when CG exhausts its iteration budget.
class SolverError : public Error {
public:
    SolverError(const std::string& what, std::vector<double> history)
        : Error(ErrorKind::Solver, what), history_(std::move(history)) {}

    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

struct SolveResult {
    std::vector<double> u;
    SolveReport report;
};

/// Solves A u = f for an SPD matrix A.
/// Throws ErrorKind::SpdViolation on a non-positive pivot or CG curvature.
SolveResult solve(const SparseMatrix& A, const std::vector<double>& f, const SolverOptions& options = {});

/// Solves the system with constrained dofs held at zero.
SolveResult solve(const StiffnessSystem& system, const std::vector<double>& f, const SolverOptions& options = {});

/// Reverse Cuthill-McKee ordering of the matrix graph: perm[k] is the original index of new row k.
std::vector<std::size_t> reverse_cuthill_mckee(const SparseMatrix& A);

/// Envelope (skyline) Cholesky factorization under a symmetric permutation.
class SkylineCholesky {
public:
    explicit SkylineCholesky(const SparseMatrix& A);

    std::vector<double> solve(const std::vector<double>& f) const;
    std::size_t envelope_size() const { return values_.size(); }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> perm_;
    std::vector<std::size_t> first_;  // first stored column of each permuted row
    std::vector<std::size_t> start_;  // offset of each row in values_
    std::vector<double> values_;
};

}  // namespace cellforce
