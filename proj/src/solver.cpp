#include "cellforce/solver.hpp"

#include "format.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <numeric>

namespace cellforce {

const char* to_string(SolverMethod method) noexcept {
    switch (method) {
        case SolverMethod::CgJacobi: return "cg-jacobi";
        case SolverMethod::Cholesky: return "cholesky";
    }
    return "unknown";
}

namespace {

double relative_residual(const SparseMatrix& A, const std::vector<double>& u, const std::vector<double>& f) {
    std::vector<double> r = A.multiply(u);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i] - r[i];
    const double fn = norm2(f);
    return fn > 0.0 ? norm2(r) / fn : norm2(r);
}

SolveResult conjugate_gradient(const SparseMatrix& A, const std::vector<double>& f, const SolverOptions& opt) {
    const std::size_t n = A.size();
    const std::size_t max_iter = opt.max_iterations ? opt.max_iterations : 20 * n;
    std::vector<double> inv_diag = A.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(inv_diag[i] > 0.0))
            fail(ErrorKind::SpdViolation, "non-positive diagonal entry " + fmt17(inv_diag[i]) + " at dof " +
                                              std::to_string(i));
        inv_diag[i] = 1.0 / inv_diag[i];
    }

    SolveResult out;
    out.report.method = SolverMethod::CgJacobi;
    std::vector<double>& u = out.u;
    u = opt.initial_guess.empty() ? std::vector<double>(n, 0.0) : opt.initial_guess;
    if (u.size() != n) fail(ErrorKind::Config, "initial guess has the wrong length");

    const double fnorm = norm2(f);
    if (fnorm == 0.0) {
        std::fill(u.begin(), u.end(), 0.0);
        return out;
    }

    std::vector<double> r = A.multiply(u);
    for (std::size_t i = 0; i < n; ++i) r[i] = f[i] - r[i];
    std::vector<double> z(n), p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    double rel = norm2(r) / fnorm;
    out.report.residual_history.push_back(rel);

    std::size_t it = 0;
    while (rel > opt.tolerance) {
        if (it == max_iter)
            throw SolverError("CG did not converge in " + std::to_string(max_iter) + " iterations (residual " +
                                  fmt17(rel) + ")",
                              std::move(out.report.residual_history));
        A.multiply(p, q);
        const double curvature = dot(p, q);
        if (!(curvature > 0.0))
            fail(ErrorKind::SpdViolation, "CG found non-positive curvature " + fmt17(curvature) + " at iteration " +
                                              std::to_string(it));
        const double alpha = rz / curvature;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += alpha * p[i];
            r[i] -= alpha * q[i];
            z[i] = inv_diag[i] * r[i];
        }
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        ++it;
        rel = norm2(r) / fnorm;
        out.report.residual_history.push_back(rel);
        // the recursive residual drifts on ill-conditioned systems; confirm against the true one
        if (rel <= opt.tolerance) {
            const double true_rel = relative_residual(A, u, f);
            if (true_rel > opt.tolerance) {
                r = A.multiply(u);
                for (std::size_t i = 0; i < n; ++i) {
                    r[i] = f[i] - r[i];
                    z[i] = inv_diag[i] * r[i];
                }
                p = z;
                rz = dot(r, z);
            }
            rel = true_rel;
        }
    }
    out.report.iterations = it;
    out.report.relative_residual = rel;
    return out;
}

}  // namespace

std::vector<std::size_t> reverse_cuthill_mckee(const SparseMatrix& A) {
    const std::size_t n = A.size();
    const auto& rp = A.row_ptr();
    const auto& cols = A.cols();
    std::vector<std::size_t> degree(n);
    for (std::size_t i = 0; i < n; ++i) degree[i] = rp[i + 1] - rp[i];

    std::vector<char> seen(n, 0);
    std::vector<std::size_t> order;
    order.reserve(n);

    // breadth-first levels from `root`; returns the last node reached with minimum degree
    const auto bfs_far = [&](std::size_t root) {
        std::vector<std::size_t> level(n, static_cast<std::size_t>(-1));
        std::deque<std::size_t> queue{root};
        level[root] = 0;
        std::size_t far = root;
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            if (level[v] > level[far] || (level[v] == level[far] && degree[v] < degree[far])) far = v;
            for (std::size_t k = rp[v]; k < rp[v + 1]; ++k) {
                const std::size_t w = cols[k];
                if (level[w] == static_cast<std::size_t>(-1)) {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        return std::pair{far, level[far]};
    };

    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        // pseudo-peripheral start node
        std::size_t root = s;
        auto [far, ecc] = bfs_far(root);
        for (int pass = 0; pass < 4; ++pass) {
            auto [next, next_ecc] = bfs_far(far);
            if (next_ecc <= ecc) break;
            root = far;
            far = next;
            ecc = next_ecc;
        }
        root = far;

        const std::size_t begin = order.size();
        order.push_back(root);
        seen[root] = 1;
        std::vector<std::size_t> nbrs;
        for (std::size_t head = begin; head < order.size(); ++head) {
            const std::size_t v = order[head];
            nbrs.clear();
            for (std::size_t k = rp[v]; k < rp[v + 1]; ++k)
                if (!seen[cols[k]]) {
                    seen[cols[k]] = 1;
                    nbrs.push_back(cols[k]);
                }
            std::stable_sort(nbrs.begin(), nbrs.end(),
                             [&](std::size_t a, std::size_t b) { return degree[a] < degree[b]; });
            order.insert(order.end(), nbrs.begin(), nbrs.end());
        }
    }
    std::reverse(order.begin(), order.end());
    return order;
}

SkylineCholesky::SkylineCholesky(const SparseMatrix& A) : n_(A.size()), perm_(reverse_cuthill_mckee(A)) {
    std::vector<std::size_t> inv(n_);
    for (std::size_t k = 0; k < n_; ++k) inv[perm_[k]] = k;

    first_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) first_[k] = k;
    const auto& rp = A.row_ptr();
    const auto& cols = A.cols();
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
            const std::size_t a = inv[i], b = inv[cols[k]];
            if (b < a) first_[a] = std::min(first_[a], b);
        }
    start_.resize(n_ + 1);
    start_[0] = 0;
    for (std::size_t k = 0; k < n_; ++k) start_[k + 1] = start_[k] + (k - first_[k] + 1);
    values_.assign(start_[n_], 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
            const std::size_t a = inv[i], b = inv[cols[k]];
            if (b <= a) values_[start_[a] + (b - first_[a])] = A.values()[k];
        }

    for (std::size_t i = 0; i < n_; ++i) {
        double* Li = values_.data() + start_[i];
        const std::size_t fi = first_[i];
        for (std::size_t j = fi; j < i; ++j) {
            const double* Lj = values_.data() + start_[j];
            const std::size_t fj = first_[j];
            const std::size_t k0 = std::max(fi, fj);
            double s = Li[j - fi];
            for (std::size_t k = k0; k < j; ++k) s -= Li[k - fi] * Lj[k - fj];
            Li[j - fi] = s / Lj[j - fj];
        }
        double d = Li[i - fi];
        for (std::size_t k = fi; k < i; ++k) d -= Li[k - fi] * Li[k - fi];
        if (!(d > 0.0))
            fail(ErrorKind::SpdViolation, "Cholesky pivot " + fmt17(d) + " is not positive at dof " +
                                              std::to_string(perm_[i]));
        Li[i - fi] = std::sqrt(d);
    }
}

std::vector<double> SkylineCholesky::solve(const std::vector<double>& f) const {
    std::vector<double> y(n_);
    for (std::size_t k = 0; k < n_; ++k) y[k] = f[perm_[k]];
    for (std::size_t i = 0; i < n_; ++i) {
        const double* Li = values_.data() + start_[i];
        double s = y[i];
        for (std::size_t k = first_[i]; k < i; ++k) s -= Li[k - first_[i]] * y[k];
        y[i] = s / Li[i - first_[i]];
    }
    for (std::size_t i = n_; i-- > 0;) {
        const double* Li = values_.data() + start_[i];
        y[i] /= Li[i - first_[i]];
        for (std::size_t k = first_[i]; k < i; ++k) y[k] -= Li[k - first_[i]] * y[i];
    }
    std::vector<double> u(n_);
    for (std::size_t k = 0; k < n_; ++k) u[perm_[k]] = y[k];
    return u;
}

SolveResult solve(const SparseMatrix& A, const std::vector<double>& f, const SolverOptions& options) {
    if (f.size() != A.size())
        fail(ErrorKind::Config, "right-hand side has " + std::to_string(f.size()) + " entries, expected " +
                                    std::to_string(A.size()));
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult out;
    if (options.method == SolverMethod::CgJacobi) {
        out = conjugate_gradient(A, f, options);
    } else {
        const SkylineCholesky chol(A);
        out.u = chol.solve(f);
        out.report.method = SolverMethod::Cholesky;
        out.report.iterations = 1;
        out.report.relative_residual = relative_residual(A, out.u, f);
        out.report.residual_history = {out.report.relative_residual};
    }
    out.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

SolveResult solve(const StiffnessSystem& system, const std::vector<double>& f, const SolverOptions& options) {
    if (f.size() != system.size())
        fail(ErrorKind::Config, "right-hand side has " + std::to_string(f.size()) + " entries, expected " +
                                    std::to_string(system.size()));
    std::vector<double> g = f;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (system.constrained[i]) g[i] = 0.0;
    SolverOptions opt = options;
    for (std::size_t i = 0; i < opt.initial_guess.size() && i < g.size(); ++i)
        if (system.constrained[i]) opt.initial_guess[i] = 0.0;
    SolveResult out = solve(system.reduced(), g, opt);
    for (std::size_t i = 0; i < out.u.size(); ++i)
        if (system.constrained[i]) out.u[i] = 0.0;
    return out;
}

}  // namespace cellforce
