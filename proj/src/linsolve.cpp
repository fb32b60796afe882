#include "nts/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nts {
namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Row-sorted copy of a CSR matrix (column indices ascending within each row).
SparseOperator sorted_rows(const SparseOperator& a) {
    SparseOperator out = a;
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < out.rows; ++i) {
        const int begin = out.row_ptr[i], end = out.row_ptr[i + 1];
        row.clear();
        for (int k = begin; k < end; ++k) row.emplace_back(out.col_idx[k], out.values[k]);
        std::sort(row.begin(), row.end());
        for (int k = begin; k < end; ++k) {
            out.col_idx[k] = row[k - begin].first;
            out.values[k] = row[k - begin].second;
        }
    }
    return out;
}

}  // namespace

IluFactors ilu0(const SparseOperator& a) {
    if (a.rows != a.cols) throw std::invalid_argument("ilu0: matrix must be square");
    SparseOperator f = sorted_rows(a);
    const int n = f.rows;

    // Diagonal positions, required nonzero.
    std::vector<int> diag(n, -1);
    for (int i = 0; i < n; ++i)
        for (int k = f.row_ptr[i]; k < f.row_ptr[i + 1]; ++k)
            if (f.col_idx[k] == i) diag[i] = k;
    for (int i = 0; i < n; ++i)
        if (diag[i] < 0) throw std::invalid_argument("ilu0: missing diagonal at row " +
                                                     std::to_string(i));

    // IKJ factorization restricted to the pattern of A.
    std::vector<int> pos(n, -1);  // column -> index within the current row
    for (int i = 0; i < n; ++i) {
        for (int k = f.row_ptr[i]; k < f.row_ptr[i + 1]; ++k) pos[f.col_idx[k]] = k;
        for (int kk = f.row_ptr[i]; kk < f.row_ptr[i + 1] && f.col_idx[kk] < i; ++kk) {
            const int k = f.col_idx[kk];
            const double pivot = f.values[diag[k]];
            if (std::abs(pivot) < 1e-300)
                throw std::runtime_error("ilu0: zero pivot at row " + std::to_string(k));
            const double lik = f.values[kk] / pivot;
            f.values[kk] = lik;
            for (int kj = diag[k] + 1; kj < f.row_ptr[k + 1]; ++kj) {
                const int p = pos[f.col_idx[kj]];
                if (p >= 0) f.values[p] -= lik * f.values[kj];
            }
        }
        if (std::abs(f.values[diag[i]]) < 1e-300)
            throw std::runtime_error("ilu0: zero pivot at row " + std::to_string(i));
        for (int k = f.row_ptr[i]; k < f.row_ptr[i + 1]; ++k) pos[f.col_idx[k]] = -1;
    }

    IluFactors factors;
    SparseOperator::Builder lower(n, n), upper(n, n);
    for (int i = 0; i < n; ++i) {
        lower.start_row();
        upper.start_row();
        for (int k = f.row_ptr[i]; k < f.row_ptr[i + 1]; ++k) {
            if (f.col_idx[k] < i)
                lower.add(f.col_idx[k], f.values[k]);
            else
                upper.add(f.col_idx[k], f.values[k]);
        }
    }
    factors.lower = lower.finish();
    factors.upper = upper.finish();
    return factors;
}

std::vector<double> IluFactors::solve(const std::vector<double>& v) const {
    const int n = lower.rows;
    if (static_cast<int>(v.size()) != n) throw std::invalid_argument("IluFactors::solve: size");
    std::vector<double> z = v;
    // L has unit diagonal: forward substitution.
    for (int i = 0; i < n; ++i)
        for (int k = lower.row_ptr[i]; k < lower.row_ptr[i + 1]; ++k)
            z[i] -= lower.values[k] * z[lower.col_idx[k]];
    // Backward substitution on U (diagonal stored first in each row).
    for (int i = n - 1; i >= 0; --i) {
        double diag = 0.0;
        double sum = z[i];
        for (int k = upper.row_ptr[i]; k < upper.row_ptr[i + 1]; ++k) {
            if (upper.col_idx[k] == i)
                diag = upper.values[k];
            else
                sum -= upper.values[k] * z[upper.col_idx[k]];
        }
        z[i] = sum / diag;
    }
    return z;
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::breakdown: return "breakdown";
        case SolveStatus::stagnation: return "stagnation";
    }
    return "unknown";
}

SolveResult bicgstab(const SparseOperator& a, const IluFactors* precond,
                     const std::vector<double>& b, const std::vector<double>& x0, double tol,
                     int max_iter) {
    if (a.rows != a.cols || static_cast<int>(b.size()) != a.rows ||
        static_cast<int>(x0.size()) != a.rows)
        throw std::invalid_argument("bicgstab: dimension mismatch");
    const int n = a.rows;
    const auto apply_m = [&](const std::vector<double>& v) {
        return precond != nullptr ? precond->solve(v) : v;
    };
    const auto true_residual = [&](const std::vector<double>& x) {
        std::vector<double> r = a.apply(x);
        for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
        return r;
    };

    SolveResult result;
    result.x = x0;
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        result.x.assign(n, 0.0);
        return result;
    }

    std::vector<double> r = true_residual(result.x);
    if (norm2(r) / bnorm <= tol) {
        result.residual = norm2(r) / bnorm;
        return result;
    }
    std::vector<double> rhat = r;
    std::vector<double> p(n, 0.0), v(n, 0.0);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    bool restarted = false;
    double best = norm2(r) / bnorm;
    int since_progress = 0;

    for (int iter = 1; iter <= max_iter; ++iter) {
        const double rho_new = dot(rhat, r);
        if (std::abs(rho_new) < 1e-300 * bnorm * bnorm || (omega == 0.0 && iter > 1)) {
            if (restarted) {
                result.iterations = iter;
                result.residual = norm2(true_residual(result.x)) / bnorm;
                result.status = SolveStatus::breakdown;
                return result;
            }
            restarted = true;
            r = true_residual(result.x);
            rhat = r;
            p.assign(n, 0.0);
            v.assign(n, 0.0);
            rho = alpha = omega = 1.0;
            continue;
        }
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        const std::vector<double> phat = apply_m(p);
        v = a.apply(phat);
        const double rv = dot(rhat, v);
        if (std::abs(rv) < 1e-300) {
            result.iterations = iter;
            result.residual = norm2(true_residual(result.x)) / bnorm;
            result.status = SolveStatus::breakdown;
            return result;
        }
        alpha = rho / rv;
        std::vector<double> s = r;
        for (int i = 0; i < n; ++i) s[i] -= alpha * v[i];
        for (int i = 0; i < n; ++i) result.x[i] += alpha * phat[i];
        if (norm2(s) / bnorm <= tol) {
            const double res = norm2(true_residual(result.x)) / bnorm;
            if (res <= tol) {
                result.iterations = iter;
                result.residual = res;
                return result;
            }
        }
        const std::vector<double> shat = apply_m(s);
        const std::vector<double> t = a.apply(shat);
        const double tt = dot(t, t);
        omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
        for (int i = 0; i < n; ++i) result.x[i] += omega * shat[i];
        for (int i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];

        const double rel = norm2(r) / bnorm;
        if (rel <= tol) {
            const double res = norm2(true_residual(result.x)) / bnorm;
            if (res <= tol) {
                result.iterations = iter;
                result.residual = res;
                return result;
            }
        }
        if (rel < 0.999 * best) {
            best = rel;
            since_progress = 0;
        } else if (++since_progress >= 50) {
            result.iterations = iter;
            result.residual = norm2(true_residual(result.x)) / bnorm;
            result.status = SolveStatus::stagnation;
            return result;
        }
        result.iterations = iter;
    }
    result.residual = norm2(true_residual(result.x)) / bnorm;
    result.status = SolveStatus::max_iterations;
    return result;
}

}  // namespace nts
