#ifndef NTS_LINSOLVE_HPP
#define NTS_LINSOLVE_HPP

#include <string>
#include <vector>

#include "nts/sparse.hpp"

namespace nts {

// Incomplete LU with zero fill-in on the pattern of the factored matrix.
// L has unit diagonal (not stored); U holds the diagonal.
struct IluFactors {
    SparseOperator lower;  // strictly lower triangle of the factorization
    SparseOperator upper;  // upper triangle including the diagonal

    // Solves (L U) z = v by forward/backward substitution.
    std::vector<double> solve(const std::vector<double>& v) const;
};

IluFactors ilu0(const SparseOperator& a);

enum class SolveStatus { converged, max_iterations, breakdown, stagnation };

struct SolveResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0;  // recomputed ||b - Ax||_2 / ||b||_2
    SolveStatus status = SolveStatus::converged;
};

std::string to_string(SolveStatus status);

// Right-preconditioned BiCGSTAB. precond may be null (no preconditioning).
SolveResult bicgstab(const SparseOperator& a, const IluFactors* precond,
                     const std::vector<double>& b, const std::vector<double>& x0,
                     double tol = 1e-14, int max_iter = 1000);

}  // namespace nts

#endif
