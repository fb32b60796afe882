#ifndef NTS_PAYOFF_HPP
#define NTS_PAYOFF_HPP

#include <vector>

#include "nts/grids.hpp"
#include "nts/linalg.hpp"

namespace nts {

// Put on the average: max(K - (x1 + x2)/2, 0), non-smooth on {x1 + x2 = 2K}.
struct PayoffSpec {
    enum class Kind { put_on_average };
    Kind kind = Kind::put_on_average;
    double K = 100.0;
};

double payoff_eval(const PayoffSpec& spec, Vec2 x);

// Exact mean of the payoff over the rectangle [a1,b1] x [a2,b2] (closed form).
double cell_average(const PayoffSpec& spec, double a1, double b1, double a2, double b2);

// True iff the half-open cell around node (m1, m2) meets the kink line.
bool cell_straddles_kink(const PayoffSpec& spec, const SpatialGrid& grid, int m1, int m2);

// Initial vector V^0: pointwise payoff, replaced by the cell average on cells
// crossing the non-smoothness set. Row-major with m1 fast (index m1 + (N_x+1) m2).
std::vector<double> initial_vector(const PayoffSpec& spec, const SpatialGrid& grid);

}  // namespace nts

#endif
