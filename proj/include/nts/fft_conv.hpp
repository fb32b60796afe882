#ifndef NTS_FFT_CONV_HPP
#define NTS_FFT_CONV_HPP

#include <complex>
#include <vector>

#include "nts/grids.hpp"
#include "nts/quadrature.hpp"
#include "nts/spatial_ops.hpp"

// Forward declarations so the public header does not leak <fftw3.h>.
struct fftw_plan_s;

namespace nts {

// Circulant embedding of the jump-summation operator. The length-(sharp_in)^2
// circulant product is evaluated as the mathematically identical 2-D circular
// cross-correlation on sharp_in x sharp_in planes.
class CirculantKernel {
  public:
    // omega is the (2 N_z)^2 weight matrix, l1 fast (QuadratureScheme layout).
    CirculantKernel(const std::vector<double>& omega, int N_z, const YGrids& ygrids);
    ~CirculantKernel();

    CirculantKernel(const CirculantKernel&) = delete;
    CirculantKernel& operator=(const CirculantKernel&) = delete;

    int sharp_in() const { return n_; }
    int sharp_out() const { return n_out_; }

    // Real-to-complex transform of C_{1,.}: sharp_in x (sharp_in/2 + 1)
    // half-plane (Hermitian symmetry supplies the rest), axis 1 fast.
    const std::vector<std::complex<double>>& spectrum() const { return spectrum_; }

    // Flat plane indices p1 + sharp_in*p2, p1,p2 < sharp_out, realizing the
    // selection I~ of in-grid rows that correspond to out-grid points. Like
    // first_row(), materialized only for sharp_in <= 64; the selection itself
    // is applied index-free in correlate_select.
    const std::vector<int>& selection_map() const { return selection_map_; }

    // First row C_{1,.} of the circulant (the padded, vectorized Omega).
    // Retained only for kernels small enough for the dense reference paths
    // (sharp_in <= 64); empty otherwise to bound memory on production grids.
    const std::vector<double>& first_row() const { return first_row_; }

    // Correlation of the kernel with a sharp_in^2 plane, restricted to the
    // selected sharp_out^2 entries. Takes the plane by value and releases it
    // once copied into the transform buffer, so move it in: on production
    // grids both the plane and the result are gigabyte-scale.
    std::vector<double> correlate_select(std::vector<double> plane);

  private:
    int n_ = 0;      // sharp_in
    int n_out_ = 0;  // sharp_out
    std::vector<double> first_row_;
    std::vector<std::complex<double>> spectrum_;
    std::vector<int> selection_map_;

    double* buffer_ = nullptr;  // fftw-allocated padded real plane, in-place r2c/c2r
    fftw_plan_s* forward_ = nullptr;
    fftw_plan_s* backward_ = nullptr;
};

CirculantKernel build_kernel(const QuadratureScheme& scheme, const YGrids& ygrids);

// B_omega v = T^out I~ C T^in v for v on the (N_x+1)^2 spatial grid.
std::vector<double> apply_B(CirculantKernel& kernel, const TensorOperator& T_in,
                            const TensorOperator& T_out, const std::vector<double>& v_on_x);

// Full dense circulant C (row-major (sharp_in^2)^2); guarded to small sizes.
std::vector<double> dense_circulant(const CirculantKernel& kernel);

// Explicit dense B_omega (row-major, (N_x+1)^2 square); guarded to small sizes.
std::vector<double> dense_reference(const CirculantKernel& kernel, const TensorOperator& T_in,
                                    const TensorOperator& T_out);

}  // namespace nts

#endif
