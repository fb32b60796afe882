#include "nts/fft_conv.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace nts {

CirculantKernel::CirculantKernel(const std::vector<double>& omega, int N_z,
                                 const YGrids& ygrids) {
    const int cells = 2 * N_z;
    if (static_cast<int>(omega.size()) != cells * cells)
        throw std::invalid_argument("CirculantKernel: omega must be (2 N_z)^2");
    if (ygrids.N_z != N_z) throw std::invalid_argument("CirculantKernel: N_z mismatch");
    n_ = ygrids.sharp_in();
    n_out_ = ygrids.sharp_out();
    if (n_ < cells) throw std::invalid_argument("CirculantKernel: sharp_in < 2 N_z");

    // Keep the explicit first row only where the dense reference paths can use
    // it; on production grids a full sharp_in^2 copy is a needless gigabyte.
    if (n_ <= 64) {
        first_row_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
        for (int a2 = 0; a2 < cells; ++a2)
            for (int a1 = 0; a1 < cells; ++a1)
                first_row_[a1 + static_cast<std::size_t>(n_) * a2] = omega[a1 + cells * a2];
    }

    if (n_ <= 64) {
        selection_map_.reserve(static_cast<std::size_t>(n_out_) * n_out_);
        for (int p2 = 0; p2 < n_out_; ++p2)
            for (int p1 = 0; p1 < n_out_; ++p1) selection_map_.push_back(p1 + n_ * p2);
    }

    // In-place real-to-complex transforms on the padded layout: row p2 starts
    // at p2 * stride and holds n_ reals. Axis 1 is the fast index, which
    // transposes the array relative to FFTW's row-major convention — harmless,
    // since kernel and signal share the layout and correlation commutes with
    // that transposition. Real data halves the spectrum and the work buffer.
    const int half = n_ / 2 + 1;
    const std::size_t stride = 2 * static_cast<std::size_t>(half);
    buffer_ = fftw_alloc_real(static_cast<std::size_t>(n_) * stride);
    if (buffer_ == nullptr) throw std::bad_alloc();
    fftw_complex* raw = reinterpret_cast<fftw_complex*>(buffer_);
    forward_ = fftw_plan_dft_r2c_2d(n_, n_, buffer_, raw, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_2d(n_, n_, raw, buffer_, FFTW_ESTIMATE);
    if (forward_ == nullptr || backward_ == nullptr)
        throw std::runtime_error("CirculantKernel: transform planning failed");

    for (std::size_t i = 0; i < static_cast<std::size_t>(n_) * stride; ++i) buffer_[i] = 0.0;
    for (int a2 = 0; a2 < cells; ++a2)
        for (int a1 = 0; a1 < cells; ++a1) buffer_[a1 + stride * a2] = omega[a1 + cells * a2];
    fftw_execute(forward_);
    spectrum_.assign(reinterpret_cast<std::complex<double>*>(buffer_),
                     reinterpret_cast<std::complex<double>*>(buffer_) +
                         static_cast<std::size_t>(n_) * half);
}

CirculantKernel::~CirculantKernel() {
    if (forward_ != nullptr) fftw_destroy_plan(forward_);
    if (backward_ != nullptr) fftw_destroy_plan(backward_);
    if (buffer_ != nullptr) fftw_free(buffer_);
}

std::vector<double> CirculantKernel::correlate_select(std::vector<double> plane_in) {
    const std::size_t plane = static_cast<std::size_t>(n_) * n_;
    if (plane_in.size() != plane)
        throw std::invalid_argument("correlate_select: plane size mismatch");
    const int half = n_ / 2 + 1;
    const std::size_t stride = 2 * static_cast<std::size_t>(half);
    for (int p2 = 0; p2 < n_; ++p2) {
        double* row = buffer_ + stride * p2;
        const double* src = plane_in.data() + static_cast<std::size_t>(n_) * p2;
        for (int p1 = 0; p1 < n_; ++p1) row[p1] = src[p1];
        row[n_] = 0.0;
        if (stride > static_cast<std::size_t>(n_) + 1) row[n_ + 1] = 0.0;
    }
    std::vector<double>().swap(plane_in);  // gigabyte-scale on production grids

    fftw_execute(forward_);
    std::complex<double>* freq = reinterpret_cast<std::complex<double>*>(buffer_);
    const std::size_t half_plane = static_cast<std::size_t>(n_) * half;
    for (std::size_t i = 0; i < half_plane; ++i) freq[i] *= std::conj(spectrum_[i]);
    fftw_execute(backward_);

    // Real transforms of real data: the cross-correlation is exactly real.
    const double scale = 1.0 / static_cast<double>(plane);
    std::vector<double> out(static_cast<std::size_t>(n_out_) * n_out_);
    for (int p2 = 0; p2 < n_out_; ++p2) {
        const double* row = buffer_ + stride * p2;
        double* dst = out.data() + static_cast<std::size_t>(n_out_) * p2;
        for (int p1 = 0; p1 < n_out_; ++p1) dst[p1] = row[p1] * scale;
    }
    return out;
}

CirculantKernel build_kernel(const QuadratureScheme& scheme, const YGrids& ygrids) {
    return CirculantKernel(scheme.omega, scheme.N_z, ygrids);
}

std::vector<double> apply_B(CirculantKernel& kernel, const TensorOperator& T_in,
                            const TensorOperator& T_out, const std::vector<double>& v_on_x) {
    if (T_in.out_size() != kernel.sharp_in() * kernel.sharp_in())
        throw std::invalid_argument("apply_B: T_in output does not match sharp_in plane");
    if (T_out.in_size() != kernel.sharp_out() * kernel.sharp_out())
        throw std::invalid_argument("apply_B: T_out input does not match selection");
    std::vector<double> plane = T_in.apply(v_on_x);
    const std::vector<double> selected = kernel.correlate_select(std::move(plane));
    return T_out.apply(selected);
}

std::vector<double> dense_circulant(const CirculantKernel& kernel) {
    const int n = kernel.sharp_in();
    if (n > 16) throw std::invalid_argument("dense_circulant: size guard exceeded");
    const std::size_t dim = static_cast<std::size_t>(n) * n;
    const std::vector<double>& c = kernel.first_row();
    std::vector<double> dense(dim * dim);
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t j = 0; j < dim; ++j) dense[k * dim + j] = c[(j + dim - k) % dim];
    return dense;
}

std::vector<double> dense_reference(const CirculantKernel& kernel, const TensorOperator& T_in,
                                    const TensorOperator& T_out) {
    const int n = kernel.sharp_in();
    if (n > 64) throw std::invalid_argument("dense_reference: size guard exceeded");
    const std::size_t dim = static_cast<std::size_t>(n) * n;  // columns of I~ C
    const std::size_t nsel = kernel.selection_map().size();
    const std::size_t ncols = static_cast<std::size_t>(T_in.in_size());
    const std::size_t nrows = static_cast<std::size_t>(T_out.out_size());
    const std::vector<double>& c = kernel.first_row();

    // M = (I~ C) * T_in, built column by column of T_in's dense form.
    const std::vector<double> tin = T_in.dense();  // dim x ncols
    std::vector<double> m(nsel * ncols, 0.0);
    for (std::size_t s = 0; s < nsel; ++s) {
        const std::size_t k = static_cast<std::size_t>(kernel.selection_map()[s]);
        for (std::size_t j = 0; j < dim; ++j) {
            const double ckj = c[(j + dim - k) % dim];
            if (ckj == 0.0) continue;
            for (std::size_t col = 0; col < ncols; ++col)
                m[s * ncols + col] += ckj * tin[j * ncols + col];
        }
    }

    const std::vector<double> tout = T_out.dense();  // nrows x nsel
    std::vector<double> b(nrows * ncols, 0.0);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t s = 0; s < nsel; ++s) {
            const double w = tout[i * nsel + s];
            if (w == 0.0) continue;
            for (std::size_t col = 0; col < ncols; ++col)
                b[i * ncols + col] += w * m[s * ncols + col];
        }
    return b;
}

}  // namespace nts
