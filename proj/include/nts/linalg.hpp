#ifndef NTS_LINALG_HPP
#define NTS_LINALG_HPP

#include <array>
#include <cmath>
#include <stdexcept>

namespace nts {

struct Vec2 {
    double x[2]{0.0, 0.0};

    double& operator[](int i) { return x[i]; }
    double operator[](int i) const { return x[i]; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a[0], s * a[1]}; }
inline double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }

// Symmetric 2x2 matrices are stored in full; symmetry is the caller's
// responsibility and asserted where it matters.
struct Mat2 {
    double m[2][2]{{0.0, 0.0}, {0.0, 0.0}};

    double* operator[](int i) { return m[i]; }
    const double* operator[](int i) const { return m[i]; }

    static Mat2 zero() { return {}; }
    static Mat2 identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 c;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
    Mat2 c;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] - b[i][j];
    return c;
}

inline Mat2 operator*(double s, const Mat2& a) {
    Mat2 c;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = s * a[i][j];
    return c;
}

inline Vec2 operator*(const Mat2& a, Vec2 v) {
    return {a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]};
}

inline Mat2 outer(Vec2 a, Vec2 b) {
    return {{{a[0] * b[0], a[0] * b[1]}, {a[1] * b[0], a[1] * b[1]}}};
}

inline double det(const Mat2& a) { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

inline Mat2 inverse(const Mat2& a) {
    const double d = det(a);
    if (d == 0.0) throw std::domain_error("Mat2: singular matrix");
    return {{{a[1][1] / d, -a[0][1] / d}, {-a[1][0] / d, a[0][0] / d}}};
}

inline bool is_symmetric(const Mat2& a, double tol = 1e-12) {
    const double scale = std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[0][1]) + std::abs(a[1][0]);
    return std::abs(a[0][1] - a[1][0]) <= tol * std::max(1.0, scale);
}

// Lower Cholesky factor; throws if the matrix is not positive definite.
inline Mat2 cholesky(const Mat2& a) {
    if (!is_symmetric(a)) throw std::domain_error("cholesky: matrix not symmetric");
    if (a[0][0] <= 0.0) throw std::domain_error("cholesky: matrix not positive definite");
    const double l00 = std::sqrt(a[0][0]);
    const double l10 = a[1][0] / l00;
    const double s = a[1][1] - l10 * l10;
    if (s <= 0.0) throw std::domain_error("cholesky: matrix not positive definite");
    return {{{l00, 0.0}, {l10, std::sqrt(s)}}};
}

// Eigenvalues of a symmetric 2x2 matrix, ascending.
inline std::array<double, 2> sym_eigenvalues(const Mat2& a) {
    const double tr = a[0][0] + a[1][1];
    const double d = det(a);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - d));
    return {tr / 2.0 - disc, tr / 2.0 + disc};
}

}  // namespace nts

#endif
