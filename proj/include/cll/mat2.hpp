#pragma once

#include <cmath>
#include <complex>

namespace cll {

using cx = std::complex<double>;

inline constexpr cx I{0.0, 1.0};

/// Complex 2x2 matrix, the carrier for Lax matrices, eigenfunctions and jump data.
struct Mat2 {
    cx a11{}, a12{}, a21{}, a22{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }

    cx det() const { return a11 * a22 - a12 * a21; }
    cx trace() const { return a11 + a22; }

    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator*(cx s) const { return {s * a11, s * a12, s * a21, s * a22}; }

    /// True inverse (divides by det); callers guarantee det away from zero.
    Mat2 inverse() const {
        cx d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    /// Max-abs entry norm.
    double norm() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)),
                        std::max(std::abs(a21), std::abs(a22)));
    }
};

inline Mat2 operator*(cx s, const Mat2& m) { return m * s; }

/// sigma * M * sigma with sigma = diag(1,-1): flips the off-diagonal signs.
inline Mat2 sigma_sandwich(const Mat2& m) { return {m.a11, -m.a12, -m.a21, m.a22}; }

/// e^{x sigma-hat} M = (M11, e^{2x} M12; e^{-2x} M21, M22).
/// Sets *overflowed when |Re(2x)| exceeds the double exponent range.
inline Mat2 sigma_conj(cx x, const Mat2& m, bool* overflowed = nullptr) {
    if (overflowed) *overflowed = std::abs(2.0 * x.real()) > 700.0;
    cx f = std::exp(2.0 * x);
    return {m.a11, f * m.a12, m.a21 / f, m.a22};
}

}  // namespace cll
