#pragma once

#include <array>
#include <functional>

#include "cll/errors.hpp"
#include "cll/mat2.hpp"

namespace cll {

/// phi_k(z): phi0 = e^z, phi_{k+1}(z) = (phi_k(z) - 1/k!)/z. Taylor near 0.
struct PhiSet {
    cx e, p1, p2, p3;

    static PhiSet at(cx z) {
        PhiSet s;
        s.e = std::exp(z);
        if (std::abs(z) < 0.5) {
            // phi_k(z) = sum_{n>=0} z^n / (n+k)!
            auto phik = [&](int k) {
                double f = 1.0;
                for (int q = 2; q <= k; ++q) f *= q;
                cx acc{1.0 / f, 0.0};
                cx zp{1.0, 0.0};
                double den = f;
                for (int n = 1; n <= 18; ++n) {
                    zp *= z;
                    den *= (n + k);
                    acc += zp / den;
                }
                return acc;
            };
            s.p1 = phik(1);
            s.p2 = phik(2);
            s.p3 = phik(3);
        } else {
            s.p1 = (s.e - 1.0) / z;
            s.p2 = (s.p1 - 1.0) / z;
            s.p3 = (s.p2 - 0.5) / z;
        }
        return s;
    }
};

/// Two-component state of one eigenfunction column.
struct Vec2c {
    cx a, b;
    Vec2c operator+(const Vec2c& o) const { return {a + o.a, b + o.b}; }
    Vec2c operator*(double s) const { return {s * a, s * b}; }
};

inline Vec2c mat_apply(const Mat2& M, const Vec2c& v) {
    return {M.a11 * v.a + M.a12 * v.b, M.a21 * v.a + M.a22 * v.b};
}

/// Krogstad ETDRK4 for v' = L v + C(s) v where L has a single nonzero diagonal
/// entry lambda in `slot`. Exact for C == 0; the phases of L live inside the
/// phi functions so stiff decaying modes cost nothing. Never evaluates a
/// growing exponential: the caller orients legs so Re(lambda) <= 0 within the
/// admissible set, and guards the budget otherwise.
class ColumnStepper {
  public:
    ColumnStepper(cx lambda, int slot) : lambda_(lambda), slot_(slot) {}

    /// March v across [s0, s0+S] with n uniform steps; C(s) is the slow
    /// coefficient. ramp=true resolves an off-manifold start (fresh identity
    /// data against a strongly damped mode) by geometric substeps.
    void march(Vec2c& v, double s0, double S, int n,
               const std::function<Mat2(double)>& C, bool ramp) const {
        if (n < 1) n = 1;
        double h = S / n;
        double s = s0;
        if (ramp && std::abs(lambda_) * h > 4.0) {
            int J = std::min(42, (int)std::ceil(std::log2(std::abs(lambda_) * h)) + 1);
            // substeps h/2^J, h/2^J, h/2^{J-1}, ..., h/2 sum to h
            double hs = h / std::ldexp(1.0, J);
            step(v, s, hs, C);
            s += hs;
            for (int j = J; j >= 1; --j) {
                double hj = h / std::ldexp(1.0, j);
                step(v, s, hj, C);
                s += hj;
            }
            --n;
        }
        for (int i = 0; i < n; ++i) {
            step(v, s, h, C);
            s += h;
        }
    }

  private:
    cx lambda_;
    int slot_;

    // weight application: slot gets w(lambda h), the other slot w(0)
    Vec2c wapply(cx wz, double w0, const Vec2c& v) const {
        return slot_ == 0 ? Vec2c{wz * v.a, w0 * v.b} : Vec2c{w0 * v.a, wz * v.b};
    }

    void step(Vec2c& v, double s, double h, const std::function<Mat2(double)>& C) const {
        PhiSet f = PhiSet::at(lambda_ * h);
        PhiSet g = PhiSet::at(lambda_ * (0.5 * h));
        const Vec2c N1 = mat_apply(C(s), v);
        Vec2c U2 = wapply(g.e, 1.0, v) + wapply(g.p1, 1.0, N1) * (0.5 * h);
        const Vec2c N2 = mat_apply(C(s + 0.5 * h), U2);
        Vec2c U3 = wapply(g.e, 1.0, v) + wapply(0.5 * g.p1 - g.p2, 0.5 * 1.0 - 0.5, N1) * h +
                   wapply(g.p2, 0.5, N2) * h;
        const Vec2c N3 = mat_apply(C(s + 0.5 * h), U3);
        Vec2c U4 = wapply(f.e, 1.0, v) + wapply(f.p1 - 2.0 * f.p2, 1.0 - 2.0 * 0.5, N1) * h +
                   wapply(2.0 * f.p2, 2.0 * 0.5, N3) * h;
        const Vec2c N4 = mat_apply(C(s + h), U4);
        v = wapply(f.e, 1.0, v) +
            wapply(f.p1 - 3.0 * f.p2 + 4.0 * f.p3, 1.0 - 3.0 * 0.5 + 4.0 / 6.0, N1) * h +
            wapply(2.0 * f.p2 - 4.0 * f.p3, 2.0 * 0.5 - 4.0 / 6.0, N2 + N3) * h +
            wapply(4.0 * f.p3 - f.p2, 4.0 / 6.0 - 0.5, N4) * h;
    }
};

}  // namespace cll
