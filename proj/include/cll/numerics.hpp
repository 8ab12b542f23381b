#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "cll/mat2.hpp"

namespace cll {

// ---------------------------------------------------------------- rng ------

/// splitmix64; deterministic across platforms.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    cx complex_in(double re0, double re1, double im0, double im1) {
        double re = uniform(re0, re1);
        return {re, uniform(im0, im1)};
    }
};

// ------------------------------------------------------------ parallel -----

/// Static index partition over nthreads; each index writes only its own slots,
/// so results are independent of the thread count.
inline void parallel_for(std::size_t n, int nthreads, const std::function<void(std::size_t)>& body) {
    if (nthreads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::size_t nt = std::min<std::size_t>(nthreads, n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += nt) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// ------------------------------------------------- finite differences ------

/// Fornberg weights for the m-th derivative at x0 from nodes xs.
/// Classic recursion; exact for polynomials up to degree xs.size()-1.
inline std::vector<double> fd_weights(double x0, std::span<const double> xs, int m) {
    const int n = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0;
        double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int s = mn; s >= 1; --s)
                    c[i][s] = c1 * (s * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int s = mn; s >= 1; --s)
                c[j][s] = (c4 * c[j][s] - s * c[j][s - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][m];
    if (m >= 1) {
        // enforce the exact zero row sum so constants are annihilated in
        // floating point too (uniform fields must stay exactly uniform)
        double s = 0.0;
        int ic = 0;
        for (int i = 0; i <= n; ++i) {
            s += w[i];
            if (std::abs(xs[i] - x0) < std::abs(xs[ic] - x0)) ic = i;
        }
        w[ic] -= s;
    }
    return w;
}

/// Derivative of order m on a uniform grid, 4th order accurate, with offset
/// (one-sided) stencils near the ends. Returns df at every node.
template <typename T>
std::vector<T> uniform_derivative(std::span<const T> f, double h, int m) {
    const int n = static_cast<int>(f.size());
    const int width = m + 4;  // 4th order needs m+4 points
    std::vector<T> out(n, T{});
    if (n < width) return out;
    std::vector<double> xs(width);
    for (int i = 0; i < n; ++i) {
        int lo = std::max(0, std::min(i - width / 2, n - width));
        for (int j = 0; j < width; ++j) xs[j] = (lo + j - i) * h;
        auto w = fd_weights(0.0, xs, m);
        T acc{};
        for (int j = 0; j < width; ++j) acc += w[j] * f[lo + j];
        out[i] = acc;
    }
    return out;
}

// ------------------------------------------------------------ quadrature ---

/// Cumulative integral F(x_i) = int_{x_0}^{x_i} f on a uniform grid, 4th order.
/// Steps by local cubic Newton-Cotes through 4 surrounding nodes.
template <typename T>
std::vector<T> cumulative_integral(std::span<const T> f, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<T> F(n, T{});
    if (n < 2) return F;
    if (n < 4) {
        for (int i = 1; i < n; ++i) F[i] = F[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
        return F;
    }
    for (int i = 1; i < n; ++i) {
        int lo = std::max(0, std::min(i - 2, n - 4));
        double a = (i - 1 - lo) * h, b = (i - lo) * h;
        // integrate the cubic through nodes lo..lo+3 over [a, b]
        double xs[4] = {0.0, h, 2.0 * h, 3.0 * h};
        double wgt[4];
        for (int j = 0; j < 4; ++j) {
            // Lagrange basis polynomial integral over [a,b]
            double denom = 1.0;
            for (int q = 0; q < 4; ++q)
                if (q != j) denom *= xs[j] - xs[q];
            // integrate prod_{q!=j}(x-xq) over [a,b]: expand cubic
            double roots[3];
            int rn = 0;
            for (int q = 0; q < 4; ++q)
                if (q != j) roots[rn++] = xs[q];
            // p(x) = (x-r0)(x-r1)(x-r2) = x^3 - e1 x^2 + e2 x - e3
            double e1 = roots[0] + roots[1] + roots[2];
            double e2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
            double e3 = roots[0] * roots[1] * roots[2];
            auto P = [&](double x) {
                return x * x * x * x / 4.0 - e1 * x * x * x / 3.0 + e2 * x * x / 2.0 - e3 * x;
            };
            wgt[j] = (P(b) - P(a)) / denom;
        }
        T acc{};
        for (int j = 0; j < 4; ++j) acc += wgt[j] * f[lo + j];
        F[i] = F[i - 1] + acc;
    }
    return F;
}

// ---------------------------------------------------------- interpolation --

/// Cubic Lagrange interpolation on a uniform grid (clamped 4-point window).
template <typename T>
T interp_cubic(std::span<const T> f, double x0, double h, double x) {
    const int n = static_cast<int>(f.size());
    if (n == 1) return f[0];
    double s = (x - x0) / h;
    int i = static_cast<int>(std::floor(s));
    int lo = std::max(0, std::min(i - 1, n - 4));
    if (n < 4) lo = 0;
    int width = std::min(4, n);
    double u = s - lo;
    T acc{};
    for (int j = 0; j < width; ++j) {
        double w = 1.0;
        for (int q = 0; q < width; ++q)
            if (q != j) w *= (u - q) / double(j - q);
        acc += w * f[lo + j];
    }
    return acc;
}

}  // namespace cll
