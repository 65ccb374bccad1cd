#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "engel/core.hpp"

namespace engel {

/// Centered finite-difference derivative of sampled values on a (possibly
/// non-uniform) grid. One-sided second-order stencils at the ends of open
/// curves; periodic wrap for closed ones (the duplicated last sample is
/// skipped when differencing).
template <typename T>
std::vector<T> fd_derivative(const std::vector<double>& s, const std::vector<T>& v, bool closed) {
    const std::size_t n = s.size();
    std::vector<T> d(n);
    if (n < 3) fail("DegenerateSpeed", "need at least 3 samples to differentiate");

    auto centered = [&](std::size_t i, std::size_t im, std::size_t ip, double hm, double hp) {
        // second-order on non-uniform grid
        const double a = -hp / (hm * (hm + hp));
        const double b = (hp - hm) / (hm * hp);
        const double c = hm / (hp * (hm + hp));
        d[i] = v[im] * a + v[i] * b + v[ip] * c;
    };

    if (closed) {
        // samples 0..n-1 with v[n-1] == v[0]; use m = n-1 distinct samples
        const std::size_t m = n - 1;
        const double period = (s[m] - s[0]);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t im = (i == 0) ? m - 1 : i - 1;
            const std::size_t ip = (i + 1 == m) ? 0 : i + 1;
            double hm = s[i] - s[im];
            if (i == 0) hm = period - (s[m - 1] - s[0]);
            double hp = s[ip] - s[i];
            if (i + 1 == m) hp = period - (s[m - 1] - s[0]);
            centered(i, im, ip, hm, hp);
        }
        d[m] = d[0];
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i)
            centered(i, i - 1, i + 1, s[i] - s[i - 1], s[i + 1] - s[i]);
        {   // one-sided, second order
            const double h0 = s[1] - s[0], h1 = s[2] - s[1];
            const double a = -(2 * h0 + h1) / (h0 * (h0 + h1));
            const double b = (h0 + h1) / (h0 * h1);
            const double c = -h0 / (h1 * (h0 + h1));
            d[0] = v[0] * a + v[1] * b + v[2] * c;
        }
        {
            const double h1 = s[n - 2] - s[n - 3], h0 = s[n - 1] - s[n - 2];
            const double a = h0 / (h1 * (h0 + h1));
            const double b = -(h0 + h1) / (h0 * h1);
            const double c = (2 * h0 + h1) / (h0 * (h0 + h1));
            d[n - 1] = v[n - 3] * a + v[n - 2] * b + v[n - 1] * c;
        }
    }
    return d;
}

/// Composite trapezoid of dv against du over the whole grid: sum (v_i+v_{i+1})/2 * (u_{i+1}-u_i).
inline double trapz_du(const std::vector<double>& v, const std::vector<double>& u) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        acc += 0.5 * (v[i] + v[i + 1]) * (u[i + 1] - u[i]);
    return acc;
}

inline double trapz(const std::vector<double>& s, const std::vector<double>& v) {
    return trapz_du(v, s);
}

inline std::vector<double> cumtrapz(const std::vector<double>& s, const std::vector<double>& v,
                                    double v0 = 0.0) {
    std::vector<double> out(s.size());
    out[0] = v0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        out[i + 1] = out[i] + 0.5 * (v[i] + v[i + 1]) * (s[i + 1] - s[i]);
    return out;
}

/// Cumulative trapezoid of v against a second sampled coordinate u (i.e. ∫ v du).
inline std::vector<double> cumtrapz_du(const std::vector<double>& v, const std::vector<double>& u,
                                       double v0 = 0.0) {
    std::vector<double> out(v.size());
    out[0] = v0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        out[i + 1] = out[i] + 0.5 * (v[i] + v[i + 1]) * (u[i + 1] - u[i]);
    return out;
}

/// Unwrap a sequence of angles so consecutive increments lie in (-period/2, period/2].
/// Throws if an increment magnitude exceeds max_step (aliasing guard).
inline std::vector<double> unwrap_angles(const std::vector<double>& raw, double period,
                                         double max_step, const char* context) {
    std::vector<double> out(raw.size());
    if (raw.empty()) return out;
    out[0] = raw[0];
    for (std::size_t i = 1; i < raw.size(); ++i) {
        double d = std::fmod(raw[i] - raw[i - 1], period);
        if (d > 0.5 * period) d -= period;
        if (d <= -0.5 * period) d += period;
        if (std::abs(d) > max_step)
            fail("NoConvergence", std::string(context) + ": angle step " + std::to_string(d) +
                                      " exceeds the aliasing guard; refine the grid");
        out[i] = out[i - 1] + d;
    }
    return out;
}

/// Singular values (descending) of an m-by-n matrix given column-major columns,
/// via one-sided Jacobi. Intended for tiny matrices (m, n <= 8).
inline std::vector<double> singular_values(std::vector<std::vector<double>> cols) {
    const std::size_t n = cols.size();
    if (n == 0) return {};
    bool rotated = true;
    for (int sweep = 0; sweep < 60 && rotated; ++sweep) {
        rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0, aqq = 0, apq = 0;
                for (std::size_t i = 0; i < cols[p].size(); ++i) {
                    app += cols[p][i] * cols[p][i];
                    aqq += cols[q][i] * cols[q][i];
                    apq += cols[p][i] * cols[q][i];
                }
                if (std::abs(apq) <= 1e-30 + 1e-15 * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < cols[p].size(); ++i) {
                    const double vp = cols[p][i], vq = cols[q][i];
                    cols[p][i] = c * vp - s * vq;
                    cols[q][i] = s * vp + c * vq;
                }
            }
        }
    }
    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0;
        for (double v : cols[j]) acc += v * v;
        sv[j] = std::sqrt(acc);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

/// Solve a small dense linear system in place (partial pivoting). A is row-major n*n.
inline std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i * n + k]) > std::abs(A[piv * n + k])) piv = i;
        if (std::abs(A[piv * n + k]) < 1e-300) fail("NoConvergence", "singular linear system");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A[i * n + k] / A[k * n + k];
            for (std::size_t j = k; j < n; ++j) A[i * n + j] -= f * A[k * n + j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= A[i * n + j] * x[j];
        x[i] = acc / A[i * n + i];
    }
    return x;
}

/// Quintic smoothstep: 0 at u<=0, 1 at u>=1, C2-flat at both ends.
inline double smoothstep5(double u) {
    if (u <= 0) return 0.0;
    if (u >= 1) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = a + (b - a) * double(i) / double(n - 1);
    return s;
}

/// Multi-variate Newton with finite-difference Jacobian on a residual map
/// R^k -> R^k given as a callable. Used by the loop-template and closure solvers.
inline std::vector<double> newton_solve(
    const std::function<std::vector<double>(const std::vector<double>&)>& res,
    std::vector<double> x, int max_iter = 60, double tol = 1e-14, double fd_h = 1e-7) {
    const std::size_t k = x.size();
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> r = res(x);
        double rn = 0;
        for (double v : r) rn = std::max(rn, std::abs(v));
        if (rn < tol) return x;
        std::vector<double> J(k * k);
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<double> xp = x;
            const double h = fd_h * std::max(1.0, std::abs(x[j]));
            xp[j] += h;
            std::vector<double> rp = res(xp);
            for (std::size_t i = 0; i < k; ++i) J[i * k + j] = (rp[i] - r[i]) / h;
        }
        std::vector<double> rhs(k);
        for (std::size_t i = 0; i < k; ++i) rhs[i] = -r[i];
        std::vector<double> dx = solve_dense(J, rhs);
        double step = 1.0;
        for (int ls = 0; ls < 30; ++ls) {
            std::vector<double> xt = x;
            for (std::size_t j = 0; j < k; ++j) xt[j] += step * dx[j];
            std::vector<double> rt = res(xt);
            double rtn = 0;
            for (double v : rt) rtn = std::max(rtn, std::abs(v));
            if (rtn < rn || rtn < tol) { x = xt; break; }
            step *= 0.5;
            if (ls == 29) fail("NoConvergence", "newton line search stalled");
        }
    }
    std::vector<double> r = res(x);
    double rn = 0;
    for (double v : r) rn = std::max(rn, std::abs(v));
    if (rn > tol * 100) fail("NoConvergence", "newton did not reach tolerance");
    return x;
}

}  // namespace engel
