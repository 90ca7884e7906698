#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "graphon/error.hpp"
#include "graphon/matrix.hpp"
#include "graphon/random.hpp"

namespace graphon {

struct EigenvalueResult {
    std::vector<double> values; // ascending
    long sweeps = 0;
    double residual = 0.0;      // off-diagonal Frobenius norm relative to ||A||_F
};

namespace detail {

inline double off_diagonal_sq(const SquareMatrix& a) {
    double off = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) off += 2.0 * a(i, j) * a(i, j);
    return off;
}

inline double frobenius_sq(const SquareMatrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return s;
}

} // namespace detail

/// All eigenvalues of a symmetric matrix by the cyclic Jacobi method.
///
/// Each sweep annihilates every off-diagonal pair (p, q) once with a plane
/// rotation. Iteration stops once the off-diagonal mass falls below
/// 1e-15 of the Frobenius norm, or a sweep performs no rotation (entries
/// negligible next to both diagonal entries are zeroed after three sweeps).
inline EigenvalueResult jacobi_eigenvalues(SquareMatrix a, long max_sweeps = 100) {
    const std::size_t n = a.size();
    EigenvalueResult out;
    const double frob = std::sqrt(detail::frobenius_sq(a));
    const double target = 1e-15 * frob;

    auto converged = [&] { return frob == 0.0 || std::sqrt(detail::off_diagonal_sq(a)) <= target; };

    while (!converged()) {
        if (out.sweeps >= max_sweeps) {
            const double res = std::sqrt(detail::off_diagonal_sq(a)) / frob;
            throw ConvergenceError("Jacobi eigensolver did not converge within " +
                                       std::to_string(max_sweeps) + " sweeps",
                                   out.sweeps, res);
        }
        ++out.sweeps;
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // Once converging, drop elements too small to move either diagonal entry.
                const double g = 100.0 * std::abs(apq);
                if (std::abs(apq) < 1e-300 ||
                    (out.sweeps > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq))) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                rotated = true;
                const double theta = (aqq - app) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = a(p, r) = c * arp - s * arq;
                    a(r, q) = a(q, r) = s * arp + c * arq;
                }
            }
        }
        if (!rotated) break;
    }

    out.residual = frob == 0.0 ? 0.0 : std::sqrt(detail::off_diagonal_sq(a)) / frob;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
    std::sort(out.values.begin(), out.values.end());
    return out;
}

struct SpectralNormResult {
    double value = 0.0;
    std::string method;   // "jacobi" or "power-squared"
    long iterations = 0;  // Jacobi sweeps or power steps
    double residual = 0.0;
};

/// Largest |eigenvalue| of a symmetric matrix by power iteration on A².
///
/// Iterating on A² avoids the sign oscillation plain power iteration shows
/// when both +λ and -λ are extremal. Convergence is declared once
/// ||A²v - μv|| / μ <= tol for the Rayleigh quotient μ.
inline SpectralNormResult power_spectral_norm(const SquareMatrix& a, double tol,
                                              long max_iterations = 100000,
                                              std::uint64_t seed = 0x5eed) {
    const std::size_t n = a.size();
    SpectralNormResult out{0.0, "power-squared", 0, 0.0};
    if (n == 0 || detail::frobenius_sq(a) == 0.0) return out;

    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(0.5, 1.5) * (rng.bit() ? 1.0 : -1.0);
    auto normalize = [](std::vector<double>& x) {
        double s = 0.0;
        for (double e : x) s += e * e;
        s = std::sqrt(s);
        for (auto& e : x) e /= s;
        return s;
    };
    normalize(v);

    double residual = INFINITY;
    for (long it = 1; it <= max_iterations; ++it) {
        std::vector<double> y = a.multiply(a.multiply(v));
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += v[i] * y[i];
        double rs = 0.0;
        for (std::size_t i = 0; i < n; ++i) rs += (y[i] - mu * v[i]) * (y[i] - mu * v[i]);
        residual = mu > 0.0 ? std::sqrt(rs) / mu : INFINITY;
        out.iterations = it;
        out.residual = residual;
        if (residual <= tol) {
            out.value = std::sqrt(mu);
            return out;
        }
        if (normalize(y) == 0.0) {
            // v landed in the null space of A; restart from a fresh direction.
            for (auto& x : y) x = rng.uniform(-1.0, 1.0);
            normalize(y);
        }
        v = std::move(y);
    }
    throw ConvergenceError("power iteration did not reach relative residual " + std::to_string(tol) +
                               " within " + std::to_string(max_iterations) + " iterations",
                           out.iterations, residual);
}

/// Spectral norm of a symmetric matrix: Jacobi up to `jacobi_limit` rows, power iteration beyond.
inline SpectralNormResult spectral_norm(const SquareMatrix& a, double tol, std::size_t jacobi_limit = 512,
                                        long max_iterations = 100000) {
    if (a.size() <= jacobi_limit) {
        auto eig = jacobi_eigenvalues(a);
        double m = 0.0;
        for (double l : eig.values) m = std::max(m, std::abs(l));
        return {m, "jacobi", eig.sweeps, eig.residual};
    }
    return power_spectral_norm(a, tol, max_iterations);
}

} // namespace graphon
