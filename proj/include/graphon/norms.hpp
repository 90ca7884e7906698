#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphon/error.hpp"
#include "graphon/kernel.hpp"
#include "graphon/matrix.hpp"
#include "graphon/parallel.hpp"
#include "graphon/random.hpp"
#include "graphon/spectral.hpp"

namespace graphon {

inline constexpr std::string_view kMethodExact = "exact";
inline constexpr std::string_view kMethodHeuristic = "heuristic-lower-bound";

/// Witness sets S, T (as block indicators) for the cut norm.
struct CutCertificate {
    std::vector<std::uint8_t> s;
    std::vector<std::uint8_t> t;
    double value = 0.0; // |Σ_ij w_i w_j K_ij s_i t_j|
    friend bool operator==(const CutCertificate&, const CutCertificate&) = default;
};

/// Witness sign vectors f, g for the ∞→1 operator norm.
struct SignCertificate {
    std::vector<std::int8_t> f;
    std::vector<std::int8_t> g;
    double value = 0.0; // |Σ_ij w_i w_j K_ij f_i g_j|
    friend bool operator==(const SignCertificate&, const SignCertificate&) = default;
};

struct NormConfig {
    std::size_t exact_cut_limit = 20;
    std::size_t exact_inf1_limit = 21;
    int restarts = 50;
    std::uint64_t seed = 0;
    double op22_tol = kSpectralTol;
    std::size_t jacobi_limit = 512;
    long max_iterations = 100000;
    unsigned threads = 1;
    double algebraic_tol = kAlgebraicTol;
    double inequality_tol = kSpectralTol;
};

/// M_ij = w_i w_j K_ij, the matrix of the bilinear form ∫∫ W f g for block-constant f, g.
inline SquareMatrix bilinear_matrix(const StepKernel& k) {
    const std::size_t n = k.size();
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = k.weight(i) * k.weight(j) * k.value(i, j);
    return m;
}

/// S_ij = √w_i K_ij √w_j, unitarily similar to T_W restricted to block signals.
inline SquareMatrix weighted_matrix(const StepKernel& k) {
    const std::size_t n = k.size();
    SquareMatrix s(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) = std::sqrt(k.weight(i)) * k.value(i, j) * std::sqrt(k.weight(j));
    return s;
}

/// |xᵀ M y| evaluated directly, row by row.
template <typename X, typename Y>
double bilinear_form(const SquareMatrix& m, const std::vector<X>& x, const std::vector<Y>& y) {
    double total = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (x[i] == 0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < m.size(); ++j) row += m(i, j) * static_cast<double>(y[j]);
        total += static_cast<double>(x[i]) * row;
    }
    return std::abs(total);
}

inline double certificate_value(const StepKernel& k, const CutCertificate& c) {
    return bilinear_form(bilinear_matrix(k), c.s, c.t);
}
inline double certificate_value(const StepKernel& k, const SignCertificate& c) {
    return bilinear_form(bilinear_matrix(k), c.f, c.g);
}

namespace detail {

// Column sums (Mᵀx)_j computed directly.
template <typename X>
std::vector<double> column_sums(const SquareMatrix& m, const std::vector<X>& x) {
    std::vector<double> c(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (x[i] == 0) continue;
        const double xi = static_cast<double>(x[i]);
        for (std::size_t j = 0; j < m.size(); ++j) c[j] += xi * m(i, j);
    }
    return c;
}

// Prefix bits fixed per work chunk. Independent of the thread count so every
// chunk, and therefore the reduction, is identical however work is scheduled.
inline std::size_t chunk_bits(std::size_t free_bits) { return free_bits >= 12 ? 6 : 0; }

struct CutCandidate {
    double value = -1.0;
    std::vector<std::uint8_t> s;
    int sign = 1; // +1 maximizes sᵀMt, -1 minimizes
};

// Larger value wins; ties go to the lexicographically smaller s, then the + branch.
inline bool better(const CutCandidate& a, const CutCandidate& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.s != b.s) return a.s < b.s;
    return a.sign > b.sign;
}

struct SignCandidate {
    double value = -1.0;
    std::vector<std::int8_t> f;
};

inline bool better(const SignCandidate& a, const SignCandidate& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.f < b.f;
}

inline CutCertificate cut_certificate_from(const SquareMatrix& m, std::vector<std::uint8_t> s, int sign) {
    const auto c = column_sums(m, s);
    CutCertificate cert;
    cert.t.resize(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) cert.t[j] = sign * c[j] > 0.0 ? 1 : 0;
    cert.s = std::move(s);
    cert.value = bilinear_form(m, cert.s, cert.t);
    return cert;
}

inline SignCertificate sign_certificate_from(const SquareMatrix& m, std::vector<std::int8_t> f) {
    const auto c = column_sums(m, f);
    SignCertificate cert;
    cert.g.resize(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) cert.g[j] = c[j] >= 0.0 ? 1 : -1;
    cert.f = std::move(f);
    cert.value = bilinear_form(m, cert.f, cert.g);
    return cert;
}

} // namespace detail

/// Exact cut norm of a step kernel.
///
/// The supremum over measurable S, T reduces to max |sᵀMt| over indicator
/// vectors s, t ∈ {0,1}ⁿ (a bilinear form on a box peaks at a vertex). All 2ⁿ
/// choices of s are visited in Gray-code order, updating the column sums Mᵀs
/// in O(n) per step; for fixed s the best t keeps exactly the positive (or,
/// for the other sign branch, negative) column sums.
inline CutCertificate cut_norm_exact(const StepKernel& k, std::size_t limit = 20, unsigned threads = 1) {
    const std::size_t n = k.size();
    if (n > limit)
        throw LimitError("exact cut norm limited to " + std::to_string(limit) + " blocks, kernel has " +
                         std::to_string(n));
    const SquareMatrix m = bilinear_matrix(k);
    const std::size_t fixed = detail::chunk_bits(n);
    const std::size_t free = n - fixed;
    const std::size_t chunks = std::size_t{1} << fixed;
    std::vector<detail::CutCandidate> best(chunks);

    detail::parallel_for(chunks, threads, [&](std::size_t chunk) {
        std::vector<std::uint8_t> s(n, 0);
        for (std::size_t b = 0; b < fixed; ++b) s[free + b] = (chunk >> b) & 1U;
        std::vector<double> c = detail::column_sums(m, s);
        detail::CutCandidate local;
        auto consider = [&] {
            double pos = 0.0, neg = 0.0;
            for (double x : c) (x > 0.0 ? pos : neg) += x;
            for (auto [value, sign] : {std::pair{pos, 1}, std::pair{-neg, -1}}) {
                if (value < local.value) continue;
                if (value == local.value && !(s < local.s || (s == local.s && sign > local.sign))) continue;
                local.value = value;
                local.s = s;
                local.sign = sign;
            }
        };
        consider();
        const std::uint64_t steps = std::uint64_t{1} << free;
        for (std::uint64_t step = 1; step < steps; ++step) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(step));
            s[bit] ^= 1U;
            const double dir = s[bit] ? 1.0 : -1.0;
            for (std::size_t j = 0; j < n; ++j) c[j] += dir * m(bit, j);
            consider();
        }
        best[chunk] = std::move(local);
    });

    detail::CutCandidate winner;
    for (auto& cand : best)
        if (detail::better(cand, winner)) winner = std::move(cand);
    return detail::cut_certificate_from(m, std::move(winner.s), winner.sign);
}

/// Exact ∞→1 operator norm (equivalently the type-2 cut norm).
///
/// Attained at sign vectors; for fixed f the best g is sign(Mᵀf), giving
/// Σ_j |(Mᵀf)_j|. Since f and -f give the same value, f_0 = +1 is fixed and
/// the remaining 2ⁿ⁻¹ sign patterns are walked in Gray-code order.
inline SignCertificate op_norm_inf1_exact(const StepKernel& k, std::size_t limit = 21, unsigned threads = 1) {
    const std::size_t n = k.size();
    if (n > limit)
        throw LimitError("exact inf-1 norm limited to " + std::to_string(limit) + " blocks, kernel has " +
                         std::to_string(n));
    const SquareMatrix m = bilinear_matrix(k);
    const std::size_t fixed = detail::chunk_bits(n - 1);
    const std::size_t free = n - 1 - fixed;
    const std::size_t chunks = std::size_t{1} << fixed;
    std::vector<detail::SignCandidate> best(chunks);

    detail::parallel_for(chunks, threads, [&](std::size_t chunk) {
        std::vector<std::int8_t> f(n, 1);
        for (std::size_t b = 0; b < fixed; ++b) f[1 + free + b] = ((chunk >> b) & 1U) ? -1 : 1;
        std::vector<double> c = detail::column_sums(m, f);
        detail::SignCandidate local;
        auto consider = [&] {
            double total = 0.0;
            for (double x : c) total += std::abs(x);
            if (total > local.value || (total == local.value && f < local.f)) {
                local.value = total;
                local.f = f;
            }
        };
        consider();
        const std::uint64_t steps = std::uint64_t{1} << free;
        for (std::uint64_t step = 1; step < steps; ++step) {
            const auto bit = 1 + static_cast<std::size_t>(std::countr_zero(step));
            f[bit] = static_cast<std::int8_t>(-f[bit]);
            const double dir = 2.0 * f[bit];
            for (std::size_t j = 0; j < n; ++j) c[j] += dir * m(bit, j);
            consider();
        }
        best[chunk] = std::move(local);
    });

    detail::SignCandidate winner;
    for (auto& cand : best)
        if (detail::better(cand, winner)) winner = std::move(cand);
    return detail::sign_certificate_from(m, std::move(winner.f));
}

/// Certified lower bound on the cut norm by alternating maximization.
///
/// From a random s, each sign branch alternates t ← [σ Mᵀs > 0] and
/// s ← [σ M t > 0] until σ sᵀMt stops increasing. The best of `restarts`
/// random starts is returned; its value is recomputed from the certificate.
inline CutCertificate cut_norm_heuristic(const StepKernel& k, int restarts = 50, std::uint64_t seed = 0) {
    if (restarts < 1) throw ValidationError("restarts must be positive");
    const std::size_t n = k.size();
    const SquareMatrix m = bilinear_matrix(k);
    Rng rng(seed);
    detail::CutCandidate best;

    for (int r = 0; r < restarts; ++r) {
        std::vector<std::uint8_t> start(n);
        for (auto& x : start) x = rng.bit() ? 1 : 0;
        for (int sign : {1, -1}) {
            std::vector<std::uint8_t> s = start;
            std::vector<std::uint8_t> t(n);
            double value = -INFINITY;
            for (int iter = 0; iter < 10000; ++iter) {
                const auto c = detail::column_sums(m, s);
                for (std::size_t j = 0; j < n; ++j) t[j] = sign * c[j] > 0.0 ? 1 : 0;
                const auto rows = m.multiply(std::vector<double>(t.begin(), t.end()));
                std::vector<std::uint8_t> next(n);
                for (std::size_t i = 0; i < n; ++i) next[i] = sign * rows[i] > 0.0 ? 1 : 0;
                double v = 0.0;
                for (std::size_t i = 0; i < n; ++i) v += next[i] ? sign * rows[i] : 0.0;
                if (!(v > value)) break;
                value = v;
                s = std::move(next);
            }
            const double reached = detail::cut_certificate_from(m, s, sign).value;
            detail::CutCandidate cand{reached, s, sign};
            if (detail::better(cand, best)) best = std::move(cand);
        }
    }
    return detail::cut_certificate_from(m, std::move(best.s), best.sign);
}

/// Certified lower bound on the ∞→1 norm by alternating sign updates
/// g ← sign(Mᵀf), f ← sign(Mg) from random starts.
inline SignCertificate op_norm_inf1_heuristic(const StepKernel& k, int restarts = 50, std::uint64_t seed = 0) {
    if (restarts < 1) throw ValidationError("restarts must be positive");
    const std::size_t n = k.size();
    const SquareMatrix m = bilinear_matrix(k);
    Rng rng(seed);
    detail::SignCandidate best;

    for (int r = 0; r < restarts; ++r) {
        std::vector<std::int8_t> f(n);
        for (auto& x : f) x = rng.bit() ? 1 : -1;
        double value = -INFINITY;
        for (int iter = 0; iter < 10000; ++iter) {
            const auto c = detail::column_sums(m, f);
            std::vector<double> g(n);
            for (std::size_t j = 0; j < n; ++j) g[j] = c[j] >= 0.0 ? 1.0 : -1.0;
            const auto rows = m.multiply(g);
            std::vector<std::int8_t> next(n);
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                next[i] = rows[i] >= 0.0 ? 1 : -1;
                v += std::abs(rows[i]);
            }
            if (!(v > value)) break;
            value = v;
            f = std::move(next);
        }
        // f ↦ -f leaves the value unchanged; normalize so f_0 = +1.
        if (!f.empty() && f[0] < 0)
            for (auto& x : f) x = static_cast<std::int8_t>(-x);
        const double reached = detail::sign_certificate_from(m, f).value;
        detail::SignCandidate cand{reached, f};
        if (detail::better(cand, best)) best = std::move(cand);
    }
    return detail::sign_certificate_from(m, std::move(best.f));
}

/// 2→2 operator norm: spectral norm of S = diag(√w) K diag(√w).
inline SpectralNormResult op_norm_22(const StepKernel& k, double tol = kSpectralTol, std::size_t jacobi_limit = 512,
                                     long max_iterations = 100000) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    return spectral_norm(weighted_matrix(k), tol, jacobi_limit, max_iterations);
}

/// Hilbert-Schmidt norm √(∫∫ W²).
inline double hs_norm(const StepKernel& k) {
    double total = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = 0; j < k.size(); ++j) total += k.weight(i) * k.weight(j) * k.value(i, j) * k.value(i, j);
    return std::sqrt(total);
}

struct NormValue {
    double value = 0.0;
    std::string method;
};

struct NormReport {
    std::string kernel_digest;
    std::size_t blocks = 0;
    NormValue cut_norm;
    CutCertificate cut_certificate;
    NormValue op_inf1;
    SignCertificate sign_certificate;
    SpectralNormResult op_22;
    double hs = 0.0;
    NormConfig config;
};

/// All four norms, exact where the block count allows and heuristic otherwise.
inline NormReport full_norm_report(const StepKernel& k, const NormConfig& config = {}) {
    NormReport r;
    r.kernel_digest = kernel_digest(k);
    r.blocks = k.size();
    r.config = config;

    if (k.size() <= config.exact_cut_limit) {
        r.cut_certificate = cut_norm_exact(k, config.exact_cut_limit, config.threads);
        r.cut_norm = {r.cut_certificate.value, std::string(kMethodExact)};
    } else {
        r.cut_certificate = cut_norm_heuristic(k, config.restarts, config.seed);
        r.cut_norm = {r.cut_certificate.value, std::string(kMethodHeuristic)};
    }
    if (k.size() <= config.exact_inf1_limit) {
        r.sign_certificate = op_norm_inf1_exact(k, config.exact_inf1_limit, config.threads);
        r.op_inf1 = {r.sign_certificate.value, std::string(kMethodExact)};
    } else {
        r.sign_certificate = op_norm_inf1_heuristic(k, config.restarts, config.seed);
        r.op_inf1 = {r.sign_certificate.value, std::string(kMethodHeuristic)};
    }
    r.op_22 = op_norm_22(k, config.op22_tol, config.jacobi_limit, config.max_iterations);
    r.hs = hs_norm(k);
    return r;
}

} // namespace graphon
