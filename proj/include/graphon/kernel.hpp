#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphon/error.hpp"
#include "graphon/matrix.hpp"
#include "graphon/random.hpp"

namespace graphon {

/// Symmetric bounded function on [0,1]² that is constant on the cells of a
/// finite partition of [0,1].
///
/// Block i covers [c_{i-1}, c_i) where c_i is the cumulative weight; the last
/// block also contains 1. Instances are immutable and always valid.
class StepKernel {
public:
    /// Validates and symmetrizes. `bound` defaults to max |value|.
    static StepKernel create(SquareMatrix values, std::vector<double> weights, double bound = -1.0) {
        const std::size_t n = values.size();
        if (n == 0) throw ValidationError("kernel must have at least one block");
        if (weights.size() != n)
            throw ValidationError("weights has " + std::to_string(weights.size()) + " entries but values is " +
                                  std::to_string(n) + "x" + std::to_string(n));
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(weights[i]) || weights[i] <= 0.0)
                throw ValidationError("weight " + std::to_string(i) + " is not positive");
            total += weights[i];
        }
        if (std::abs(total - 1.0) > kAlgebraicTol)
            throw ValidationError("weights sum to " + format_real(total) + ", expected 1");

        double max_abs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!std::isfinite(values(i, j)))
                    throw ValidationError("value (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (std::abs(values(i, j) - values(j, i)) > kAlgebraicTol)
                    throw ValidationError("values not symmetric at (" + std::to_string(i) + "," + std::to_string(j) +
                                          ")");
                const double avg = 0.5 * (values(i, j) + values(j, i));
                values(i, j) = values(j, i) = avg;
            }
        }
        for (double v : values.data()) max_abs = std::max(max_abs, std::abs(v));
        if (bound < 0.0) bound = max_abs;
        if (max_abs > bound) throw ValidationError("value magnitude " + format_real(max_abs) + " exceeds bound");
        return StepKernel(std::move(values), std::move(weights), bound);
    }

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> weights() const noexcept { return weights_; }
    double weight(std::size_t i) const { return weights_[i]; }
    const SquareMatrix& values() const noexcept { return values_; }
    double value(std::size_t i, std::size_t j) const { return values_(i, j); }
    double bound() const noexcept { return bound_; }

    /// Right endpoints c_1, ..., c_n of the blocks; c_n is exactly 1.
    const std::vector<double>& boundaries() const noexcept { return boundaries_; }

    /// Block containing x ∈ [0,1].
    std::size_t block_of(double x) const {
        auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), x);
        auto idx = static_cast<std::size_t>(it - boundaries_.begin());
        return std::min(idx, size() - 1);
    }

    /// True when every value lies in [0,1].
    bool is_graphon_valued() const {
        return std::ranges::all_of(values_.data(), [](double v) { return v >= 0.0 && v <= 1.0; });
    }

    friend bool operator==(const StepKernel& a, const StepKernel& b) {
        return a.values_ == b.values_ && a.weights_ == b.weights_;
    }

    static std::string format_real(double x) {
        std::array<char, 32> buf{};
        std::snprintf(buf.data(), buf.size(), "%.17g", x);
        return buf.data();
    }

private:
    StepKernel(SquareMatrix values, std::vector<double> weights, double bound)
        : values_(std::move(values)), weights_(std::move(weights)), bound_(bound) {
        boundaries_.resize(weights_.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            acc += weights_[i];
            boundaries_[i] = acc;
        }
        boundaries_.back() = 1.0;
    }

    SquareMatrix values_;
    std::vector<double> weights_;
    std::vector<double> boundaries_;
    double bound_;
};

/// Step kernel with values in [0,1] and bound 1.
class StepGraphon {
public:
    static StepGraphon from_kernel(const StepKernel& k) {
        if (!k.is_graphon_valued()) throw ValidationError("homomorphism density requires a graphon (values in [0,1])");
        return StepGraphon(StepKernel::create(k.values(), {k.weights().begin(), k.weights().end()}, 1.0));
    }

    const StepKernel& kernel() const noexcept { return kernel_; }
    operator const StepKernel&() const noexcept { return kernel_; }
    std::size_t size() const noexcept { return kernel_.size(); }

    friend bool operator==(const StepGraphon&, const StepGraphon&) = default;

private:
    explicit StepGraphon(StepKernel k) : kernel_(std::move(k)) {}
    StepKernel kernel_;
};

/// Block-constant function on [0,1], one coefficient per block.
struct BlockSignal {
    std::vector<double> coefficients;
    friend bool operator==(const BlockSignal&, const BlockSignal&) = default;
};

/// Simple undirected graph stored as a dense 0/1 adjacency matrix.
class AdjacencyGraph {
public:
    AdjacencyGraph() = default;
    explicit AdjacencyGraph(std::size_t n) : n_(n), adj_(n * n, 0) {}

    static AdjacencyGraph from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) {
        AdjacencyGraph g(n);
        for (auto [i, j] : edges) g.add_edge(i, j);
        return g;
    }

    void add_edge(std::size_t i, std::size_t j) {
        if (i >= n_ || j >= n_)
            throw ValidationError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
        if (i == j) throw ValidationError("self-loop at vertex " + std::to_string(i));
        adj_[i * n_ + j] = adj_[j * n_ + i] = 1;
    }

    std::size_t size() const noexcept { return n_; }
    bool has_edge(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }

    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (has_edge(i, j)) out.emplace_back(i, j);
        return out;
    }

    friend bool operator==(const AdjacencyGraph&, const AdjacencyGraph&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> adj_;
};

inline StepKernel make_step_kernel(const std::vector<std::vector<double>>& values, std::vector<double> weights) {
    const std::size_t n = values.size();
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i].size() != n) throw ValidationError("values must be square: row " + std::to_string(i) + " has " +
                                                         std::to_string(values[i].size()) + " entries");
        for (std::size_t j = 0; j < n; ++j) m(i, j) = values[i][j];
    }
    return StepKernel::create(std::move(m), std::move(weights));
}

inline StepGraphon make_step_graphon(const std::vector<std::vector<double>>& values, std::vector<double> weights) {
    return StepGraphon::from_kernel(make_step_kernel(values, std::move(weights)));
}

inline std::vector<double> uniform_weights(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

/// Induced step graphon of a graph: n blocks of weight 1/n.
inline StepGraphon graphon_from_adjacency(const AdjacencyGraph& g) {
    const std::size_t n = g.size();
    if (n == 0) throw ValidationError("graph has no vertices");
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = g.has_edge(i, j) ? 1.0 : 0.0;
    return StepGraphon::from_kernel(StepKernel::create(std::move(m), uniform_weights(n)));
}

/// (T_W x)_i = Σ_j w_j W_ij x_j
inline BlockSignal apply_operator(const StepKernel& k, const BlockSignal& x) {
    const std::size_t n = k.size();
    if (x.coefficients.size() != n)
        throw ValidationError("signal has " + std::to_string(x.coefficients.size()) + " coefficients, kernel has " +
                              std::to_string(n) + " blocks");
    BlockSignal out{std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += k.weight(j) * k.value(i, j) * x.coefficients[j];
        out.coefficients[i] = acc;
    }
    return out;
}

inline double evaluate(const StepKernel& k, double u, double v) {
    if (!(u >= 0.0 && u <= 1.0) || !(v >= 0.0 && v <= 1.0))
        throw ValidationError("evaluation point (" + StepKernel::format_real(u) + ", " + StepKernel::format_real(v) +
                              ") outside [0,1]^2");
    return k.value(k.block_of(u), k.block_of(v));
}

/// W-random graph: n uniform labels, then each pair i<j (row-major order)
/// is joined when a fresh uniform draw falls below W(u_i, u_j).
inline AdjacencyGraph sample_graph(const StepGraphon& g, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ValidationError("sample size must be positive");
    Rng rng(seed);
    std::vector<double> labels(n);
    for (auto& u : labels) u = rng.uniform();
    AdjacencyGraph out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < evaluate(g, labels[i], labels[j])) out.add_edge(i, j);
    return out;
}

/// a − b on the common refinement of both partitions.
inline StepKernel kernel_difference(const StepKernel& a, const StepKernel& b) {
    std::vector<double> cuts;
    cuts.reserve(a.size() + b.size());
    std::ranges::merge(a.boundaries(), b.boundaries(), std::back_inserter(cuts));
    std::vector<double> merged{0.0};
    for (double c : cuts) {
        // Boundaries that agree up to rounding are the same cut.
        if (c - merged.back() > kAlgebraicTol) merged.push_back(c);
    }
    merged.back() = 1.0;

    const std::size_t n = merged.size() - 1;
    std::vector<double> weights(n);
    std::vector<std::size_t> in_a(n), in_b(n);
    for (std::size_t i = 0; i < n; ++i) {
        weights[i] = merged[i + 1] - merged[i];
        const double mid = 0.5 * (merged[i] + merged[i + 1]);
        in_a[i] = a.block_of(mid);
        in_b[i] = b.block_of(mid);
    }
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = a.value(in_a[i], in_a[j]) - b.value(in_b[i], in_b[j]);
    return StepKernel::create(std::move(m), std::move(weights), a.bound() + b.bound());
}

/// Midpoint discretization of a named graphon on a uniform partition.
///
/// Families: constant(p), product (uv), min (min(u,v)), sbm (k² row-major
/// block matrix), exp-decay(α) = exp(-α|u-v|). Values are clamped to [0,1].
inline StepGraphon builtin_graphon(std::string_view family, std::span<const double> params, std::size_t resolution) {
    if (resolution == 0) throw ValidationError("resolution must be positive");
    auto expect_params = [&](std::size_t count) {
        if (params.size() != count)
            throw ValidationError("family '" + std::string(family) + "' takes " + std::to_string(count) +
                                  " parameter(s), got " + std::to_string(params.size()));
    };

    std::function<double(double, double)> fn;
    if (family == "constant") {
        expect_params(1);
        const double p = params[0];
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("constant graphon parameter must lie in [0,1]");
        fn = [p](double, double) { return p; };
    } else if (family == "product") {
        expect_params(0);
        fn = [](double u, double v) { return u * v; };
    } else if (family == "min") {
        expect_params(0);
        fn = [](double u, double v) { return std::min(u, v); };
    } else if (family == "sbm") {
        const auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(params.size()))));
        if (k == 0 || k * k != params.size())
            throw ValidationError("sbm parameters must be a non-empty square block matrix (row-major)");
        SquareMatrix blocks(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                const double p = params[i * k + j];
                if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("sbm block probabilities must lie in [0,1]");
                blocks(i, j) = p;
            }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (blocks(i, j) != blocks(j, i)) throw ValidationError("sbm block matrix not symmetric");
        fn = [blocks, k](double u, double v) {
            auto idx = [k](double x) { return std::min(static_cast<std::size_t>(x * static_cast<double>(k)), k - 1); };
            return blocks(idx(u), idx(v));
        };
    } else if (family == "exp-decay") {
        expect_params(1);
        const double alpha = params[0];
        if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("exp-decay rate must be non-negative");
        fn = [alpha](double u, double v) { return std::exp(-alpha * std::abs(u - v)); };
    } else {
        throw ValidationError("unknown graphon family '" + std::string(family) + "'");
    }

    const double h = 1.0 / static_cast<double>(resolution);
    SquareMatrix m(resolution);
    for (std::size_t i = 0; i < resolution; ++i)
        for (std::size_t j = 0; j < resolution; ++j) {
            const double u = (static_cast<double>(i) + 0.5) * h;
            const double v = (static_cast<double>(j) + 0.5) * h;
            m(i, j) = std::clamp(fn(u, v), 0.0, 1.0);
        }
    return StepGraphon::from_kernel(StepKernel::create(std::move(m), uniform_weights(resolution)));
}

/// Stable 64-bit FNV-1a digest of the block count, weights and values, as 16 hex digits.
inline std::string kernel_digest(const StepKernel& k) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            h ^= (word >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(k.size());
    for (double w : k.weights()) mix(std::bit_cast<std::uint64_t>(w));
    for (double v : k.values().data()) mix(std::bit_cast<std::uint64_t>(v));
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
    return buf.data();
}

} // namespace graphon
