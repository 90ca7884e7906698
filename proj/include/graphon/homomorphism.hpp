#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphon/error.hpp"
#include "graphon/kernel.hpp"
#include "graphon/norms.hpp"
#include "graphon/parallel.hpp"
#include "graphon/spectral.hpp"

namespace graphon {

/// Simple undirected graph used as the pattern F in t(F, W).
/// Edges are stored canonically as (i, j) with i < j, sorted.
class Motif {
public:
    using Edge = std::pair<std::size_t, std::size_t>;

    static Motif create(std::size_t vertex_count, std::vector<Edge> edges) {
        if (vertex_count == 0) throw ValidationError("motif must have at least one vertex");
        for (auto& [i, j] : edges) {
            if (i >= vertex_count || j >= vertex_count)
                throw ValidationError("motif edge (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") references a vertex outside [0," + std::to_string(vertex_count) + ")");
            if (i == j) throw ValidationError("motif has a self-loop at vertex " + std::to_string(i));
            if (i > j) std::swap(i, j);
        }
        std::ranges::sort(edges);
        if (std::ranges::adjacent_find(edges) != edges.end())
            throw ValidationError("motif has a duplicate edge");
        return Motif(vertex_count, std::move(edges));
    }

    static Motif edge() { return create(2, {{0, 1}}); }

    static Motif cycle(std::size_t k) {
        if (k < 3) throw ValidationError("simple cycles need at least 3 vertices");
        std::vector<Edge> e;
        for (std::size_t i = 0; i < k; ++i) e.emplace_back(i, (i + 1) % k);
        return create(k, std::move(e));
    }

    static Motif triangle() { return cycle(3); }

    static Motif path(std::size_t vertices) {
        std::vector<Edge> e;
        for (std::size_t i = 0; i + 1 < vertices; ++i) e.emplace_back(i, i + 1);
        return create(vertices, std::move(e));
    }

    static Motif complete(std::size_t vertices) {
        std::vector<Edge> e;
        for (std::size_t i = 0; i < vertices; ++i)
            for (std::size_t j = i + 1; j < vertices; ++j) e.emplace_back(i, j);
        return create(vertices, std::move(e));
    }

    /// Vertices of b are shifted past those of a.
    static Motif disjoint_union(const Motif& a, const Motif& b) {
        auto e = a.edges_;
        for (auto [i, j] : b.edges_) e.emplace_back(i + a.n_, j + a.n_);
        return create(a.n_ + b.n_, std::move(e));
    }

    /// Vertex v becomes perm[v].
    Motif relabeled(std::span<const std::size_t> perm) const {
        if (perm.size() != n_) throw ValidationError("permutation size does not match motif");
        std::vector<Edge> e;
        for (auto [i, j] : edges_) e.emplace_back(perm[i], perm[j]);
        return create(n_, std::move(e));
    }

    std::size_t vertex_count() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    friend bool operator==(const Motif&, const Motif&) = default;

private:
    Motif(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {}
    std::size_t n_;
    std::vector<Edge> edges_;
};

struct HomBudget {
    std::size_t max_vertices = 8;
    double max_assignments = 1e8; // n^|V|
};

/// t(C₂, W) next to ‖T_W‖²_HS; they coincide only for {0,1}-valued W.
struct ErrataWitness {
    double t_c2 = 0.0;
    double hs_squared = 0.0;
    double gap = 0.0;
};

namespace detail {

inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

class HomEnumerator {
public:
    HomEnumerator(const Motif& f, const StepKernel& k) : k_(k), earlier_(f.vertex_count()) {
        for (auto [i, j] : f.edges()) earlier_[j].push_back(i); // i < j
    }

    double from_first_block(std::size_t block) const {
        std::vector<std::size_t> assign(earlier_.size());
        assign[0] = block;
        return k_.weight(block) * descend(1, assign);
    }

private:
    double descend(std::size_t v, std::vector<std::size_t>& assign) const {
        if (v == earlier_.size()) return 1.0;
        double total = 0.0;
        for (std::size_t b = 0; b < k_.size(); ++b) {
            double factor = k_.weight(b);
            for (std::size_t u : earlier_[v]) factor *= k_.value(assign[u], b);
            if (factor == 0.0) continue;
            assign[v] = b;
            total += factor * descend(v + 1, assign);
        }
        return total;
    }

    const StepKernel& k_;
    std::vector<std::vector<std::size_t>> earlier_;
};

} // namespace detail

/// Homomorphism density t(F, W) by exact enumeration of block assignments:
/// Σ_φ Π_{(i,j)∈E} W[φ(i)][φ(j)] · Π_v w[φ(v)].
///
/// The assignment tree is walked depth-first, one vertex at a time, so
/// isolated vertices contribute Σ w = 1 and zero factors prune subtrees.
/// Work is split by the block of vertex 0 and the partial sums are combined
/// by pairwise summation in block order.
inline double hom_density(const Motif& f, const StepGraphon& g, const HomBudget& budget = {}, unsigned threads = 1) {
    const std::size_t v = f.vertex_count();
    const double assignments = std::pow(static_cast<double>(g.size()), static_cast<double>(v));
    if (v > budget.max_vertices || assignments > budget.max_assignments)
        throw BudgetError("homomorphism enumeration of " + std::to_string(v) + " vertices over " +
                          std::to_string(g.size()) + " blocks exceeds the budget");
    const detail::HomEnumerator walk(f, g.kernel());
    std::vector<double> partial(g.size(), 0.0);
    detail::parallel_for(g.size(), threads, [&](std::size_t b) { partial[b] = walk.from_first_block(b); });
    return detail::pairwise_sum(partial);
}

/// t(C₂, W) = ∫∫ W.
inline double edge_density(const StepGraphon& g) {
    const auto& k = g.kernel();
    double total = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = 0; j < k.size(); ++j) total += k.weight(i) * k.weight(j) * k.value(i, j);
    return total;
}

inline ErrataWitness errata_gap(const StepGraphon& g) {
    const auto& k = g.kernel();
    ErrataWitness w;
    w.t_c2 = edge_density(g);
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = 0; j < k.size(); ++j) w.hs_squared += k.weight(i) * k.weight(j) * k.value(i, j) * k.value(i, j);
    w.gap = w.t_c2 - w.hs_squared;
    return w;
}

/// t(C_k, W) = Σ_i λ_i(S)^k for k ≥ 3, from the eigenvalues of the weighted matrix.
inline double cycle_density_spectral(std::size_t k, const StepGraphon& g) {
    if (k < 3) throw ValidationError("spectral cycle density needs cycle length >= 3");
    const auto eig = jacobi_eigenvalues(weighted_matrix(g.kernel()));
    double total = 0.0;
    for (double l : eig.values) total += std::pow(l, static_cast<double>(k));
    return total;
}

} // namespace graphon
