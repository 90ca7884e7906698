#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphon/error.hpp"
#include "graphon/kernel.hpp"
#include "graphon/norms.hpp"
#include "graphon/parallel.hpp"
#include "graphon/random.hpp"

namespace graphon {

enum class CheckStatus { pass, fail, non_conclusive };

inline std::string_view to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::non_conclusive: return "non-conclusive";
    }
    return "unknown";
}

/// One inequality left <= right.
struct InequalityEntry {
    std::string name;
    double left = 0.0;
    double right = 0.0;
    double slack = 0.0; // right - left
    bool pass = false;  // slack >= -tolerance
    std::string left_method;
    std::string right_method;
};

struct LemmaReport {
    std::string result; // cut-norm-lemma | operator-norm-lemma | proposition
    std::string kernel_digest;
    CheckStatus status = CheckStatus::non_conclusive;
    std::string note;
    double tolerance = kSpectralTol;
    std::vector<InequalityEntry> entries;
    // proposition only: √(2·inf1) and √(2·4·cut), the two steps of the upper-bound chain
    std::optional<double> intermediate_bound;
    std::optional<double> composed_bound;
};

/// Norm values needed by the three checks, with their method tags.
struct NormTriple {
    NormValue cut;
    NormValue inf1;
    double op22 = 0.0;
    double max_abs_value = 0.0;

    bool exact() const { return cut.method == kMethodExact && inf1.method == kMethodExact; }
};

inline NormTriple compute_norm_triple(const StepKernel& k, const NormConfig& config = {}) {
    NormTriple t;
    if (k.size() <= config.exact_cut_limit)
        t.cut = {cut_norm_exact(k, config.exact_cut_limit, config.threads).value, std::string(kMethodExact)};
    else
        t.cut = {cut_norm_heuristic(k, config.restarts, config.seed).value, std::string(kMethodHeuristic)};
    if (k.size() <= config.exact_inf1_limit)
        t.inf1 = {op_norm_inf1_exact(k, config.exact_inf1_limit, config.threads).value, std::string(kMethodExact)};
    else
        t.inf1 = {op_norm_inf1_heuristic(k, config.restarts, config.seed).value, std::string(kMethodHeuristic)};
    t.op22 = op_norm_22(k, config.op22_tol, config.jacobi_limit, config.max_iterations).value;
    for (double v : k.values().data()) t.max_abs_value = std::max(t.max_abs_value, std::abs(v));
    return t;
}

namespace detail {

inline InequalityEntry inequality(std::string name, double left, const std::string& left_method, double right,
                                  const std::string& right_method, double tol) {
    InequalityEntry e{std::move(name), left, right, right - left, false, left_method, right_method};
    e.pass = e.slack >= -tol;
    return e;
}

// Heuristic values are lower bounds and cannot certify an upper bound; the
// square-root upper bounds also assume |W| <= 1.
inline void settle(LemmaReport& r, bool exact, bool needs_unit_bound, double max_abs, double tol) {
    r.tolerance = tol;
    if (!exact) {
        r.status = CheckStatus::non_conclusive;
        r.note = "block count exceeds the exact limit; heuristic lower bounds cannot certify the inequalities";
        return;
    }
    if (needs_unit_bound && max_abs > 1.0) {
        r.status = CheckStatus::non_conclusive;
        r.note = "kernel values exceed 1 in magnitude; the square-root upper bound assumes |W| <= 1";
        return;
    }
    r.status = std::ranges::all_of(r.entries, [](const auto& e) { return e.pass; }) ? CheckStatus::pass
                                                                                    : CheckStatus::fail;
}

} // namespace detail

/// cut <= inf1 <= 4 cut
inline LemmaReport check_cut_norm_lemma(const std::string& digest, const NormTriple& n, double tol = kSpectralTol) {
    LemmaReport r;
    r.result = "cut-norm-lemma";
    r.kernel_digest = digest;
    r.entries.push_back(detail::inequality("cut <= inf1", n.cut.value, n.cut.method, n.inf1.value, n.inf1.method, tol));
    r.entries.push_back(
        detail::inequality("inf1 <= 4*cut", n.inf1.value, n.inf1.method, 4.0 * n.cut.value, n.cut.method, tol));
    detail::settle(r, n.exact(), false, n.max_abs_value, tol);
    return r;
}

/// inf1 <= op22 <= √(2 inf1)
inline LemmaReport check_operator_norm_lemma(const std::string& digest, const NormTriple& n,
                                             double tol = kSpectralTol) {
    LemmaReport r;
    r.result = "operator-norm-lemma";
    r.kernel_digest = digest;
    const std::string spectral = "jacobi/power";
    r.entries.push_back(detail::inequality("inf1 <= op22", n.inf1.value, n.inf1.method, n.op22, spectral, tol));
    r.entries.push_back(detail::inequality("op22 <= sqrt(2*inf1)", n.op22, spectral, std::sqrt(2.0 * n.inf1.value),
                                           n.inf1.method, tol));
    detail::settle(r, n.exact(), true, n.max_abs_value, tol);
    return r;
}

/// cut <= op22 <= √(8 cut), with the composed chain op22 <= √(2 inf1) <= √(2·4 cut) recorded.
inline LemmaReport check_proposition(const std::string& digest, const NormTriple& n, double tol = kSpectralTol) {
    LemmaReport r;
    r.result = "proposition";
    r.kernel_digest = digest;
    const std::string spectral = "jacobi/power";
    r.entries.push_back(detail::inequality("cut <= op22", n.cut.value, n.cut.method, n.op22, spectral, tol));
    r.entries.push_back(
        detail::inequality("op22 <= sqrt(8*cut)", n.op22, spectral, std::sqrt(8.0 * n.cut.value), n.cut.method, tol));
    r.intermediate_bound = std::sqrt(2.0 * n.inf1.value);
    r.composed_bound = std::sqrt(2.0 * (4.0 * n.cut.value));
    detail::settle(r, n.exact(), true, n.max_abs_value, tol);
    return r;
}

inline LemmaReport check_cut_norm_lemma(const StepKernel& k, const NormConfig& config = {}) {
    return check_cut_norm_lemma(kernel_digest(k), compute_norm_triple(k, config), config.inequality_tol);
}
inline LemmaReport check_operator_norm_lemma(const StepKernel& k, const NormConfig& config = {}) {
    return check_operator_norm_lemma(kernel_digest(k), compute_norm_triple(k, config), config.inequality_tol);
}
inline LemmaReport check_proposition(const StepKernel& k, const NormConfig& config = {}) {
    return check_proposition(kernel_digest(k), compute_norm_triple(k, config), config.inequality_tol);
}

enum class WeightMode { uniform, dirichlet };

inline std::string_view to_string(WeightMode m) { return m == WeightMode::uniform ? "uniform" : "dirichlet"; }

/// Random symmetric kernel: upper-triangle values (row-major, diagonal
/// included) uniform on [lo, hi]; weights 1/n or normalized Exp(1) draws.
inline StepKernel random_step_kernel(std::size_t n, double lo, double hi, WeightMode mode, std::uint64_t seed) {
    if (n == 0) throw ValidationError("random kernel needs at least one block");
    if (!(lo <= hi) || lo < -1.0 || hi > 1.0) throw ValidationError("value range must satisfy -1 <= lo <= hi <= 1");
    Rng rng(seed);
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = lo == hi ? lo : rng.uniform(lo, hi);
    std::vector<double> w;
    if (mode == WeightMode::uniform) {
        w = uniform_weights(n);
    } else {
        w.resize(n);
        double total = 0.0;
        for (auto& x : w) {
            do x = -std::log1p(-rng.uniform());
            while (x <= 0.0);
            total += x;
        }
        for (auto& x : w) x /= total;
    }
    return StepKernel::create(std::move(m), std::move(w));
}

enum class FamilyKind { graphon, difference };

inline std::string_view to_string(FamilyKind k) { return k == FamilyKind::graphon ? "graphon" : "difference"; }

struct FamilySpec {
    FamilyKind kind = FamilyKind::graphon;
    std::size_t n_min = 1;
    std::size_t n_max = 10;
    std::size_t count = 200;
    std::uint64_t seed = 0;
    WeightMode weights = WeightMode::uniform;
};

struct InstanceReport {
    std::size_t index = 0;
    StepKernel kernel;
    std::string kernel_digest;
    NormTriple norms;
    LemmaReport cut_norm_lemma;
    LemmaReport operator_norm_lemma;
    LemmaReport proposition;

    bool failed() const {
        return cut_norm_lemma.status == CheckStatus::fail || operator_norm_lemma.status == CheckStatus::fail ||
               proposition.status == CheckStatus::fail;
    }
    bool conclusive() const {
        return cut_norm_lemma.status != CheckStatus::non_conclusive &&
               operator_norm_lemma.status != CheckStatus::non_conclusive &&
               proposition.status != CheckStatus::non_conclusive;
    }
    std::vector<const InequalityEntry*> entries() const {
        std::vector<const InequalityEntry*> out;
        for (const auto* r : {&cut_norm_lemma, &operator_norm_lemma, &proposition})
            for (const auto& e : r->entries) out.push_back(&e);
        return out;
    }
};

inline InstanceReport check_all(const StepKernel& k, const NormConfig& config = {}, std::size_t index = 0) {
    const auto digest = kernel_digest(k);
    const auto norms = compute_norm_triple(k, config);
    const double tol = config.inequality_tol;
    return {index,
            k,
            digest,
            norms,
            check_cut_norm_lemma(digest, norms, tol),
            check_operator_norm_lemma(digest, norms, tol),
            check_proposition(digest, norms, tol)};
}

struct WorstSlack {
    double slack = std::numeric_limits<double>::infinity();
    std::size_t instance = 0;
};

struct FamilyAggregate {
    std::size_t count = 0;
    std::size_t conclusive = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::map<std::string, WorstSlack> worst_slack; // by inequality name
    double worst_inf1_over_cut = 0.0;              // observed max of inf1 / cut
    std::optional<std::size_t> worst_inf1_over_cut_instance;
    double worst_op22_over_sqrt_cut = 0.0;         // observed max of op22 / √cut
    std::optional<std::size_t> worst_op22_over_sqrt_cut_instance;
    std::vector<std::size_t> failing_instances;

    bool all_pass() const { return failed == 0; }
};

inline FamilyAggregate aggregate(const std::vector<InstanceReport>& instances) {
    FamilyAggregate a;
    a.count = instances.size();
    for (std::size_t pos = 0; pos < instances.size(); ++pos) {
        const auto& inst = instances[pos];
        if (inst.conclusive()) ++a.conclusive;
        if (inst.failed()) {
            ++a.failed;
            a.failing_instances.push_back(pos);
        } else if (inst.conclusive()) {
            ++a.passed;
        }
        for (const auto* e : inst.entries()) {
            auto& w = a.worst_slack[e->name];
            if (e->slack < w.slack) w = {e->slack, pos};
        }
        const double cut = inst.norms.cut.value;
        if (cut > 0.0) {
            const double r1 = inst.norms.inf1.value / cut;
            if (r1 > a.worst_inf1_over_cut) {
                a.worst_inf1_over_cut = r1;
                a.worst_inf1_over_cut_instance = pos;
            }
            const double r2 = inst.norms.op22 / std::sqrt(cut);
            if (r2 > a.worst_op22_over_sqrt_cut) {
                a.worst_op22_over_sqrt_cut = r2;
                a.worst_op22_over_sqrt_cut_instance = pos;
            }
        }
    }
    return a;
}

struct FamilyReport {
    FamilySpec spec;
    std::vector<InstanceReport> instances;
    FamilyAggregate summary;
};

/// Kernels of a family in instance order. A master stream seeded by the
/// family seed draws each block count and per-kernel seed.
inline std::vector<StepKernel> generate_family(const FamilySpec& spec) {
    if (spec.count == 0) return {};
    if (spec.n_min == 0 || spec.n_min > spec.n_max) throw ValidationError("family size range must satisfy 1 <= min <= max");
    Rng master(spec.seed);
    std::vector<StepKernel> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const auto n = static_cast<std::size_t>(
            master.integer(static_cast<std::int64_t>(spec.n_min), static_cast<std::int64_t>(spec.n_max)));
        const std::uint64_t s = master.next_u64();
        auto a = random_step_kernel(n, 0.0, 1.0, spec.weights, s);
        if (spec.kind == FamilyKind::graphon) {
            out.push_back(std::move(a));
            continue;
        }
        const auto n2 = static_cast<std::size_t>(
            master.integer(static_cast<std::int64_t>(spec.n_min), static_cast<std::int64_t>(spec.n_max)));
        const std::uint64_t s2 = master.next_u64();
        auto b = random_step_kernel(n2, 0.0, 1.0, spec.weights, s2);
        out.push_back(kernel_difference(a, b));
    }
    return out;
}

/// Runs all three checks over a seeded random family.
inline FamilyReport verify_family(const FamilySpec& spec, const NormConfig& config = {}) {
    FamilyReport report;
    report.spec = spec;
    const auto kernels = generate_family(spec);
    std::vector<std::optional<InstanceReport>> slots(kernels.size());
    NormConfig inner = config;
    inner.threads = 1;
    detail::parallel_for(kernels.size(), config.threads,
                         [&](std::size_t i) { slots[i] = check_all(kernels[i], inner, i); });
    report.instances.reserve(slots.size());
    for (auto& s : slots) report.instances.push_back(std::move(*s));
    report.summary = aggregate(report.instances);
    return report;
}

} // namespace graphon
