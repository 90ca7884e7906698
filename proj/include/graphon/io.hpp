#pragma once

#include <chrono>
#include <cstddef>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graphon/error.hpp"
#include "graphon/homomorphism.hpp"
#include "graphon/kernel.hpp"
#include "graphon/norms.hpp"
#include "graphon/random.hpp"
#include "graphon/verify.hpp"

namespace graphon::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// files

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw ValidationError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// field helpers

namespace detail {

inline const json& field(const json& obj, const char* name, const char* what) {
    if (!obj.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
    auto it = obj.find(name);
    if (it == obj.end()) throw ValidationError(std::string(what) + ": missing field '" + name + "'");
    return *it;
}

inline std::vector<double> number_array(const json& j, const std::string& name) {
    if (!j.is_array()) throw ValidationError("field '" + name + "' must be an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw ValidationError("field '" + name + "' must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

inline std::size_t index_value(const json& j, const std::string& name) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ValidationError("field '" + name + "' must hold non-negative integers");
    return j.get<std::size_t>();
}

inline std::vector<std::pair<std::size_t, std::size_t>> edge_list(const json& j) {
    if (!j.is_array()) throw ValidationError("field 'edges' must be an array of [i, j] pairs");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) throw ValidationError("field 'edges' must be an array of [i, j] pairs");
        out.emplace_back(index_value(e[0], "edges"), index_value(e[1], "edges"));
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// kernel file: {"weights": [...], "values": [[...], ...]}

inline json to_json(const StepKernel& k) {
    json values = json::array();
    for (std::size_t i = 0; i < k.size(); ++i) {
        auto r = k.values().row(i);
        values.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return {{"weights", std::vector<double>(k.weights().begin(), k.weights().end())}, {"values", values}};
}

inline StepKernel kernel_from_json(const json& j) {
    auto weights = detail::number_array(detail::field(j, "weights", "kernel"), "weights");
    const auto& vals = detail::field(j, "values", "kernel");
    if (!vals.is_array()) throw ValidationError("field 'values' must be an array of arrays of numbers");
    std::vector<std::vector<double>> rows;
    for (const auto& r : vals) rows.push_back(detail::number_array(r, "values"));
    return make_step_kernel(rows, std::move(weights));
}

inline StepKernel load_kernel(const std::string& path) { return kernel_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// adjacency file: {"n": 4, "edges": [[0, 1], ...]}

inline json to_json(const AdjacencyGraph& g) {
    json edges = json::array();
    for (auto [i, j] : g.edges()) edges.push_back({i, j});
    return {{"n", g.size()}, {"edges", edges}};
}

inline AdjacencyGraph adjacency_from_json(const json& j) {
    const auto n = detail::index_value(detail::field(j, "n", "adjacency"), "n");
    const auto edges = detail::edge_list(detail::field(j, "edges", "adjacency"));
    return AdjacencyGraph::from_edges(n, edges);
}

inline AdjacencyGraph load_adjacency(const std::string& path) { return adjacency_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// motif file: {"vertices": [0, 1, 2], "edges": [[0, 1], ...]}
// "vertices" may also be a plain vertex count.

inline json to_json(const Motif& m) {
    json vertices = json::array();
    for (std::size_t v = 0; v < m.vertex_count(); ++v) vertices.push_back(v);
    json edges = json::array();
    for (auto [i, j] : m.edges()) edges.push_back({i, j});
    return {{"vertices", vertices}, {"edges", edges}};
}

inline Motif motif_from_json(const json& j) {
    const auto& v = detail::field(j, "vertices", "motif");
    std::size_t count = 0;
    if (v.is_array()) {
        count = v.size();
        std::vector<bool> seen(count, false);
        for (const auto& x : v) {
            const auto idx = detail::index_value(x, "vertices");
            if (idx >= count || seen[idx]) throw ValidationError("field 'vertices' must list 0..k-1 exactly once");
            seen[idx] = true;
        }
    } else {
        count = detail::index_value(v, "vertices");
    }
    return Motif::create(count, detail::edge_list(detail::field(j, "edges", "motif")));
}

inline Motif load_motif(const std::string& path) { return motif_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// reports

inline json to_json(const CutCertificate& c) { return {{"s", c.s}, {"t", c.t}, {"value", c.value}}; }
inline json to_json(const SignCertificate& c) { return {{"f", c.f}, {"g", c.g}, {"value", c.value}}; }
inline json to_json(const NormValue& v) { return {{"value", v.value}, {"method", v.method}}; }

inline json to_json(const NormConfig& c) {
    return {{"exact_cut_limit", c.exact_cut_limit},
            {"exact_inf1_limit", c.exact_inf1_limit},
            {"restarts", c.restarts},
            {"seed", c.seed},
            {"rng", std::string(Rng::algorithm)},
            {"op22_tol", c.op22_tol},
            {"jacobi_limit", c.jacobi_limit},
            {"max_iterations", c.max_iterations},
            {"algebraic_tol", c.algebraic_tol},
            {"inequality_tol", c.inequality_tol}};
}

inline json to_json(const NormReport& r) {
    return {{"kernel_digest", r.kernel_digest},
            {"blocks", r.blocks},
            {"cut_norm_1", to_json(r.cut_norm)},
            {"cut_certificate", to_json(r.cut_certificate)},
            {"op_inf1", to_json(r.op_inf1)},
            {"sign_certificate", to_json(r.sign_certificate)},
            {"op_22",
             {{"value", r.op_22.value},
              {"method", r.op_22.method},
              {"iterations", r.op_22.iterations},
              {"residual", r.op_22.residual}}},
            {"hs", {{"value", r.hs}, {"method", "closed-form"}}},
            {"config", to_json(r.config)}};
}

inline json to_json(const InequalityEntry& e) {
    return {{"name", e.name},       {"left", e.left},   {"right", e.right},
            {"slack", e.slack},     {"pass", e.pass},   {"left_method", e.left_method},
            {"right_method", e.right_method}};
}

inline json to_json(const LemmaReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) entries.push_back(to_json(e));
    json j = {{"result", r.result},
              {"kernel_digest", r.kernel_digest},
              {"status", std::string(to_string(r.status))},
              {"tolerance", r.tolerance},
              {"entries", entries}};
    if (!r.note.empty()) j["note"] = r.note;
    if (r.intermediate_bound) j["intermediate_bound"] = *r.intermediate_bound;
    if (r.composed_bound) j["composed_bound"] = *r.composed_bound;
    return j;
}

inline json to_json(const InstanceReport& r, bool with_kernel) {
    json j = {{"index", r.index},
              {"kernel_digest", r.kernel_digest},
              {"blocks", r.kernel.size()},
              {"norms",
               {{"cut_norm_1", to_json(r.norms.cut)}, {"op_inf1", to_json(r.norms.inf1)}, {"op_22", r.norms.op22}}},
              {"checks", {to_json(r.cut_norm_lemma), to_json(r.operator_norm_lemma), to_json(r.proposition)}}};
    if (with_kernel) j["kernel"] = to_json(r.kernel);
    return j;
}

inline json to_json(const FamilySpec& s) {
    return {{"family", std::string(to_string(s.kind))},
            {"n_min", s.n_min},
            {"n_max", s.n_max},
            {"count", s.count},
            {"seed", s.seed},
            {"weights", std::string(to_string(s.weights))},
            {"rng", std::string(Rng::algorithm)}};
}

inline json to_json(const FamilyReport& r) {
    const auto& a = r.summary;
    json worst = json::object();
    for (const auto& [name, w] : a.worst_slack) worst[name] = {{"slack", w.slack}, {"instance", w.instance}};
    json failing = json::array();
    for (auto i : a.failing_instances) failing.push_back(to_json(r.instances[i], true));
    json worst_instances = json::object();
    if (a.worst_inf1_over_cut_instance)
        worst_instances["inf1_over_cut"] = {{"ratio", a.worst_inf1_over_cut},
                                            {"instance", to_json(r.instances[*a.worst_inf1_over_cut_instance], true)}};
    if (a.worst_op22_over_sqrt_cut_instance)
        worst_instances["op22_over_sqrt_cut"] = {
            {"ratio", a.worst_op22_over_sqrt_cut},
            {"instance", to_json(r.instances[*a.worst_op22_over_sqrt_cut_instance], true)}};
    json instances = json::array();
    for (const auto& inst : r.instances) instances.push_back(to_json(inst, inst.failed()));
    return {{"generator", to_json(r.spec)},
            {"aggregate",
             {{"count", a.count},
              {"conclusive", a.conclusive},
              {"passed", a.passed},
              {"failed", a.failed},
              {"worst_slack", worst},
              {"worst_ratio_instances", worst_instances}}},
            {"failing_instances", failing},
            {"instances", instances}};
}

inline json to_json(const ErrataWitness& w) {
    return {{"t_c2", w.t_c2}, {"hs_squared", w.hs_squared}, {"gap", w.gap}};
}

/// Report file: schema version, kind, a volatile header (timestamps, timing,
/// threads) and a payload that depends only on the inputs and flags.
inline json envelope(const std::string& kind, json payload, double elapsed_ms, unsigned threads) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream stamp;
    stamp << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return {{"schema_version", kSchemaVersion},
            {"kind", kind},
            {"header", {{"generated_at", stamp.str()}, {"elapsed_ms", elapsed_ms}, {"threads", threads}}},
            {"payload", std::move(payload)}};
}

} // namespace graphon::io
