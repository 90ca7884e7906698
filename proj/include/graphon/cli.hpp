#pragma once

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphon/error.hpp"
#include "graphon/homomorphism.hpp"
#include "graphon/io.hpp"
#include "graphon/kernel.hpp"
#include "graphon/norms.hpp"
#include "graphon/parallel.hpp"
#include "graphon/verify.hpp"

namespace graphon::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kNonConvergence = 3,
    kInequalityFalsified = 4,
    kBudgetExceeded = 5,
};

struct CliConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::string out;
    std::optional<std::size_t> exact_limit;
    std::optional<double> tol;
    std::optional<long> max_iterations;
    std::uint64_t seed = 0;
    int restarts = 50;
    unsigned threads = detail::default_threads();
    bool verbose = false;

    // verify
    std::vector<std::size_t> random;
    std::string family_kind = "graphon";
    std::string weight_mode = "uniform";

    // hom
    bool spectral_check = false;

    // gen / sample
    std::string family;
    std::vector<double> params;
    std::size_t resolution = 1;
    std::size_t nodes = 0;
    bool as_kernel = false;

    NormConfig norm_config() const {
        NormConfig c;
        if (exact_limit) c.exact_cut_limit = c.exact_inf1_limit = *exact_limit;
        if (tol) c.op22_tol = *tol;
        if (max_iterations) c.max_iterations = *max_iterations;
        c.seed = seed;
        c.restarts = restarts;
        c.threads = threads;
        return c;
    }
};

namespace detail {

inline std::string real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Command {
public:
    Command(const CliConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

    int run() {
        const auto& s = cfg_.subcommand;
        if (s == "norms") return norms();
        if (s == "verify") return verify();
        if (s == "hom") return hom();
        if (s == "errata") return errata();
        if (s == "gen") return gen();
        if (s == "sample") return sample();
        err_ << "unknown subcommand '" << s << "'\n";
        return kInputError;
    }

private:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

    void emit_report(const std::string& kind, io::json payload) const {
        if (cfg_.out.empty()) return;
        io::write_json_file(cfg_.out, io::envelope(kind, std::move(payload), elapsed_ms(), cfg_.threads));
        if (cfg_.verbose) err_ << "wrote " << cfg_.out << '\n';
    }

    // Data files (kernels, graphs) go to --out, or to stdout without it.
    void emit_data(const io::json& j) const {
        if (cfg_.out.empty())
            out_ << j.dump(2) << '\n';
        else
            io::write_json_file(cfg_.out, j);
    }

    int norms() {
        const auto k = io::load_kernel(cfg_.inputs.at(0));
        const auto r = full_norm_report(k, cfg_.norm_config());
        out_ << "cut_norm_1 " << real(r.cut_norm.value) << ' ' << r.cut_norm.method << '\n'
             << "op_inf1 " << real(r.op_inf1.value) << ' ' << r.op_inf1.method << '\n'
             << "op_22 " << real(r.op_22.value) << ' ' << r.op_22.method << '\n'
             << "hs " << real(r.hs) << " closed-form\n";
        emit_report("norm_report", io::to_json(r));
        return kOk;
    }

    void print_instance(const InstanceReport& inst) const {
        for (const auto* rep : {&inst.cut_norm_lemma, &inst.operator_norm_lemma, &inst.proposition}) {
            out_ << rep->result << ' ' << to_string(rep->status) << '\n';
            for (const auto& e : rep->entries)
                out_ << "  " << e.name << " left " << real(e.left) << " right " << real(e.right) << " slack "
                     << real(e.slack) << '\n';
            if (!rep->note.empty()) out_ << "  note: " << rep->note << '\n';
        }
    }

    int verify() {
        const auto config = cfg_.norm_config();
        const bool random = !cfg_.random.empty();
        if (random == !cfg_.inputs.empty()) {
            err_ << "verify takes either a kernel file or --random N COUNT\n";
            return kInputError;
        }
        if (!random) {
            const auto k = io::load_kernel(cfg_.inputs[0]);
            const auto inst = check_all(k, config);
            print_instance(inst);
            emit_report("lemma_report", io::to_json(inst, true));
            return inst.failed() ? kInequalityFalsified : kOk;
        }

        FamilySpec spec;
        if (cfg_.family_kind == "graphon")
            spec.kind = FamilyKind::graphon;
        else if (cfg_.family_kind == "difference")
            spec.kind = FamilyKind::difference;
        else
            throw ValidationError("unknown family kind '" + cfg_.family_kind + "'");
        spec.weights = cfg_.weight_mode == "dirichlet" ? WeightMode::dirichlet : WeightMode::uniform;
        spec.n_min = 1;
        spec.n_max = cfg_.random[0];
        spec.count = cfg_.random[1];
        spec.seed = cfg_.seed;
        const auto report = verify_family(spec, config);
        const auto& a = report.summary;
        out_ << "instances " << a.count << " conclusive " << a.conclusive << " passed " << a.passed << " failed "
             << a.failed << '\n';
        for (const auto& [name, w] : a.worst_slack)
            out_ << "worst slack " << name << ' ' << real(w.slack) << " (instance " << w.instance << ")\n";
        if (a.worst_inf1_over_cut_instance) out_ << "worst ratio inf1/cut " << real(a.worst_inf1_over_cut) << '\n';
        if (a.worst_op22_over_sqrt_cut_instance)
            out_ << "worst ratio op22/sqrt(cut) " << real(a.worst_op22_over_sqrt_cut) << '\n';
        out_ << (a.all_pass() ? "PASS" : "FAIL") << '\n';
        emit_report("family_report", io::to_json(report));
        return a.all_pass() ? kOk : kInequalityFalsified;
    }

    static std::optional<std::size_t> cycle_length(const Motif& m) {
        const std::size_t n = m.vertex_count();
        if (n < 3 || m.edges().size() != n) return std::nullopt;
        std::vector<std::vector<std::size_t>> adj(n);
        for (auto [i, j] : m.edges()) {
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
        for (const auto& a : adj)
            if (a.size() != 2) return std::nullopt;
        // 2-regular; a cycle iff connected.
        std::size_t prev = 0, cur = adj[0][0], steps = 1;
        while (cur != 0) {
            const std::size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
            prev = cur;
            cur = next;
            ++steps;
        }
        return steps == n ? std::optional<std::size_t>(n) : std::nullopt;
    }

    int hom() {
        const auto motif = io::load_motif(cfg_.inputs.at(0));
        const auto g = StepGraphon::from_kernel(io::load_kernel(cfg_.inputs.at(1)));
        const double t = hom_density(motif, g, {}, cfg_.threads);
        out_ << "t " << real(t) << '\n';
        io::json payload = {{"motif", io::to_json(motif)}, {"kernel_digest", kernel_digest(g)}, {"t", t}};
        if (cfg_.spectral_check) {
            const auto k = cycle_length(motif);
            if (!k) {
                err_ << "--spectral-check requires a cycle motif with at least 3 vertices\n";
                return kInputError;
            }
            const double spectral = cycle_density_spectral(*k, g);
            out_ << "spectral " << real(spectral) << '\n' << "difference " << real(t - spectral) << '\n';
            payload["spectral"] = spectral;
            payload["difference"] = t - spectral;
        }
        emit_report("hom_report", payload);
        return kOk;
    }

    int errata() {
        const auto g = StepGraphon::from_kernel(io::load_kernel(cfg_.inputs.at(0)));
        const auto w = errata_gap(g);
        out_ << "t_c2 " << real(w.t_c2) << '\n'
             << "hs_squared " << real(w.hs_squared) << '\n'
             << "gap " << real(w.gap) << '\n';
        auto payload = io::to_json(w);
        payload["kernel_digest"] = kernel_digest(g);
        emit_report("errata_report", payload);
        return kOk;
    }

    int gen() {
        const auto g = builtin_graphon(cfg_.family, cfg_.params, cfg_.resolution);
        emit_data(io::to_json(g.kernel()));
        return kOk;
    }

    int sample() {
        const auto g = StepGraphon::from_kernel(io::load_kernel(cfg_.inputs.at(0)));
        const auto graph = sample_graph(g, cfg_.nodes, cfg_.seed);
        emit_data(cfg_.as_kernel ? io::to_json(graphon_from_adjacency(graph).kernel()) : io::to_json(graph));
        return kOk;
    }

    const CliConfig& cfg_;
    std::ostream& out_;
    std::ostream& err_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace detail

inline void add_common(CLI::App* sub, CliConfig& cfg) {
    sub->add_option("--out,-o", cfg.out, "Output path");
    sub->add_option("--seed", cfg.seed, "Random seed (default 0)");
    sub->add_option("--restarts", cfg.restarts, "Heuristic restarts (default 50)")->check(CLI::PositiveNumber);
    sub->add_option("--exact-limit", cfg.exact_limit, "Largest block count solved exactly (default 20 cut, 21 inf-1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "Relative residual tolerance of the spectral norm (default 1e-9)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iterations", cfg.max_iterations, "Power-iteration cap above 512 blocks (default 100000)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", cfg.threads, "Worker threads (default: available cores)")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose,-v", cfg.verbose, "Diagnostics on stderr");
}

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CliConfig cfg;
    CLI::App app{"Step graphon norms, homomorphism densities and norm-inequality checks", "graphon"};
    app.require_subcommand(1);

    auto* norms = app.add_subcommand("norms", "Cut, inf-1, 2-2 and Hilbert-Schmidt norms of a kernel");
    norms->add_option("kernel", cfg.inputs, "Kernel file")->required()->expected(1);

    auto* verify = app.add_subcommand("verify", "Check the cut/operator norm inequalities");
    verify->add_option("kernel", cfg.inputs, "Kernel file")->expected(0, 1);
    verify->add_option("--random", cfg.random, "Random family: max block count N and instance COUNT")->expected(2);
    verify->add_option("--family", cfg.family_kind, "Random family kind")
        ->check(CLI::IsMember({"graphon", "difference"}));
    verify->add_option("--weights", cfg.weight_mode, "Block weights of random kernels")
        ->check(CLI::IsMember({"uniform", "dirichlet"}));

    auto* hom = app.add_subcommand("hom", "Homomorphism density t(F, W)");
    hom->add_option("motif", cfg.inputs, "Motif file, then graphon kernel file")->required()->expected(2);
    hom->add_flag("--spectral-check", cfg.spectral_check, "Cross-check cycle densities against eigenvalues");

    auto* errata = app.add_subcommand("errata", "Edge density versus squared Hilbert-Schmidt norm");
    errata->add_option("kernel", cfg.inputs, "Graphon kernel file")->required()->expected(1);

    auto* gen = app.add_subcommand("gen", "Discretize a named graphon family");
    gen->add_option("--family", cfg.family, "constant | product | min | sbm | exp-decay")->required();
    gen->add_option("--params", cfg.params, "Comma-separated family parameters")->delimiter(',');
    gen->add_option("--resolution", cfg.resolution, "Number of uniform blocks")->check(CLI::PositiveNumber);

    auto* sample = app.add_subcommand("sample", "Draw a W-random graph");
    sample->add_option("kernel", cfg.inputs, "Graphon kernel file")->required()->expected(1);
    sample->add_option("--nodes", cfg.nodes, "Number of vertices")->required()->check(CLI::PositiveNumber);
    sample->add_flag("--as-kernel", cfg.as_kernel, "Emit the induced step graphon instead of the graph");

    for (auto* sub : {norms, verify, hom, errata, gen, sample}) add_common(sub, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kInputError;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    try {
        return detail::Command(cfg, out, err).run();
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (iterations " << e.iterations() << ", residual " << detail::real(e.residual())
            << ")\n";
        return kNonConvergence;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << '\n';
        return kBudgetExceeded;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

} // namespace graphon::cli
