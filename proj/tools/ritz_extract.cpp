#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ritz/krylov.hpp"
#include "ritz/trace.hpp"
#include "ritz/verify.hpp"

namespace fs = std::filesystem;
using namespace ritz;

namespace {

struct CommonOpts {
    std::string matrix;
    std::string method = "jd";
    std::size_t subspace_max = 200;
    std::size_t restart_len = 10;
    std::size_t gmres_iters = 20;
    std::string target = "rightmost";
    double tol = 1e-8;
    std::size_t max_outer = 200;
    std::string initial = "uniform";
    std::uint64_t seed = 0;
    std::string out = ".";
    bool no_refined = false;
};

void add_solver_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--matrix", o.matrix, "Matrix Market input file");
    cmd->add_option("--method", o.method, "jd or arnoldi")
        ->check(CLI::IsMember({"jd", "arnoldi"}));
    cmd->add_option("--subspace-max", o.subspace_max, "JD search space cap");
    cmd->add_option("--restart-len", o.restart_len, "Arnoldi steps per restart");
    cmd->add_option("--gmres-iters", o.gmres_iters, "inner GMRES iterations");
    cmd->add_option("--target", o.target, "rightmost or largest-magnitude")
        ->check(CLI::IsMember({"rightmost", "largest-magnitude"}));
    cmd->add_option("--tol", o.tol, "convergence tolerance on the LLS residual");
    cmd->add_option("--max-outer", o.max_outer, "outer iteration / restart cap");
    cmd->add_option("--initial", o.initial, "uniform, ones, or a vector file path");
    cmd->add_option("--seed", o.seed, "rng seed recorded in the config");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_flag("--no-refined", o.no_refined, "skip the refined vector each step");
    cmd->set_config("--config", "", "key=value config file; flags override it");
}

SolverConfig to_solver_config(const CommonOpts& o) {
    SolverConfig cfg;
    cfg.method = o.method == "arnoldi" ? SolverMethod::Arnoldi : SolverMethod::Jd;
    cfg.target = o.target == "largest-magnitude" ? SelectionRule::LargestMagnitude
                                                 : SelectionRule::Rightmost;
    cfg.subspace_max = o.subspace_max;
    cfg.restart_len = o.restart_len;
    cfg.gmres_iters = o.gmres_iters;
    cfg.tol = o.tol;
    cfg.max_outer = o.max_outer;
    cfg.seed = o.seed;
    cfg.compute_refined_every_step = !o.no_refined;
    if (o.initial == "uniform") {
        cfg.initial = InitialVector::Uniform;
    } else if (o.initial == "ones") {
        cfg.initial = InitialVector::Ones;
    } else {
        cfg.initial = InitialVector::File;
        cfg.initial_file = o.initial;
    }
    return cfg;
}

CsrMatrix load_matrix_or_exit2(const std::string& path) {
    if (path.empty()) {
        std::cerr << "cannot read matrix: no --matrix given\n";
        std::exit(2);
    }
    try {
        return load_matrix_market(path);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        std::exit(2);
    }
}

int cmd_run(const CommonOpts& o, bool emit_plots) {
    CsrMatrix A = load_matrix_or_exit2(o.matrix);
    SolverConfig cfg = to_solver_config(o);
    SolverResult res = run_solver(A, cfg);

    fs::create_directories(o.out);
    const std::string trace_path = (fs::path(o.out) / "trace.csv").string();
    write_trace_file(trace_path, res.trace);
    if (emit_plots) emit_plot_scripts(trace_path, o.out);

    double max_tau = 0, ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = 0;
    for (const auto& r : res.trace) {
        max_tau = std::max(max_tau, r.tau);
        if (!r.flags.any() && r.ratio > 0) {
            ratio_lo = std::min(ratio_lo, r.ratio);
            ratio_hi = std::max(ratio_hi, r.ratio);
        }
    }
    std::cout << "iterations: " << res.trace.size() << "\n"
              << "converged: " << (res.converged ? "yes" : "no") << "\n"
              << "theta: " << res.theta.real() << (res.theta.imag() < 0 ? " - " : " + ")
              << std::abs(res.theta.imag()) << "i\n"
              << "max tau: " << max_tau << "\n";
    if (ratio_hi > 0)
        std::cout << "K/sigma^2 range: [" << ratio_lo << ", " << ratio_hi << "]\n";
    std::cout << "trace: " << trace_path << "\n";
    return res.converged ? 0 : 1;
}

int cmd_verify(std::size_t n, std::size_t k, std::size_t instances, std::uint64_t seed) {
    if (std::getenv("RITZ_EXTRACT_CORRUPT_TAU")) {
        // negative control: corrupt tau and confirm the suite catches it
        for (std::size_t i = 0; i < instances; ++i) {
            VerifyInstance inst = make_instance(n, k, seed * 1000003ull + i);
            if (inst.report.flags.any()) continue;
            inst.report.lls.tau *= 1.01;
            for (const auto& c : identity_suite(inst.report, inst.M)) {
                if (!c.skipped && c.gating && !c.pass) {
                    std::cout << "FAIL instance " << i << ": " << c.name << "\n";
                    return 1;
                }
            }
        }
        std::cout << "corruption not detected\n";
        return 1;
    }

    VerifySummary summary = run_verify(n, k, instances, seed, &std::cout);
    if (!summary.first_failure.empty()) {
        std::cout << "FAIL " << summary.first_failure << "\n";
        return 1;
    }
    std::cout << "all checks passed\n";
    return 0;
}

int cmd_plot(const std::string& trace_path, const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (const auto& path : emit_plot_scripts(trace_path, out_dir))
        std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_extract(const CommonOpts& o, std::size_t k) {
    CsrMatrix A = load_matrix_or_exit2(o.matrix);
    if (k > A.n) {
        std::cerr << "k exceeds the matrix dimension\n";
        return 1;
    }
    SolverConfig cfg = to_solver_config(o);
    ComplexVector v0 = make_initial_vector(cfg, A.n);
    auto fact = ArnoldiFactorization::start(v0);
    arnoldi_expand(A, fact, k - 1);
    ComplexDenseMatrix V = fact.breakdown ? orthonormalize(fact.basis())
                                          : ComplexDenseMatrix(fact.V);

    ExtractOptions opts;
    opts.select = cfg.target;
    opts.compute_refined = true;
    ExtractionReport rep = extract(A, V, opts);

    std::cout.precision(17);
    std::cout << "basis size: " << V.cols() << "\n"
              << "theta: " << rep.ritz.theta.real() << " + " << rep.ritz.theta.imag()
              << "i\n"
              << "r2_y: " << rep.ritz.residual_norm_sq << "\n"
              << "K: " << rep.lls.K << "\n"
              << "rho_s: " << rep.lls.rho_s << "\n"
              << "tau: " << rep.lls.tau << "\n"
              << "znorm_sq: " << rep.lls.znorm_sq << "\n"
              << "L: " << rep.bound_lower << "  U: " << rep.bound_upper << "\n"
              << "sigma^2 predicted: [" << rep.sigma_pred_lo << ", " << rep.sigma_pred_hi
              << "]\n";
    if (rep.refined) {
        std::cout << "sigma^2: " << rep.refined->sigma_sq << "\n";
        if (rep.refined->sigma_sq > 0)
            std::cout << "K/sigma^2: " << rep.lls.K / rep.refined->sigma_sq << "\n";
    }
    std::cout << "flags: " << to_string(rep.flags) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eigenpair extraction experiments: Rayleigh-Ritz, refined, LLS"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    bool emit_plots = false;
    auto* run = app.add_subcommand("run", "run a solver and write the CSV trace");
    add_solver_flags(run, run_opts);
    run->add_flag("--emit-plots", emit_plots, "also write gnuplot scripts");

    std::size_t v_n = 60, v_k = 8, v_instances = 100;
    std::uint64_t v_seed = 7;
    auto* verify = app.add_subcommand("verify", "run the identity suite on random instances");
    verify->add_option("--n", v_n, "instance dimension")->check(CLI::PositiveNumber);
    verify->add_option("--k", v_k, "basis size")->check(CLI::Range(std::size_t{2}, std::size_t{512}));
    verify->add_option("--instances", v_instances, "instance count")->check(CLI::PositiveNumber);
    verify->add_option("--seed", v_seed, "base seed");

    std::string plot_trace, plot_out = ".";
    auto* plot = app.add_subcommand("plot", "emit gnuplot scripts for a trace");
    plot->add_option("--trace", plot_trace, "trace CSV path")->required();
    plot->add_option("--out", plot_out, "output directory");

    CommonOpts ex_opts;
    std::size_t ex_k = 5;
    auto* ext = app.add_subcommand("extract", "one-shot extraction on an Arnoldi basis");
    add_solver_flags(ext, ex_opts);
    ext->add_option("--k", ex_k, "Arnoldi basis size")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_opts, emit_plots);
        if (verify->parsed()) {
            if (v_n < v_k) {
                std::cerr << "need n >= k\n";
                return 1;
            }
            return cmd_verify(v_n, v_k, v_instances, v_seed);
        }
        if (plot->parsed()) return cmd_plot(plot_trace, plot_out);
        if (ext->parsed()) return cmd_extract(ex_opts, ex_k);
    } catch (const BadTraceError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 1;
}
