// mcabs command line: generate synthetic chains, decompose them, evaluate the
// abstraction, and run parameter sweeps. Everything goes through flat CSV
// files; see README for the formats.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "mcabs/eval.hpp"
#include "mcabs/generate.hpp"
#include "mcabs/harness.hpp"
#include "mcabs/io.hpp"
#include "mcabs/solver.hpp"

namespace {

// Input transition matrices from disk get a looser feasibility check than
// internally built ones; CSV files from other tools rarely hit 1e-9.
constexpr double kInputTol = 1e-6;

mcabs::StepPolicy parse_policy(const std::string& s) {
    return s == "constant" ? mcabs::StepPolicy::kConstant : mcabs::StepPolicy::kAdaptive;
}

struct GenerateArgs {
    int states = 0;
    int rank = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string out_factors;
};

int run_generate(const GenerateArgs& a) {
    const mcabs::LowRankChain chain = mcabs::gen_lowrank_transition({a.states, a.rank, a.seed});
    mcabs::store_matrix(a.out, chain.transition.entries());
    if (!a.out_factors.empty()) {
        mcabs::store_matrix(a.out_factors + ".U.csv", chain.ground_truth.u());
        mcabs::store_matrix(a.out_factors + ".P.csv", chain.ground_truth.pk());
        mcabs::store_matrix(a.out_factors + ".V.csv", chain.ground_truth.v());
    }
    return 0;
}

struct DecomposeArgs {
    std::string input;
    int kernel_size = 0;
    std::string policy = "adaptive";
    double c = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double lambda = 0.0;
    double lambda_u = 0.0;
    double lambda_v = 0.0;
    bool lambda_u_set = false;
    bool lambda_v_set = false;
    int max_iters = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::string out_prefix;
    bool paper_literal_steps = false;
    bool threshold_scaling = false;
};

int run_decompose(const DecomposeArgs& a) {
    const mcabs::TransitionMatrix p(mcabs::load_matrix(a.input), kInputTol);

    mcabs::SolverConfig config;
    config.k = a.kernel_size;
    config.lambda_u = a.lambda_u_set ? a.lambda_u : a.lambda;
    config.lambda_v = a.lambda_v_set ? a.lambda_v : a.lambda;
    config.step_policy = parse_policy(a.policy);
    if (config.step_policy == mcabs::StepPolicy::kConstant) {
        config.alpha = a.alpha;
        config.beta = a.beta;
        config.gamma = a.gamma;
    } else {
        config.c1 = config.c2 = config.c3 = a.c;
    }
    config.max_iters = a.max_iters;
    config.rel_tol = a.tol;
    config.seed = a.seed;
    config.paper_literal_steps = a.paper_literal_steps;
    config.threshold_scaling = a.threshold_scaling;

    const mcabs::SolverResult result = mcabs::run(p, config);
    mcabs::store_matrix(a.out_prefix + ".U.csv", result.factorization.u());
    mcabs::store_matrix(a.out_prefix + ".P.csv", result.factorization.pk());
    mcabs::store_matrix(a.out_prefix + ".V.csv", result.factorization.v());
    mcabs::store_trace_csv(a.out_prefix + ".trace.csv", result.trace);
    std::cerr << "terminated: " << mcabs::to_string(result.reason) << " after "
              << result.trace.records.size() << " iterations\n";
    return 0;
}

struct EvaluateArgs {
    std::string input;
    std::string factors;
    std::vector<int> msteps;
    std::string out;
};

int run_evaluate(const EvaluateArgs& a) {
    const mcabs::TransitionMatrix p(mcabs::load_matrix(a.input), kInputTol);
    const mcabs::Factorization f(mcabs::load_matrix(a.factors + ".U.csv"),
                                 mcabs::load_matrix(a.factors + ".P.csv"),
                                 mcabs::load_matrix(a.factors + ".V.csv"));
    const mcabs::EvalReport report = mcabs::evaluate_abstraction(p, f, a.msteps);
    mcabs::store_eval_report_csv(a.out, report);
    return 0;
}

struct SweepArgs {
    int states = 0;
    int rank = 0;
    std::vector<int> kernel_sizes;
    std::vector<double> lambdas;
    std::string policy = "adaptive";
    std::vector<double> steps;
    int instances = 10;
    std::uint64_t base_seed = 0;
    int max_iters = 0;
    double tol = 0.0;
    std::string out;
    int threads = 1;
    bool paper_literal_steps = false;
    bool threshold_scaling = false;
};

int run_sweep(const SweepArgs& a) {
    mcabs::SweepSpec spec;
    spec.n = a.states;
    spec.true_rank = a.rank;
    spec.kernel_sizes = a.kernel_sizes;
    spec.lambdas = a.lambdas;
    spec.policy = parse_policy(a.policy);
    spec.steps = a.steps;
    if (spec.steps.empty() && spec.policy == mcabs::StepPolicy::kAdaptive) {
        spec.steps = {1.0};
    }
    spec.instances = a.instances;
    spec.base_seed = a.base_seed;
    spec.max_iters = a.max_iters;
    spec.rel_tol = a.tol;
    spec.threads = a.threads;
    spec.paper_literal_steps = a.paper_literal_steps;
    spec.threshold_scaling = a.threshold_scaling;

    const mcabs::SweepResult result = mcabs::sweep(spec);
    mcabs::store_sweep_records_csv(a.out + ".csv", result.records);
    mcabs::store_sweep_aggregates_csv(a.out + ".agg.csv", result.aggregates);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-dimensional abstraction of finite Markov chains"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    CLI::App* gen = app.add_subcommand("generate", "Generate a synthetic low-rank chain");
    gen->add_option("--states", gen_args.states, "Number of states n")->required();
    gen->add_option("--rank", gen_args.rank, "Generator rank k")->required();
    gen->add_option("--seed", gen_args.seed, "RNG seed")->required();
    gen->add_option("--out", gen_args.out, "Output CSV for the transition matrix")->required();
    gen->add_option("--out-factors", gen_args.out_factors,
                    "Optional prefix for the ground-truth factor CSVs");

    DecomposeArgs dec_args;
    CLI::App* dec = app.add_subcommand("decompose", "Factorize a transition matrix");
    dec->add_option("--input", dec_args.input, "Transition matrix CSV")->required();
    dec->add_option("--kernel-size", dec_args.kernel_size, "Kernel dimension k")->required();
    dec->add_option("--policy", dec_args.policy, "Step policy")
        ->required()
        ->check(CLI::IsMember({"adaptive", "constant"}));
    CLI::Option* opt_c = dec->add_option("--c", dec_args.c, "Adaptive descent constant in (0,2)");
    CLI::Option* opt_a = dec->add_option("--alpha", dec_args.alpha, "Constant step for U");
    CLI::Option* opt_b = dec->add_option("--beta", dec_args.beta, "Constant step for the kernel");
    CLI::Option* opt_g = dec->add_option("--gamma", dec_args.gamma, "Constant step for V");
    opt_c->excludes(opt_a)->excludes(opt_b)->excludes(opt_g);
    dec->add_option("--lambda", dec_args.lambda, "Shared l1 weight for U and V");
    dec->add_option("--lambda-u", dec_args.lambda_u, "l1 weight for U (overrides --lambda)");
    dec->add_option("--lambda-v", dec_args.lambda_v, "l1 weight for V (overrides --lambda)");
    dec->add_option("--max-iters", dec_args.max_iters, "Iteration cap")->required();
    dec->add_option("--tol", dec_args.tol, "Relative termination tolerance")->required();
    dec->add_option("--seed", dec_args.seed, "Initialization seed")->required();
    dec->add_option("--out-prefix", dec_args.out_prefix,
                    "Prefix for .U.csv/.P.csv/.V.csv/.trace.csv")
        ->required();
    dec->add_flag("--paper-literal-steps", dec_args.paper_literal_steps,
                  "Use the literal printed adaptive quotients for the kernel and V blocks");
    dec->add_flag("--threshold-scaling", dec_args.threshold_scaling,
                  "Scale the shrinkage level by the block step size");

    EvaluateArgs eval_args;
    CLI::App* eva = app.add_subcommand("evaluate", "Evaluate a stored factorization");
    eva->add_option("--input", eval_args.input, "Transition matrix CSV")->required();
    eva->add_option("--factors", eval_args.factors, "Factor CSV prefix")->required();
    eva->add_option("--msteps", eval_args.msteps, "Comma-separated m values")
        ->required()
        ->delimiter(',');
    eva->add_option("--out", eval_args.out, "Output CSV")->required();

    SweepArgs sweep_args;
    CLI::App* swp = app.add_subcommand("sweep", "Run a seed-replicated parameter sweep");
    swp->add_option("--states", sweep_args.states, "Number of states n")->required();
    swp->add_option("--rank", sweep_args.rank, "Generator rank")->required();
    swp->add_option("--kernel-sizes", sweep_args.kernel_sizes, "Comma-separated kernel sizes")
        ->required()
        ->delimiter(',');
    swp->add_option("--lambdas", sweep_args.lambdas, "Comma-separated l1 weights")
        ->required()
        ->delimiter(',');
    swp->add_option("--policy", sweep_args.policy, "Step policy")
        ->required()
        ->check(CLI::IsMember({"adaptive", "constant"}));
    swp->add_option("--steps", sweep_args.steps,
                    "Comma-separated step sizes (constant) or descent constants (adaptive, "
                    "default 1.0)")
        ->delimiter(',');
    swp->add_option("--instances", sweep_args.instances, "Independent instances per cell");
    swp->add_option("--base-seed", sweep_args.base_seed, "Base seed")->required();
    swp->add_option("--max-iters", sweep_args.max_iters, "Iteration cap")->required();
    swp->add_option("--tol", sweep_args.tol, "Relative termination tolerance")->required();
    swp->add_option("--out", sweep_args.out, "Output prefix (.csv and .agg.csv)")->required();
    swp->add_option("--threads", sweep_args.threads, "Worker thread cap");
    swp->add_flag("--paper-literal-steps", sweep_args.paper_literal_steps,
                  "Use the literal printed adaptive quotients for the kernel and V blocks");
    swp->add_flag("--threshold-scaling", sweep_args.threshold_scaling,
                  "Scale the shrinkage level by the block step size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    dec_args.lambda_u_set = dec->count("--lambda-u") > 0;
    dec_args.lambda_v_set = dec->count("--lambda-v") > 0;

    try {
        if (gen->parsed()) return run_generate(gen_args);
        if (dec->parsed()) return run_decompose(dec_args);
        if (eva->parsed()) return run_evaluate(eval_args);
        if (swp->parsed()) return run_sweep(sweep_args);
    } catch (const mcabs::DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
