// Command line front end: graph generation, single fits, replicated
// experiments, loss evaluation, and theory diagnostics.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbmf/experiment.hpp"
#include "sbmf/gibbs.hpp"
#include "sbmf/init.hpp"
#include "sbmf/io.hpp"
#include "sbmf/loss.hpp"
#include "sbmf/mle.hpp"
#include "sbmf/sbm.hpp"
#include "sbmf/theory.hpp"
#include "sbmf/variational.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

int cmd_generate(int n, int k, double p, double q, const std::vector<int>& sizes,
                 std::uint64_t seed, const std::string& out_graph,
                 const std::string& out_labels) {
    const std::vector<int> resolved = sizes.empty() ? sbmf::balanced_sizes(n, k) : sizes;
    const sbmf::HardAssignment truth = sbmf::sample_assignment(n, k, resolved, seed);
    const sbmf::AdjacencyMatrix A =
        sbmf::sample_sbm(sbmf::BlockParams(p, q, k), truth, seed + 1);
    sbmf::write_edgelist(out_graph, A, k);
    if (!out_labels.empty()) sbmf::write_labels(out_labels, truth);
    return kExitOk;
}

int cmd_fit(const std::string& graph_path, const std::string& algorithm, int iterations,
            std::uint64_t seed, const std::string& init_spec, const std::string& truth_path,
            const std::string& out_path, bool quiet) {
    const auto [A, k] = sbmf::read_edgelist(graph_path);
    const auto alg = sbmf::parse_algorithm(algorithm);
    if (!alg) {
        std::cerr << "unknown algorithm: " << algorithm << '\n';
        return kExitValidation;
    }
    std::optional<sbmf::HardAssignment> truth;
    if (!truth_path.empty()) truth = sbmf::read_labels(truth_path, k);

    sbmf::SoftAssignment pi0 = [&]() -> sbmf::SoftAssignment {
        if (init_spec == "spectral" || init_spec.empty())
            return sbmf::SoftAssignment::from_hard(sbmf::spectral_init(A, k, seed));
        if (init_spec.rfind("corrupt:", 0) == 0) {
            if (!truth)
                throw std::invalid_argument("--init corrupt:<f> requires --truth");
            const double fraction = std::stod(init_spec.substr(8));
            return sbmf::corrupt_truth(*truth, fraction, seed).pi;
        }
        return sbmf::SoftAssignment::from_hard(sbmf::read_labels(init_spec, k));
    }();

    const int iters = iterations > 0 ? iterations : sbmf::default_iterations(A.size());
    const sbmf::PriorConfig priors = sbmf::PriorConfig::uniform(A.size(), k);
    sbmf::IterationTrace trace;
    sbmf::HardAssignment fit(std::vector<int>(static_cast<std::size_t>(A.size()), 0), k);
    switch (*alg) {
        case sbmf::Algorithm::bcavi_digamma:
        case sbmf::Algorithm::bcavi_log: {
            const auto variant = *alg == sbmf::Algorithm::bcavi_digamma
                                     ? sbmf::Variant::digamma
                                     : sbmf::Variant::log;
            auto [state, tr] = sbmf::bcavi(A, k, priors, pi0, iters, variant, truth);
            fit = sbmf::harden(state.pi);
            trace = std::move(tr);
            break;
        }
        case sbmf::Algorithm::cavi: {
            auto [state, tr] = sbmf::cavi_sequential(A, k, priors, pi0, iters, truth);
            fit = sbmf::harden(state.pi);
            trace = std::move(tr);
            break;
        }
        case sbmf::Algorithm::gibbs: {
            auto [chain, tr] =
                sbmf::gibbs(A, k, priors, sbmf::harden(pi0), iters, seed, truth);
            fit = chain.back().z;
            trace = std::move(tr);
            break;
        }
        case sbmf::Algorithm::mle: {
            auto [result, tr] = sbmf::iterative_mle(A, k, sbmf::harden(pi0), iters, truth);
            fit = result.z;
            trace = std::move(tr);
            break;
        }
    }
    if (!out_path.empty()) sbmf::write_labels(out_path, fit);
    if (!quiet) {
        sbmf::write_trace_ndjson(std::cout, 0, trace);
        if (truth)
            std::cout << "misclustered: " << sbmf::misclustered_count(fit, *truth) << '\n';
    }
    return kExitOk;
}

int cmd_eval(const std::string& path_a, const std::string& path_b, int k) {
    const sbmf::HardAssignment a = sbmf::read_labels(path_a, k);
    const sbmf::HardAssignment b = sbmf::read_labels(path_b, k);
    const sbmf::LossResult result = sbmf::l1_loss(a, b);
    std::cout << "l1_loss: " << result.loss << '\n'
              << "misclustered: " << sbmf::misclustered_count(a, b) << '\n';
    return kExitOk;
}

int cmd_theory(int n, int k, double p, double q, double w, double rho) {
    const double I = sbmf::renyi_I(p, q);
    const auto [t_star, lambda_star] = sbmf::t_lambda_star(p, q);
    nlohmann::json out{
        {"I", I},
        {"t_star", t_star},
        {"lambda_star", lambda_star},
        {"minimax_bound", sbmf::minimax_bound(n, k, rho, I)},
    };
    const double nb = rho * n / k;  // smallest pair average under the given rho
    out["nbar_min"] = nb;
    out["w"] = w;
    try {
        const auto [c_n, s0] = sbmf::contraction_and_budget(n, k, I, w, nb);
        out["c_n"] = c_n;
        out["s0"] = s0;
    } catch (const sbmf::RegimeError& e) {
        out["regime_error"] = e.what();
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean field community detection under the stochastic block model"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Sample a block model graph");
    int gen_n = 0, gen_k = 2;
    double gen_p = 0.1, gen_q = 0.05;
    std::vector<int> gen_sizes;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "graph.txt", gen_labels;
    gen->add_option("--n", gen_n, "node count")->required();
    gen->add_option("--k", gen_k, "community count")->required();
    gen->add_option("--p", gen_p, "within-community edge probability")->required();
    gen->add_option("--q", gen_q, "cross-community edge probability")->required();
    gen->add_option("--sizes", gen_sizes, "community sizes (default balanced)");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "edge-list output path");
    gen->add_option("--labels", gen_labels, "truth labels output path");

    // fit
    auto* fit = app.add_subcommand("fit", "Fit one graph with a chosen algorithm");
    std::string fit_graph, fit_alg = "bcavi-digamma", fit_init = "spectral", fit_truth, fit_out;
    int fit_iters = 0;
    std::uint64_t fit_seed = 0;
    bool fit_quiet = false;
    fit->add_option("--graph", fit_graph, "edge-list input")->required();
    fit->add_option("--algorithm", fit_alg,
                    "bcavi-digamma | bcavi-log | cavi | gibbs | mle");
    fit->add_option("--iterations", fit_iters, "iteration budget (default ceil(log n))");
    fit->add_option("--seed", fit_seed, "rng seed");
    fit->add_option("--init", fit_init, "spectral | corrupt:<fraction> | <labels file>");
    fit->add_option("--truth", fit_truth, "truth labels for loss reporting");
    fit->add_option("--out", fit_out, "fitted labels output path");
    fit->add_flag("--quiet", fit_quiet, "suppress trace output");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a replicated experiment from a config");
    std::string exp_config, exp_out, exp_alg;
    int exp_threads = 0, exp_iters = 0;
    std::uint64_t exp_seed = 0;
    bool exp_seed_set = false, exp_quiet = false;
    exp->add_option("--config", exp_config, "JSON config path")->required();
    exp->add_option("--seed", exp_seed, "override base seed")->each([&](const std::string&) {
        exp_seed_set = true;
    });
    exp->add_option("--threads", exp_threads, "worker pool size (env SBM_MF_THREADS fallback)");
    exp->add_option("--out", exp_out, "override output directory");
    exp->add_option("--algorithm", exp_alg, "override algorithm");
    exp->add_option("--iterations", exp_iters, "override iteration budget");
    exp->add_flag("--quiet", exp_quiet, "suppress the aggregate summary");

    // eval
    auto* eval = app.add_subcommand("eval", "Loss between two assignment files");
    std::string eval_a, eval_b;
    int eval_k = 0;
    eval->add_option("a", eval_a, "first labels file")->required();
    eval->add_option("b", eval_b, "second labels file")->required();
    eval->add_option("--k", eval_k, "community count")->required();

    // theory
    auto* theory = app.add_subcommand("theory", "Print the rate diagnostics for a regime");
    int th_n = 0, th_k = 2;
    double th_p = 0.0, th_q = 0.0, th_w = 1.0, th_rho = 1.0;
    theory->add_option("--n", th_n)->required();
    theory->add_option("--k", th_k)->required();
    theory->add_option("--p", th_p)->required();
    theory->add_option("--q", th_q)->required();
    theory->add_option("--w", th_w, "max prior odds ratio");
    theory->add_option("--rho", th_rho, "min community size * k / n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_n, gen_k, gen_p, gen_q, gen_sizes, gen_seed, gen_out,
                                gen_labels);
        if (fit->parsed())
            return cmd_fit(fit_graph, fit_alg, fit_iters, fit_seed, fit_init, fit_truth, fit_out,
                           fit_quiet);
        if (exp->parsed()) {
            sbmf::ExperimentConfig cfg = sbmf::config_from_file(exp_config);
            if (exp_seed_set) cfg.base_seed = exp_seed;
            if (exp_threads > 0) cfg.threads = exp_threads;
            if (!exp_out.empty()) cfg.out_dir = exp_out;
            if (exp_iters > 0) cfg.iterations = exp_iters;
            if (!exp_alg.empty()) {
                const auto alg = sbmf::parse_algorithm(exp_alg);
                if (!alg) {
                    std::cerr << "unknown algorithm: " << exp_alg << '\n';
                    return kExitValidation;
                }
                cfg.algorithm = *alg;
            }
            const sbmf::ExperimentSummary summary = sbmf::run_experiment(cfg);
            if (!exp_quiet && !cfg.quiet) {
                nlohmann::json out{{"algorithm", sbmf::algorithm_name(cfg.algorithm)},
                                   {"replications", cfg.replications},
                                   {"mean_loss", summary.mean_loss},
                                   {"median_loss", summary.median_loss},
                                   {"exact_fraction", summary.exact_fraction}};
                if (summary.rate) {
                    out["rate"] = {{"I", summary.rate->I},
                                   {"t_star", summary.rate->t_star},
                                   {"lambda_star", summary.rate->lambda_star},
                                   {"c_n", summary.rate->c_n},
                                   {"s0", summary.rate->s0},
                                   {"minimax_bound", summary.rate->minimax}};
                }
                std::cout << out.dump(2) << '\n';
            }
            return kExitOk;
        }
        if (eval->parsed()) return cmd_eval(eval_a, eval_b, eval_k);
        if (theory->parsed()) return cmd_theory(th_n, th_k, th_p, th_q, th_w, th_rho);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitValidation;
}
