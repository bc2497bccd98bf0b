#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sbmf/assignment.hpp"
#include "sbmf/gibbs.hpp"
#include "sbmf/graph.hpp"
#include "sbmf/init.hpp"
#include "sbmf/io.hpp"
#include "sbmf/loss.hpp"
#include "sbmf/mle.hpp"
#include "sbmf/sbm.hpp"
#include "sbmf/theory.hpp"
#include "sbmf/variational.hpp"

namespace sbmf {

enum class Algorithm { bcavi_digamma, bcavi_log, cavi, gibbs, mle };
enum class InitKind { spectral, corrupt, file };

inline std::optional<Algorithm> parse_algorithm(const std::string& name) {
    if (name == "bcavi-digamma") return Algorithm::bcavi_digamma;
    if (name == "bcavi-log") return Algorithm::bcavi_log;
    if (name == "cavi") return Algorithm::cavi;
    if (name == "gibbs") return Algorithm::gibbs;
    if (name == "mle") return Algorithm::mle;
    return std::nullopt;
}

inline std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::bcavi_digamma: return "bcavi-digamma";
        case Algorithm::bcavi_log: return "bcavi-log";
        case Algorithm::cavi: return "cavi";
        case Algorithm::gibbs: return "gibbs";
        case Algorithm::mle: return "mle";
    }
    return "?";
}

struct ExperimentConfig {
    int n = 0;
    int k = 0;
    double p = 0.0;
    double q = 0.0;
    std::vector<int> sizes;  // empty means balanced
    double alpha_p = 1.0, beta_p = 1.0, alpha_q = 1.0, beta_q = 1.0;
    InitKind init = InitKind::corrupt;
    double corrupt_fraction = 0.1;
    std::string init_file;
    Algorithm algorithm = Algorithm::bcavi_digamma;
    int iterations = 0;  // 0 means ceil(log n)
    int replications = 1;
    std::uint64_t base_seed = 0;
    std::string out_dir;
    int threads = 0;  // 0 means available parallelism
    bool quiet = false;

    std::vector<int> resolved_sizes() const { return sizes.empty() ? balanced_sizes(n, k) : sizes; }
    int resolved_iterations() const { return iterations > 0 ? iterations : default_iterations(n); }

    /// All validation problems, each naming the offending field.
    std::vector<std::string> validate() const {
        std::vector<std::string> errors;
        if (n < 2) errors.push_back("n: must be >= 2");
        if (k < 2) errors.push_back("k: must be >= 2");
        if (p < 0.0 || p > 1.0) errors.push_back("p: must lie in [0, 1]");
        if (q < 0.0 || q > 1.0) errors.push_back("q: must lie in [0, 1]");
        if (!(p > q)) errors.push_back("q: must satisfy p > q (assortative)");
        if (!sizes.empty()) {
            if (static_cast<int>(sizes.size()) != k) errors.push_back("sizes: must have k entries");
            int total = 0;
            for (const int s : sizes) {
                if (s < 1) errors.push_back("sizes: entries must be >= 1");
                total += s;
            }
            if (total != n) errors.push_back("sizes: must sum to n");
        }
        if (!(alpha_p > 0.0)) errors.push_back("prior.alpha_p: must be positive");
        if (!(beta_p > 0.0)) errors.push_back("prior.beta_p: must be positive");
        if (!(alpha_q > 0.0)) errors.push_back("prior.alpha_q: must be positive");
        if (!(beta_q > 0.0)) errors.push_back("prior.beta_q: must be positive");
        if (init == InitKind::corrupt && (corrupt_fraction < 0.0 || corrupt_fraction >= 1.0))
            errors.push_back("init.fraction: must lie in [0, 1)");
        if (init == InitKind::file && !std::filesystem::exists(init_file))
            errors.push_back("init.file: file does not exist: " + init_file);
        if (iterations < 0) errors.push_back("iterations: must be >= 1 (or omitted)");
        if (replications < 1) errors.push_back("replications: must be >= 1");
        return errors;
    }
};

/// JSON config document; CLI flags override file values.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.n = j.value("n", 0);
    c.k = j.value("k", 0);
    c.p = j.value("p", 0.0);
    c.q = j.value("q", 0.0);
    if (j.contains("sizes") && j["sizes"].is_array())
        c.sizes = j["sizes"].get<std::vector<int>>();
    if (j.contains("prior")) {
        const auto& pr = j["prior"];
        c.alpha_p = pr.value("alpha_p", 1.0);
        c.beta_p = pr.value("beta_p", 1.0);
        c.alpha_q = pr.value("alpha_q", 1.0);
        c.beta_q = pr.value("beta_q", 1.0);
    }
    if (j.contains("init")) {
        const auto& init = j["init"];
        const std::string kind = init.value("kind", "corrupt");
        if (kind == "spectral") {
            c.init = InitKind::spectral;
        } else if (kind == "corrupt") {
            c.init = InitKind::corrupt;
            c.corrupt_fraction = init.value("fraction", 0.1);
        } else if (kind == "file") {
            c.init = InitKind::file;
            c.init_file = init.value("path", "");
        } else {
            throw std::invalid_argument("init.kind: unknown initializer `" + kind + "`");
        }
    }
    if (j.contains("algorithm")) {
        const auto alg = parse_algorithm(j["algorithm"].get<std::string>());
        if (!alg)
            throw std::invalid_argument("algorithm: unknown algorithm `" +
                                        j["algorithm"].get<std::string>() + "`");
        c.algorithm = *alg;
    }
    c.iterations = j.value("iterations", 0);
    c.replications = j.value("replications", 1);
    c.base_seed = j.value("seed", std::uint64_t{0});
    c.out_dir = j.value("out", "");
    c.threads = j.value("threads", 0);
    return c;
}

inline ExperimentConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

struct ReplicationResult {
    int replication = 0;
    IterationTrace trace;
    double final_loss = std::numeric_limits<double>::quiet_NaN();
    int final_misclustered = -1;
    int iters_to_exact = -1;  // -1 means never
    double seconds = 0.0;
    std::string error;  // empty on success
};

struct ExperimentSummary {
    std::vector<ReplicationResult> replications;
    double mean_loss = 0.0;
    double median_loss = 0.0;
    double q10_loss = 0.0;
    double q90_loss = 0.0;
    double exact_fraction = 0.0;
    std::optional<RateReport> rate;
};

namespace detail {

inline ReplicationResult run_one(const ExperimentConfig& cfg, int r) {
    ReplicationResult res;
    res.replication = r;
    const auto start = std::chrono::steady_clock::now();
    try {
        const Rng root(cfg.base_seed + static_cast<std::uint64_t>(r));
        const std::uint64_t seed_assign = root.split(1).seed();
        const std::uint64_t seed_graph = root.split(2).seed();
        const std::uint64_t seed_init = root.split(3).seed();
        const std::uint64_t seed_algo = root.split(4).seed();

        const HardAssignment truth =
            sample_assignment(cfg.n, cfg.k, cfg.resolved_sizes(), seed_assign);
        const AdjacencyMatrix A = sample_sbm(BlockParams(cfg.p, cfg.q, cfg.k), truth, seed_graph);
        const PriorConfig priors =
            PriorConfig::uniform(cfg.n, cfg.k, cfg.alpha_p, cfg.beta_p, cfg.alpha_q, cfg.beta_q);

        SoftAssignment pi0 = [&] {
            switch (cfg.init) {
                case InitKind::spectral:
                    return SoftAssignment::from_hard(spectral_init(A, cfg.k, seed_init));
                case InitKind::corrupt:
                    return corrupt_truth(truth, cfg.corrupt_fraction, seed_init).pi;
                case InitKind::file:
                default:
                    return SoftAssignment::from_hard(read_labels(cfg.init_file, cfg.k));
            }
        }();

        const int iters = cfg.resolved_iterations();
        switch (cfg.algorithm) {
            case Algorithm::bcavi_digamma:
            case Algorithm::bcavi_log: {
                const Variant variant = cfg.algorithm == Algorithm::bcavi_digamma
                                            ? Variant::digamma
                                            : Variant::log;
                auto [state, trace] = bcavi(A, cfg.k, priors, pi0, iters, variant, truth);
                res.trace = std::move(trace);
                break;
            }
            case Algorithm::cavi: {
                auto [state, trace] = cavi_sequential(A, cfg.k, priors, pi0, iters, truth);
                res.trace = std::move(trace);
                break;
            }
            case Algorithm::gibbs: {
                auto [chain, trace] =
                    gibbs(A, cfg.k, priors, harden(pi0), iters, seed_algo, truth);
                res.trace = std::move(trace);
                break;
            }
            case Algorithm::mle: {
                auto [fit, trace] = iterative_mle(A, cfg.k, harden(pi0), iters, truth);
                res.trace = std::move(trace);
                break;
            }
        }
        if (!res.trace.records.empty()) {
            const IterationRecord& last = res.trace.records.back();
            res.final_loss = last.loss;
            res.final_misclustered = last.misclustered;
            for (const IterationRecord& rec : res.trace.records)
                if (rec.misclustered == 0) {
                    res.iters_to_exact = rec.iteration + 1;
                    break;
                }
        }
    } catch (const std::exception& e) {
        res.error = e.what();
    }
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

inline double quantile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SBM_MF_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run every replication (in parallel on a worker pool), then write the
/// trace, summary, and timing files from a single collector in
/// replication order. Outputs other than timings.csv are byte-identical
/// across reruns and thread counts.
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
    {
        const std::vector<std::string> errors = cfg.validate();
        if (!errors.empty()) {
            std::string msg = "invalid config:";
            for (const std::string& e : errors) msg += "\n  " + e;
            throw std::invalid_argument(msg);
        }
    }
    const int threads = std::min(resolve_threads(cfg.threads), cfg.replications);
    std::vector<ReplicationResult> results(static_cast<std::size_t>(cfg.replications));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= cfg.replications) return;
            results[static_cast<std::size_t>(r)] = detail::run_one(cfg, r);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    ExperimentSummary summary;
    std::vector<double> losses;
    int exact = 0, ok = 0;
    for (const ReplicationResult& r : results) {
        if (r.error.empty()) {
            ++ok;
            losses.push_back(r.final_loss);
            if (r.final_misclustered == 0) ++exact;
        }
    }
    std::sort(losses.begin(), losses.end());
    summary.mean_loss = losses.empty()
                            ? std::numeric_limits<double>::quiet_NaN()
                            : std::accumulate(losses.begin(), losses.end(), 0.0) /
                                  static_cast<double>(losses.size());
    summary.median_loss = detail::quantile(losses, 0.5);
    summary.q10_loss = detail::quantile(losses, 0.1);
    summary.q90_loss = detail::quantile(losses, 0.9);
    summary.exact_fraction = ok > 0 ? static_cast<double>(exact) / ok : 0.0;
    {
        const std::vector<int> sizes = cfg.resolved_sizes();
        const int min_size = *std::min_element(sizes.begin(), sizes.end());
        double nb = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < sizes.size(); ++a)
            for (std::size_t b = a + 1; b < sizes.size(); ++b)
                nb = std::min(nb, 0.5 * (sizes[a] + sizes[b]));
        const double rho = static_cast<double>(min_size) * cfg.k / cfg.n;
        try {
            summary.rate = rate_report(cfg.n, cfg.k, cfg.p, cfg.q, 1.0, nb, rho);
        } catch (const RegimeError&) {
            summary.rate = std::nullopt;  // outside the theory regime; reference curve omitted
        }
    }
    summary.replications = std::move(results);

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        const std::filesystem::path dir(cfg.out_dir);
        {
            std::ofstream trace(dir / "trace.ndjson");
            for (const ReplicationResult& r : summary.replications)
                write_trace_ndjson(trace, r.replication, r.trace);
        }
        {
            std::ofstream csv(dir / "summary.csv");
            csv << "replication,final_loss,misclustered,iters_to_exact,error\n";
            for (const ReplicationResult& r : summary.replications) {
                csv << r.replication << ',' << format_double(r.final_loss) << ','
                    << r.final_misclustered << ','
                    << (r.iters_to_exact >= 0 ? std::to_string(r.iters_to_exact) : "inf") << ','
                    << r.error << '\n';
            }
        }
        {
            std::ofstream csv(dir / "timings.csv");
            csv << "replication,seconds\n";
            for (const ReplicationResult& r : summary.replications)
                csv << r.replication << ',' << format_double(r.seconds) << '\n';
        }
    }
    return summary;
}

}  // namespace sbmf
