#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sbmf/experiment.hpp"

using namespace sbmf;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.n = 60;
    cfg.k = 2;
    cfg.p = 0.5;
    cfg.q = 0.05;
    cfg.init = InitKind::corrupt;
    cfg.corrupt_fraction = 0.1;
    cfg.algorithm = Algorithm::bcavi_digamma;
    cfg.iterations = 4;
    cfg.replications = 6;
    cfg.base_seed = 17;
    return cfg;
}

}  // namespace

TEST_CASE("algorithm names round trip") {
    for (const Algorithm a : {Algorithm::bcavi_digamma, Algorithm::bcavi_log, Algorithm::cavi,
                              Algorithm::gibbs, Algorithm::mle})
        CHECK(parse_algorithm(algorithm_name(a)) == a);
    CHECK_FALSE(parse_algorithm("simulated-annealing").has_value());
}

TEST_CASE("config validation names the offending fields") {
    ExperimentConfig cfg = small_config();
    cfg.n = 1;
    cfg.q = 0.5;  // > p
    cfg.replications = 0;
    const std::vector<std::string> errors = cfg.validate();
    REQUIRE(errors.size() >= 3);
    bool saw_n = false, saw_q = false, saw_rep = false;
    for (const std::string& e : errors) {
        if (e.rfind("n:", 0) == 0) saw_n = true;
        if (e.rfind("q:", 0) == 0) saw_q = true;
        if (e.rfind("replications:", 0) == 0) saw_rep = true;
    }
    CHECK(saw_n);
    CHECK(saw_q);
    CHECK(saw_rep);
    CHECK(small_config().validate().empty());
}

TEST_CASE("config parses from JSON with nested prior and init") {
    const nlohmann::json j = nlohmann::json::parse(R"({
        "n": 120, "k": 3, "p": 0.2, "q": 0.04,
        "sizes": [40, 40, 40],
        "prior": {"alpha_p": 2.0, "beta_q": 3.0},
        "init": {"kind": "spectral"},
        "algorithm": "cavi",
        "iterations": 5,
        "replications": 9,
        "seed": 123
    })");
    const ExperimentConfig cfg = config_from_json(j);
    CHECK(cfg.n == 120);
    CHECK(cfg.sizes == std::vector<int>{40, 40, 40});
    CHECK(cfg.alpha_p == 2.0);
    CHECK(cfg.beta_p == 1.0);
    CHECK(cfg.beta_q == 3.0);
    CHECK(cfg.init == InitKind::spectral);
    CHECK(cfg.algorithm == Algorithm::cavi);
    CHECK(cfg.iterations == 5);
    CHECK(cfg.replications == 9);
    CHECK(cfg.base_seed == 123);
    CHECK(cfg.validate().empty());
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"algorithm": "nope"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"init": {"kind": "nope"}})")),
                    std::invalid_argument);
}

TEST_CASE("resolved defaults") {
    ExperimentConfig cfg = small_config();
    cfg.sizes.clear();
    CHECK(cfg.resolved_sizes() == std::vector<int>{30, 30});
    cfg.iterations = 0;
    CHECK(cfg.resolved_iterations() == default_iterations(60));
}

TEST_CASE("resolve_threads precedence") {
    CHECK(resolve_threads(3) == 3);
    setenv("SBM_MF_THREADS", "2", 1);
    CHECK(resolve_threads(0) == 2);
    CHECK(resolve_threads(5) == 5);  // explicit request wins over the env
    unsetenv("SBM_MF_THREADS");
    CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("run_experiment summarizes and recovers in an easy regime") {
    const ExperimentSummary s = run_experiment(small_config());
    REQUIRE(s.replications.size() == 6);
    for (const ReplicationResult& r : s.replications) {
        CHECK(r.error.empty());
        CHECK(r.trace.records.size() == 4);
    }
    CHECK(s.exact_fraction == doctest::Approx(1.0));
    CHECK(s.mean_loss < 1.0);  // soft loss stays positive even at exact recovery
    CHECK(s.rate.has_value());  // strong signal, inside the theory regime
    CHECK_THROWS_AS(run_experiment([] {
                        ExperimentConfig bad;
                        return bad;
                    }()),
                    std::invalid_argument);
}

TEST_CASE("run_experiment outputs are byte-identical across thread counts") {
    const std::filesystem::path dir1 = std::filesystem::temp_directory_path() / "sbmf_t1";
    const std::filesystem::path dir2 = std::filesystem::temp_directory_path() / "sbmf_t4";
    ExperimentConfig cfg = small_config();
    cfg.out_dir = dir1.string();
    cfg.threads = 1;
    run_experiment(cfg);
    cfg.out_dir = dir2.string();
    cfg.threads = 4;
    run_experiment(cfg);
    CHECK(slurp(dir1 / "trace.ndjson") == slurp(dir2 / "trace.ndjson"));
    CHECK(slurp(dir1 / "summary.csv") == slurp(dir2 / "summary.csv"));
    CHECK_FALSE(slurp(dir1 / "trace.ndjson").empty());
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("per-replication failures are recorded, not fatal") {
    // an init file of the wrong length fails inside every replication
    const std::filesystem::path labels =
        std::filesystem::temp_directory_path() / "sbmf_bad_labels.txt";
    {
        std::ofstream out(labels);
        out << "0\n1\n";  // two labels for n = 60 nodes
    }
    ExperimentConfig cfg = small_config();
    cfg.init = InitKind::file;
    cfg.init_file = labels.string();
    cfg.replications = 4;
    const ExperimentSummary s = run_experiment(cfg);
    REQUIRE(s.replications.size() == 4);
    for (const ReplicationResult& r : s.replications) CHECK_FALSE(r.error.empty());
    CHECK(s.exact_fraction == 0.0);
    std::filesystem::remove(labels);
}
