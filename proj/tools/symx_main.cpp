// Command-line front end: membership testing, rank information, variety
// decomposition, Vandermonde decomposition of multiway arrays, and a
// benchmark harness over planted instances.
//
// Exit codes: 0 success, 1 method-level failure (non-member, no
// decomposition, failed trials), 2 usage or I/O error.

#include <symx/symx.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace symx;
using Clock = std::chrono::steady_clock;

std::uint64_t default_seed() {
    if (const char* s = std::getenv("SYMX_SEED")) {
        char* end = nullptr;
        std::uint64_t v = std::strtoull(s, &end, 10);
        if (end && *end == '\0') return v;
        std::cerr << "warning: ignoring non-numeric SYMX_SEED\n";
    }
    return 0;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// Display convention: four decimal digits; output files keep full precision.
std::string d4(double x) { return fmt("%.4f", x); }
std::string e4(double x) { return fmt("%.4e", x); }

Json base_manifest(const std::string& command, const std::vector<std::string>& inputs,
                   std::uint64_t seed) {
    Json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["seed"] = seed;
    j["versions"] = Json{
        {"symx", version},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    return j;
}

/// Emits the result next to its manifest: with --output PATH the result goes
/// to PATH and the manifest to PATH.manifest.json, otherwise the result goes
/// to stdout and the manifest (one line) to stderr.
struct Emitter {
    Json manifest;
    std::string output_path;
    Clock::time_point t0 = Clock::now();

    double elapsed() const { return std::chrono::duration<double>(Clock::now() - t0).count(); }

    void emit_json(const Json& result) {
        manifest["wall_time_s"] = elapsed();
        if (output_path.empty()) {
            std::cout << result.dump(2) << "\n";
            std::cerr << "manifest: " << manifest.dump() << "\n";
        } else {
            save_json_file(output_path, result);
            save_json_file(output_path + ".manifest.json", manifest);
        }
    }

    void emit_text(const std::string& result) {
        manifest["wall_time_s"] = elapsed();
        if (output_path.empty()) {
            std::cout << result;
            std::cerr << "manifest: " << manifest.dump() << "\n";
        } else {
            std::ofstream out(output_path);
            if (!out) throw IoError("cannot write " + output_path);
            out << result;
            save_json_file(output_path + ".manifest.json", manifest);
        }
    }
};

Json solver_config_to_json(const SolverConfig& cfg) {
    return Json{{"restarts", cfg.restarts},
                {"max_iters", cfg.max_iters},
                {"residual_tol", cfg.residual_tol},
                {"rank_min", cfg.rank_min},
                {"rank_max", cfg.rank_max},
                {"verify_rel_tol", cfg.verify_rel_tol},
                {"variety_tol", cfg.variety_tol},
                {"generic_change", cfg.generic_change == GenericChange::off      ? "off"
                                   : cfg.generic_change == GenericChange::force ? "force"
                                                                                : "auto"}};
}

int run_membership(const std::string& tensor_path, const std::string& variety_path, double tol,
                   const std::string& output) {
    Emitter em;
    em.output_path = output;
    em.manifest = base_manifest("membership", {tensor_path, variety_path}, 0);
    em.manifest["config"] = Json{{"tol", tol}};

    SymTensor<Complex> A = tensor_from_json(load_json_file(tensor_path));
    VarietySpec<Complex> X = variety_from_json(load_json_file(variety_path));
    if (A.n != X.n) throw IoError("membership: tensor has n=" + std::to_string(A.n) +
                                  " but variety has n=" + std::to_string(X.n));
    MembershipReport rep = membership(A, X, tol);

    Json result{{"member", rep.member},
                {"worst_pairing", rep.worst},
                {"threshold", rep.threshold}};
    if (rep.violation) {
        result["violation"] =
            Json{{"generator", rep.violation->first}, {"shift", rep.violation->second}};
        std::cerr << "non-member: generator " << rep.violation->first << " shifted by "
                  << mi_to_string(rep.violation->second)
                  << " pairs to magnitude " << e4(rep.worst) << " (threshold "
                  << e4(rep.threshold) << ")\n";
    } else {
        std::cerr << "member: worst pairing " << e4(rep.worst) << " within threshold "
                  << e4(rep.threshold) << "\n";
    }
    em.emit_json(result);
    return rep.member ? 0 : 1;
}

int run_rank_info(const std::string& tensor_path, const std::string& variety_path,
                  std::uint64_t seed, const std::string& output) {
    Emitter em;
    em.output_path = output;
    em.manifest = base_manifest("rank", {tensor_path, variety_path}, seed);
    em.manifest["config"] = Json::object();

    SymTensor<Complex> A = tensor_from_json(load_json_file(tensor_path));
    VarietySpec<Complex> X = variety_from_json(load_json_file(variety_path));
    if (A.n != X.n) throw IoError("rank: tensor has n=" + std::to_string(A.n) +
                                  " but variety has n=" + std::to_string(X.n));

    Json flat = Json::array();
    int maxflat = 0;
    for (int k = 1; k <= A.d - 1; ++k) {
        int rk = numeric_rank(to_eigen(A.catalecticant(k)), 1e-8);
        flat.push_back(Json{{"k", k}, {"rank", rk}});
        maxflat = std::max(maxflat, rk);
    }

    // Cone dimension: stated, trivial (no equations), or estimated from the
    // Jacobian rank at a witness or sampled point.
    int dim = 0;
    std::string dim_source;
    if (X.dimX) {
        dim = *X.dimX;
        dim_source = "declared";
    } else if (X.gens_h.empty()) {
        dim = X.n + 1;
        dim_source = "full space";
    } else {
        std::vector<Complex> u(X.n + 1);
        u[0] = 1.0;
        std::vector<Complex> y;
        if (!X.witness.empty()) {
            y = X.witness[0];
            dim_source = "witness Jacobian";
        } else {
            Rng rng = derive_rng(seed, "rank/dim");
            y = sample_Y(X, 1, rng)[0];
            dim_source = "sampled Jacobian";
        }
        for (int i = 0; i < X.n; ++i) u[i + 1] = y[i];
        dim = estimate_dimX(X, u);
        X.dimX = dim;
    }
    X.dimX = dim;

    int h = hilbert_value(X, A.d);
    int exp_rank = expected_generic_rank(X, A.d);

    Json result{{"flattening_ranks", flat},
                {"max_flattening_rank", maxflat},
                {"hilbert_value", h},
                {"dimX", dim},
                {"dimX_source", dim_source},
                {"expected_generic_rank", exp_rank}};
    std::cerr << "max flattening rank " << maxflat << ", hilbert value " << h << ", dimX " << dim
              << " (" << dim_source << "), expected generic rank " << exp_rank << "\n";
    em.emit_json(result);
    return 0;
}

int run_decompose(const std::string& tensor_path, const std::string& variety_path, int rank,
                  int max_rank, int restarts, std::uint64_t seed, double tol,
                  const std::string& generic, const std::string& output) {
    Emitter em;
    em.output_path = output;
    em.manifest = base_manifest("decompose", {tensor_path, variety_path}, seed);

    SymTensor<Complex> A = tensor_from_json(load_json_file(tensor_path));
    VarietySpec<Complex> X = variety_from_json(load_json_file(variety_path));
    if (A.n != X.n) throw IoError("decompose: tensor has n=" + std::to_string(A.n) +
                                  " but variety has n=" + std::to_string(X.n));

    SolverConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;
    cfg.residual_tol = tol;
    cfg.rank_max = max_rank;
    if (rank > 0) cfg.rank_min = cfg.rank_max = rank;
    if (generic == "off") cfg.generic_change = GenericChange::off;
    else if (generic == "force") cfg.generic_change = GenericChange::force;
    em.manifest["config"] = solver_config_to_json(cfg);

    try {
        DecompositionResult res = decompose(A, X, cfg);
        std::cerr << "rank " << res.rank_used << (res.used_generic_change ? " (generic change)" : "")
                  << ": abs_error " << e4(res.abs_error) << ", rel_error " << e4(res.rel_error)
                  << ", on-variety violation " << e4(res.on_variety_violation) << ", |A| "
                  << d4(A.norm(cfg.norm_kind)) << "\n";
        em.emit_json(decomposition_result_to_json(res));
        return 0;
    } catch (const NoDecomposition& e) {
        std::cerr << e.what() << "\n";
        if (!e.trace.empty()) std::cerr << e.trace;
        if (rank > 0)
            std::cerr << "rank pinned at " << rank << "; escalation disabled\n";
        Json result{{"error", e.what()}, {"trace", e.trace}};
        if (rank > 0) result["note"] = "escalation disabled";
        em.emit_json(result);
        return 1;
    }
}

int run_vandermonde(const std::string& multiway_path, int rank, int max_rank, int restarts,
                    std::uint64_t seed, double tol, bool oracle, const std::string& output) {
    Emitter em;
    em.output_path = output;
    em.manifest = base_manifest("vandermonde", {multiway_path}, seed);

    MultiwayTensor A = multiway_from_json(load_json_file(multiway_path));

    SolverConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;
    cfg.residual_tol = tol;
    cfg.rank_max = max_rank;
    if (rank > 0) cfg.rank_min = cfg.rank_max = rank;
    em.manifest["config"] = solver_config_to_json(cfg);
    em.manifest["config"]["oracle"] = oracle;

    try {
        VandermondeDecomposition vd = oracle ? vandermonde_oracle(A) : vdecompose(A, cfg);
        std::cerr << "vandermonde rank " << vd.terms.size() << ": rel_error " << e4(vd.rel_error)
                  << ", separability deviation " << e4(vd.consistency) << "\n";
        em.emit_json(vandermonde_to_json(vd));
        return 0;
    } catch (const NoDecomposition& e) {
        std::cerr << e.what() << "\n";
        if (!e.trace.empty()) std::cerr << e.trace;
        em.emit_json(Json{{"error", e.what()}, {"trace", e.trace}});
        return 1;
    } catch (const Error& e) {
        // Everything past input parsing is a method-level failure.
        std::cerr << e.what() << "\n";
        em.emit_json(Json{{"error", e.what()}});
        return 1;
    }
}

struct BenchRow {
    int trial = 0;
    double wall_s = 0.0;
    double rel_error = 0.0;
    bool ok = false;
};

int run_bench(int k, int d, int r, int trials, std::uint64_t seed, bool oracle,
              const std::string& output) {
    Emitter em;
    em.output_path = output;
    em.manifest = base_manifest("bench", {}, seed);
    em.manifest["config"] =
        Json{{"k", k}, {"d", d}, {"r", r}, {"trials", trials}, {"oracle", oracle}};

    std::vector<BenchRow> rows((size_t)std::max(trials, 0));
    auto run_trial = [&](int t) {
        BenchRow& row = rows[(size_t)t];
        row.trial = t;
        Clock::time_point t0 = Clock::now();
        try {
            Rng plant_rng = derive_rng(seed, "bench/plant", t);
            MultiwayTensor A = plant_vandermonde(k, d, r, plant_rng);
            VandermondeDecomposition vd;
            if (oracle) {
                vd = vandermonde_oracle(A);
            } else {
                SolverConfig cfg;
                cfg.seed = derive_rng(seed, "bench/cfg", t).next_u64();
                cfg.rank_min = cfg.rank_max = r;
                vd = vdecompose(A, cfg);
            }
            row.rel_error = vd.rel_error;
            row.ok = vd.rel_error <= 1e-8;
        } catch (const std::exception& e) {
            row.rel_error = std::numeric_limits<double>::infinity();
            row.ok = false;
        }
        row.wall_s = std::chrono::duration<double>(Clock::now() - t0).count();
    };

    // Trials are independent; run them on their own threads.
    std::vector<std::thread> pool;
    for (int t = 0; t < trials; ++t) pool.emplace_back(run_trial, t);
    for (auto& th : pool) th.join();

    int n = (1 << k) - 1;  // chart variables of the symmetric embedding
    std::ostringstream csv;
    csv << "k,n,d,r,trial,wall_s,rel_error,ok\n";
    int successes = 0;
    for (const auto& row : rows) {
        csv << k << "," << n << "," << d << "," << r << "," << row.trial << ","
            << fmt("%.6f", row.wall_s) << "," << fmt("%.6e", row.rel_error) << ","
            << (row.ok ? 1 : 0) << "\n";
        successes += row.ok ? 1 : 0;
    }
    std::cerr << "bench k=" << k << " d=" << d << " r=" << r << ": " << successes << "/" << trials
              << " trials reached rel_error <= 1e-8\n";
    em.manifest["successes"] = successes;
    em.emit_text(csv.str());
    return (trials == 0 || successes == trials) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symmetric tensor decomposition on algebraic varieties"};
    app.set_version_flag("--version", symx::version);
    app.require_subcommand(1);

    std::string tensor_path, variety_path, multiway_path, output;
    double tol = 1e-8;
    std::uint64_t seed = default_seed();
    int rank = 0, max_rank = 12, restarts = 60;
    bool oracle = false;
    int bk = 2, bd = 3, br = 4, trials = 5;
    std::string generic = "auto";

    CLI::App* mem = app.add_subcommand("membership", "test whether a tensor lies in S^d(X)");
    mem->add_option("tensor", tensor_path, "tensor JSON file")->required();
    mem->add_option("variety", variety_path, "variety JSON file")->required();
    mem->add_option("--tol", tol, "pairing tolerance, scaled by 1 + |A|");
    mem->add_option("--output", output, "write result JSON here (manifest alongside)");

    CLI::App* rk = app.add_subcommand("rank", "flattening ranks, hilbert value, expected rank");
    rk->add_option("tensor", tensor_path, "tensor JSON file")->required();
    rk->add_option("variety", variety_path, "variety JSON file")->required();
    rk->add_option("--seed", seed, "seed for dimension sampling");
    rk->add_option("--output", output, "write result JSON here (manifest alongside)");

    CLI::App* dec = app.add_subcommand("decompose", "low-rank decomposition constrained to X");
    dec->add_option("tensor", tensor_path, "tensor JSON file")->required();
    dec->add_option("variety", variety_path, "variety JSON file")->required();
    dec->add_option("--rank", rank, "pin the rank (disables escalation)");
    dec->add_option("--max-rank", max_rank, "escalation ceiling");
    dec->add_option("--restarts", restarts, "solver restarts per rank");
    dec->add_option("--seed", seed, "random seed");
    dec->add_option("--tol", tol, "solver residual tolerance");
    dec->add_option("--generic-change", generic, "coordinate change: auto, off, force")
        ->check(CLI::IsMember({"auto", "off", "force"}));
    dec->add_option("--output", output, "write result JSON here (manifest alongside)");

    CLI::App* vd = app.add_subcommand("vandermonde", "decompose a multiway array");
    vd->add_option("multiway", multiway_path, "multiway tensor JSON file")->required();
    vd->add_option("--rank", rank, "pin the rank (disables escalation)");
    vd->add_option("--max-rank", max_rank, "escalation ceiling");
    vd->add_option("--restarts", restarts, "solver restarts per rank");
    vd->add_option("--seed", seed, "random seed");
    vd->add_option("--tol", tol, "solver residual tolerance");
    vd->add_flag("--oracle", oracle, "interpolation construction with (d+1)^k terms");
    vd->add_option("--output", output, "write result JSON here (manifest alongside)");

    CLI::App* bench = app.add_subcommand("bench", "planted-instance benchmark (CSV)");
    bench->add_option("--k", bk, "number of modes")->required();
    bench->add_option("--d", bd, "per-mode degree")->required();
    bench->add_option("--r", br, "planted rank")->required();
    bench->add_option("--trials", trials, "number of trials");
    bench->add_option("--seed", seed, "random seed");
    bench->add_flag("--oracle", oracle, "interpolation construction instead of the solver");
    bench->add_option("--output", output, "write CSV here (manifest alongside)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (mem->parsed()) return run_membership(tensor_path, variety_path, tol, output);
        if (rk->parsed()) return run_rank_info(tensor_path, variety_path, seed, output);
        if (dec->parsed())
            return run_decompose(tensor_path, variety_path, rank, max_rank, restarts, seed, tol,
                                 generic, output);
        if (vd->parsed())
            return run_vandermonde(multiway_path, rank, max_rank, restarts, seed, tol, oracle,
                                   output);
        if (bench->parsed()) return run_bench(bk, bd, br, trials, seed, oracle, output);
    } catch (const symx::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
