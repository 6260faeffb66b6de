// hoi: higher-order interaction toolkit.
//
// Subcommands:
//   views      pairwise MI matrix (raw + thresholded) and order-3/4
//              O-information tensors from one subject's time series
//   rank       group contrast and top-k ranking over tensor cohorts
//   check-cnn  oracle and symmetry self-checks of the 4D forward layers
//   bench      wall-clock comparison of the estimator backends

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hoi/bench.hpp"
#include "hoi/brainnet.hpp"
#include "hoi/group.hpp"
#include "hoi/io.hpp"
#include "hoi/rng.hpp"
#include "hoi/views.hpp"

#include <glob.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace hoi;

namespace {

constexpr const char* kToolVersion = "hoi 1.0.0";

int default_workers() {
    if (const char* env = std::getenv("HOI_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void ensure_writable(const fs::path& p, bool force) {
    if (fs::exists(p) && !force)
        throw Error(p.string() + " exists; pass --force to overwrite");
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

Bandwidth parse_sigma(const std::string& s) {
    if (s == "median") return Bandwidth::median();
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw Error("--sigma expects 'median' or a number, got '" + s + "'");
    return Bandwidth::fixed(v);
}

Estimator parse_estimator(const std::string& s) {
    if (s == "gaussian") return Estimator::Gaussian;
    if (s == "renyi-exact") return Estimator::RenyiExact;
    if (s == "renyi-randomized") return Estimator::RenyiRandomized;
    throw Error("unknown estimator '" + s + "'");
}

json estimator_json(const EstimatorConfig& cfg) {
    return {{"estimator", estimator_name(cfg.estimator)},
            {"alpha", cfg.alpha},
            {"sigma", cfg.bandwidth.is_median() ? json("median") : json(*cfg.bandwidth.sigma)},
            {"probes", cfg.probes},
            {"seed", cfg.master_seed},
            {"ridge", cfg.ridge}};
}

void write_manifest(const fs::path& artifact, json manifest) {
    manifest["artifact"] = artifact.filename().string();
    manifest["created_utc"] = utc_now();
    manifest["tool"] = kToolVersion;
    std::ofstream f(artifact.string() + ".manifest.json", std::ios::trunc);
    if (!f) throw Error("cannot write manifest for " + artifact.string());
    f << manifest.dump(2) << "\n";
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
    glob_t g{};
    const int rc = glob(pattern.c_str(), GLOB_ERR, nullptr, &g);
    std::vector<fs::path> out;
    if (rc == 0)
        for (size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH) throw Error("glob failed for '" + pattern + "'");
    if (out.empty()) throw Error("no files match '" + pattern + "'");
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- views ---

struct ViewsArgs {
    std::string input;
    std::string format = "csv";
    std::vector<int> orders = {2, 3};
    std::string estimator = "gaussian";
    double alpha = 2.0;
    std::string sigma = "median";
    int probes = 30;
    uint64_t seed = 42;
    double ridge = 1e-10;
    double threshold = 0.30;
    std::string out = ".";
    int workers = 0;
    bool force = false;
    bool progress = false;
};

std::string views_command_line(const ViewsArgs& a, int workers) {
    std::string cmd = "hoi views --input " + a.input + " --format " + a.format + " --orders ";
    for (size_t i = 0; i < a.orders.size(); ++i)
        cmd += (i ? "," : "") + std::to_string(a.orders[i]);
    cmd += " --estimator " + a.estimator + " --alpha " + std::to_string(a.alpha) + " --sigma " +
           a.sigma + " --probes " + std::to_string(a.probes) + " --seed " +
           std::to_string(a.seed) + " --threshold " + std::to_string(a.threshold) + " --out " +
           a.out + " --workers " + std::to_string(workers);
    if (a.force) cmd += " --force";
    return cmd;
}

int run_views(const ViewsArgs& args) {
    EstimatorConfig cfg;
    cfg.estimator = parse_estimator(args.estimator);
    cfg.alpha = args.alpha;
    cfg.bandwidth = parse_sigma(args.sigma);
    cfg.probes = args.probes;
    cfg.master_seed = args.seed;
    cfg.ridge = args.ridge;
    cfg.validate();  // rejects randomized + non-integer alpha before any compute

    for (int k : args.orders)
        if (k < 2 || k > 4) throw Error("--orders accepts 2, 3 and 4");
    if (!(args.threshold > 0.0) || args.threshold > 1.0)
        throw Error("--threshold must be in (0, 1]");

    const int workers = args.workers > 0 ? args.workers : default_workers();
    const fs::path out_dir = args.out;
    fs::create_directories(out_dir);

    if (args.format != "csv" && args.format != "raw")
        throw Error("--format must be csv or raw");
    const auto format =
        args.format == "csv" ? io::InputFormat::Csv : io::InputFormat::RawF64;

    const TimeSeriesMatrix data = io::load_timeseries(args.input, format);
    const uint64_t digest = io::file_digest(args.input);
    std::cerr << "loaded " << data.channels() << " channels x " << data.timepoints()
              << " time points from " << args.input << "\n";

    views::BuildOptions opts;
    opts.workers = workers;
    if (args.progress)
        opts.progress = [](uint64_t done, uint64_t total, double sec) {
            std::cerr << "\r" << done << "/" << total << " tuples (" << static_cast<int>(sec)
                      << " s)" << std::flush;
            if (done == total) std::cerr << "\n";
        };

    json base_manifest;
    base_manifest["command"] = views_command_line(args, workers);
    base_manifest["estimator"] = estimator_json(cfg);
    base_manifest["input"] = {{"path", args.input},
                              {"digest_fnv1a64", io::to_hex(digest)},
                              {"channels", data.channels()},
                              {"timepoints", data.timepoints()}};
    base_manifest["standardized"] = cfg.estimator != Estimator::Gaussian;
    base_manifest["workers"] = workers;

    uint64_t total_defects = 0;

    for (int order : args.orders) {
        const auto t0 = std::chrono::steady_clock::now();
        if (order == 2) {
            const auto view = views::build_pairwise_view(data, cfg, opts);
            const auto thresholded = views::sparsify_top_fraction(view.matrix, args.threshold);
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            const fs::path raw_path = out_dir / "v1_pairwise.csv";
            const fs::path thr_path = out_dir / "v1_pairwise_thresholded.csv";
            ensure_writable(raw_path, args.force);
            ensure_writable(thr_path, args.force);
            io::write_matrix_csv(raw_path, view.matrix, data.labels());
            io::write_matrix_csv(thr_path, thresholded, data.labels());

            json m = base_manifest;
            m["order"] = 2;
            m["wall_seconds"] = wall;
            m["defects"] = json::array();
            for (const auto& d : view.defects)
                m["defects"].push_back({{"tuple", d.tuple.to_string()}, {"error", d.message}});
            write_manifest(raw_path, m);
            m["threshold_fraction"] = args.threshold;
            write_manifest(thr_path, m);

            total_defects += view.defects.size();
            std::cerr << "order 2: " << view.matrix.finite_pair_count() << " pairs, "
                      << view.defects.size() << " defects, " << wall << " s\n";
        } else {
            const auto view = views::build_order_view(data, order, cfg, opts);
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            const fs::path path =
                out_dir / (order == 3 ? "v2_order3.hoit" : "v3_order4.hoit");
            ensure_writable(path, args.force);
            io::write_tensor(path, view.tensor);

            json m = base_manifest;
            m["order"] = order;
            m["entries"] = view.tensor.entry_count();
            m["wall_seconds"] = wall;
            m["defects"] = json::array();
            for (const auto& d : view.defects)
                m["defects"].push_back({{"tuple", d.tuple.to_string()}, {"error", d.message}});
            write_manifest(path, m);

            total_defects += view.defects.size();
            std::cerr << "order " << order << ": " << view.tensor.entry_count()
                      << " entries, " << view.defects.size() << " defects, " << wall << " s\n";
        }
    }

    if (total_defects > 0) {
        std::cerr << "completed with " << total_defects << " defective tuples\n";
        return 2;
    }
    return 0;
}

// ----------------------------------------------------------------- rank ---

struct RankArgs {
    std::string group_a;
    std::string group_b;
    int top = 5;
    std::string mode = "abs";
    std::string out = ".";
    bool force = false;
};

int run_rank(const RankArgs& args) {
    group::RankMode mode;
    if (args.mode == "abs")
        mode = group::RankMode::Abs;
    else if (args.mode == "pos")
        mode = group::RankMode::Positive;
    else if (args.mode == "neg")
        mode = group::RankMode::Negative;
    else
        throw Error("--mode must be abs, pos or neg");
    if (args.top < 1) throw Error("--top must be >= 1");

    const auto paths_a = expand_glob(args.group_a);
    const auto paths_b = expand_glob(args.group_b);

    std::vector<InteractionTensor> group_a, group_b;
    uint64_t digest = 0xcbf29ce484222325ull;
    for (const auto& p : paths_a) {
        group_a.push_back(io::read_tensor(p));
        digest = rng::combine(digest, io::file_digest(p));
    }
    for (const auto& p : paths_b) {
        group_b.push_back(io::read_tensor(p));
        digest = rng::combine(digest, io::file_digest(p));
    }
    std::cerr << "group A: " << group_a.size() << " subjects, group B: " << group_b.size()
              << " subjects\n";

    const auto contrast = group::group_contrast(group_a, group_b);
    if (contrast.sd_warning)
        std::cerr << "warning: a group has a single subject; its SD is reported as 0\n";
    if (!contrast.excluded.empty())
        std::cerr << "warning: " << contrast.excluded.size()
                  << " tuples missing in at least one subject were excluded\n";

    const auto top = group::top_k_by_delta(contrast.records, args.top, mode);

    const fs::path out_dir = args.out;
    fs::create_directories(out_dir);
    const fs::path contrast_path = out_dir / "contrast.csv";
    const fs::path top_path = out_dir / "topk.csv";
    ensure_writable(contrast_path, args.force);
    ensure_writable(top_path, args.force);
    group::write_contrast_csv(contrast_path, contrast.records);
    group::write_contrast_csv(top_path, top);

    json m;
    m["command"] = "hoi rank --group-a '" + args.group_a + "' --group-b '" + args.group_b +
                   "' --top " + std::to_string(args.top) + " --mode " + args.mode + " --out " +
                   args.out;
    m["inputs_digest_fnv1a64"] = io::to_hex(digest);
    m["n_a"] = group_a.size();
    m["n_b"] = group_b.size();
    m["excluded_tuples"] = contrast.excluded.size();
    m["estimator_tag"] = group_a.front().estimator_tag();
    write_manifest(contrast_path, m);
    m["top"] = args.top;
    m["mode"] = args.mode;
    write_manifest(top_path, m);

    std::cout << "rank  tuple            group A          group B          delta\n";
    for (size_t i = 0; i < top.size(); ++i) {
        std::cout << i + 1 << "     " << top[i].tuple.to_string() << "  "
                  << group::format_table_row(top[i]) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------ check-cnn ---

// Literal nested-loop references for the forward layers, evaluated on demand
// against the library implementations.
namespace cnncheck {

brainnet::FeatureTensor4D e2e_reference(const brainnet::FeatureTensor4D& in,
                                        const brainnet::CrossKernel4D& ker) {
    const int c = in.size();
    brainnet::FeatureTensor4D out(ker.out_channels(), c);
    for (int n = 0; n < ker.out_channels(); ++n)
        for (int i = 0; i < c; ++i)
            for (int j = 0; j < c; ++j)
                for (int k = 0; k < c; ++k)
                    for (int l = 0; l < c; ++l) {
                        double acc = 0.0;
                        for (int m = 0; m < in.channels(); ++m)
                            for (int off = 1; off <= ker.radius(); ++off) {
                                acc += ker.weight(m, n, 0, true, off) *
                                           in.padded(m, i + off, j, k, l) +
                                       ker.weight(m, n, 0, false, off) *
                                           in.padded(m, i - off, j, k, l) +
                                       ker.weight(m, n, 1, true, off) *
                                           in.padded(m, i, j + off, k, l) +
                                       ker.weight(m, n, 1, false, off) *
                                           in.padded(m, i, j - off, k, l) +
                                       ker.weight(m, n, 2, true, off) *
                                           in.padded(m, i, j, k + off, l) +
                                       ker.weight(m, n, 2, false, off) *
                                           in.padded(m, i, j, k - off, l) +
                                       ker.weight(m, n, 3, true, off) *
                                           in.padded(m, i, j, k, l + off) +
                                       ker.weight(m, n, 3, false, off) *
                                           in.padded(m, i, j, k, l - off);
                            }
                        out.at(n, i, j, k, l) = acc;
                    }
    return out;
}

Eigen::MatrixXd e2n_reference(const brainnet::FeatureTensor4D& in,
                              const brainnet::E2NWeights& w) {
    const int c = in.size();
    Eigen::MatrixXd nodes = Eigen::MatrixXd::Zero(w.out_channels, c);
    for (int n = 0; n < w.out_channels; ++n)
        for (int i = 0; i < c; ++i) {
            double acc = 0.0;
            for (int m = 0; m < in.channels(); ++m)
                for (int j = 0; j < c; ++j)
                    for (int k = 0; k < c; ++k)
                        for (int l = 0; l < c; ++l)
                            acc += w.get(w.alpha, m, n) * in.at(m, i, j, k, l) +
                                   w.get(w.beta, m, n) * in.at(m, j, i, k, l) +
                                   w.get(w.gamma, m, n) * in.at(m, j, k, i, l) +
                                   w.get(w.delta, m, n) * in.at(m, j, k, l, i);
            nodes(n, i) = acc;
        }
    return nodes;
}

brainnet::FeatureTensor4D random_tensor(int channels, int c, uint64_t seed) {
    brainnet::FeatureTensor4D t(channels, c);
    rng::CounterStream stream(seed);
    for (size_t i = 0; i < t.data().size(); ++i) t.data()[i] = stream.normal(i);
    return t;
}

}  // namespace cnncheck

int run_check_cnn(std::vector<int> sizes, uint64_t seed) {
    if (sizes.empty()) sizes = {3, 4, 5};
    for (int c : sizes) {
        if (c > brainnet::FeatureTensor4D::kMaxSize)
            throw Error("--c " + std::to_string(c) + " exceeds the dense bound C <= " +
                        std::to_string(brainnet::FeatureTensor4D::kMaxSize));
        if (c < 2) throw Error("--c must be at least 2");
    }

    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    for (int c : sizes) {
        const int radius = std::min(2, c - 1);
        const auto in = cnncheck::random_tensor(2, c, rng::combine(seed, c));
        const auto kernel = brainnet::CrossKernel4D::random(2, 2, radius, seed + 1);
        const auto weights = brainnet::E2NWeights::random(2, 2, seed + 2);

        const auto e2e = brainnet::e2e_forward(in, kernel);
        const auto e2e_ref = cnncheck::e2e_reference(in, kernel);
        double max_diff = 0.0;
        for (size_t i = 0; i < e2e.data().size(); ++i)
            max_diff = std::max(max_diff, std::abs(e2e.data()[i] - e2e_ref.data()[i]));
        report("e2e oracle equivalence (C=" + std::to_string(c) + ")", max_diff <= 1e-12);

        const auto e2n = brainnet::e2n_forward(in, weights);
        const auto e2n_ref = cnncheck::e2n_reference(in, weights);
        report("e2n oracle equivalence (C=" + std::to_string(c) + ")",
               (e2n - e2n_ref).cwiseAbs().maxCoeff() <= 1e-12);

        report("e2e parameter count = M*N*8K (C=" + std::to_string(c) + ")",
               kernel.parameter_count() == size_t(2) * 2 * 8 * radius);

        // bit-exact pooling invariance under a node rotation
        Eigen::MatrixXd rotated(e2n.rows(), e2n.cols());
        for (int j = 0; j < e2n.cols(); ++j)
            rotated.col((j + 1) % e2n.cols()) = e2n.col(j);
        report("n2g permutation invariance (C=" + std::to_string(c) + ")",
               brainnet::n2g_pool(e2n) == brainnet::n2g_pool(rotated));
    }
    return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- bench ---

struct BenchArgs {
    int c = 30;
    int t = 150;
    int k = 3;
    std::string estimators = "gaussian,renyi-exact,renyi-randomized";
    double alpha = 2.0;
    std::string sigma = "median";
    int probes = 30;
    uint64_t seed = 42;
    int workers = 1;
    std::string out;
    bool force = false;
};

int run_bench(const BenchArgs& args) {
    std::vector<Estimator> estimators;
    std::string token;
    for (char ch : args.estimators + ",") {
        if (ch == ',') {
            if (!token.empty()) estimators.push_back(parse_estimator(token));
            token.clear();
        } else {
            token += ch;
        }
    }

    EstimatorConfig cfg;
    cfg.alpha = args.alpha;
    cfg.bandwidth = parse_sigma(args.sigma);
    cfg.probes = args.probes;
    cfg.master_seed = args.seed;

    const auto report =
        bench::run_benchmark(args.c, args.t, args.k, estimators, cfg, args.workers, args.seed);
    std::cout << report.to_table();

    if (!args.out.empty()) {
        ensure_writable(args.out, args.force);
        std::ofstream f(args.out, std::ios::trunc);
        f << report.to_json() << "\n";
        json m;
        m["command"] = "hoi bench --c " + std::to_string(args.c) + " --t " +
                       std::to_string(args.t) + " --k " + std::to_string(args.k) +
                       " --estimators " + args.estimators + " --seed " +
                       std::to_string(args.seed) + " --workers " +
                       std::to_string(args.workers);
        m["estimator"] = estimator_json(cfg);
        write_manifest(args.out, m);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"higher-order interaction toolkit"};
    app.require_subcommand(1);

    ViewsArgs views_args;
    auto* views_cmd = app.add_subcommand("views", "build interaction views from time series");
    views_cmd->add_option("--input", views_args.input, "input time series file")->required();
    views_cmd->add_option("--format", views_args.format, "csv or raw");
    views_cmd->add_option("--orders", views_args.orders, "view orders, e.g. 2,3,4")
        ->delimiter(',');
    views_cmd->add_option("--estimator", views_args.estimator,
                          "gaussian | renyi-exact | renyi-randomized");
    views_cmd->add_option("--alpha", views_args.alpha, "Renyi order");
    views_cmd->add_option("--sigma", views_args.sigma, "kernel bandwidth: median or a number");
    views_cmd->add_option("--probes", views_args.probes, "probe count for the randomized path");
    views_cmd->add_option("--seed", views_args.seed, "master seed");
    views_cmd->add_option("--ridge", views_args.ridge, "covariance ridge coefficient");
    views_cmd->add_option("--threshold", views_args.threshold,
                          "fraction of pairwise connections kept");
    views_cmd->add_option("--out", views_args.out, "output directory");
    views_cmd->add_option("--workers", views_args.workers,
                          "worker threads (default: hardware, or HOI_WORKERS)");
    views_cmd->add_flag("--force", views_args.force, "overwrite existing outputs");
    views_cmd->add_flag("--progress", views_args.progress, "print sweep progress to stderr");

    RankArgs rank_args;
    auto* rank_cmd = app.add_subcommand("rank", "contrast two tensor cohorts");
    rank_cmd->add_option("--group-a", rank_args.group_a, "glob of group A .hoit files")
        ->required();
    rank_cmd->add_option("--group-b", rank_args.group_b, "glob of group B .hoit files")
        ->required();
    rank_cmd->add_option("--top", rank_args.top, "rows in the top-k report");
    rank_cmd->add_option("--mode", rank_args.mode, "abs | pos | neg");
    rank_cmd->add_option("--out", rank_args.out, "output directory");
    rank_cmd->add_flag("--force", rank_args.force, "overwrite existing outputs");

    std::vector<int> cnn_sizes;
    uint64_t cnn_seed = 7;
    auto* cnn_cmd = app.add_subcommand("check-cnn", "forward-layer oracle self-checks");
    cnn_cmd->add_option("--c", cnn_sizes, "spatial sizes to check (default 3 4 5)");
    cnn_cmd->add_option("--seed", cnn_seed, "seed for the random instances");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "estimator wall-clock comparison");
    bench_cmd->add_option("--c", bench_args.c, "channels");
    bench_cmd->add_option("--t", bench_args.t, "time points");
    bench_cmd->add_option("--k", bench_args.k, "tuple order");
    bench_cmd->add_option("--estimators", bench_args.estimators, "comma-separated set");
    bench_cmd->add_option("--alpha", bench_args.alpha, "Renyi order");
    bench_cmd->add_option("--sigma", bench_args.sigma, "kernel bandwidth");
    bench_cmd->add_option("--probes", bench_args.probes, "probe count");
    bench_cmd->add_option("--seed", bench_args.seed, "data seed");
    bench_cmd->add_option("--workers", bench_args.workers, "worker threads");
    bench_cmd->add_option("--out", bench_args.out, "JSON report path");
    bench_cmd->add_flag("--force", bench_args.force, "overwrite an existing report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (views_cmd->parsed()) return run_views(views_args);
        if (rank_cmd->parsed()) return run_rank(rank_args);
        if (cnn_cmd->parsed()) return run_check_cnn(cnn_sizes, cnn_seed);
        if (bench_cmd->parsed()) return run_bench(bench_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
