// Command-line driver: dataset generation, classification, baseline
// comparison, cross validation, and the MANET demo. Every command is
// deterministic given its flags; diagnostics go to stderr, data to files or
// stdout.

#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "unn/unn.hpp"

namespace {

template <typename F>
void parallel_for(std::size_t count, int jobs, F&& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    for (int t = 0; t < jobs; ++t) {
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

// Writes to the given path, or to stdout for "-".
class OutputFile {
public:
    explicit OutputFile(const std::string& path) : path_(path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw std::runtime_error(path + ": cannot open for writing");
        }
    }
    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

private:
    std::string path_;
    std::ofstream file_;
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct CommonOptions {
    int k = 1;
    int h = 100;
    int n_samples = 0;  // 0 = 100 * 2^d
    std::uint64_t seed = 0;
    int jobs = 1;

    unn::UnnParams params() const {
        unn::UnnParams p;
        p.k = k;
        p.histogram_slots = h;
        p.mc_samples = n_samples;
        p.seed = seed;
        return p;
    }

    void add_to(CLI::App& cmd, bool with_jobs = true) {
        cmd.add_option("--k", k, "neighbors per class (default 1)");
        cmd.add_option("--h", h, "histogram slots (default 100)");
        cmd.add_option("--n-samples", n_samples, "Monte Carlo samples per object (default 100*2^d)");
        cmd.add_option("--seed", seed, "random seed (default 0)");
        if (with_jobs) cmd.add_option("--jobs", jobs, "parallel query batches (default 1)");
    }
};

// ---------------------------------------------------------------------------

struct GenOptions {
    std::string input;
    std::string out;
    double spread = 0.0;
    std::string mode = "spread";
    std::uint64_t seed = 0;
};

void run_gen(const GenOptions& opt) {
    const auto certain = unn::read_labeled_csv(opt.input);
    if (certain.empty()) throw std::runtime_error(opt.input + ": no data rows");
    unn::Dataset data;
    if (opt.mode == "spread") {
        data = unn::inject_uncertainty(certain, unn::make_spread_config(certain, opt.spread, opt.seed));
    } else if (opt.mode == "gauss") {
        data = unn::inject_gaussian_uncertainty(certain, opt.spread, unn::column_std_devs(certain), opt.seed);
    } else {
        throw std::runtime_error("unknown --mode '" + opt.mode + "' (expected spread|gauss)");
    }
    unn::save_dataset_jsonl(data, opt.out);
    std::cerr << "wrote " << data.size() << " objects (" << data.labels.size() << " classes, dim "
              << data.dim << ") to " << opt.out << "\n";
}

// ---------------------------------------------------------------------------

struct ClassifyOptions {
    std::string data;
    std::string queries;
    std::string out = "-";
    CommonOptions common;
};

void run_classify(const ClassifyOptions& opt) {
    const unn::Dataset data = unn::load_dataset_jsonl(opt.data);
    OutputFile output(opt.out);
    auto& os = output.stream();

    os << "query,label";
    for (const auto& label : data.labels) os << ",prob:" << label;
    os << ",n_q\n";

    std::vector<unn::ClassificationResult> results;
    if (ends_with(opt.queries, ".jsonl")) {
        const auto queries = unn::load_objects_jsonl(opt.queries);
        results.resize(queries.size());
        parallel_for(queries.size(), opt.common.jobs, [&](std::size_t i) {
            auto params = opt.common.params();
            params.query_index = i;
            results[i] = unn::classify_uncertain(queries[i], data, params);
        });
    } else {
        const auto queries = unn::read_points_csv(opt.queries);
        results.resize(queries.size());
        parallel_for(queries.size(), opt.common.jobs, [&](std::size_t i) {
            auto params = opt.common.params();
            params.query_index = i;
            results[i] = unn::classify(queries[i], data, params);
        });
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        os << i << ',' << results[i].label;
        for (const auto& label : data.labels)
            os << ',' << unn::format_double(results[i].class_probs.at(label));
        os << ',' << results[i].candidates_examined << '\n';
    }
}

// ---------------------------------------------------------------------------

struct CompareOptions {
    std::string data;
    std::string queries;
    std::string out = "-";
    int m_outcomes = 0;  // 0 = N for certain queries, N^2 for uncertain ones
    CommonOptions common;
};

void run_compare(const CompareOptions& opt) {
    const unn::Dataset data = unn::load_dataset_jsonl(opt.data);
    const bool uncertain = ends_with(opt.queries, ".jsonl");
    const int n_samples = opt.common.params().resolved_samples(data.dim);
    const int m_outcomes = opt.m_outcomes > 0 ? opt.m_outcomes
                          : uncertain ? n_samples * n_samples
                                      : n_samples;

    std::vector<unn::UncertainObject> queries;
    if (uncertain) {
        queries = unn::load_objects_jsonl(opt.queries);
    } else {
        for (auto& p : unn::read_points_csv(opt.queries))
            queries.push_back(unn::make_object(unn::PointMass{std::move(p)}));
    }

    struct Row {
        std::string unn, eknn, naive_mean, naive_expected, oracle;
    };
    std::vector<Row> rows(queries.size());
    parallel_for(queries.size(), opt.common.jobs, [&](std::size_t i) {
        auto params = opt.common.params();
        params.query_index = i;
        const auto& q = queries[i];
        Row row;
        row.unn = unn::classify_uncertain(q, data, params).label;
        const auto seed = unn::derive_seed(opt.common.seed, i);
        row.eknn = unn::eknn(q, data, params.k, m_outcomes, seed).label;
        row.naive_mean = unn::naive_uncertain_nn(q, data, unn::NaiveMetric::mean_distance, n_samples, seed);
        row.naive_expected =
            unn::naive_uncertain_nn(q, data, unn::NaiveMetric::expected_distance, n_samples, seed);
        row.oracle = unn::most_probable_class_oracle(q, data, params.k, m_outcomes,
                                                     unn::derive_seed(seed, 1))
                         .label;
        rows[i] = std::move(row);
    });

    OutputFile output(opt.out);
    auto& os = output.stream();
    os << "query,unn,eknn,naive_mean,naive_expected,oracle\n";
    double agree_unn = 0, agree_eknn = 0, agree_mean = 0, agree_expected = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << i << ',' << r.unn << ',' << r.eknn << ',' << r.naive_mean << ',' << r.naive_expected
           << ',' << r.oracle << '\n';
        agree_unn += r.unn == r.oracle;
        agree_eknn += r.eknn == r.oracle;
        agree_mean += r.naive_mean == r.oracle;
        agree_expected += r.naive_expected == r.oracle;
    }
    if (!rows.empty()) {
        const double n = static_cast<double>(rows.size());
        os << "_agreement," << unn::format_double(agree_unn / n) << ','
           << unn::format_double(agree_eknn / n) << ',' << unn::format_double(agree_mean / n) << ','
           << unn::format_double(agree_expected / n) << ",1\n";
    }
}

// ---------------------------------------------------------------------------

struct CrossvalOptions {
    std::string data;
    std::string out = "-";
    CommonOptions common;
};

void run_crossval(const CrossvalOptions& opt) {
    const unn::Dataset data = unn::load_dataset_jsonl(opt.data);
    const auto base_params = opt.common.params();
    const int jobs = opt.common.jobs;

    std::atomic<std::uint64_t> query_counter{0};
    const auto classifier = [&](const unn::UncertainObject& obj, const unn::Dataset& train) {
        auto params = base_params;
        params.query_index = query_counter.fetch_add(1);
        return unn::classify_uncertain(obj, train, params).label;
    };
    (void)jobs;  // folds run sequentially; per-fold work is already modest

    const auto report = unn::ten_fold_cv(data, classifier, opt.common.seed);

    OutputFile output(opt.out);
    auto& os = output.stream();
    os << "fold,accuracy\n";
    for (std::size_t i = 0; i < report.fold_accuracy.size(); ++i)
        os << (i + 1) << ',' << unn::format_double(report.fold_accuracy[i]) << '\n';
    os << "mean," << unn::format_double(report.mean) << '\n';
    os << "stddev," << unn::format_double(report.stddev) << '\n';
    if (!report.stratified) std::cerr << "note: non-stratified split was used\n";
}

// ---------------------------------------------------------------------------

struct ManetOptions {
    std::string out_dir = ".";
    double alpha_loss = 2.0;
    int power_samples = 10000;
    int test_points = 2500;
    int grid = 50;
    int m_outcomes = 0;
    CommonOptions common;
};

void run_manet(const ManetOptions& opt) {
    const auto scenario = unn::make_manet_scenario(opt.common.seed, opt.alpha_loss);
    unn::ManetParams params;
    params.test_points = opt.test_points;
    params.power_samples = opt.power_samples;
    params.boundary_grid = opt.grid;
    params.m_outcomes = opt.m_outcomes;
    params.seed = opt.common.seed;
    params.unn = opt.common.params();
    const auto result = unn::run_manet_experiment(scenario, params);

    {
        std::ofstream grid_out(opt.out_dir + "/boundary_grid.csv");
        if (!grid_out) throw std::runtime_error(opt.out_dir + "/boundary_grid.csv: cannot open");
        grid_out << "x,y,prob_red\n";
        for (const auto& cell : result.boundary)
            grid_out << unn::format_double(cell.x) << ',' << unn::format_double(cell.y) << ','
                     << unn::format_double(cell.prob_red) << '\n';
    }
    {
        std::ofstream res_out(opt.out_dir + "/manet_results.csv");
        if (!res_out) throw std::runtime_error(opt.out_dir + "/manet_results.csv: cannot open");
        res_out << "method,accuracy\n";
        res_out << "unn," << unn::format_double(result.unn_accuracy) << '\n';
        res_out << "eknn," << unn::format_double(result.eknn_accuracy) << '\n';
    }
    std::cerr << "unn accuracy " << result.unn_accuracy << ", eknn accuracy " << result.eknn_accuracy
              << " over " << opt.test_points << " test points\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uncertain nearest neighbor classification toolkit"};
    app.require_subcommand(1);
    // keep the short -h free for the histogram resolution flag
    app.set_help_flag("--help", "print help and exit");

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "inject uncertainty into a certain CSV dataset");
    gen_cmd->set_help_flag("--help", "print help and exit");
    gen_cmd->add_option("--input", gen.input, "certain dataset CSV (features + label column)")->required();
    gen_cmd->add_option("--out", gen.out, "output JSON-lines dataset")->required();
    gen_cmd->add_option("--spread", gen.spread, "uncertainty scale s (default 0)");
    gen_cmd->add_option("--mode", gen.mode, "spread | gauss (default spread)");
    gen_cmd->add_option("--seed", gen.seed, "random seed (default 0)");

    ClassifyOptions classify;
    auto* classify_cmd = app.add_subcommand("classify", "classify test objects");
    classify_cmd->set_help_flag("--help", "print help and exit");
    classify_cmd->add_option("--data", classify.data, "training dataset (.jsonl)")->required();
    classify_cmd->add_option("--queries", classify.queries, "queries (.csv points or .jsonl objects)")->required();
    classify_cmd->add_option("--out", classify.out, "output CSV path, or - for stdout (default)");
    classify.common.add_to(*classify_cmd);

    CompareOptions compare;
    auto* compare_cmd = app.add_subcommand("compare", "compare UNN with baseline classifiers");
    compare_cmd->set_help_flag("--help", "print help and exit");
    compare_cmd->add_option("--data", compare.data, "training dataset (.jsonl)")->required();
    compare_cmd->add_option("--queries", compare.queries, "queries (.csv points or .jsonl objects)")->required();
    compare_cmd->add_option("--out", compare.out, "output CSV path, or - for stdout (default)");
    compare_cmd->add_option("--m-outcomes", compare.m_outcomes,
                            "sampled outcomes for eKNN/oracle (default N, or N^2 for uncertain queries)");
    compare.common.add_to(*compare_cmd);

    CrossvalOptions crossval;
    auto* crossval_cmd = app.add_subcommand("crossval", "ten-fold cross validation");
    crossval_cmd->set_help_flag("--help", "print help and exit");
    crossval_cmd->add_option("--data", crossval.data, "training dataset (.jsonl)")->required();
    crossval_cmd->add_option("--out", crossval.out, "output CSV path, or - for stdout (default)");
    crossval.common.add_to(*crossval_cmd);

    ManetOptions manet;
    auto* manet_cmd = app.add_subcommand("manet", "mobile ad-hoc network demo scenario");
    manet_cmd->set_help_flag("--help", "print help and exit");
    manet_cmd->add_option("--out-dir", manet.out_dir, "directory for boundary_grid.csv and manet_results.csv");
    manet_cmd->add_option("--alpha-loss", manet.alpha_loss, "path loss exponent (default 2)");
    manet_cmd->add_option("--power-samples", manet.power_samples, "outcomes per power label (default 10000)");
    manet_cmd->add_option("--test-points", manet.test_points, "number of test points (default 2500)");
    manet_cmd->add_option("--grid", manet.grid, "boundary raster resolution (default 50)");
    manet_cmd->add_option("--m-outcomes", manet.m_outcomes, "eKNN outcomes (default N)");
    manet.common.add_to(*manet_cmd, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) run_gen(gen);
        if (classify_cmd->parsed()) run_classify(classify);
        if (compare_cmd->parsed()) run_compare(compare);
        if (crossval_cmd->parsed()) run_crossval(crossval);
        if (manet_cmd->parsed()) run_manet(manet);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
