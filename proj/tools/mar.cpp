// Command-line front end: grid benchmark, plots and single-series fitting.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 grid finished with
// failed fits.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mar/bench.hpp"
#include "mar/csv.hpp"
#include "mar/plot.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kPartial = 3;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (auto& item : mar::csv::split(s))
        if (auto t = mar::csv::trim(item); !t.empty()) out.push_back(t);
    return out;
}

template <typename T>
std::vector<T> parse_numbers(const std::string& s, const char* what) {
    std::vector<T> out;
    for (const auto& item : split_list(s)) {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || v < 0) throw CLI::ValidationError(what, "'" + item + "' is not a nonnegative integer");
        out.push_back(static_cast<T>(v));
    }
    if (out.empty()) throw CLI::ValidationError(what, "empty list");
    return out;
}

nlohmann::json to_json(const mar::Mat& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (mar::Index i = 0; i < a.rows(); ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (mar::Index j = 0; j < a.cols(); ++j) r.push_back(a(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

nlohmann::json info_json(const mar::FitInfo& info) {
    return {{"converged", info.converged},
            {"iterations", info.iterations},
            {"used_pinv", info.used_pinv},
            {"objective", info.objective},
            {"nkp_residuals", info.nkp_residuals}};
}

std::pair<mar::Index, mar::Index> parse_shape(const std::string& s) {
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        std::size_t p1 = 0, p2 = 0;
        const long m = std::stol(s.substr(0, x), &p1);
        const long n = std::stol(s.substr(x + 1), &p2);
        if (p1 != x || p2 != s.size() - x - 1 || m < 1 || n < 1) throw std::invalid_argument(s);
        return {m, n};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--shape", "expected MxN with positive integers, got '" + s + "'");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matrix autoregression estimators: benchmark grid, plots and single-series fits"};
    app.require_subcommand(1);

    // bench run / bench plot
    auto* bench = app.add_subcommand("bench", "Simulation benchmark");
    bench->require_subcommand(1);

    auto* run = bench->add_subcommand("run", "Run the estimator x size x length grid and write rows.csv/summary.csv");
    std::string sizes = "2,3,5,10", lengths = "100,300,500", estimators = "mar_yw,mar_burg,mar_lse,var_yw";
    std::size_t replicates = 100, test_len = 100, jobs = 1, burn_in = mar::default_burn_in;
    std::uint64_t seed = 42;
    std::string out_dir = "results";
    run->add_option("--sizes", sizes, "Comma-separated square matrix sizes m")->capture_default_str();
    run->add_option("--lengths", lengths, "Comma-separated training lengths T")->capture_default_str();
    run->add_option("--replicates", replicates, "Replicates per (m, T) cell")->capture_default_str();
    run->add_option("--estimators", estimators,
                    "Comma-separated subset of mar_yw,mar_burg,mar_lse,var_yw,var_burg,vecmar_yw,vecmar_burg")
        ->capture_default_str();
    run->add_option("--seed", seed, "Base seed")->capture_default_str();
    run->add_option("--test-len", test_len, "Observations held out for evaluation")->capture_default_str();
    run->add_option("--burn-in", burn_in, "Discarded warm-up steps of the simulator")->capture_default_str();
    run->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();

    auto* plot = bench->add_subcommand("plot", "Render SVG charts (plus .dat sidecars) from rows.csv");
    std::string plot_csv, plot_kind = "vs_size", plot_out = "figs", plot_estimators;
    std::optional<long> fix_length, fix_size;
    plot->add_option("--csv", plot_csv, "rows.csv produced by 'bench run'")->required();
    plot->add_option("--kind", plot_kind, "vs_size | vs_length | time_surface")
        ->capture_default_str()
        ->check(CLI::IsMember({"vs_size", "vs_length", "time_surface"}));
    plot->add_option("--fix-length", fix_length, "Training length used by vs_size");
    plot->add_option("--fix-size", fix_size, "Matrix size used by vs_length");
    plot->add_option("--estimators", plot_estimators, "Restrict to these estimators");
    plot->add_option("--out", plot_out, "Output directory")->capture_default_str();

    // fit
    auto* fit = app.add_subcommand(
        "fit",
        "Fit one series.\nInput: CSV with one observation per line, each line holding the m*n entries of X_t\n"
        "in column-stacking order (x11,x21,...,xm1,x12,...). Lines starting with '#' are ignored.");
    std::string input, shape, method = "mar_burg";
    std::size_t order = 1;
    bool as_json = false;
    double tol = mar::FitOptions{}.tol;
    std::size_t max_iter = mar::FitOptions{}.max_iter;
    fit->add_option("--input", input, "Series CSV")->required();
    fit->add_option("--shape", shape, "Matrix shape MxN, e.g. 3x3")->required();
    fit->add_option("--method", method, "mar_yw | mar_burg | mar_lse | var_yw | var_burg | vecmar_yw | vecmar_burg")
        ->capture_default_str();
    fit->add_option("--order", order, "Model order (orders above 1 only for mar_burg)")->capture_default_str();
    fit->add_option("--tol", tol, "Relative stopping tolerance")->capture_default_str();
    fit->add_option("--max-iter", max_iter, "Iteration cap of the iterative solvers")->capture_default_str();
    fit->add_flag("--json", as_json, "Emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (run->parsed()) {
            mar::bench::BenchSpec spec;
            spec.sizes = parse_numbers<mar::Index>(sizes, "--sizes");
            spec.lengths = parse_numbers<std::size_t>(lengths, "--lengths");
            spec.replicates = replicates;
            spec.estimators.clear();
            for (const auto& e : split_list(estimators)) spec.estimators.push_back(mar::bench::parse_estimator(e));
            spec.base_seed = seed;
            spec.test_len = test_len;
            spec.burn_in = burn_in;
            spec.jobs = jobs;
            spec.output_dir = out_dir;
            const auto res = mar::bench::run_grid(spec);
            std::cout << "wrote " << res.rows.size() << " rows to " << res.rows_path.string() << " and summary to "
                      << res.summary_path.string() << '\n';
            for (const auto& row : res.rows)
                if (row.status != "ok")
                    std::cerr << "fit failure: " << mar::bench::to_string(row.estimator) << " m=" << row.m
                              << " T=" << row.T << " replicate=" << row.replicate << ": " << row.error << '\n';
            return res.failures ? kPartial : kOk;
        }
        if (plot->parsed()) {
            mar::plot::PlotRequest req;
            req.kind = mar::plot::parse_kind(plot_kind);
            req.fix_length = fix_length;
            req.fix_size = fix_size;
            req.estimators = split_list(plot_estimators);
            req.out_dir = plot_out;
            const auto out = mar::plot::plot_results(plot_csv, req);
            std::cout << "wrote " << out.svg.string() << " and " << out.sidecar.string() << '\n';
            return kOk;
        }
        if (fit->parsed()) {
            const auto [m, n] = parse_shape(shape);
            const auto est = mar::bench::parse_estimator(method);
            if (order != 1 && est != mar::bench::Estimator::kMarBurg) {
                std::cerr << "error: --order above 1 is only supported by mar_burg\n";
                return kUsage;
            }
            if (order < 1) {
                std::cerr << "error: --order must be at least 1\n";
                return kUsage;
            }
            mar::FitOptions opts;
            opts.tol = tol;
            opts.max_iter = max_iter;
            const mar::MatrixSeries s = mar::csv::read_series_file(input, m, n);

            nlohmann::json j;
            j["method"] = method;
            j["shape"] = {m, n};
            j["T"] = s.size();
            using mar::bench::Estimator;
            if (est == Estimator::kVarYw || est == Estimator::kVarBurg) {
                const mar::VarModel vm = est == Estimator::kVarYw ? mar::fit_var1_yw(s) : mar::fit_var1_burg(s);
                const auto c = mar::is_causal(vm);
                j["order"] = 1;
                j["phi"] = to_json(vm.phi);
                j["sigma"] = to_json(vm.sigma);
                j["mean"] = to_json(vm.mean);
                j["causal"] = c.causal;
                j["rho"] = c.radius;
                j["info"] = info_json(vm.info);
            } else {
                mar::MarModel mm;
                switch (est) {
                    case Estimator::kMarYw: mm = mar::fit_mar1_yw(s, opts); break;
                    case Estimator::kMarBurg: mm = mar::fit_mar_burg(s, order, opts); break;
                    case Estimator::kMarLse: mm = mar::fit_mar1_lse(s, opts); break;
                    case Estimator::kVecmarYw: mm = mar::fit_vecmar_nkp(s, mar::VarMethod::kYuleWalker); break;
                    default: mm = mar::fit_vecmar_nkp(s, mar::VarMethod::kBurg); break;
                }
                const auto c = mar::is_causal(mm);
                j["order"] = mm.order();
                nlohmann::json terms = nlohmann::json::array();
                for (const auto& t : mm.terms) terms.push_back({{"A", to_json(t.a)}, {"B", to_json(t.b)}});
                j["terms"] = terms;
                j["sigma"] = to_json(mm.sigma);
                j["mean"] = to_json(mm.mean);
                j["causal"] = c.causal;
                j["rho"] = c.radius;
                j["info"] = info_json(mm.info);
            }
            if (as_json) {
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "method " << method << ", shape " << m << "x" << n << ", T = " << s.size() << '\n';
                if (j.contains("terms")) {
                    for (std::size_t i = 0; i < j["terms"].size(); ++i) {
                        const auto& t = j["terms"][i];
                        std::cout << "A(" << i + 1 << ") = " << t["A"].dump() << '\n';
                        std::cout << "B(" << i + 1 << ") = " << t["B"].dump() << '\n';
                    }
                } else {
                    std::cout << "phi = " << j["phi"].dump() << '\n';
                }
                std::cout << "causal = " << (j["causal"].get<bool>() ? "yes" : "no") << ", rho = "
                          << j["rho"].get<double>() << ", converged = "
                          << (j["info"]["converged"].get<bool>() ? "yes" : "no") << '\n';
            }
            return kOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const mar::model_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const mar::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}
