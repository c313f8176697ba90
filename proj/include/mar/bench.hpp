#pragma once

// Grid benchmark: estimator x matrix size x series length x replicate.
//
// Each (m, T, replicate) draws one random VAR(1) series of dimension m^2 and
// length T + test_len; every estimator is fitted on the first T observations
// and evaluated on the rest. Replicate seeds are
//   base_seed + cell_hash(m, T) + replicate
// so a run is reproducible and independent of --jobs.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "mar/burg.hpp"
#include "mar/csv.hpp"
#include "mar/evaluate.hpp"
#include "mar/lse.hpp"
#include "mar/simulation.hpp"
#include "mar/var.hpp"
#include "mar/vecmar.hpp"
#include "mar/yule_walker.hpp"

namespace mar::bench {

enum class Estimator { kMarYw, kMarBurg, kMarLse, kVarYw, kVarBurg, kVecmarYw, kVecmarBurg };

inline constexpr Estimator all_estimators[] = {Estimator::kMarYw,   Estimator::kMarBurg,  Estimator::kMarLse,
                                               Estimator::kVarYw,   Estimator::kVarBurg,  Estimator::kVecmarYw,
                                               Estimator::kVecmarBurg};

inline std::string to_string(Estimator e) {
    switch (e) {
        case Estimator::kMarYw: return "mar_yw";
        case Estimator::kMarBurg: return "mar_burg";
        case Estimator::kMarLse: return "mar_lse";
        case Estimator::kVarYw: return "var_yw";
        case Estimator::kVarBurg: return "var_burg";
        case Estimator::kVecmarYw: return "vecmar_yw";
        case Estimator::kVecmarBurg: return "vecmar_burg";
    }
    return "unknown";
}

inline Estimator parse_estimator(const std::string& s) {
    for (Estimator e : all_estimators)
        if (to_string(e) == s) return e;
    throw model_error("unknown estimator '" + s + "'");
}

struct BenchSpec {
    std::vector<Index> sizes{2, 3, 5, 10};
    std::vector<std::size_t> lengths{100, 300, 500};
    std::size_t replicates = 100;
    std::vector<Estimator> estimators{std::begin(all_estimators), std::end(all_estimators)};
    std::uint64_t base_seed = 42;
    std::size_t test_len = 100;
    std::size_t burn_in = default_burn_in;
    std::filesystem::path output_dir = "results";
    std::size_t jobs = 1;
    FitOptions fit;

    void validate() const {
        if (sizes.empty() || lengths.empty() || estimators.empty())
            throw model_error("bench: sizes, lengths and estimators must be non-empty");
        if (replicates < 1) throw model_error("bench: replicates must be at least 1");
        if (test_len < 1) throw model_error("bench: test length must be at least 1");
        for (Index m : sizes)
            if (m < 1) throw model_error("bench: matrix sizes must be positive");
        for (std::size_t t : lengths)
            if (t < 3) throw model_error("bench: series lengths must be at least 3");
        fit.validate();
    }
};

struct BenchRow {
    Estimator estimator = Estimator::kMarYw;
    Index m = 0;
    std::size_t T = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::string status = "ok";  // ok | fit_error
    std::string error;
    bool converged = true;
    EvalReport report;
};

inline constexpr const char* rows_schema = "# mar-bench rows v1; mardia residuals: test one-step";
inline constexpr const char* rows_header =
    "estimator,m,T,replicate,seed,status,converged,mae,mse,rmse,smape,mardia_skew_p,mardia_kurt_p,mardia_joint_p,"
    "causal,rho,fit_seconds";
inline constexpr const char* summary_schema = "# mar-bench summary v1; p-value quantiles of mardia_joint_p";
inline constexpr const char* summary_header =
    "estimator,m,T,rows,failures,mean_mae,mean_mse,mean_rmse,mean_smape,mean_fit_seconds,causal_fraction,p_count,"
    "p_min,p_q01,p_q05,p_median";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t cell_hash(Index m, std::size_t T) {
    return splitmix64((static_cast<std::uint64_t>(m) << 32) ^ static_cast<std::uint64_t>(T));
}

inline std::uint64_t replicate_seed(std::uint64_t base, Index m, std::size_t T, std::size_t replicate) {
    return base + cell_hash(m, T) + replicate;
}

struct FitOutcome {
    EvalReport report;
    bool converged = true;
};

inline FitOutcome fit_and_evaluate(Estimator est, const MatrixSeries& train, const MatrixSeries& test,
                                   const FitOptions& opts) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    FitOutcome out;
    auto finish = [&](const auto& model) {
        const double secs = std::chrono::duration<double>(clock::now() - start).count();
        out.report = evaluate(model, train, test);
        out.report.fit_seconds = secs;
        out.converged = model.info.converged;
    };
    switch (est) {
        case Estimator::kMarYw: finish(fit_mar1_yw(train, opts)); break;
        case Estimator::kMarBurg: finish(fit_mar_burg(train, 1, opts)); break;
        case Estimator::kMarLse: finish(fit_mar1_lse(train, opts)); break;
        case Estimator::kVarYw: finish(fit_var1_yw(train)); break;
        case Estimator::kVarBurg: finish(fit_var1_burg(train)); break;
        case Estimator::kVecmarYw: finish(fit_vecmar_nkp(train, VarMethod::kYuleWalker)); break;
        case Estimator::kVecmarBurg: finish(fit_vecmar_nkp(train, VarMethod::kBurg)); break;
    }
    return out;
}

/// All estimator rows of one (m, T, replicate) task.
inline std::vector<BenchRow> run_replicate(const BenchSpec& spec, Index m, std::size_t T, std::size_t replicate) {
    const std::uint64_t seed = replicate_seed(spec.base_seed, m, T, replicate);
    SimConfig cfg;
    cfg.m = m;
    cfg.n = m;
    cfg.T = T + spec.test_len;
    cfg.burn_in = spec.burn_in;
    cfg.seed = seed;
    const MatrixSeries full = simulate(cfg);
    const MatrixSeries train = full.slice(0, T);
    const MatrixSeries test = full.slice(T, spec.test_len);

    std::vector<BenchRow> rows;
    for (Estimator est : spec.estimators) {
        BenchRow row;
        row.estimator = est;
        row.m = m;
        row.T = T;
        row.replicate = replicate;
        row.seed = seed;
        try {
            FitOutcome fo = fit_and_evaluate(est, train, test, spec.fit);
            row.report = fo.report;
            row.converged = fo.converged;
        } catch (const std::exception& e) {
            row.status = "fit_error";
            row.error = e.what();
            row.converged = false;
            row.report = EvalReport{};
            row.report.mae = row.report.mse = row.report.rmse = row.report.smape =
                std::numeric_limits<double>::quiet_NaN();
            row.report.rho = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string format_row(const BenchRow& r) {
    using csv::format_double;
    std::ostringstream os;
    os << to_string(r.estimator) << ',' << r.m << ',' << r.T << ',' << r.replicate << ',' << r.seed << ','
       << r.status << ',' << (r.converged ? 1 : 0) << ',' << format_double(r.report.mae) << ','
       << format_double(r.report.mse) << ',' << format_double(r.report.rmse) << ','
       << format_double(r.report.smape) << ',' << format_double(r.report.mardia_skew_p) << ','
       << format_double(r.report.mardia_kurt_p) << ',' << format_double(r.report.mardia_joint_p) << ','
       << (r.report.causal ? 1 : 0) << ',' << format_double(r.report.rho) << ','
       << format_double(r.report.fit_seconds);
    return os.str();
}

/// Linear-interpolation quantile (type 7) of a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct CellSummary {
    std::string estimator;
    std::string m;  // "all" for the pooled row
    std::string T;
    std::size_t rows = 0;
    std::size_t failures = 0;
    double mean_mae = 0.0, mean_mse = 0.0, mean_rmse = 0.0, mean_smape = 0.0, mean_fit_seconds = 0.0;
    double causal_fraction = 0.0;
    std::size_t p_count = 0;
    double p_min = 0.0, p_q01 = 0.0, p_q05 = 0.0, p_median = 0.0;
};

inline CellSummary summarize(const std::string& est, const std::string& m, const std::string& T,
                             const std::vector<const BenchRow*>& rows) {
    CellSummary s{est, m, T};
    s.rows = rows.size();
    std::vector<double> ps;
    std::size_t ok = 0, causal = 0;
    for (const BenchRow* r : rows) {
        if (r->status != "ok") {
            ++s.failures;
            continue;
        }
        ++ok;
        s.mean_mae += r->report.mae;
        s.mean_mse += r->report.mse;
        s.mean_rmse += r->report.rmse;
        s.mean_smape += r->report.smape;
        s.mean_fit_seconds += r->report.fit_seconds;
        causal += r->report.causal ? 1 : 0;
        if (!std::isnan(r->report.mardia_joint_p)) ps.push_back(r->report.mardia_joint_p);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double k = ok ? static_cast<double>(ok) : nan;
    s.mean_mae /= k;
    s.mean_mse /= k;
    s.mean_rmse /= k;
    s.mean_smape /= k;
    s.mean_fit_seconds /= k;
    s.causal_fraction = static_cast<double>(causal) / k;
    std::sort(ps.begin(), ps.end());
    s.p_count = ps.size();
    s.p_min = ps.empty() ? nan : ps.front();
    s.p_q01 = quantile_sorted(ps, 0.01);
    s.p_q05 = quantile_sorted(ps, 0.05);
    s.p_median = quantile_sorted(ps, 0.5);
    return s;
}

/// Per-(estimator, m, T) summaries followed by one pooled row per estimator.
inline std::vector<CellSummary> summarize_rows(const std::vector<BenchRow>& rows) {
    std::map<std::tuple<int, Index, std::size_t>, std::vector<const BenchRow*>> cells;
    std::map<int, std::vector<const BenchRow*>> pooled;
    for (const BenchRow& r : rows) {
        cells[{static_cast<int>(r.estimator), r.m, r.T}].push_back(&r);
        pooled[static_cast<int>(r.estimator)].push_back(&r);
    }
    std::vector<CellSummary> out;
    for (const auto& [key, group] : cells)
        out.push_back(summarize(to_string(static_cast<Estimator>(std::get<0>(key))), std::to_string(std::get<1>(key)),
                                std::to_string(std::get<2>(key)), group));
    for (const auto& [key, group] : pooled)
        out.push_back(summarize(to_string(static_cast<Estimator>(key)), "all", "all", group));
    return out;
}

inline std::string format_summary(const CellSummary& s) {
    using csv::format_double;
    std::ostringstream os;
    os << s.estimator << ',' << s.m << ',' << s.T << ',' << s.rows << ',' << s.failures << ','
       << format_double(s.mean_mae) << ',' << format_double(s.mean_mse) << ',' << format_double(s.mean_rmse) << ','
       << format_double(s.mean_smape) << ',' << format_double(s.mean_fit_seconds) << ','
       << format_double(s.causal_fraction) << ',' << s.p_count << ',' << format_double(s.p_min) << ','
       << format_double(s.p_q01) << ',' << format_double(s.p_q05) << ',' << format_double(s.p_median);
    return os.str();
}

struct GridResult {
    std::vector<BenchRow> rows;
    std::vector<CellSummary> summary;
    std::size_t failures = 0;
    std::filesystem::path rows_path;
    std::filesystem::path summary_path;
};

/// Runs the whole grid (tasks spread over spec.jobs threads), then writes
/// rows.csv and summary.csv into spec.output_dir in grid order.
inline GridResult run_grid(const BenchSpec& spec) {
    spec.validate();
    struct Task {
        Index m;
        std::size_t T;
        std::size_t replicate;
    };
    std::vector<Task> tasks;
    for (Index m : spec.sizes)
        for (std::size_t T : spec.lengths)
            for (std::size_t r = 0; r < spec.replicates; ++r) tasks.push_back({m, T, r});

    std::vector<std::vector<BenchRow>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++)
            results[i] = run_replicate(spec, tasks[i].m, tasks[i].T, tasks[i].replicate);
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(spec.jobs, tasks.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    GridResult out;
    for (auto& group : results)
        for (auto& row : group) {
            if (row.status != "ok") ++out.failures;
            out.rows.push_back(std::move(row));
        }
    out.summary = summarize_rows(out.rows);

    std::filesystem::create_directories(spec.output_dir);
    out.rows_path = spec.output_dir / "rows.csv";
    out.summary_path = spec.output_dir / "summary.csv";
    {
        std::ofstream f(out.rows_path, std::ios::binary);
        if (!f) throw data_error("cannot write " + out.rows_path.string());
        f << rows_schema << '\n' << rows_header << '\n';
        for (const BenchRow& r : out.rows) f << format_row(r) << '\n';
    }
    {
        std::ofstream f(out.summary_path, std::ios::binary);
        if (!f) throw data_error("cannot write " + out.summary_path.string());
        f << summary_schema << '\n' << summary_header << '\n';
        for (const CellSummary& s : out.summary) f << format_summary(s) << '\n';
    }
    return out;
}

} // namespace mar::bench
