#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mar/bench.hpp"
#include "mar/plot.hpp"
#include "test_util.hpp"

using namespace mar;
using namespace mar::bench;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("mar_test_bench_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Drops the last CSV field (fit_seconds) of every line.
std::string without_timing(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() != '#') line = line.substr(0, line.rfind(','));
        out += line + '\n';
    }
    return out;
}

BenchSpec small_spec(const fs::path& dir) {
    BenchSpec s;
    s.sizes = {2};
    s.lengths = {60};
    s.replicates = 2;
    s.estimators = {Estimator::kMarBurg, Estimator::kVarYw};
    s.test_len = 20;
    s.output_dir = dir;
    return s;
}

BenchRow fake_row(Estimator e, Index m, std::size_t T, double rmse, double p, std::string status = "ok") {
    BenchRow r;
    r.estimator = e;
    r.m = m;
    r.T = T;
    r.status = std::move(status);
    r.report.mae = r.report.mse = r.report.smape = 0.0;
    r.report.rmse = rmse;
    r.report.mardia_joint_p = p;
    r.report.causal = true;
    return r;
}

} // namespace

TEST(Bench, EstimatorNamesRoundTrip) {
    for (Estimator e : all_estimators) EXPECT_EQ(parse_estimator(to_string(e)), e);
    EXPECT_THROW(parse_estimator("mar_ml"), model_error);
}

TEST(Bench, SeedRule) {
    EXPECT_EQ(replicate_seed(42, 3, 100, 0) + 7, replicate_seed(42, 3, 100, 7));
    EXPECT_EQ(replicate_seed(0, 3, 100, 0), cell_hash(3, 100));
    EXPECT_NE(cell_hash(3, 100), cell_hash(100, 3));
    EXPECT_NE(cell_hash(3, 100), cell_hash(3, 300));
}

TEST(Bench, RowCountAndOrder) {
    auto dir = scratch("rows");
    auto res = run_grid(small_spec(dir));
    ASSERT_EQ(res.rows.size(), 4u);
    EXPECT_EQ(res.rows[0].estimator, Estimator::kMarBurg);
    EXPECT_EQ(res.rows[1].estimator, Estimator::kVarYw);
    EXPECT_EQ(res.rows[0].replicate, 0u);
    EXPECT_EQ(res.rows[2].replicate, 1u);
    EXPECT_EQ(res.rows[2].seed, replicate_seed(42, 2, 60, 1));
    EXPECT_EQ(res.failures, 0u);
    for (const auto& r : res.rows) {
        EXPECT_EQ(r.status, "ok");
        EXPECT_TRUE(std::isfinite(r.report.rmse));
        EXPECT_GE(r.report.mardia_joint_p, 0.0);
        EXPECT_LE(r.report.mardia_joint_p, 1.0);
    }
    fs::remove_all(dir);
}

TEST(Bench, CsvSchema) {
    auto dir = scratch("schema");
    auto res = run_grid(small_spec(dir));
    std::istringstream rows(slurp(res.rows_path));
    std::string line;
    std::getline(rows, line);
    EXPECT_EQ(line, rows_schema);
    std::getline(rows, line);
    EXPECT_EQ(line, rows_header);
    const auto ncol = csv::split(rows_header).size();
    std::size_t n = 0;
    while (std::getline(rows, line)) {
        EXPECT_EQ(csv::split(line).size(), ncol);
        ++n;
    }
    EXPECT_EQ(n, 4u);

    std::istringstream sum(slurp(res.summary_path));
    std::getline(sum, line);
    EXPECT_EQ(line, summary_schema);
    std::getline(sum, line);
    EXPECT_EQ(line, summary_header);
    n = 0;
    while (std::getline(sum, line)) {
        EXPECT_EQ(csv::split(line).size(), csv::split(summary_header).size());
        ++n;
    }
    EXPECT_EQ(n, 4u);  // two cells, two pooled rows
    fs::remove_all(dir);
}

TEST(Bench, DeterministicAcrossRunsAndJobs) {
    auto a = scratch("det_a"), b = scratch("det_b");
    BenchSpec s = small_spec(a);
    s.sizes = {2, 3};
    s.lengths = {50, 80};
    s.estimators = {std::begin(all_estimators), std::end(all_estimators)};
    s.jobs = 1;
    auto ra = run_grid(s);
    s.output_dir = b;
    s.jobs = 4;
    auto rb = run_grid(s);
    EXPECT_EQ(without_timing(slurp(ra.rows_path)), without_timing(slurp(rb.rows_path)));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Bench, Quantiles) {
    std::vector<double> v{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.05), 1.15);
    EXPECT_TRUE(std::isnan(quantile_sorted({}, 0.5)));
    EXPECT_DOUBLE_EQ(quantile_sorted({7.0}, 0.3), 7.0);
}

TEST(Bench, SummaryCountsFailuresAndPools) {
    std::vector<BenchRow> rows{
        fake_row(Estimator::kMarYw, 2, 50, 1.0, 0.1),
        fake_row(Estimator::kMarYw, 2, 50, 3.0, 0.5),
        fake_row(Estimator::kMarYw, 2, 50, 99.0, 0.9, "fit_error"),
        fake_row(Estimator::kMarYw, 3, 50, 5.0, 0.3),
    };
    rows[3].report.causal = false;
    auto sum = summarize_rows(rows);
    ASSERT_EQ(sum.size(), 3u);
    EXPECT_EQ(sum[0].m, "2");
    EXPECT_EQ(sum[0].rows, 3u);
    EXPECT_EQ(sum[0].failures, 1u);
    EXPECT_DOUBLE_EQ(sum[0].mean_rmse, 2.0);
    EXPECT_EQ(sum[0].p_count, 2u);
    EXPECT_DOUBLE_EQ(sum[0].p_median, 0.3);
    EXPECT_DOUBLE_EQ(sum[0].p_min, 0.1);
    EXPECT_EQ(sum[2].m, "all");
    EXPECT_EQ(sum[2].rows, 4u);
    EXPECT_DOUBLE_EQ(sum[2].mean_rmse, 3.0);
    EXPECT_DOUBLE_EQ(sum[2].causal_fraction, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(sum[2].p_median, 0.3);
}

TEST(Bench, AllFailedCellIsNan) {
    auto sum = summarize_rows({fake_row(Estimator::kVarYw, 2, 50, 1.0, 0.5, "fit_error")});
    EXPECT_EQ(sum[0].failures, 1u);
    EXPECT_TRUE(std::isnan(sum[0].mean_rmse));
    EXPECT_TRUE(std::isnan(sum[0].p_median));
}

TEST(Bench, SpecValidation) {
    BenchSpec s;
    s.sizes.clear();
    EXPECT_THROW(s.validate(), model_error);
    s = BenchSpec{};
    s.replicates = 0;
    EXPECT_THROW(s.validate(), model_error);
    s = BenchSpec{};
    s.lengths = {2};
    EXPECT_THROW(s.validate(), model_error);
}

TEST(Plot, SidecarMatchesCellMeans) {
    auto dir = scratch("plot");
    BenchSpec s = small_spec(dir);
    s.sizes = {2, 3};
    s.replicates = 3;
    auto res = run_grid(s);

    // independent cell means straight from the in-memory rows
    std::map<std::pair<std::string, long>, std::pair<double, int>> want;
    for (const auto& r : res.rows) {
        auto& [sum, n] = want[{to_string(r.estimator), static_cast<long>(r.m)}];
        sum += r.report.rmse;
        ++n;
    }

    plot::PlotRequest req;
    req.kind = plot::Kind::kVsSize;
    req.out_dir = dir / "figs";
    auto out = plot::plot_results(res.rows_path, req);
    ASSERT_TRUE(fs::exists(out.svg));
    std::ifstream dat(out.sidecar);
    std::string line;
    std::size_t checked = 0;
    while (std::getline(dat, line)) {
        if (line.front() == '#') continue;
        auto f = csv::split(line, '\t');
        ASSERT_EQ(f.size(), 4u);
        if (f[0].rfind("RMSE", 0) != 0) continue;
        auto [sum, n] = want.at({f[1], std::stol(f[2])});
        // csv values round-trip, so the means agree up to summation order
        EXPECT_NEAR(csv::parse_double(f[3]), sum / n, 1e-12 * std::abs(sum / n));
        ++checked;
    }
    EXPECT_EQ(checked, 4u);
    fs::remove_all(dir);
}

TEST(Plot, VsLengthOneSeriesPerEstimator) {
    std::map<plot::CellKey, plot::CellMeans> cells;
    for (const char* e : {"mar_yw", "var_yw", "mar_burg"})
        for (long T : {100, 300}) cells[{e, 3, T}] = {1, 1.0, 1.0, 1.0, 0.1};
    cells[{"mar_yw", 5, 100}] = {1, 2.0, 2.0, 2.0, 0.2};
    plot::PlotRequest req;
    req.kind = plot::Kind::kVsLength;
    req.fix_size = 3;
    auto panels = plot::build_panels(cells, req);
    ASSERT_EQ(panels.size(), 4u);
    for (const auto& p : panels) {
        ASSERT_EQ(p.series.size(), 3u);
        for (const auto& s : p.series) EXPECT_EQ(s.points.size(), 2u);
    }
    req.fix_size.reset();
    EXPECT_THROW(plot::build_panels(cells, req), model_error);
}

TEST(Plot, EmptySelectionWritesNothing) {
    auto dir = scratch("empty");
    std::map<plot::CellKey, plot::CellMeans> cells;
    cells[{"mar_yw", 3, 100}] = {1, 1.0, 1.0, 1.0, 0.1};
    plot::PlotRequest req;
    req.kind = plot::Kind::kVsSize;
    req.fix_length = 500;
    req.out_dir = dir;
    EXPECT_THROW(plot::plot_results(cells, req), data_error);
    req.fix_length = 100;
    req.estimators = {"var_burg"};
    EXPECT_THROW(plot::plot_results(cells, req), data_error);
    EXPECT_FALSE(fs::exists(dir));
}

TEST(Plot, TimeSurfacePanelsPerEstimator) {
    std::map<plot::CellKey, plot::CellMeans> cells;
    for (long m : {2, 3})
        for (long T : {100, 300}) {
            cells[{"mar_yw", m, T}] = {1, 1.0, 1.0, 1.0, 0.01 * m * T};
            cells[{"var_yw", m, T}] = {1, 1.0, 1.0, 1.0, 0.001 * m * T};
        }
    plot::PlotRequest req;
    req.kind = plot::Kind::kTimeSurface;
    auto panels = plot::build_panels(cells, req);
    ASSERT_EQ(panels.size(), 2u);
    EXPECT_EQ(panels[0].series.size(), 2u);
    EXPECT_DOUBLE_EQ(panels[0].series[1].points[1].second, 0.01 * 3 * 300);
}

TEST(Plot, MalformedRowsRejected) {
    std::istringstream bad("estimator,m,T,status\nmar_yw,3\n");
    EXPECT_THROW(plot::read_cell_means(bad), data_error);
    std::istringstream none("# only a comment\n");
    EXPECT_THROW(plot::read_cell_means(none), data_error);
    EXPECT_THROW(plot::parse_kind("scatter"), model_error);
}

TEST(Csv, DoubleRoundTrip) {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double v = rng.normal() * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
        EXPECT_EQ(csv::parse_double(csv::format_double(v)), v);
    }
    EXPECT_TRUE(std::isnan(csv::parse_double(csv::format_double(std::nan("")))));
}

TEST(Csv, SeriesRoundTrip) {
    Rng rng(9);
    std::vector<Mat> xs;
    for (int t = 0; t < 5; ++t) xs.push_back(testutil::randn(2, 3, rng));
    MatrixSeries s(2, 3, xs);
    std::stringstream io;
    csv::write_series(io, s);
    MatrixSeries back = csv::read_series(io, 2, 3);
    ASSERT_EQ(back.size(), 5u);
    for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(back.data()[t], xs[t]);
}
