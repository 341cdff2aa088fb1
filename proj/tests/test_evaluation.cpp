#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <regex>

#include "qsumm/errors.hpp"
#include "qsumm/evaluation.hpp"
#include "qsumm/rng.hpp"
#include "support/fixture.hpp"
#include "support/oracles.hpp"

using namespace qsumm;

TEST_CASE("pearson basics") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 5.0};
    std::vector<double> affine;
    for (double x : xs) affine.push_back(2.0 * x + 3.0);
    CHECK(pearson(xs, affine) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> negated;
    for (double x : xs) negated.push_back(-x);
    CHECK(pearson(xs, negated) == doctest::Approx(-1.0).epsilon(1e-12));

    const std::vector<double> ys = {1.0, 3.0, 2.0, 5.0};
    CHECK(pearson(xs, ys) ==
          doctest::Approx(oracles::brute_pearson(xs, ys)).epsilon(1e-12));
    CHECK(pearson(xs, ys) == doctest::Approx(31.0 / 35.0).epsilon(1e-12));

    CHECK_THROWS_AS(pearson(std::vector<double>{1.0, 1.0}, xs),
                    std::invalid_argument);
    CHECK_THROWS_AS(pearson(std::vector<double>{1.0}, std::vector<double>{2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        pearson(std::vector<double>{2.0, 2.0, 2.0}, std::vector<double>{1.0, 2.0, 3.0}),
        UndefinedCorrelationError);
}

TEST_CASE("pearson affine invariance on random data") {
    Rng rng(606);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = 3 + rng.below(20);
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(rng.normal());
            ys.push_back(rng.normal());
        }
        const double base = pearson(xs, ys);
        const double a = 0.5 + rng.uniform() * 3.0;
        const double b = rng.normal();
        std::vector<double> transformed;
        for (double x : xs) transformed.push_back(a * x + b);
        CHECK(std::abs(pearson(transformed, ys) - base) < 1e-12);
        std::vector<double> flipped;
        for (double x : xs) flipped.push_back(-x);
        CHECK(std::abs(pearson(flipped, ys) + base) < 1e-12);
    }
}

TEST_CASE("spearman rank behaviour") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    const std::vector<double> increasing = {2.0, 9.0, 20.0, 21.0};
    const std::vector<double> decreasing = {5.0, 4.0, 3.0, 1.0};
    CHECK(spearman(xs, increasing) == doctest::Approx(1.0));
    CHECK(spearman(xs, decreasing) == doctest::Approx(-1.0));

    // Tie handling = average ranks; oracle via independent O(n^2) ranking.
    const std::vector<double> tied = {1.0, 2.0, 2.0, 4.0};
    const std::vector<double> ys = {1.0, 2.0, 3.0, 4.0};
    const double expected =
        oracles::brute_pearson(oracles::brute_ranks(tied), oracles::brute_ranks(ys));
    CHECK(spearman(tied, ys) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(spearman(tied, ys) == doctest::Approx(std::sqrt(0.9)).epsilon(1e-12));

    CHECK_THROWS_AS(spearman({3.0, 3.0, 3.0}, {1.0, 2.0, 3.0}),
                    UndefinedCorrelationError);
}

TEST_CASE("spearman equals pearson on average ranks") {
    Rng rng(32);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n = 2 + rng.below(25);
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(static_cast<double>(rng.below(8)));
            ys.push_back(static_cast<double>(rng.below(8)));
        }
        try {
            const double got = spearman(xs, ys);
            const double expected = oracles::brute_pearson(
                oracles::brute_ranks(xs), oracles::brute_ranks(ys));
            CHECK(std::abs(got - expected) < 1e-12);
        } catch (const UndefinedCorrelationError&) {
            // constant after ranking; fine
        }
    }
}

TEST_CASE("kendall tau-a") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    CHECK(kendall(xs, {10.0, 20.0, 30.0, 40.0}) == 1.0);
    CHECK(kendall(xs, {4.0, 3.0, 2.0, 1.0}) == -1.0);
    // 5 concordant, 1 discordant out of 6 pairs.
    CHECK(kendall(xs, {1.0, 3.0, 2.0, 4.0}) ==
          doctest::Approx(4.0 / 6.0).epsilon(1e-15));
    CHECK_THROWS_AS(kendall(std::vector<double>{1.0}, std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("kendall equals pair enumeration exactly on random series") {
    Rng rng(17);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n = 2 + rng.below(29);
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(static_cast<double>(rng.below(10)));
            ys.push_back(static_cast<double>(rng.below(10)));
        }
        CHECK(kendall(xs, ys) == oracles::brute_kendall(xs, ys));
    }
}

TEST_CASE("revised kendall") {
    // Single group reduces to plain kendall, exactly.
    GroupedSeries single;
    single.rows = {{"g", 1.0, 1.0}, {"g", 2.0, 3.0}, {"g", 3.0, 2.0},
                   {"g", 4.0, 4.0}};
    std::vector<double> xs, ys;
    for (const auto& row : single.rows) {
        xs.push_back(row.x);
        ys.push_back(row.y);
    }
    CHECK(revised_kendall(single) == kendall(xs, ys));

    // Two perfectly concordant groups.
    GroupedSeries concordant;
    concordant.rows = {{"a", 1.0, 1.0}, {"a", 2.0, 2.0},
                       {"b", 5.0, 1.0}, {"b", 6.0, 2.0}};
    CHECK(revised_kendall(concordant) == 1.0);

    // Group A: 3 rows with 1 discordant pair; group B: 2 concordant rows.
    GroupedSeries mixed;
    mixed.rows = {{"A", 1.0, 1.0}, {"A", 2.0, 3.0}, {"A", 3.0, 2.0},
                  {"B", 1.0, 1.0}, {"B", 2.0, 2.0}};
    CHECK(revised_kendall(mixed) == doctest::Approx(0.5).epsilon(1e-15));

    GroupedSeries no_pairs;
    no_pairs.rows = {{"a", 1.0, 1.0}, {"b", 2.0, 2.0}};
    CHECK_THROWS_AS(revised_kendall(no_pairs), std::invalid_argument);
}

TEST_CASE("correlations are invariant under row permutation") {
    Rng rng(9091);
    std::vector<double> xs, ys;
    GroupedSeries series;
    for (int i = 0; i < 15; ++i) {
        xs.push_back(rng.normal());
        ys.push_back(rng.normal());
        series.rows.push_back(
            {"g" + std::to_string(i % 3), xs.back(), ys.back()});
    }
    const double p = pearson(xs, ys);
    const double s = spearman(xs, ys);
    const double k = kendall(xs, ys);
    const double rk = revised_kendall(series);

    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<double> px, py;
    GroupedSeries pseries;
    for (std::size_t i : order) {
        px.push_back(xs[i]);
        py.push_back(ys[i]);
        pseries.rows.push_back(series.rows[i]);
    }
    CHECK(std::abs(pearson(px, py) - p) < 1e-12);
    CHECK(std::abs(spearman(px, py) - s) < 1e-12);
    CHECK(kendall(px, py) == k);
    CHECK(revised_kendall(pseries) == rk);
}

namespace {

std::vector<CorrelationRow> synthetic_rows() {
    // 2 sets x 2 runs.
    std::vector<CorrelationRow> rows;
    rows.push_back({"s1", "r1", 0.2, 0.5, 0.3, 0.25, 0.45, 0.35, 3.1});
    rows.push_back({"s1", "r2", 0.4, 0.3, 0.4, 0.45, 0.25, 0.45, 3.9});
    rows.push_back({"s2", "r1", 0.1, 0.6, 0.2, 0.15, 0.55, 0.25, 2.8});
    rows.push_back({"s2", "r2", 0.3, 0.2, 0.5, 0.35, 0.15, 0.55, 3.5});
    return rows;
}

} // namespace

TEST_CASE("correlation_report cell-by-cell oracle") {
    const std::vector<CorrelationRow> rows = synthetic_rows();
    const CorrelationReport report = correlation_report(rows);

    const std::array<std::vector<double>, 6> columns = {{
        {0.2, 0.4, 0.1, 0.3},     // r2_p
        {0.5, 0.3, 0.6, 0.2},     // r2_r
        {0.3, 0.4, 0.2, 0.5},     // r2_f1
        {0.25, 0.45, 0.15, 0.35}, // su4_p
        {0.45, 0.25, 0.55, 0.15}, // su4_r
        {0.35, 0.45, 0.25, 0.55}, // su4_f1
    }};
    const std::vector<double> human = {3.1, 3.9, 2.8, 3.5};
    for (std::size_t m = 0; m < 6; ++m) {
        REQUIRE(report.cells[m][0].has_value());
        CHECK(*report.cells[m][0] ==
              doctest::Approx(oracles::brute_pearson(columns[m], human))
                  .epsilon(1e-12));
        CHECK(*report.cells[m][1] ==
              doctest::Approx(oracles::brute_pearson(
                                  oracles::brute_ranks(columns[m]),
                                  oracles::brute_ranks(human)))
                  .epsilon(1e-12));
        CHECK(*report.cells[m][2] == oracles::brute_kendall(columns[m], human));
        GroupedSeries grouped;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            grouped.rows.push_back({rows[i].set_id, columns[m][i], human[i]});
        }
        CHECK(*report.cells[m][3] == revised_kendall(grouped));
    }
}

TEST_CASE("correlation_report degenerate columns") {
    // All ROUGE columns equal to the human column: every defined cell is 1.
    std::vector<CorrelationRow> rows;
    for (int i = 0; i < 4; ++i) {
        const double value = 0.1 * (i + 1);
        rows.push_back({"s" + std::to_string(i / 2), "r", value, value, value,
                        value, value, value, value});
    }
    const CorrelationReport identical = correlation_report(rows);
    for (std::size_t m = 0; m < 6; ++m) {
        for (std::size_t c = 0; c < 4; ++c) {
            REQUIRE(identical.cells[m][c].has_value());
            CHECK(*identical.cells[m][c] == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    // A constant ROUGE column leaves pearson/spearman undefined, not fatal.
    std::vector<CorrelationRow> constant = synthetic_rows();
    for (CorrelationRow& row : constant) row.r2_p = 0.5;
    const CorrelationReport report = correlation_report(constant);
    CHECK_FALSE(report.cells[0][0].has_value());
    CHECK_FALSE(report.cells[0][1].has_value());
    CHECK(report.cells[0][2].has_value()); // tau-a stays defined
    CHECK(report.to_csv().find("undefined") != std::string::npos);
}

TEST_CASE("correlation csv parsing") {
    const std::string text =
        "set_id,run_id,r2_p,r2_r,r2_f1,su4_p,su4_r,su4_f1,human_avg\n"
        "b1,mq1,0.1,0.2,0.3,0.4,0.5,0.6,3.7\n"
        "b1,mq2,0.2,0.3,0.4,0.5,0.6,0.7,3.9\n";
    const std::vector<CorrelationRow> rows = parse_correlation_csv(text);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].set_id == "b1");
    CHECK(rows[1].human_avg == 3.9);

    CHECK_THROWS_AS(parse_correlation_csv("bogus,header\n1,2\n"), FormatError);
    CHECK_THROWS_AS(parse_correlation_csv(""), FormatError);
    CHECK_THROWS_AS(
        parse_correlation_csv(
            "set_id,run_id,r2_p,r2_r,r2_f1,su4_p,su4_r,su4_f1,human_avg\n"
            "b1,mq1,0.1,0.2\n"),
        FormatError);
    CHECK_THROWS_AS(
        parse_correlation_csv(
            "set_id,run_id,r2_p,r2_r,r2_f1,su4_p,su4_r,su4_f1,human_avg\n"
            "b1,mq1,x,0.2,0.3,0.4,0.5,0.6,3.7\n"),
        FormatError);
}

TEST_CASE("scatter svg output") {
    const std::vector<std::pair<double, double>> one = {{0.5, 0.7}};
    const std::string svg = scatter_svg_string(one, "x", "y");
    std::size_t circles = 0;
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
         pos = svg.find("<circle", pos + 1)) {
        ++circles;
    }
    CHECK(circles == 1);
    CHECK(svg == scatter_svg_string(one, "x", "y")); // byte determinism
    CHECK(svg.find("<svg") != std::string::npos);

    // Labels are escaped.
    CHECK(scatter_svg_string(one, "a<b", "c&d").find("a&lt;b") !=
          std::string::npos);

    // Three collinear data points stay collinear in pixel space.
    const std::vector<std::pair<double, double>> collinear = {
        {0.0, 1.0}, {1.0, 3.0}, {2.0, 5.0}};
    const std::string plot = scatter_svg_string(collinear, "x", "y");
    std::regex circle_re("<circle cx=\"([0-9.]+)\" cy=\"([0-9.]+)\"");
    std::vector<std::pair<double, double>> pixels;
    for (std::sregex_iterator it(plot.begin(), plot.end(), circle_re), end;
         it != end; ++it) {
        pixels.emplace_back(std::stod((*it)[1]), std::stod((*it)[2]));
    }
    REQUIRE(pixels.size() == 3);
    const double cross =
        (pixels[1].first - pixels[0].first) * (pixels[2].second - pixels[0].second) -
        (pixels[2].first - pixels[0].first) * (pixels[1].second - pixels[0].second);
    CHECK(std::abs(cross) < 1.0); // fixed-precision rounding tolerance

    CHECK_THROWS_AS(scatter_svg_string({}, "x", "y"), std::invalid_argument);
    CHECK_THROWS_AS(
        scatter_svg(one, "x", "y", "/nonexistent-dir/plot.svg"), IoError);
}

TEST_CASE("crossval on the fixture corpus") {
    const std::vector<Sample> corpus = fixture::make_fixture_corpus();
    const EmbeddingTable table = fixture::make_fixture_embeddings(corpus);

    MethodSpec firstn;
    firstn.method = Method::firstn;

    // Training-free methods: every sample's summary is seed-independent and
    // 10 folds of size 3 partition the corpus, so the mean over folds is
    // seed-independent too.
    const CrossValReport a = crossval(corpus, firstn, 10, 1, nullptr);
    const CrossValReport b = crossval(corpus, firstn, 10, 999, nullptr);
    CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));

    // Determinism: same seed, byte-identical report.
    const CrossValReport c = crossval(corpus, firstn, 10, 1, nullptr);
    CHECK(a.render() == c.render());

    // Parallel fold evaluation changes nothing but the echoed jobs value.
    const CrossValReport parallel = crossval(corpus, firstn, 10, 1, nullptr, 4);
    CHECK(parallel.fold_means == a.fold_means);

    // The oracle ranking beats first-n on this fixture by construction.
    MethodSpec oracle;
    oracle.method = Method::oracle;
    const CrossValReport oracle_report = crossval(corpus, oracle, 10, 1, nullptr);
    CHECK(oracle_report.mean > a.mean);

    // Report invariants.
    REQUIRE(a.fold_means.size() == 10);
    double sum = 0.0;
    for (double fold : a.fold_means) sum += fold;
    CHECK(a.mean == doctest::Approx(sum / 10.0).epsilon(1e-12));
    double variance = 0.0;
    for (double fold : a.fold_means) {
        variance += (fold - a.mean) * (fold - a.mean);
    }
    CHECK(a.stdev == doctest::Approx(std::sqrt(variance / 10.0)).epsilon(1e-12));

    // Missing references are reported with ids.
    std::vector<Sample> broken = corpus;
    broken[3].references.clear();
    try {
        crossval(broken, firstn, 10, 1, nullptr);
        FAIL("expected Error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(broken[3].id) != std::string::npos);
    }

    // Trained methods run end to end and echo their configuration.
    MethodSpec svc;
    svc.method = Method::svc;
    svc.linear.epochs = 10;
    const CrossValReport svc_report = crossval(corpus, svc, 5, 3, &table);
    CHECK(svc_report.labelling == "topm:5");
    bool has_c = false;
    for (const auto& [key, value] : svc_report.config_echo) {
        if (key == "c") has_c = true;
    }
    CHECK(has_c);
    CHECK_THROWS_AS(crossval(corpus, svc, 5, 3, nullptr), std::invalid_argument);
}

TEST_CASE("crossval trained methods are reproducible") {
    const std::vector<Sample> corpus = fixture::make_fixture_corpus();
    const EmbeddingTable table = fixture::make_fixture_embeddings(corpus);

    MethodSpec nnc;
    nnc.method = Method::nnc;
    nnc.nn.epochs = 3;
    nnc.nn_hidden = 8;
    const CrossValReport a = crossval(corpus, nnc, 5, 11, &table);
    const CrossValReport b = crossval(corpus, nnc, 5, 11, &table);
    CHECK(a.render() == b.render());

    MethodSpec rl;
    rl.method = Method::rl;
    rl.rl.episodes = 150;
    rl.rl.h = 8;
    const CrossValReport c = crossval(corpus, rl, 5, 11, nullptr);
    const CrossValReport d = crossval(corpus, rl, 5, 11, nullptr);
    CHECK(c.render() == d.render());
}
