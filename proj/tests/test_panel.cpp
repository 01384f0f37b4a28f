#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "spillnet/errors.hpp"
#include "spillnet/panel.hpp"

using namespace spillnet;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("price csv loads one asset per non-date column") {
    const auto path = write_temp("prices_basic.csv",
                                 "date,ABC\n"
                                 "2020-01-02,100\n"
                                 "2020-01-03,101\n"
                                 "2020-01-06,99\n");
    const PricePanel panel = load_price_csv(path);
    REQUIRE(panel.dates.size() == 3);
    REQUIRE(panel.assets.size() == 1);
    CHECK(panel.assets[0].ticker == "ABC");
    CHECK(panel.prices(2, 0) == doctest::Approx(99.0));
}

TEST_CASE("blank price cells become missing values") {
    const auto path = write_temp("prices_blank.csv",
                                 "date,ABC\n"
                                 "2020-01-02,100\n"
                                 "2020-01-03,\n"
                                 "2020-01-06,99\n");
    const PricePanel panel = load_price_csv(path);
    CHECK(std::isnan(panel.prices(1, 0)));
}

TEST_CASE("duplicate and unsorted dates are ingest errors") {
    const auto dup = write_temp("prices_dup.csv",
                                "date,ABC\n2020-01-02,100\n2020-01-02,101\n");
    CHECK_THROWS_AS(load_price_csv(dup), IngestError);
    const auto unsorted = write_temp("prices_unsorted.csv",
                                     "date,ABC\n2020-01-03,100\n2020-01-02,101\n");
    CHECK_THROWS_AS(load_price_csv(unsorted), IngestError);
    const auto garbage = write_temp("prices_garbage.csv",
                                    "date,ABC\n2020-01-02,abc\n");
    CHECK_THROWS_AS(load_price_csv(garbage), IngestError);
}

namespace {

PricePanel panel_from_prices(const std::vector<double>& prices) {
    PricePanel panel;
    for (std::size_t t = 0; t < prices.size(); ++t) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "2020-02-%02d", static_cast<int>(t) + 1);
        panel.dates.push_back(buf);
    }
    panel.prices.resize(static_cast<Eigen::Index>(prices.size()), 1);
    for (std::size_t t = 0; t < prices.size(); ++t)
        panel.prices(static_cast<Eigen::Index>(t), 0) = prices[t];
    AssetMeta meta;
    meta.ticker = "A";
    meta.market_cap.assign(prices.size(), 1.0);
    panel.assets.push_back(meta);
    return panel;
}

}  // namespace

TEST_CASE("log returns use the percent convention and drop the first date") {
    const ReturnPanel flat = compute_log_returns(panel_from_prices({100.0, 100.0}));
    REQUIRE(flat.returns.rows() == 1);
    CHECK(flat.returns(0, 0) == doctest::Approx(0.0));
    CHECK(flat.percent);

    const ReturnPanel pct =
        compute_log_returns(panel_from_prices({100.0, 100.0 * std::exp(0.01)}));
    CHECK(pct.returns(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a missing price makes both adjacent returns missing") {
    auto panel = panel_from_prices({100.0, 1.0, 99.0});
    panel.prices(1, 0) = std::numeric_limits<double>::quiet_NaN();
    const ReturnPanel returns = compute_log_returns(panel);
    CHECK(std::isnan(returns.returns(0, 0)));
    CHECK(std::isnan(returns.returns(1, 0)));
}

TEST_CASE("nonpositive observed price is a domain error") {
    CHECK_THROWS_AS(compute_log_returns(panel_from_prices({100.0, -1.0})), DataError);
    CHECK_THROWS_AS(compute_log_returns(panel_from_prices({0.0, 100.0})), DataError);
}

TEST_CASE("returns round-trip prices up to the initial level") {
    const std::vector<double> prices = {100.0, 104.2, 99.1, 101.7, 95.3, 96.0};
    const ReturnPanel returns = compute_log_returns(panel_from_prices(prices));
    double level = prices[0];
    for (Eigen::Index t = 0; t < returns.returns.rows(); ++t) {
        level *= std::exp(returns.returns(t, 0) / 100.0);
        CHECK(level == doctest::Approx(prices[static_cast<std::size_t>(t) + 1]).epsilon(1e-12));
    }
}

namespace {

ReturnPanel make_return_panel(const std::vector<std::vector<double>>& columns) {
    ReturnPanel panel;
    const std::size_t T = columns.front().size();
    for (std::size_t t = 0; t < T; ++t) panel.dates.push_back("d" + std::to_string(1000 + t));
    panel.returns.resize(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        AssetMeta meta;
        meta.ticker = "A" + std::to_string(j);
        meta.market_cap.assign(T, 1.0);
        panel.assets.push_back(meta);
        for (std::size_t t = 0; t < T; ++t)
            panel.returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                columns[j][t];
    }
    panel.zero_filled.assign(columns.size(), false);
    return panel;
}

}  // namespace

TEST_CASE("liquidity filter keeps assets strictly above the nonzero threshold") {
    const std::size_t T = 10;
    std::vector<double> active(T, 0.0), sparse(T, 0.0), boundary(T, 0.0), dead(T, 0.0);
    for (std::size_t t = 0; t < 4; ++t) active[t] = 1.0;    // 40% nonzero: survives
    sparse[0] = 1.0; sparse[1] = -1.0;                      // 20%: dropped
    for (std::size_t t = 0; t < 3; ++t) boundary[t] = 0.5;  // exactly 30%: dropped (strict)
    auto panel = make_return_panel({active, sparse, boundary, dead});
    panel.returns(5, 0) = std::numeric_limits<double>::quiet_NaN();  // to be zero-filled

    const ReturnPanel filtered = apply_liquidity_filter(panel, 0.30);
    REQUIRE(filtered.assets.size() == 1);
    CHECK(filtered.assets[0].ticker == "A0");
    CHECK(filtered.zero_filled[0]);
    for (Eigen::Index t = 0; t < filtered.returns.rows(); ++t)
        CHECK_FALSE(std::isnan(filtered.returns(t, 0)));
    CHECK(filtered.returns(5, 0) == 0.0);

    CHECK_THROWS_AS(apply_liquidity_filter(make_return_panel({dead}), 0.30), DataError);
}

TEST_CASE("subsector index weights by market cap, renormalizing around gaps") {
    auto panel = make_return_panel({{2.0, 4.0}, {0.0, 0.0}});
    panel.assets[0].subsector = Subsector::Multiline;
    panel.assets[1].subsector = Subsector::Multiline;

    SUBCASE("single member reproduces its returns") {
        panel.assets[1].subsector = Subsector::Reinsurance;
        const auto index = build_subsector_index(panel, Subsector::Multiline);
        CHECK(index.series.values[0] == doctest::Approx(2.0));
        CHECK(index.series.values[1] == doctest::Approx(4.0));
        CHECK(index.series.source_ticker == "Mul.Lin.");
    }
    SUBCASE("equal caps average the returns") {
        const auto index = build_subsector_index(panel, Subsector::Multiline);
        CHECK(index.series.values[0] == doctest::Approx(1.0));
    }
    SUBCASE("caps 3:1 give the hand-computed weighted mean") {
        panel.assets[0].market_cap = {3.0, 3.0};
        panel.assets[1].market_cap = {1.0, 1.0};
        panel.returns(0, 0) = 4.0;
        panel.returns(0, 1) = 0.0;
        const auto index = build_subsector_index(panel, Subsector::Multiline);
        CHECK(index.series.values[0] == doctest::Approx(3.0));  // (3*4 + 1*0)/4
    }
    SUBCASE("missing return means zero weight that day") {
        panel.returns(0, 0) = std::numeric_limits<double>::quiet_NaN();
        panel.returns(0, 1) = 6.0;
        const auto index = build_subsector_index(panel, Subsector::Multiline);
        CHECK(index.series.values[0] == doctest::Approx(6.0));
    }
    SUBCASE("all caps missing flags the date and yields zero") {
        panel.assets[0].market_cap = {std::numeric_limits<double>::quiet_NaN(), 1.0};
        panel.assets[1].market_cap = {std::numeric_limits<double>::quiet_NaN(), 1.0};
        const auto index = build_subsector_index(panel, Subsector::Multiline);
        CHECK(index.series.values[0] == 0.0);
        REQUIRE(index.degenerate_dates.size() == 1);
        CHECK(index.degenerate_dates[0] == panel.dates[0]);
    }
    SUBCASE("empty subsector is an error") {
        CHECK_THROWS_AS(build_subsector_index(panel, Subsector::InsuranceBrokers), DataError);
    }
}

TEST_CASE("metadata attaches subsector and country by ticker") {
    const auto meta_path = write_temp("meta_basic.csv",
                                      "ticker,name,country,subsector\n"
                                      "ABC,Abc Insurance,DE,Mul.Lin.\n");
    const auto price_path = write_temp("prices_meta.csv",
                                       "date,ABC\n2020-01-02,100\n2020-01-03,101\n");
    PricePanel panel = load_price_csv(price_path);
    attach_metadata(panel, meta_path);
    CHECK(panel.assets[0].subsector == Subsector::Multiline);
    CHECK(panel.assets[0].country == "DE");

    const auto bad = write_temp("meta_bad.csv",
                                "ticker,name,country,subsector\nABC,Abc,DE,NotASector\n");
    PricePanel panel2 = load_price_csv(price_path);
    CHECK_THROWS_AS(attach_metadata(panel2, bad), IngestError);
}
