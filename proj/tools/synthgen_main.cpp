// Writes a deterministic synthetic dataset (company prices, market caps,
// metadata, market index prices) shaped like the real inputs, for smoke
// tests and demos.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spillnet/csv.hpp"
#include "spillnet/sim.hpp"

namespace {

struct Date {
    int y, m, d;
};

int days_in_month(int y, int m) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) return 29;
    return lengths[m - 1];
}

// Zeller-style day of week, 0 = Saturday
int day_of_week(const Date& dt) {
    int y = dt.y, m = dt.m;
    if (m < 3) {
        m += 12;
        --y;
    }
    return (dt.d + 13 * (m + 1) / 5 + y % 100 + y % 100 / 4 + y / 100 / 4 + 5 * (y / 100)) % 7;
}

Date next_weekday(Date dt) {
    do {
        ++dt.d;
        if (dt.d > days_in_month(dt.y, dt.m)) {
            dt.d = 1;
            if (++dt.m > 12) {
                dt.m = 1;
                ++dt.y;
            }
        }
    } while (day_of_week(dt) == 0 || day_of_week(dt) == 1);  // skip Sat/Sun
    return dt;
}

std::string iso(const Date& dt) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", dt.y, dt.m, dt.d);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic dataset generator"};
    std::string out_dir = "data/synthetic";
    int n_assets = 12;
    int n_days = 900;
    unsigned long long seed = 7;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--assets", n_assets, "number of companies");
    app.add_option("--days", n_days, "number of trading days");
    app.add_option("--seed", seed, "rng seed");
    CLI11_PARSE(app, argc, argv);

    std::filesystem::create_directories(out_dir);
    spillnet::GaussianRng rng(seed);

    std::vector<std::string> dates;
    Date dt{2018, 1, 2};
    for (int t = 0; t < n_days + 1; ++t) {  // +1 price row yields n_days returns
        dates.push_back(iso(dt));
        dt = next_weekday(dt);
    }

    const std::vector<std::string> subsectors = {"Ins.Bro.", "Lif.Hea.", "Mul.Lin.", "Pro.Cas.",
                                                 "Reins."};
    const std::vector<std::string> countries = {"DE", "FR", "IT", "GB", "CH", "NL"};

    // mildly cross-correlated stable VAR(1) returns in percent
    const Eigen::Index n = n_assets;
    Eigen::VectorXd alpha = Eigen::VectorXd::Constant(n, 0.02);
    Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        beta(i, i) = 0.10;
        beta(i, (i + 1) % n) = 0.08;
    }
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(n, n, 0.3);
    sigma.diagonal().setConstant(1.5);
    Eigen::MatrixXd returns = spillnet::simulate_var(alpha, {beta}, sigma, n_days, rng);

    spillnet::CsvTable prices, caps, meta, markets;
    prices.header.push_back("date");
    caps.header.push_back("date");
    meta.header = {"ticker", "name", "country", "subsector"};
    for (int j = 0; j < n_assets; ++j) {
        char ticker[16];
        std::snprintf(ticker, sizeof(ticker), "SYN%02d", j);
        prices.header.push_back(ticker);
        caps.header.push_back(ticker);
        meta.rows.push_back({ticker, std::string("Synthetic Insurer ") + std::to_string(j),
                             countries[static_cast<std::size_t>(j) % countries.size()],
                             subsectors[static_cast<std::size_t>(j) % subsectors.size()]});
    }

    // one asset goes public late (missing early prices) and one is illiquid
    // (mostly flat), to exercise the zero-fill and the liquidity filter
    const int late_start = n_assets > 3 ? n_days / 3 : 0;
    std::vector<double> level(static_cast<std::size_t>(n_assets), 100.0);
    std::vector<double> cap(static_cast<std::size_t>(n_assets));
    for (int j = 0; j < n_assets; ++j) cap[static_cast<std::size_t>(j)] = 500.0 + 120.0 * j;

    for (int t = 0; t <= n_days; ++t) {
        std::vector<std::string> price_row{dates[static_cast<std::size_t>(t)]};
        std::vector<std::string> cap_row{dates[static_cast<std::size_t>(t)]};
        for (int j = 0; j < n_assets; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            if (t > 0) {
                double r = returns(t - 1, j);
                if (j == 1 && (t % 4 != 0)) r = 0.0;  // illiquid: trades one day in four
                level[ju] *= std::exp(r / 100.0);
            }
            const bool missing = (j == 2 && t < late_start);
            price_row.push_back(missing ? "" : spillnet::format_double(level[ju]));
            cap[ju] *= std::exp(0.0002 + 0.001 * rng.normal());
            cap_row.push_back(missing ? "" : spillnet::format_double(cap[ju]));
        }
        prices.rows.push_back(std::move(price_row));
        caps.rows.push_back(std::move(cap_row));
    }

    // four market indices with common shocks
    markets.header = {"date", "INSUR", "BANKS", "BONDS", "EQXFIN"};
    Eigen::VectorXd m_alpha = Eigen::VectorXd::Constant(4, 0.01);
    Eigen::MatrixXd m_beta = Eigen::MatrixXd::Constant(4, 4, 0.03);
    m_beta.diagonal().setConstant(0.12);
    Eigen::MatrixXd m_sigma = Eigen::MatrixXd::Constant(4, 4, 0.4);
    m_sigma.diagonal() << 1.7, 1.9, 0.4, 1.1;
    // keep the bond column's covariances consistent with its small variance
    for (int k = 0; k < 4; ++k)
        if (k != 2) {
            m_sigma(2, k) = 0.1;
            m_sigma(k, 2) = 0.1;
        }
    Eigen::MatrixXd m_returns = spillnet::simulate_var(m_alpha, {m_beta}, m_sigma, n_days, rng);
    Eigen::Vector4d m_level = Eigen::Vector4d::Constant(1000.0);
    for (int t = 0; t <= n_days; ++t) {
        std::vector<std::string> row{dates[static_cast<std::size_t>(t)]};
        for (int k = 0; k < 4; ++k) {
            if (t > 0) m_level(k) *= std::exp(m_returns(t - 1, k) / 100.0);
            row.push_back(spillnet::format_double(m_level(k)));
        }
        markets.rows.push_back(std::move(row));
    }

    spillnet::write_csv(out_dir + "/prices.csv", prices);
    spillnet::write_csv(out_dir + "/caps.csv", caps);
    spillnet::write_csv(out_dir + "/metadata.csv", meta);
    spillnet::write_csv(out_dir + "/market_prices.csv", markets);
    std::cout << "wrote " << out_dir << "/{prices,caps,metadata,market_prices}.csv\n";
    return 0;
}
