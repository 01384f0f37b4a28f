#include "spillnet/cares.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spillnet/errors.hpp"
#include "spillnet/numerics.hpp"

namespace spillnet {

namespace {

constexpr double kBadLoss = 1e100;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void care_filter(std::span<const double> r, const double* e, double init,
                 std::vector<double>& d) {
    const std::size_t T = r.size();
    d.resize(T);
    d[0] = init;
    for (std::size_t t = 1; t < T; ++t)
        d[t] = e[0] + e[1] * d[t - 1] + e[2] * std::abs(r[t - 1]);
}

double expectile_loss(std::span<const double> r, double psi, const std::vector<double>& d) {
    double loss = 0.0;
    for (std::size_t t = 0; t < r.size(); ++t) {
        const double u = r[t] - d[t];
        const double w = r[t] < d[t] ? (1.0 - psi) : psi;
        loss += w * u * u;
    }
    return std::isfinite(loss) ? loss : kBadLoss;
}

double violation_share(std::span<const double> r, const std::vector<double>& d) {
    std::size_t violations = 0;
    for (std::size_t t = 1; t < r.size(); ++t)
        if (r[t] < d[t]) ++violations;
    return static_cast<double>(violations) / static_cast<double>(r.size() - 1);
}

}  // namespace

double care_loss(std::span<const double> r, double psi, const std::array<double, 3>& etas,
                 int burn_in) {
    const std::size_t n_init = std::min<std::size_t>(r.size(), static_cast<std::size_t>(burn_in));
    const double init = expectile(r.first(n_init), psi);
    std::vector<double> d;
    care_filter(r, etas.data(), init, d);
    return expectile_loss(r, psi, d);
}

CareFit fit_care(std::span<const double> r, double psi, const CareOptions& options) {
    if (!(psi > 0.0 && psi < 1.0)) throw EstimationError("fit_care: psi must lie in (0,1)");
    if (r.size() < 2) throw EstimationError("fit_care: series too short");

    const std::size_t n_init =
        std::min<std::size_t>(r.size(), static_cast<std::size_t>(options.burn_in));
    const double init = expectile(r.first(n_init), psi);
    const double scale = std::max(1.0, std::abs(init));

    std::vector<double> d;
    auto loss_of = [&](const double* e) {
        care_filter(r, e, init, d);
        return expectile_loss(r, psi, d);
    };
    auto objective = [&](const std::vector<double>& x) { return loss_of(x.data()); };

    std::array<double, 3> best_e{};
    double best_loss = kBadLoss;
    auto refine = [&](const std::array<double, 3>& start, const NelderMeadOptions& nm) {
        auto res = nelder_mead(objective, {start.begin(), start.end()}, nm);
        if (res.value < best_loss) {
            best_loss = res.value;
            std::copy(res.x.begin(), res.x.end(), best_e.begin());
        }
    };

    if (options.warm_start) {
        refine(*options.warm_start, options.refine);
        refine({init, 0.0, 0.0}, options.refine);
    } else {
        std::mt19937_64 rng(options.seed);
        struct Candidate {
            double loss;
            std::array<double, 3> e;
        };
        auto worse = [](const Candidate& a, const Candidate& b) { return a.loss < b.loss; };
        std::vector<Candidate> top;
        auto consider = [&](const std::array<double, 3>& e) {
            const double loss = loss_of(e.data());
            if (static_cast<int>(top.size()) < options.refine_top) {
                top.push_back({loss, e});
                std::push_heap(top.begin(), top.end(), worse);
            } else if (loss < top.front().loss) {
                std::pop_heap(top.begin(), top.end(), worse);
                top.back() = {loss, e};
                std::push_heap(top.begin(), top.end(), worse);
            }
        };
        consider({init, 0.0, 0.0});
        consider({0.05 * init, 0.95, 0.0});
        for (int i = 0; i < options.n_starts; ++i) {
            std::array<double, 3> e;
            e[0] = (2.0 * uniform01(rng) - 1.0) * scale;
            e[1] = uniform01(rng);
            e[2] = 2.0 * uniform01(rng) - 1.0;
            consider(e);
        }
        std::sort(top.begin(), top.end(), worse);
        for (const auto& cand : top) refine(cand.e, options.refine);
    }
    if (best_loss >= kBadLoss)
        throw EstimationError("fit_care: non-finite loss at every candidate");

    CareFit fit;
    fit.psi = psi;
    fit.etas = best_e;
    care_filter(r, best_e.data(), init, d);
    fit.expectile_series = d;
    fit.objective = best_loss;
    fit.explosive = std::abs(best_e[1]) >= 1.0;
    fit.violation_rate = violation_share(r, d);
    return fit;
}

double es_from_expectile(double expectile_value, double psi, double tau, double mean_return) {
    const double c = psi / ((1.0 - 2.0 * psi) * tau);
    return (1.0 + c) * expectile_value - c * mean_return;
}

CaresFit calibrate_cares(std::span<const double> r, double tau, const CaresOptions& options) {
    if (!(tau > 0.0 && tau < 0.5))
        throw EstimationError("calibrate_cares: tau must lie in (0, 0.5)");

    CareFit best_fit;
    double best_gap = std::numeric_limits<double>::infinity();
    bool have_best = false;

    CareOptions chain_options = options.care;
    chain_options.refine = options.chain;
    std::array<double, 3> previous{};
    int exceed_streak = 0;

    for (long k = 0;; ++k) {
        const double psi = options.psi_start + static_cast<double>(k) * options.psi_step;
        if (!(psi < options.psi_max)) break;
        CareFit fit;
        if (!have_best) {
            fit = fit_care(r, psi, options.care);  // full multi-start anchors the chain
        } else {
            chain_options.warm_start = previous;
            fit = fit_care(r, psi, chain_options);
        }
        previous = fit.etas;
        const double gap = std::abs(fit.violation_rate - tau);
        if (!have_best || gap < best_gap) {  // strict: earlier grid point wins ties
            best_gap = gap;
            best_fit = fit;
            have_best = true;
        }
        if (options.early_stop_patience > 0) {
            if (fit.violation_rate > tau + options.early_stop_margin) {
                if (++exceed_streak >= options.early_stop_patience) break;
            } else {
                exceed_streak = 0;
            }
        }
    }
    if (!have_best) throw EstimationError("calibrate_cares: empty psi grid");

    CaresFit out;
    out.tau = tau;
    out.psi_star = best_fit.psi;
    out.etas = best_fit.etas;
    out.expectile_series = best_fit.expectile_series;
    out.violation_rate = best_fit.violation_rate;
    out.within_tolerance = best_gap <= 0.02;
    const double r_mean = mean(r);
    out.es_series.reserve(out.expectile_series.size());
    for (double d : out.expectile_series)
        out.es_series.push_back(es_from_expectile(d, out.psi_star, tau, r_mean));
    return out;
}

}  // namespace spillnet
