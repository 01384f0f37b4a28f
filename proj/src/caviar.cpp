#include "spillnet/caviar.hpp"

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

void caviar_filter(std::span<const double> r, const double* g, double init,
                   std::vector<double>& f) {
    const std::size_t T = r.size();
    f.resize(T);
    f[0] = init;
    for (std::size_t t = 1; t < T; ++t) {
        const double prev = r[t - 1];
        f[t] = g[0] + g[1] * f[t - 1] + g[2] * std::max(prev, 0.0) + g[3] * (-std::min(prev, 0.0));
    }
}

double check_loss(std::span<const double> r, double tau, const std::vector<double>& f) {
    double loss = 0.0;
    for (std::size_t t = 0; t < r.size(); ++t) {
        const double u = r[t] - f[t];
        loss += u * (tau - (u < 0.0 ? 1.0 : 0.0));
    }
    return std::isfinite(loss) ? loss : kBadLoss;
}

}  // namespace

double caviar_loss(std::span<const double> r, double tau, const std::array<double, 4>& gammas,
                   int burn_in) {
    const std::size_t n_init = std::min<std::size_t>(r.size(), static_cast<std::size_t>(burn_in));
    const double init = quantile({r.begin(), r.begin() + n_init}, tau);
    std::vector<double> f;
    caviar_filter(r, gammas.data(), init, f);
    return check_loss(r, tau, f);
}

CaviarFit fit_caviar(std::span<const double> r, double tau, const CaviarOptions& options) {
    if (!(tau > 0.0 && tau < 0.5)) throw EstimationError("fit_caviar: tau must lie in (0, 0.5)");
    if (r.size() < 10) throw EstimationError("fit_caviar: series too short");

    const std::size_t n_init =
        std::min<std::size_t>(r.size(), static_cast<std::size_t>(options.burn_in));
    const double init = quantile({r.begin(), r.begin() + n_init}, tau);
    const double scale = std::max(1.0, std::abs(init));

    std::vector<double> f;
    auto loss_of = [&](const double* g) {
        caviar_filter(r, g, init, f);
        return check_loss(r, tau, f);
    };

    // screen random candidates, keep the best few for refinement
    std::mt19937_64 rng(options.seed);
    struct Candidate {
        double loss;
        std::array<double, 4> g;
    };
    std::vector<Candidate> top;
    auto consider = [&](const std::array<double, 4>& g) {
        const double loss = loss_of(g.data());
        if (static_cast<int>(top.size()) < options.refine_top) {
            top.push_back({loss, g});
            std::push_heap(top.begin(), top.end(),
                           [](const Candidate& a, const Candidate& b) { return a.loss < b.loss; });
        } else if (loss < top.front().loss) {
            std::pop_heap(top.begin(), top.end(),
                          [](const Candidate& a, const Candidate& b) { return a.loss < b.loss; });
            top.back() = {loss, g};
            std::push_heap(top.begin(), top.end(),
                           [](const Candidate& a, const Candidate& b) { return a.loss < b.loss; });
        }
    };
    consider({init, 0.0, 0.0, 0.0});          // static quantile model
    consider({0.05 * init, 0.95, 0.0, 0.0});  // persistent level
    for (int i = 0; i < options.n_starts; ++i) {
        std::array<double, 4> g;
        g[0] = (2.0 * uniform01(rng) - 1.0) * scale;
        g[1] = uniform01(rng);
        g[2] = 2.0 * uniform01(rng) - 1.0;
        g[3] = 2.0 * uniform01(rng) - 1.0;
        consider(g);
    }

    std::sort(top.begin(), top.end(),
              [](const Candidate& a, const Candidate& b) { return a.loss < b.loss; });

    auto objective = [&](const std::vector<double>& x) { return loss_of(x.data()); };
    std::array<double, 4> best_g = top.front().g;
    double best_loss = top.front().loss;
    for (const auto& cand : top) {
        auto res = nelder_mead(objective, {cand.g.begin(), cand.g.end()}, options.refine);
        if (res.value < best_loss) {
            best_loss = res.value;
            std::copy(res.x.begin(), res.x.end(), best_g.begin());
        }
    }
    if (best_loss >= kBadLoss)
        throw EstimationError("fit_caviar: non-finite check loss at every candidate");

    CaviarFit fit;
    fit.tau = tau;
    fit.gammas = best_g;
    caviar_filter(r, best_g.data(), init, f);
    fit.var_series = f;
    fit.objective = best_loss;
    fit.explosive = std::abs(best_g[1]) >= 1.0;
    std::size_t violations = 0;
    for (std::size_t t = 1; t < r.size(); ++t)
        if (r[t] < f[t]) ++violations;
    fit.violation_rate = static_cast<double>(violations) / static_cast<double>(r.size() - 1);
    return fit;
}

}  // namespace spillnet
