#include "spillnet/garch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spillnet/errors.hpp"
#include "spillnet/numerics.hpp"
#include "spillnet/optim.hpp"

namespace spillnet {

std::string to_string(VarianceFamily f) {
    switch (f) {
        case VarianceFamily::Standard: return "Standard";
        case VarianceFamily::EGARCH: return "EGARCH";
        case VarianceFamily::GJR: return "GJR";
    }
    return "Standard";
}

int GarchSpec::n_params() const {
    const int mean = 1 + ar_order + ma_order;
    int variance = 1 + arch_order + garch_order;
    if (family != VarianceFamily::Standard) variance += arch_order;  // asymmetry terms
    return mean + variance + dist_param_count(dist);
}

std::string GarchSpec::name() const {
    return "ARMA(" + std::to_string(ar_order) + "," + std::to_string(ma_order) + ")+" +
           to_string(family) + "(" + std::to_string(arch_order) + "," +
           std::to_string(garch_order) + ")/" + to_string(dist);
}

namespace {

constexpr double kInfeasible = 1e100;
constexpr double kMaxPersistence = 0.9995;

void validate_spec(const GarchSpec& spec) {
    auto in_range = [](int v) { return v >= 0 && v <= 2; };
    if (!in_range(spec.ar_order) || !in_range(spec.ma_order) || !in_range(spec.arch_order) ||
        !in_range(spec.garch_order))
        throw EstimationError("garch spec orders must lie in {0,1,2}: " + spec.name());
    if (spec.arch_order + spec.garch_order < 1)
        throw EstimationError("garch spec needs arch_order + garch_order >= 1: " + spec.name());
}

struct ParamLayout {
    int k, q, m, s;
    VarianceFamily family;
    InnovationDist dist;
    int mean_count;      // 1 + k + q
    int variance_count;  // depends on family
    int dist_count;
    int total;
};

ParamLayout layout_of(const GarchSpec& spec) {
    ParamLayout l{};
    l.k = spec.ar_order;
    l.q = spec.ma_order;
    l.m = spec.arch_order;
    l.s = spec.garch_order;
    l.family = spec.family;
    l.dist = spec.dist;
    l.mean_count = 1 + l.k + l.q;
    l.variance_count = 1 + l.m + l.s + (spec.family != VarianceFamily::Standard ? l.m : 0);
    l.dist_count = dist_param_count(spec.dist);
    l.total = l.mean_count + l.variance_count + l.dist_count;
    return l;
}

// Constraint surface: returns a positive violation magnitude (0 feasible).
double constraint_violation(const ParamLayout& l, const double* vp, const double* dp) {
    double v = 0.0;
    auto require = [&v](bool ok, double magnitude) {
        if (!ok) v += 1.0 + magnitude;
    };
    const double omega0 = vp[0];
    if (l.family == VarianceFamily::Standard) {
        require(omega0 > 0.0, -omega0);
        double persistence = 0.0;
        for (int i = 0; i < l.m; ++i) {
            require(vp[1 + i] >= 0.0, -vp[1 + i]);
            persistence += vp[1 + i];
        }
        for (int j = 0; j < l.s; ++j) {
            require(vp[1 + l.m + j] >= 0.0, -vp[1 + l.m + j]);
            persistence += vp[1 + l.m + j];
        }
        require(persistence <= kMaxPersistence, persistence - kMaxPersistence);
    } else if (l.family == VarianceFamily::GJR) {
        require(omega0 > 0.0, -omega0);
        double persistence = 0.0;
        for (int i = 0; i < l.m; ++i) {
            const double arch = vp[1 + i];
            const double asym = vp[1 + l.m + i];
            require(arch >= 0.0, -arch);
            require(arch + asym >= 0.0, -(arch + asym));
            persistence += arch + 0.5 * asym;
        }
        for (int j = 0; j < l.s; ++j) {
            const double g = vp[1 + 2 * l.m + j];
            require(g >= 0.0, -g);
            persistence += g;
        }
        require(persistence <= kMaxPersistence, persistence - kMaxPersistence);
    } else {  // EGARCH, log-variance scale
        require(std::abs(omega0) <= 50.0, std::abs(omega0) - 50.0);
        double garch_mass = 0.0;
        for (int i = 0; i < l.m; ++i) {
            require(std::abs(vp[1 + i]) <= 5.0, std::abs(vp[1 + i]) - 5.0);
            require(std::abs(vp[1 + l.m + i]) <= 5.0, std::abs(vp[1 + l.m + i]) - 5.0);
        }
        for (int j = 0; j < l.s; ++j) garch_mass += std::abs(vp[1 + 2 * l.m + j]);
        require(garch_mass <= kMaxPersistence, garch_mass - kMaxPersistence);
    }
    if (dist_has_shape(l.dist)) {
        const double shape = dp[0];
        const bool is_t = l.dist == InnovationDist::StudentT || l.dist == InnovationDist::SkewStudentT;
        if (is_t) require(shape > 2.05 && shape < 200.0, std::abs(shape - 8.0));
        else require(shape > 0.3 && shape < 20.0, std::abs(shape - 2.0));
    }
    if (dist_has_skew(l.dist)) {
        const double skew = dp[dist_has_shape(l.dist) ? 1 : 0];
        require(skew > 0.05 && skew < 20.0, std::abs(skew - 1.0));
    }
    return v;
}

// ARMA filter -> innovations, then family variance filter -> sigma^2 and the
// innovation-distribution log-likelihood. Scratch buffers are reused across
// optimizer evaluations.
struct GarchWork {
    std::vector<double> a;       // innovations
    std::vector<double> sigma2;  // conditional variances
};

double log_likelihood(const ParamLayout& l, std::span<const double> r, const double* mp,
                      const double* vp, const double* dp, double r_mean, double r_var,
                      GarchWork& work) {
    const std::size_t T = r.size();
    auto& a = work.a;
    auto& sigma2 = work.sigma2;
    a.resize(T);
    sigma2.resize(T);

    const double phi0 = mp[0];
    for (std::size_t t = 0; t < T; ++t) {
        double mean_t = phi0;
        for (int i = 1; i <= l.k; ++i) {
            const double r_lag = t >= static_cast<std::size_t>(i) ? r[t - i] : r_mean;
            mean_t += mp[i] * r_lag;
        }
        for (int i = 1; i <= l.q; ++i) {
            const double a_lag = t >= static_cast<std::size_t>(i) ? a[t - i] : 0.0;
            mean_t += mp[l.k + i] * a_lag;
        }
        a[t] = r[t] - mean_t;
    }

    const double omega0 = vp[0];
    if (l.family == VarianceFamily::EGARCH) {
        const InnovationDensity density(l.dist, l.dist_count > 0 ? dp[0] : 0.0,
                                        dist_has_skew(l.dist) ? dp[l.dist_count - 1] : 1.0);
        if (!density.valid()) return -kInfeasible;
        const double abs_moment = density.abs_moment();
        const double log_var0 = std::log(r_var);
        for (std::size_t t = 0; t < T; ++t) {
            double lv = omega0;
            for (int i = 1; i <= l.m; ++i) {
                double z = 0.0, centered_abs = 0.0;
                if (t >= static_cast<std::size_t>(i)) {
                    const double sd = std::sqrt(sigma2[t - i]);
                    z = a[t - i] / sd;
                    centered_abs = std::abs(z) - abs_moment;
                }
                lv += vp[i] * centered_abs + vp[l.m + i] * z;
            }
            for (int j = 1; j <= l.s; ++j) {
                const double lag = t >= static_cast<std::size_t>(j)
                                       ? std::log(sigma2[t - j])
                                       : log_var0;
                lv += vp[2 * l.m + j] * lag;
            }
            lv = std::clamp(lv, log_var0 - 60.0, log_var0 + 60.0);
            sigma2[t] = std::exp(lv);
        }
        double ll = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const double sd = std::sqrt(sigma2[t]);
            ll += -std::log(sd) + density.log_pdf(a[t] / sd);
        }
        return std::isfinite(ll) ? ll : -kInfeasible;
    }

    // Standard / GJR share the squared-innovation recursion
    for (std::size_t t = 0; t < T; ++t) {
        double s2 = omega0;
        for (int i = 1; i <= l.m; ++i) {
            double a2, neg_weight;
            if (t >= static_cast<std::size_t>(i)) {
                a2 = a[t - i] * a[t - i];
                neg_weight = a[t - i] < 0.0 ? 1.0 : 0.0;
            } else {
                a2 = r_var;        // backcast
                neg_weight = 0.5;  // expected sign split
            }
            s2 += vp[i] * a2;
            if (l.family == VarianceFamily::GJR) s2 += vp[l.m + i] * neg_weight * a2;
        }
        const int garch_offset = l.family == VarianceFamily::GJR ? 2 * l.m : l.m;
        for (int j = 1; j <= l.s; ++j) {
            const double lag = t >= static_cast<std::size_t>(j) ? sigma2[t - j] : r_var;
            s2 += vp[garch_offset + j] * lag;
        }
        if (!(s2 > 0.0) || !std::isfinite(s2)) return -kInfeasible;
        sigma2[t] = s2;
    }
    const InnovationDensity density(l.dist, l.dist_count > 0 ? dp[0] : 0.0,
                                    dist_has_skew(l.dist) ? dp[l.dist_count - 1] : 1.0);
    if (!density.valid()) return -kInfeasible;
    double ll = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const double sd = std::sqrt(sigma2[t]);
        ll += -std::log(sd) + density.log_pdf(a[t] / sd);
    }
    return std::isfinite(ll) ? ll : -kInfeasible;
}

std::vector<std::vector<double>> starting_points(const ParamLayout& l, double r_mean,
                                                 double r_var) {
    std::vector<std::vector<double>> starts;
    for (const auto& [arch_mass, garch_mass] : {std::pair{0.05, 0.90}, std::pair{0.10, 0.60}}) {
        std::vector<double> x(static_cast<std::size_t>(l.total), 0.0);
        x[0] = r_mean;
        double* vp = x.data() + l.mean_count;
        if (l.family == VarianceFamily::EGARCH) {
            const double mass = l.s > 0 ? garch_mass : 0.0;
            vp[0] = std::log(r_var) * (1.0 - mass);
            for (int i = 1; i <= l.m; ++i) {
                vp[i] = 0.10;       // size effect
                vp[l.m + i] = -0.05;  // sign effect
            }
            for (int j = 1; j <= l.s; ++j) vp[2 * l.m + j] = mass / l.s;
        } else {
            const double arch = l.m > 0 ? arch_mass : 0.0;
            const double garch = l.s > 0 ? garch_mass : 0.0;
            vp[0] = r_var * std::max(0.02, 1.0 - arch - garch);
            for (int i = 1; i <= l.m; ++i) vp[i] = arch / l.m;
            if (l.family == VarianceFamily::GJR)
                for (int i = 1; i <= l.m; ++i) vp[l.m + i] = 0.02 / l.m;
            const int garch_offset = l.family == VarianceFamily::GJR ? 2 * l.m : l.m;
            for (int j = 1; j <= l.s; ++j) vp[garch_offset + j] = garch / l.s;
        }
        double* dp = x.data() + l.mean_count + l.variance_count;
        if (dist_has_shape(l.dist)) {
            const bool is_t =
                l.dist == InnovationDist::StudentT || l.dist == InnovationDist::SkewStudentT;
            dp[0] = is_t ? 8.0 : 1.7;
        }
        if (dist_has_skew(l.dist)) dp[dist_has_shape(l.dist) ? 1 : 0] = 1.0;
        starts.push_back(std::move(x));
    }
    return starts;
}

GarchFit fit_with_budget(std::span<const double> r, const GarchSpec& spec, int max_evals,
                         int restarts, bool throw_on_nonconvergence) {
    validate_spec(spec);
    if (r.size() < 100) throw EstimationError("fit_garch: need at least 100 observations");
    const double r_mean = mean(r);
    const double r_var = variance(r);
    if (!(r_var > 0.0))
        throw EstimationError("fit_garch: zero-variance (constant) series");

    const ParamLayout l = layout_of(spec);
    GarchWork work;
    auto objective = [&](const std::vector<double>& x) {
        const double* mp = x.data();
        const double* vp = x.data() + l.mean_count;
        const double* dp = x.data() + l.mean_count + l.variance_count;
        for (int i = 1; i <= l.k; ++i)
            if (std::abs(mp[i]) > 2.0) return kInfeasible * (1.0 + std::abs(mp[i]));
        for (int i = 1; i <= l.q; ++i)
            if (std::abs(mp[l.k + i]) > 2.0) return kInfeasible * (1.0 + std::abs(mp[l.k + i]));
        const double violation = constraint_violation(l, vp, dp);
        if (violation > 0.0) return kInfeasible * (1.0 + violation);
        return -log_likelihood(l, r, mp, vp, dp, r_mean, r_var, work);
    };

    NelderMeadOptions nm;
    nm.max_evals = max_evals;
    nm.restarts = restarts;
    nm.initial_step = 0.05;

    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (auto& start : starting_points(l, r_mean, r_var)) {
        auto res = nelder_mead(objective, std::move(start), nm);
        if (res.value < best.value) best = std::move(res);
    }
    if (best.value >= kInfeasible)
        throw EstimationError("fit_garch: no feasible point found for " + spec.name());
    if (!best.converged && throw_on_nonconvergence)
        throw EstimationError("fit_garch: optimizer did not converge for " + spec.name() +
                              " (best -logL " + std::to_string(best.value) + ")");

    GarchFit fit;
    fit.spec = spec;
    fit.converged = best.converged;
    fit.mean_params = Eigen::Map<const Eigen::VectorXd>(best.x.data(), l.mean_count);
    fit.variance_params =
        Eigen::Map<const Eigen::VectorXd>(best.x.data() + l.mean_count, l.variance_count);
    fit.dist_params = Eigen::Map<const Eigen::VectorXd>(
        best.x.data() + l.mean_count + l.variance_count, l.dist_count);
    const double* mp = best.x.data();
    const double* vp = best.x.data() + l.mean_count;
    const double* dp = best.x.data() + l.mean_count + l.variance_count;
    fit.log_likelihood = log_likelihood(l, r, mp, vp, dp, r_mean, r_var, work);
    fit.bic = -2.0 * fit.log_likelihood +
              static_cast<double>(spec.n_params()) * std::log(static_cast<double>(r.size()));
    fit.innovations = work.a;
    fit.cond_vol.resize(r.size());
    for (std::size_t t = 0; t < r.size(); ++t) fit.cond_vol[t] = std::sqrt(work.sigma2[t]);
    return fit;
}

}  // namespace

GarchFit fit_garch(std::span<const double> r, const GarchSpec& spec,
                   const GarchFitOptions& options) {
    return fit_with_budget(r, spec, options.max_evals, options.restarts,
                           options.throw_on_nonconvergence);
}

std::vector<GarchSpec> garch_search_grid() {
    std::vector<GarchSpec> grid;
    for (auto family : {VarianceFamily::Standard, VarianceFamily::EGARCH, VarianceFamily::GJR})
        for (auto dist : {InnovationDist::Gaussian, InnovationDist::StudentT, InnovationDist::GED,
                          InnovationDist::SkewGaussian, InnovationDist::SkewStudentT,
                          InnovationDist::SkewGED})
            for (int k = 0; k <= 2; ++k)
                for (int q = 0; q <= 2; ++q)
                    for (int m = 0; m <= 2; ++m)
                        for (int s = 0; s <= 2; ++s) {
                            if (m + s < 1) continue;
                            grid.push_back(GarchSpec{k, q, m, s, family, dist});
                        }
    return grid;
}

GarchFit select_garch(std::span<const double> r, const GarchSearchOptions& options,
                      const Exec& exec) {
    if (r.size() < 250) throw EstimationError("select_garch: need at least 250 observations");
    const std::vector<GarchSpec> grid =
        options.restrict_to.empty() ? garch_search_grid() : options.restrict_to;

    struct Slot {
        double bic = std::numeric_limits<double>::infinity();
        bool ok = false;
        std::string error;
    };
    std::vector<Slot> slots(grid.size());

    parallel_for(exec, grid.size(), [&](std::size_t i) {
        try {
            const int budget = options.screen_evals_base +
                               options.screen_evals_per_param * grid[i].n_params();
            GarchFit fit = fit_with_budget(r, grid[i], budget, 0, false);
            slots[i].bic = fit.bic;
            slots[i].ok = true;
        } catch (const std::exception& e) {
            slots[i].error = e.what();
        }
    });

    std::vector<std::size_t> ranked;
    for (std::size_t i = 0; i < slots.size(); ++i)
        if (slots[i].ok) ranked.push_back(i);
    if (ranked.empty()) {
        std::string detail;
        for (std::size_t i = 0; i < std::min<std::size_t>(slots.size(), 5); ++i)
            detail += "\n  " + grid[i].name() + ": " + slots[i].error;
        throw EstimationError("select_garch: no specification converged" + detail);
    }
    std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        if (slots[a].bic != slots[b].bic) return slots[a].bic < slots[b].bic;
        if (grid[a].n_params() != grid[b].n_params())
            return grid[a].n_params() < grid[b].n_params();
        return a < b;
    });
    const std::size_t n_polish = std::min<std::size_t>(ranked.size(),
                                                       static_cast<std::size_t>(options.polish_top));

    struct Polished {
        GarchFit fit;
        bool ok = false;
    };
    std::vector<Polished> polished(n_polish);
    parallel_for(exec, n_polish, [&](std::size_t i) {
        try {
            polished[i].fit = fit_with_budget(r, grid[ranked[i]], options.polish.max_evals,
                                              options.polish.restarts, true);
            polished[i].ok = polished[i].fit.converged;
        } catch (const std::exception&) {
            polished[i].ok = false;
        }
    });

    const Polished* best = nullptr;
    std::size_t best_enum = 0;
    for (std::size_t i = 0; i < n_polish; ++i) {
        if (!polished[i].ok) continue;
        if (!best || polished[i].fit.bic < best->fit.bic ||
            (polished[i].fit.bic == best->fit.bic &&
             (polished[i].fit.spec.n_params() < best->fit.spec.n_params() ||
              (polished[i].fit.spec.n_params() == best->fit.spec.n_params() &&
               ranked[i] < best_enum)))) {
            best = &polished[i];
            best_enum = ranked[i];
        }
    }
    if (!best) throw EstimationError("select_garch: polish stage failed for every candidate");
    return best->fit;
}

IndicatorSeries conditional_log_volatility(const GarchFit& fit, std::vector<std::string> dates,
                                           std::string ticker) {
    if (!fit.converged)
        throw EstimationError("conditional_log_volatility: fit did not converge");
    IndicatorSeries out;
    out.kind = IndicatorKind::LogVol;
    out.source_ticker = std::move(ticker);
    out.dates = std::move(dates);
    out.values.reserve(fit.cond_vol.size());
    for (double v : fit.cond_vol) out.values.push_back(std::log(v));
    return out;
}

}  // namespace spillnet
