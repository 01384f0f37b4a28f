#include "spillnet/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spillnet {

namespace {

struct Simplex {
    std::vector<std::vector<double>> pts;
    std::vector<double> vals;
};

double run_once(const std::function<double(const std::vector<double>&)>& f,
                std::vector<double>& best_x, double& best_f, int& evals,
                const NelderMeadOptions& opt) {
    const std::size_t n = best_x.size();
    Simplex s;
    s.pts.assign(n + 1, best_x);
    s.vals.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double step = opt.initial_step * std::max(1.0, std::abs(best_x[i]));
        if (step == 0.0) step = opt.initial_step;
        s.pts[i + 1][i] += step;
    }
    for (std::size_t i = 0; i <= n; ++i) {
        s.vals[i] = f(s.pts[i]);
        ++evals;
    }

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    while (evals < opt.max_evals) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return s.vals[a] < s.vals[b]; });
        Simplex sorted;
        sorted.pts.reserve(n + 1);
        sorted.vals.reserve(n + 1);
        for (auto idx : order) {
            sorted.pts.push_back(s.pts[idx]);
            sorted.vals.push_back(s.vals[idx]);
        }
        s = std::move(sorted);

        const double f_spread = std::abs(s.vals[n] - s.vals[0]);
        double x_spread = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            x_spread = std::max(x_spread, std::abs(s.pts[n][i] - s.pts[0][i]));
        if (f_spread <= opt.f_tol * (1.0 + std::abs(s.vals[0])) && x_spread <= opt.x_tol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += s.pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + coef * (centroid[j] - s.pts[n][j]);
            return p;
        };

        auto reflected = blend(alpha);
        const double fr = f(reflected);
        ++evals;
        if (fr < s.vals[0]) {
            auto expanded = blend(gamma);
            const double fe = f(expanded);
            ++evals;
            if (fe < fr) {
                s.pts[n] = std::move(expanded);
                s.vals[n] = fe;
            } else {
                s.pts[n] = std::move(reflected);
                s.vals[n] = fr;
            }
        } else if (fr < s.vals[n - 1]) {
            s.pts[n] = std::move(reflected);
            s.vals[n] = fr;
        } else {
            auto contracted = blend(fr < s.vals[n] ? rho : -rho);
            const double fc = f(contracted);
            ++evals;
            if (fc < std::min(fr, s.vals[n])) {
                s.pts[n] = std::move(contracted);
                s.vals[n] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        s.pts[i][j] = s.pts[0][j] + sigma * (s.pts[i][j] - s.pts[0][j]);
                    s.vals[i] = f(s.pts[i]);
                    ++evals;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (s.vals[i] < s.vals[best]) best = i;
    if (s.vals[best] < best_f) {
        best_f = s.vals[best];
        best_x = s.pts[best];
    }
    return best_f;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& opt) {
    NelderMeadResult out;
    out.x = std::move(start);
    if (out.x.empty()) {
        out.value = f(out.x);
        out.evals = 1;
        out.converged = true;
        return out;
    }
    out.value = f(out.x);
    out.evals = 1;
    double prev = out.value;
    for (int r = 0; r <= opt.restarts; ++r) {
        run_once(f, out.x, out.value, out.evals, opt);
        if (out.evals >= opt.max_evals) break;
        if (r > 0 && prev - out.value <= opt.f_tol * (1.0 + std::abs(out.value))) break;
        prev = out.value;
    }
    out.converged = out.evals < opt.max_evals && out.value < 1e99;
    return out;
}

}  // namespace spillnet
