#include "spillnet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spillnet {

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("sample_variance: need >= 2 points");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double quantile(std::vector<double> x, double q) {
    if (x.empty()) throw std::invalid_argument("quantile: empty input");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
    std::sort(x.begin(), x.end());
    const double pos = q * static_cast<double>(x.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= x.size()) return x.back();
    const double frac = pos - static_cast<double>(lo);
    return x[lo] + frac * (x[lo + 1] - x[lo]);
}

double expectile(std::span<const double> x, double psi) {
    if (x.empty()) throw std::invalid_argument("expectile: empty input");
    if (psi <= 0.0 || psi >= 1.0) throw std::invalid_argument("expectile: psi outside (0,1)");
    double d = mean(x);
    for (int it = 0; it < 200; ++it) {
        double num = 0.0, den = 0.0;
        for (double v : x) {
            const double w = (v < d) ? (1.0 - psi) : psi;
            num += w * v;
            den += w;
        }
        const double next = num / den;
        if (std::abs(next - d) <= 1e-13 * (1.0 + std::abs(d))) return next;
        d = next;
    }
    return d;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t mix_seed(std::uint64_t root, std::uint64_t salt) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

// 64-point Gauss-Legendre nodes/weights on [-1,1], positive half; mirrored
// at use site. Generated by Newton iteration on Legendre polynomials.
struct GaussLegendre {
    std::vector<double> node, weight;
    explicit GaussLegendre(int n) {
        node.resize(n);
        weight.resize(n);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            node[i] = x;
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

}  // namespace

double integrate_real_line(const std::function<double(double)>& f) {
    static const GaussLegendre gl(256);
    // split at zero (absolute-moment integrands kink there), then
    // z = +-tan(u) with u in (0, pi/2)
    double s = 0.0;
    for (std::size_t i = 0; i < gl.node.size(); ++i) {
        const double u = (gl.node[i] + 1.0) * (M_PI / 4.0);
        const double c = std::cos(u);
        const double z = std::sin(u) / c;
        const double w = gl.weight[i] * (M_PI / 4.0) / (c * c);
        s += w * (f(z) + f(-z));
    }
    return s;
}

}  // namespace spillnet
