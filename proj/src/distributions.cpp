#include "spillnet/distributions.hpp"

#include <cmath>

#include "spillnet/numerics.hpp"

namespace spillnet {

std::string to_string(InnovationDist d) {
    switch (d) {
        case InnovationDist::Gaussian: return "Gaussian";
        case InnovationDist::StudentT: return "StudentT";
        case InnovationDist::GED: return "GED";
        case InnovationDist::SkewGaussian: return "SkewGaussian";
        case InnovationDist::SkewStudentT: return "SkewStudentT";
        case InnovationDist::SkewGED: return "SkewGED";
    }
    return "Gaussian";
}

bool dist_has_shape(InnovationDist d) {
    return d == InnovationDist::StudentT || d == InnovationDist::GED ||
           d == InnovationDist::SkewStudentT || d == InnovationDist::SkewGED;
}

bool dist_has_skew(InnovationDist d) {
    return d == InnovationDist::SkewGaussian || d == InnovationDist::SkewStudentT ||
           d == InnovationDist::SkewGED;
}

int dist_param_count(InnovationDist d) {
    return (dist_has_shape(d) ? 1 : 0) + (dist_has_skew(d) ? 1 : 0);
}

namespace {

InnovationDist base_of(InnovationDist d) {
    switch (d) {
        case InnovationDist::SkewGaussian: return InnovationDist::Gaussian;
        case InnovationDist::SkewStudentT: return InnovationDist::StudentT;
        case InnovationDist::SkewGED: return InnovationDist::GED;
        default: return d;
    }
}

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln sqrt(2*pi)

}  // namespace

InnovationDensity::InnovationDensity(InnovationDist dist, double shape, double skew)
    : dist_(base_of(dist)), shape_(shape), skew_(skew), skewed_(dist_has_skew(dist)) {
    switch (dist_) {
        case InnovationDist::Gaussian:
            log_norm_ = -kLogSqrt2Pi;
            break;
        case InnovationDist::StudentT:
            if (!(shape_ > 2.0) || !std::isfinite(shape_)) {
                valid_ = false;
                return;
            }
            log_norm_ = std::lgamma((shape_ + 1.0) / 2.0) - std::lgamma(shape_ / 2.0) -
                        0.5 * std::log(M_PI * (shape_ - 2.0));
            break;
        case InnovationDist::GED: {
            if (!(shape_ > 0.1) || !std::isfinite(shape_)) {
                valid_ = false;
                return;
            }
            const double k = shape_;
            ged_lambda_ = std::sqrt(std::pow(2.0, -2.0 / k) *
                                    std::exp(std::lgamma(1.0 / k) - std::lgamma(3.0 / k)));
            log_norm_ = std::log(k) - std::log(ged_lambda_) - (1.0 + 1.0 / k) * std::log(2.0) -
                        std::lgamma(1.0 / k);
            break;
        }
        default:
            valid_ = false;
            return;
    }
    if (skewed_) {
        if (!(skew_ > 0.0) || !std::isfinite(skew_)) {
            valid_ = false;
            return;
        }
        const double m1 = base_abs_moment();
        const double xi = skew_;
        mu_xi_ = m1 * (xi - 1.0 / xi);
        const double var = (1.0 - m1 * m1) * (xi * xi + 1.0 / (xi * xi)) + 2.0 * m1 * m1 - 1.0;
        if (!(var > 0.0)) {
            valid_ = false;
            return;
        }
        sigma_xi_ = std::sqrt(var);
        log_skew_norm_ = std::log(2.0) - std::log(xi + 1.0 / xi) + std::log(sigma_xi_);
        abs_moment_ = integrate_real_line([this](double z) {
            const double lp = log_pdf(z);
            return std::abs(z) * std::exp(lp);
        });
    } else {
        abs_moment_ = base_abs_moment();
    }
}

double InnovationDensity::base_log_pdf(double x) const {
    switch (dist_) {
        case InnovationDist::Gaussian:
            return log_norm_ - 0.5 * x * x;
        case InnovationDist::StudentT:
            return log_norm_ -
                   0.5 * (shape_ + 1.0) * std::log1p(x * x / (shape_ - 2.0));
        case InnovationDist::GED:
            return log_norm_ - 0.5 * std::pow(std::abs(x / ged_lambda_), shape_);
        default:
            return -1e100;
    }
}

double InnovationDensity::base_abs_moment() const {
    switch (dist_) {
        case InnovationDist::Gaussian:
            return std::sqrt(2.0 / M_PI);
        case InnovationDist::StudentT:
            return 2.0 * std::sqrt(shape_ - 2.0) / (std::sqrt(M_PI) * (shape_ - 1.0)) *
                   std::exp(std::lgamma((shape_ + 1.0) / 2.0) - std::lgamma(shape_ / 2.0));
        case InnovationDist::GED:
            return ged_lambda_ * std::pow(2.0, 1.0 / shape_) *
                   std::exp(std::lgamma(2.0 / shape_) - std::lgamma(1.0 / shape_));
        default:
            return std::sqrt(2.0 / M_PI);
    }
}

double InnovationDensity::log_pdf(double z) const {
    if (!skewed_) return base_log_pdf(z);
    const double x = sigma_xi_ * z + mu_xi_;
    const double arg = x >= 0.0 ? x / skew_ : x * skew_;
    return log_skew_norm_ + base_log_pdf(arg);
}

}  // namespace spillnet
