#pragma once

#include <string>

namespace spillnet {

// Innovation distributions for the volatility models, each standardized to
// mean zero and unit variance. Skew variants apply the inverse-scale
// transform of Fernandez & Steel to the symmetric base density.
enum class InnovationDist { Gaussian, StudentT, GED, SkewGaussian, SkewStudentT, SkewGED };

std::string to_string(InnovationDist d);

// shape (t dof / GED exponent) first, skew second where applicable
int dist_param_count(InnovationDist d);
bool dist_has_shape(InnovationDist d);
bool dist_has_skew(InnovationDist d);

// Standardized density with constants precomputed once per parameter
// vector; log_pdf is then cheap enough for per-observation use.
class InnovationDensity {
public:
    InnovationDensity(InnovationDist dist, double shape, double skew);

    double log_pdf(double z) const;
    double abs_moment() const { return abs_moment_; }  // E|z|
    bool valid() const { return valid_; }

private:
    double base_log_pdf(double x) const;
    double base_abs_moment() const;

    InnovationDist dist_;
    double shape_ = 0.0;
    double skew_ = 1.0;
    bool skewed_ = false;
    bool valid_ = true;
    double log_norm_ = 0.0;   // base-density additive constant
    double ged_lambda_ = 1.0;
    double mu_xi_ = 0.0;      // skew location shift
    double sigma_xi_ = 1.0;   // skew scale
    double log_skew_norm_ = 0.0;
    double abs_moment_ = 0.0;
};

}  // namespace spillnet
