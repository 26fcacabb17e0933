#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Core types shared by every Racah polynomial algorithm: parameter
// validation, the N x N value matrix, and the closed-form scalar
// functions (weight, norm, sigma, tau, lambda).

namespace racah {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConstraintViolation : Error {
    using Error::Error;
};
struct NonIntegerSize : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct OverflowError : Error {
    using Error::Error;
};
struct NumericalBreakdown : Error {
    using Error::Error;
};
struct NonIntegerBeta : Error {
    using Error::Error;
};
struct SizeLimit : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct ZeroSignal : Error {
    using Error::Error;
};

// Parameter tuple (a, b, alpha, beta) with derived size N = b - a.
struct RacahParams {
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    int n_size = 0;

    bool special() const { return a == 0.0 && alpha == 0.0 && beta == 0.0; }
};

// Constraints: a > -1/2, b - a a positive integer, alpha > -1,
// beta > -1, beta < 2a + 1.
inline RacahParams validate_params(double a, double b, double alpha, double beta) {
    double diff = b - a;
    double rounded = std::round(diff);
    if (std::abs(diff - rounded) > 1e-9)
        throw NonIntegerSize("b - a = " + std::to_string(diff) + " is not an integer");
    if (rounded < 1.0)
        throw ConstraintViolation("b - a must be a positive integer");
    if (!(a > -0.5))
        throw ConstraintViolation("a > -1/2 fails: a = " + std::to_string(a));
    if (!(alpha > -1.0))
        throw ConstraintViolation("alpha > -1 fails: alpha = " + std::to_string(alpha));
    if (!(beta > -1.0))
        throw ConstraintViolation("beta > -1 fails: beta = " + std::to_string(beta));
    if (!(beta < 2.0 * a + 1.0))
        throw ConstraintViolation("beta < 2a+1 fails: beta = " + std::to_string(beta) +
                                  ", 2a+1 = " + std::to_string(2.0 * a + 1.0));
    RacahParams p;
    p.a = a;
    p.b = a + rounded;
    p.alpha = alpha;
    p.beta = beta;
    p.n_size = static_cast<int>(rounded);
    return p;
}

// N x N matrix of weighted polynomial values, entry (n, x) = R~_n(a + x).
// Row-major by degree n; rows above max_order are absent.
class PolyMatrix {
  public:
    PolyMatrix() = default;
    PolyMatrix(RacahParams params, int max_order)
        : params_(params), max_order_(max_order),
          values_(static_cast<size_t>(max_order + 1) * params.n_size, 0.0) {}

    double& at(int n, int x) { return values_[static_cast<size_t>(n) * params_.n_size + x]; }
    double at(int n, int x) const { return values_[static_cast<size_t>(n) * params_.n_size + x]; }

    const RacahParams& params() const { return params_; }
    int n_size() const { return params_.n_size; }
    int max_order() const { return max_order_; }
    int rows() const { return max_order_ + 1; }

    const std::vector<double>& data() const { return values_; }
    std::vector<double>& data() { return values_; }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

  private:
    RacahParams params_;
    int max_order_ = -1;
    std::vector<double> values_;
};

namespace detail {

inline double lg(double x) { return std::lgamma(x); }

}  // namespace detail

// log of the weight function rho(s).
inline double log_weight_rho(const RacahParams& p, double s) {
    using detail::lg;
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    if (s < a - 1e-9 || s > b - 1.0 + 1e-9)
        throw DomainError("weight_rho: s outside [a, b-1]");
    return lg(a + s + 1) + lg(b + s + al + 1) + lg(b + al - s) + lg(s - a + be + 1) -
           lg(b + s + 1) - lg(b - s) - lg(s - a + 1) - lg(a - be + s + 1);
}

inline double weight_rho(const RacahParams& p, double s) {
    double l = log_weight_rho(p, s);
    if (l > 700.0)
        throw OverflowError("weight_rho overflows at s = " + std::to_string(s));
    return std::exp(l);
}

// log of the squared norm d^2_n.
inline double log_norm_d2(const RacahParams& p, int n) {
    using detail::lg;
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    if (n < 0 || n > p.n_size - 1)
        throw DomainError("norm_d2: n outside [0, N-1]");
    return lg(al + n + 1) + lg(be + n + 1) + lg(a + b + al + n + 1) +
           lg(b - a + al + be + n + 1) - std::log(al + be + 2.0 * n + 1) - lg(n + 1.0) -
           lg(b - a - n) - lg(al + be + n + 1) - lg(a + b - n - be);
}

inline double norm_d2(const RacahParams& p, int n) {
    double l = log_norm_d2(p, n);
    if (l > 700.0)
        throw OverflowError("norm_d2 overflows at n = " + std::to_string(n));
    return std::exp(l);
}

// rho(s+1)/rho(s) as a product of linear factors (no gamma evaluation).
inline double rho_ratio(const RacahParams& p, double s) {
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    return ((a + s + 1) * (b + s + al + 1) * (s - a + be + 1) * (b - s - 1)) /
           ((b + al - s - 1) * (b + s + 1) * (s - a + 1) * (a - be + s + 1));
}

// (d_{n-1}/d_n)^2 as a product of linear factors.
inline double norm_ratio(const RacahParams& p, int n) {
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    return ((al + be + 2.0 * n + 1) * n * (al + be + n)) /
           ((al + be + 2.0 * n - 1) * (al + n) * (be + n) * (b - a + al + be + n) *
            (a + b + al + n) * (b - a - n) * (a + b - be - n));
}

inline double sigma_f(const RacahParams& p, double s) {
    return (s - p.a) * (s + p.b) * (s + p.a - p.beta) * (p.b + p.alpha - s);
}

inline double tau_f(const RacahParams& p, double s) {
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    return a * (al + 1) * (a - be) + b * (b + al) * (be + 1) - (al + 1) * (be + 1) -
           s * (s + 1) * (al + be + 2);
}

inline double lambda_f(const RacahParams& p, int n) {
    return n * (n + 1.0 + p.alpha + p.beta);
}

struct SigmaTauLambda {
    double sigma;
    double tau;
    double lambda;
};

inline SigmaTauLambda sigma_tau_lambda(const RacahParams& p, double s, int n) {
    return {sigma_f(p, s), tau_f(p, s), lambda_f(p, n)};
}

}  // namespace racah
