#include "xorsat/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace xorsat {

namespace {

// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0;
    double carry = 0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) carry += (sum - t) + x;
        else carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

double log_pmf(unsigned j, double lambda) {
    return static_cast<double>(j) * std::log(lambda) - lambda - std::lgamma(static_cast<double>(j) + 1.0);
}

void require_positive(double x, const char* what) {
    if (!(x > 0)) throw std::domain_error(std::string(what) + " must be positive");
}

constexpr double kMuLow = 1e-6;
constexpr double kMuHigh = 50.0;

}  // namespace

double poisson_pmf(unsigned j, double lambda) {
    require_positive(lambda, "poisson mean");
    return std::exp(log_pmf(j, lambda));
}

double poisson_tail(unsigned t, double lambda) {
    require_positive(lambda, "poisson mean");
    if (t == 0) return 1.0;
    if (static_cast<double>(t) <= lambda) {
        // Mass below t is at most about one half here, so 1 - lower sum is stable.
        // Walk downward from i = t-1: terms shrink since i < lambda.
        CompensatedSum lower;
        double term = std::exp(log_pmf(t - 1, lambda));
        for (unsigned i = t - 1;; --i) {
            lower.add(term);
            if (i == 0 || term == 0.0) break;
            term *= static_cast<double>(i) / lambda;
        }
        return 1.0 - lower.value();
    }
    // Upper tail directly; terms decrease geometrically beyond the mode.
    CompensatedSum upper;
    double term = std::exp(log_pmf(t, lambda));
    for (unsigned i = t; term > 0.0; ++i) {
        upper.add(term);
        if (term < 1e-18 * upper.value()) break;
        term *= lambda / static_cast<double>(i + 1);
    }
    return upper.value();
}

double h_of_mu(double mu, unsigned r, unsigned k) {
    require_positive(mu, "mu");
    if (k == 0) throw std::invalid_argument("k must be positive");
    return mu / std::pow(poisson_tail(k - 1, mu), static_cast<double>(r - 1));
}

double criticality_residual(double mu, unsigned r, unsigned k) {
    require_positive(mu, "mu");
    return mu * poisson_pmf(k - 2, mu) / poisson_tail(k - 1, mu) - 1.0 / static_cast<double>(r - 1);
}

CriticalPoint critical_point(unsigned r, unsigned k) {
    if (r < 2 || k < 2 || (r == 2 && k == 2)) throw std::invalid_argument("critical_point needs r,k >= 2, (r,k) != (2,2)");
    // h'(mu) has the sign of -criticality_residual(mu): h decreases while the
    // residual is positive. Bisection on that sign pins the minimizer.
    double lo = kMuLow, hi = kMuHigh;
    if (!(criticality_residual(lo, r, k) > 0) || !(criticality_residual(hi, r, k) < 0))
        throw std::logic_error("critical_point: minimizer not bracketed");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (criticality_residual(mid, r, k) > 0) lo = mid;
        else hi = mid;
    }
    CriticalPoint cp;
    cp.r = r;
    cp.k = k;
    cp.mu_crit = 0.5 * (lo + hi);
    cp.c_crit = h_of_mu(cp.mu_crit, r, k) / r;
    return cp;
}

double mu_of_c(unsigned r, unsigned k, double c) {
    const CriticalPoint cp = critical_point(r, k);
    if (c < cp.c_crit) throw std::domain_error("below critical density");
    if (c == cp.c_crit) return cp.mu_crit;
    auto excess = [&](double mu) { return h_of_mu(mu, r, k) / r - c; };
    double lo = cp.mu_crit;
    double hi = kMuHigh;
    while (excess(hi) < 0) hi *= 2;
    for (int it = 0; it < 300 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) < 0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double lambda_of_mean_degree(unsigned k, double zeta) {
    if (!(zeta > static_cast<double>(k))) throw std::domain_error("mean core degree must exceed k");
    auto mean = [&](double x) { return x * poisson_tail(k - 1, x) / poisson_tail(k, x); };
    double lo = 1e-9;
    double hi = zeta + k;
    while (mean(hi) < zeta) hi *= 2;
    for (int it = 0; it < 300 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean(mid) < zeta) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

CorePrediction core_prediction(unsigned r, unsigned k, double c) {
    CorePrediction p;
    p.r = r;
    p.k = k;
    p.c = c;
    p.mu = mu_of_c(r, k, c);
    p.alpha = poisson_tail(k, p.mu);
    p.beta = p.mu * poisson_tail(k - 1, p.mu) / r;
    p.zeta = r * p.beta / p.alpha;
    p.lambda = lambda_of_mean_degree(k, p.zeta);
    const double fk = poisson_tail(k, p.lambda);
    p.rho.assign(k, 0.0);
    for (unsigned j = k;; ++j) {
        p.rho.push_back(poisson_pmf(j, p.lambda) / fk);
        if (static_cast<double>(j) > p.lambda && poisson_tail(j + 1, p.lambda) / fk < 1e-12) break;
    }
    return p;
}

double q2_ratio_prediction(unsigned r, double c) {
    const double mu = mu_of_c(r, 2, c);
    return (r - 1) * std::exp(-mu) * mu / poisson_tail(1, mu);
}

}  // namespace xorsat
