#pragma once

#include <vector>

namespace xorsat {

/// f_t(lambda): probability that a Poisson(lambda) variable is at least t.
double poisson_tail(unsigned t, double lambda);

/// Poisson(lambda) mass at j.
double poisson_pmf(unsigned j, double lambda);

/// h(mu) = mu / f_{k-1}(mu)^{r-1}; the density c corresponds to h(mu)/r.
double h_of_mu(double mu, unsigned r, unsigned k);

struct CriticalPoint {
    unsigned r = 0;
    unsigned k = 0;
    double c_crit = 0;
    double mu_crit = 0;
};

/// Minimizer of h(mu)/r over mu > 0, i.e. the k-core emergence density.
CriticalPoint critical_point(unsigned r, unsigned k);

/// Residual of e^{-mu} mu^{k-1} / ((k-2)! f_{k-1}(mu)) - 1/(r-1); zero at the
/// critical mu.
double criticality_residual(double mu, unsigned r, unsigned k);

/// Larger root of h(mu)/r = c. Throws std::domain_error below the critical
/// density.
double mu_of_c(unsigned r, unsigned k, double c);

/// Root of lambda f_{k-1}(lambda) / f_k(lambda) = zeta (truncated-Poisson mean).
double lambda_of_mean_degree(unsigned k, double zeta);

struct CorePrediction {
    unsigned r = 0;
    unsigned k = 0;
    double c = 0;
    double mu = 0;
    double alpha = 0;   // core vertices / n
    double beta = 0;    // core edges / n
    double zeta = 0;    // mean core degree
    double lambda = 0;  // parameter of the truncated Poisson core degrees
    std::vector<double> rho;  // rho[j], zero for j < k, cut where tail < 1e-12
};

CorePrediction core_prediction(unsigned r, unsigned k, double c);

/// Limit of 2(r-1)Q_2/Lambda on the 2-core at density c: (r-1) e^{-mu} mu / f_1(mu).
double q2_ratio_prediction(unsigned r, double c);

}  // namespace xorsat
