#include "hgrn/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "hgrn/errors.hpp"

namespace hgrn {

QuadratureRule gauss_jacobi(std::size_t points, double alpha, double beta)
{
    if (points == 0 || !(alpha > -1.0) || !(beta > -1.0))
        throw QuadratureFailure("Gauss-Jacobi rule needs alpha, beta > -1");

    const auto m = static_cast<Eigen::Index>(points);
    const double ab = alpha + beta;

    // Jacobi matrix of the monic recurrence.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k)
    {
        const double kk = static_cast<double>(k);
        const double s = 2.0 * kk + ab;
        double diag;
        if (k == 0)
            diag = (beta - alpha) / (ab + 2.0);
        else
            diag = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        J(k, k) = diag;
        if (k + 1 < m)
        {
            const double n = kk + 1.0;
            const double s1 = 2.0 * n + ab;
            // n == 1 has a removable 0/0 when alpha + beta == -1.
            const double off2 = (k == 0)
                                    ? 4.0 * (1.0 + alpha) * (1.0 + beta) / (s1 * s1 * (s1 + 1.0))
                                    : 4.0 * n * (n + alpha) * (n + beta) * (n + ab)
                                          / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
            const double off = std::sqrt(off2);
            J(k, k + 1) = off;
            J(k + 1, k) = off;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0)
                                + std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));

    QuadratureRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    for (Eigen::Index k = 0; k < m; ++k)
    {
        rule.nodes[k] = eig.eigenvalues()(k);
        const double v0 = eig.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

const QuadratureRule& gauss_legendre(std::size_t points)
{
    static std::mutex lock;
    static std::map<std::size_t, QuadratureRule> cache;
    std::lock_guard guard(lock);
    auto it = cache.find(points);
    if (it == cache.end())
        it = cache.emplace(points, gauss_jacobi(points, 0.0, 0.0)).first;
    return it->second;
}

double power_integral(double lo, double hi, double p)
{
    if (hi <= lo)
        return 0.0;
    const double q = p + 1.0;
    if (lo == 0.0)
    {
        if (!(q > 0.0))
            throw QuadratureFailure("power integral diverges at 0 for exponent "
                                    + std::to_string(p));
        return std::pow(hi, q) / q;
    }
    const double log_ratio = std::log(hi / lo);
    if (q == 0.0)
        return log_ratio;
    return std::pow(lo, q) * std::expm1(q * log_ratio) / q;
}

} // namespace hgrn
