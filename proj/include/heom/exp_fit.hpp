#ifndef HEOM_EXP_FIT_HPP
#define HEOM_EXP_FIT_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "heom/interp.hpp"

namespace heom {

/// Least-squares model f(t) = sum_k a_k e^{-b_k t} with all b_k > 0.
struct ExponentialFit {
    struct Term {
        double a;
        double b;
    };
    std::vector<Term> terms;  // sorted by b descending
    double rms = 0.0;

    double operator()(double t) const {
        double s = 0.0;
        for (const auto& term : terms) s += term.a * std::exp(-term.b * t);
        return s;
    }
};

namespace detail {

/// Matrix-pencil (Hankel/ESPRIT) estimate of the decay rates from uniform
/// samples. Returns b_k > 0; throws on rank deficiency.
inline std::vector<double> pencil_rates(const std::vector<double>& y,
                                        double dt, int k_fit) {
    const int n = static_cast<int>(y.size());
    const int cols = std::max(k_fit + 1, n / 3);
    const int rows = n - cols;
    if (rows < k_fit || cols < k_fit)
        throw std::invalid_argument("exponential fit: too few samples");

    Eigen::MatrixXd h0(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) h0(i, j) = y[i + j];

    Eigen::BDCSVD<Eigen::MatrixXd> svd(h0, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(k_fit - 1) < 1e-13 * sv(0))
        throw std::runtime_error(
            "exponential fit: rank deficiency in the pencil step (fewer "
            "distinct decays than requested terms)");

    Eigen::MatrixXd u = svd.matrixU().leftCols(k_fit);
    Eigen::MatrixXd u_up = u.topRows(rows - 1);
    Eigen::MatrixXd u_dn = u.bottomRows(rows - 1);
    Eigen::MatrixXd shift =
        u_up.colPivHouseholderQr().solve(u_dn);  // k x k

    Eigen::EigenSolver<Eigen::MatrixXd> eig(shift);
    std::vector<double> rates;
    rates.reserve(k_fit);
    for (int i = 0; i < k_fit; ++i) {
        const std::complex<double> z = eig.eigenvalues()(i);
        double m = std::abs(z);
        // clamp into the decaying range; Gauss-Newton refines from here
        m = std::clamp(m, 1e-12, 1.0 - 1e-12);
        rates.push_back(-std::log(m) / dt);
    }
    std::sort(rates.begin(), rates.end(), std::greater<>());
    return rates;
}

inline Eigen::VectorXd solve_amplitudes(const std::vector<double>& t,
                                        const std::vector<double>& y,
                                        const std::vector<double>& b) {
    const int n = static_cast<int>(t.size());
    const int k = static_cast<int>(b.size());
    Eigen::MatrixXd v(n, k);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        rhs(i) = y[i];
        for (int j = 0; j < k; ++j) v(i, j) = std::exp(-b[j] * t[i]);
    }
    return v.colPivHouseholderQr().solve(rhs);
}

}  // namespace detail

/// Fit a real decaying series by k_fit exponentials: matrix-pencil
/// initialization on a uniform resampling, then damped Gauss-Newton with
/// b_k = e^{u_k} so the rates stay positive.
inline ExponentialFit fit_exponentials(const std::vector<double>& times,
                                       const std::vector<double>& values,
                                       int k_fit) {
    if (k_fit < 1) throw std::invalid_argument("k_fit must be >= 1");
    if (times.size() != values.size() || times.size() < 8)
        throw std::invalid_argument("exponential fit: need >= 8 samples");

    // uniform resampling for the pencil step
    const std::size_t n = times.size();
    bool uniform = true;
    const double dt0 = times[1] - times[0];
    for (std::size_t i = 1; i + 1 < n && uniform; ++i)
        if (std::abs((times[i + 1] - times[i]) - dt0) > 1e-9 * std::abs(dt0))
            uniform = false;
    std::vector<double> t_u, y_u;
    if (uniform) {
        t_u = times;
        y_u = values;
    } else {
        MonotoneCubic interp(times, values);
        const std::size_t m = std::max<std::size_t>(n, 512);
        t_u.resize(m);
        y_u.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            t_u[i] = times.front() + (times.back() - times.front()) *
                                         static_cast<double>(i) /
                                         static_cast<double>(m - 1);
            y_u[i] = interp(t_u[i]);
        }
    }

    std::vector<double> b = detail::pencil_rates(y_u, t_u[1] - t_u[0], k_fit);
    Eigen::VectorXd a = detail::solve_amplitudes(t_u, y_u, b);

    // Gauss-Newton on (a_k, u_k = ln b_k) with Levenberg damping
    const int nn = static_cast<int>(t_u.size());
    const int k = k_fit;
    auto residual = [&](const Eigen::VectorXd& av, const std::vector<double>& bv,
                        Eigen::VectorXd& r) {
        for (int i = 0; i < nn; ++i) {
            double s = 0.0;
            for (int j = 0; j < k; ++j) s += av(j) * std::exp(-bv[j] * t_u[i]);
            r(i) = s - y_u[i];
        }
    };
    Eigen::VectorXd r(nn), r_try(nn);
    residual(a, b, r);
    double cost = r.squaredNorm();
    double lambda = 1e-6;
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::MatrixXd jac(nn, 2 * k);
        for (int i = 0; i < nn; ++i)
            for (int j = 0; j < k; ++j) {
                const double e = std::exp(-b[j] * t_u[i]);
                jac(i, j) = e;
                jac(i, k + j) = -a(j) * t_u[i] * e * b[j];  // d/du, b = e^u
            }
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd jtr = jac.transpose() * r;
        bool stepped = false;
        for (int tries = 0; tries < 24; ++tries) {
            Eigen::MatrixXd m = jtj;
            m.diagonal().array() += lambda * jtj.diagonal().array().maxCoeff();
            Eigen::VectorXd step = m.ldlt().solve(-jtr);
            Eigen::VectorXd a_try = a + step.head(k);
            std::vector<double> b_try(b);
            for (int j = 0; j < k; ++j)
                b_try[j] = b[j] * std::exp(std::clamp(step(k + j), -2.0, 2.0));
            residual(a_try, b_try, r_try);
            const double cost_try = r_try.squaredNorm();
            if (cost_try < cost) {
                a = a_try;
                b = b_try;
                r = r_try;
                const double drop = (cost - cost_try) / std::max(cost, 1e-300);
                cost = cost_try;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (drop < 1e-14) iter = 200;
                break;
            }
            lambda *= 8.0;
        }
        if (!stepped) break;
    }
    // rates re-solved linearly once more at the final b
    a = detail::solve_amplitudes(t_u, y_u, b);
    residual(a, b, r);

    ExponentialFit fit;
    for (int j = 0; j < k; ++j) {
        if (!(b[j] > 0.0) || !std::isfinite(b[j]) || !std::isfinite(a(j)))
            throw std::runtime_error(
                "exponential fit: non-positive or non-finite rate after "
                "refinement");
        fit.terms.push_back({a(j), b[j]});
    }
    std::sort(fit.terms.begin(), fit.terms.end(),
              [](const auto& x, const auto& y) { return x.b > y.b; });
    fit.rms = std::sqrt(r.squaredNorm() / static_cast<double>(nn));
    return fit;
}

}  // namespace heom

#endif  // HEOM_EXP_FIT_HPP
