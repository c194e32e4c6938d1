#ifndef HEOM_AAA_HPP
#define HEOM_AAA_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "heom/bath.hpp"

namespace heom {

/// Barycentric rational approximant r(w) = sum w_n f_n/(w-Z_n) / sum w_n/(w-Z_n)
/// built by the adaptive Antoulas-Anderson greedy loop on real sample data.
struct BarycentricFit {
    std::vector<double> support_points;  // Z_n, distinct
    std::vector<double> values;          // f(Z_n)
    std::vector<double> weights;         // w_n (real data -> real weights)
    double max_rel_error = std::numeric_limits<double>::infinity();

    double operator()(double x) const {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < support_points.size(); ++j) {
            if (x == support_points[j]) return values[j];
            const double c = weights[j] / (x - support_points[j]);
            num += c * values[j];
            den += c;
        }
        return num / den;
    }

    std::complex<double> operator()(std::complex<double> z) const {
        std::complex<double> num{}, den{};
        for (std::size_t j = 0; j < support_points.size(); ++j) {
            const std::complex<double> c =
                weights[j] / (z - support_points[j]);
            num += c * values[j];
            den += c;
        }
        return num / den;
    }

    std::size_t degree() const { return support_points.size(); }
};

class AaaError : public std::runtime_error {
  public:
    AaaError(const std::string& what, BarycentricFit best)
        : std::runtime_error(what), best_fit(std::move(best)) {}
    BarycentricFit best_fit;
};

namespace detail {

/// Weight solve: smallest singular vector of the Loewner matrix. With
/// decay_constraints = d > 0 the first d numerator moments are forced to
/// vanish (sum w_j f_j z_j^k = 0, k < d), so the approximant falls off like
/// 1/w^(d+1) instead of tending to a constant. The constrained problem is
/// solved in the null space of the constraint rows.
inline void aaa_solve_weights(const std::vector<double>& x,
                              const std::vector<double>& f,
                              const std::vector<int>& support,
                              const std::vector<char>& is_support,
                              int decay_constraints, BarycentricFit& fit) {
    const int m = static_cast<int>(support.size());
    if (m == 1) {
        fit.weights = {1.0};
        return;
    }
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd loewner(n - m, m);
    int row = 0;
    for (int i = 0; i < n; ++i) {
        if (is_support[i]) continue;
        for (int j = 0; j < m; ++j) {
            const int sj = support[j];
            loewner(row, j) = (f[i] - f[sj]) / (x[i] - x[sj]);
        }
        ++row;
    }
    const int k = std::min(decay_constraints, m - 1);
    Eigen::VectorXd w(m);
    if (k == 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(loewner, Eigen::ComputeFullV);
        w = svd.matrixV().col(m - 1);
    } else {
        // scale z moments so the constraint rows are comparably conditioned
        double zscale = 0.0;
        for (int j = 0; j < m; ++j)
            zscale = std::max(zscale, std::abs(x[support[j]]));
        if (zscale == 0.0) zscale = 1.0;
        Eigen::MatrixXd cons(k, m);
        for (int j = 0; j < m; ++j) {
            double zz = 1.0;
            for (int q = 0; q < k; ++q) {
                cons(q, j) = f[support[j]] * zz;
                zz *= x[support[j]] / zscale;
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> csvd(
            cons, Eigen::ComputeFullV);
        Eigen::MatrixXd nullsp = csvd.matrixV().rightCols(m - k);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(loewner * nullsp,
                                              Eigen::ComputeFullV);
        w = nullsp * svd.matrixV().col(m - k - 1);
    }
    // deterministic sign: largest entry positive
    int imax = 0;
    for (int j = 1; j < m; ++j)
        if (std::abs(w(j)) > std::abs(w(imax))) imax = j;
    if (w(imax) < 0) w = -w;
    fit.weights.assign(w.data(), w.data() + m);
}

}  // namespace detail

/// Greedy AAA: repeatedly promote the worst-fit sample to a support point and
/// re-solve the weights from the smallest singular vector of the Loewner
/// matrix, until max |r - f| / max|f| <= tol or the degree cap is reached.
/// Ties on the residual break toward the lowest frequency.
inline BarycentricFit aaa_fit(const std::vector<double>& omegas,
                              const std::vector<double>& f_values, double tol,
                              int max_degree, int decay_constraints = 0) {
    const int n = static_cast<int>(omegas.size());
    if (n < 4 || f_values.size() != omegas.size())
        throw std::invalid_argument("aaa_fit needs >= 4 samples");
    if (!(tol > 0.0)) throw std::invalid_argument("aaa tol must be positive");
    for (int i = 1; i < n; ++i)
        if (!(omegas[i] > omegas[i - 1]))
            throw std::invalid_argument("aaa samples must be strictly increasing");

    double fmax = 0.0;
    for (double v : f_values) fmax = std::max(fmax, std::abs(v));
    if (fmax == 0.0) fmax = 1.0;

    std::vector<int> support;
    std::vector<char> is_support(n, 0);
    std::vector<double> r(n);
    double mean = 0.0;
    for (double v : f_values) mean += v;
    mean /= n;
    for (int i = 0; i < n; ++i) r[i] = mean;

    BarycentricFit fit;
    for (int m = 1; m <= max_degree; ++m) {
        int pick = -1;
        double worst = -1.0;
        for (int i = 0; i < n; ++i) {
            if (is_support[i]) continue;
            const double res = std::abs(f_values[i] - r[i]);
            if (res > worst) {  // strict: ties keep the lowest omega
                worst = res;
                pick = i;
            }
        }
        if (pick < 0) break;
        support.push_back(pick);
        is_support[pick] = 1;

        fit.support_points.clear();
        fit.values.clear();
        for (int s : support) {
            fit.support_points.push_back(omegas[s]);
            fit.values.push_back(f_values[s]);
        }
        detail::aaa_solve_weights(omegas, f_values, support, is_support,
                                  decay_constraints, fit);

        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            if (is_support[i]) continue;
            r[i] = fit(omegas[i]);
            err = std::max(err, std::abs(f_values[i] - r[i]));
        }
        fit.max_rel_error = err / fmax;
        if (fit.max_rel_error <= tol) return fit;
    }
    throw AaaError("aaa_fit: tolerance " + std::to_string(tol) +
                       " unreachable at max degree " +
                       std::to_string(max_degree) + " (best " +
                       std::to_string(fit.max_rel_error) + ")",
                   fit);
}

/// Poles and residues of a barycentric fit.
struct PoleSet {
    std::vector<std::complex<double>> poles;
    std::vector<std::complex<double>> residues;
};

/// Poles from the generalized eigenvalue problem of the (m+1)x(m+1) arrowhead
/// pencil; the two infinite eigenvalues are discarded. Residues follow from
/// the quotient-derivative formula. Froissart doublets (negligible residue)
/// are removed, as are spurious poles hugging a support point.
inline PoleSet poles_and_residues(const BarycentricFit& fit) {
    const int m = static_cast<int>(fit.degree());
    if (m < 2)
        throw std::invalid_argument("poles_and_residues needs >= 2 support points");

    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int j = 0; j < m; ++j) {
        e(0, j + 1) = fit.weights[j];
        e(j + 1, 0) = 1.0;
        e(j + 1, j + 1) = fit.support_points[j];
        b(j + 1, j + 1) = 1.0;
    }
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
    ges.compute(e, b);
    if (ges.info() != Eigen::Success)
        throw std::runtime_error("poles_and_residues: eigensolver failed");

    double span = std::abs(fit.support_points.back() - fit.support_points.front());
    if (span == 0.0) span = 1.0;

    std::vector<std::complex<double>> poles;
    for (int i = 0; i <= m; ++i) {
        const double beta = ges.betas()(i);
        if (std::abs(beta) < 1e-12) continue;  // spurious infinite eigenvalue
        poles.push_back(std::complex<double>(ges.alphas()(i)) / beta);
    }

    PoleSet out;
    std::vector<std::complex<double>> residues;
    for (const auto& p : poles) {
        std::complex<double> num{}, dden{};
        bool near_support = false;
        for (int j = 0; j < m; ++j) {
            const std::complex<double> d = p - fit.support_points[j];
            if (std::abs(d) < std::max(1e-10, 1e-13 * span)) near_support = true;
            num += fit.weights[j] * fit.values[j] / d;
            dden -= fit.weights[j] / (d * d);
        }
        if (near_support) continue;
        out.poles.push_back(p);
        out.residues.push_back(num / dden);
    }

    double rmax = 0.0;
    for (const auto& r : out.residues) rmax = std::max(rmax, std::abs(r));
    PoleSet cleaned;
    for (std::size_t i = 0; i < out.poles.size(); ++i) {
        if (std::abs(out.residues[i]) < 1e-13 * rmax) continue;
        cleaned.poles.push_back(out.poles[i]);
        cleaned.residues.push_back(out.residues[i]);
    }
    // deterministic order
    std::vector<std::size_t> idx(cleaned.poles.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t bb) {
        const auto &pa = cleaned.poles[a], &pb = cleaned.poles[bb];
        if (pa.real() != pb.real()) return pa.real() < pb.real();
        return pa.imag() < pb.imag();
    });
    PoleSet sorted;
    for (std::size_t i : idx) {
        sorted.poles.push_back(cleaned.poles[i]);
        sorted.residues.push_back(cleaned.residues[i]);
    }
    return sorted;
}

}  // namespace heom

#endif  // HEOM_AAA_HPP
