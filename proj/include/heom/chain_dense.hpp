#ifndef HEOM_CHAIN_DENSE_HPP
#define HEOM_CHAIN_DENSE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "heom/bath.hpp"
#include "heom/chain.hpp"

namespace heom {

/// Dense wavefunction propagation of system x truncated Fock chain under
///   H = H_S + t0 S x_1 + sum_j w_j n_j + sum_j t_j (c_j^+ c_{j+1} + h.c.)
/// with x = c + c^+. Initial state: system state (x) chain vacuum. Exact up
/// to the Fock truncation d; used as a small-scale cross-method reference.
class DenseChainPropagator {
  public:
    DenseChainPropagator(Matrix h_system, Matrix coupling, ChainModel chain,
                         int fock_dim, std::uint64_t amplitude_budget = 2000000)
        : h_(std::move(h_system)),
          s_(std::move(coupling)),
          chain_(std::move(chain)),
          d_(fock_dim) {
        require_hermitian(h_, 1e-14, "system Hamiltonian");
        require_hermitian(s_, 1e-14, "coupling operator");
        n_ = static_cast<int>(h_.rows());
        if (d_ < 2) throw std::invalid_argument("Fock dimension must be >= 2");
        std::uint64_t dim = static_cast<std::uint64_t>(n_);
        for (int j = 0; j < chain_.length(); ++j) {
            dim *= static_cast<std::uint64_t>(d_);
            if (dim > amplitude_budget)
                throw std::runtime_error(
                    "dense chain state of " + std::to_string(n_) + " x " +
                    std::to_string(d_) + "^" + std::to_string(chain_.length()) +
                    " amplitudes exceeds the budget of " +
                    std::to_string(amplitude_budget) +
                    "; this chain is beyond dense desk scale");
        }
        dim_ = static_cast<std::size_t>(dim);
        strides_.resize(chain_.length());
        std::size_t s = 1;
        for (int j = 0; j < chain_.length(); ++j) {
            strides_[j] = s;
            s *= static_cast<std::size_t>(d_);
        }
        sys_stride_ = s;
        sqrt_.resize(static_cast<std::size_t>(d_) + 1);
        for (int q = 0; q <= d_; ++q) sqrt_[q] = std::sqrt(static_cast<double>(q));
    }

    std::size_t dim() const { return dim_; }

    /// |psi> = |sys> (x) |0...0>
    std::vector<Complex> initial_state(const Eigen::VectorXcd& sys) const {
        if (sys.size() != n_) throw std::invalid_argument("system dim mismatch");
        std::vector<Complex> psi(dim_, Complex(0, 0));
        for (int q = 0; q < n_; ++q) psi[q * sys_stride_] = sys(q);
        return psi;
    }

    void apply_h(const std::vector<Complex>& in, std::vector<Complex>& out) const {
        const int nch = chain_.length();
        std::fill(out.begin(), out.end(), Complex(0, 0));
        for (std::size_t idx = 0; idx < dim_; ++idx) {
            const Complex amp = in[idx];
            if (amp == Complex(0, 0)) continue;
            const int sys = static_cast<int>(idx / sys_stride_);
            const std::size_t rest = idx % sys_stride_;

            // chain number operators
            double diag = 0.0;
            for (int j = 0; j < nch; ++j)
                diag += chain_.omegas[j] * occupation(rest, j);
            out[idx] += diag * amp;

            // system Hamiltonian
            for (int q = 0; q < n_; ++q) {
                const Complex hqs = h_(q, sys);
                if (hqs != Complex(0, 0)) out[q * sys_stride_ + rest] += hqs * amp;
            }

            // t0 S (c_1 + c_1^+)
            const int n1 = occupation(rest, 0);
            for (int q = 0; q < n_; ++q) {
                const Complex sqs = chain_.t0 * s_(q, sys);
                if (sqs == Complex(0, 0)) continue;
                if (n1 > 0)
                    out[q * sys_stride_ + rest - strides_[0]] +=
                        sqs * sqrt_[n1] * amp;
                if (n1 + 1 < d_)
                    out[q * sys_stride_ + rest + strides_[0]] +=
                        sqs * sqrt_[n1 + 1] * amp;
            }

            // hopping
            for (int j = 0; j + 1 < nch; ++j) {
                const double t = chain_.couplings[j];
                const int nj = occupation(rest, j);
                const int nj1 = occupation(rest, j + 1);
                // c_j^+ c_{j+1}
                if (nj + 1 < d_ && nj1 > 0)
                    out[sys * sys_stride_ + rest + strides_[j] - strides_[j + 1]] +=
                        t * sqrt_[nj + 1] * sqrt_[nj1] * amp;
                // c_j c_{j+1}^+
                if (nj > 0 && nj1 + 1 < d_)
                    out[sys * sys_stride_ + rest - strides_[j] + strides_[j + 1]] +=
                        t * sqrt_[nj] * sqrt_[nj1 + 1] * amp;
            }
        }
    }

    /// Krylov (Lanczos) approximation of exp(-i H dt) |psi>.
    void step(std::vector<Complex>& psi, double dt, double tol = 1e-12,
              int m_max = 40) const {
        int substeps = 1;
        for (int attempt = 0; attempt < 20; ++attempt) {
            std::vector<Complex> trial = psi;
            bool ok = true;
            for (int s = 0; s < substeps && ok; ++s)
                ok = krylov_substep(trial, dt / substeps, tol, m_max);
            if (ok) {
                psi.swap(trial);
                return;
            }
            substeps *= 2;
        }
        throw std::runtime_error("Krylov step failed to converge");
    }

    Matrix reduced_density(const std::vector<Complex>& psi) const {
        Matrix rho = Matrix::Zero(n_, n_);
        for (std::size_t rest = 0; rest < sys_stride_; ++rest)
            for (int a = 0; a < n_; ++a)
                for (int b = 0; b < n_; ++b)
                    rho(a, b) += psi[a * sys_stride_ + rest] *
                                 std::conj(psi[b * sys_stride_ + rest]);
        return rho;
    }

    /// Mean occupation of chain site j.
    double site_occupation(const std::vector<Complex>& psi, int j) const {
        double acc = 0.0;
        for (std::size_t idx = 0; idx < dim_; ++idx)
            acc += occupation(idx % sys_stride_, j) * std::norm(psi[idx]);
        return acc;
    }

    double energy(const std::vector<Complex>& psi) const {
        std::vector<Complex> hpsi(dim_);
        apply_h(psi, hpsi);
        Complex e(0, 0);
        for (std::size_t i = 0; i < dim_; ++i) e += std::conj(psi[i]) * hpsi[i];
        return e.real();
    }

  private:
    int occupation(std::size_t rest, int j) const {
        return static_cast<int>((rest / strides_[j]) % static_cast<std::size_t>(d_));
    }

    bool krylov_substep(std::vector<Complex>& psi, double dt, double tol,
                        int m_max) const {
        const std::size_t dim = dim_;
        double nrm = 0.0;
        for (const auto& v : psi) nrm += std::norm(v);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return true;

        std::vector<std::vector<Complex>> basis;
        basis.emplace_back(dim);
        for (std::size_t i = 0; i < dim; ++i) basis[0][i] = psi[i] / nrm;

        std::vector<double> alpha, beta;
        std::vector<Complex> w(dim);
        int m = 0;
        for (; m < m_max; ++m) {
            apply_h(basis[m], w);
            if (m > 0)
                for (std::size_t i = 0; i < dim; ++i)
                    w[i] -= beta[m - 1] * basis[m - 1][i];
            Complex a(0, 0);
            for (std::size_t i = 0; i < dim; ++i)
                a += std::conj(basis[m][i]) * w[i];
            alpha.push_back(a.real());
            for (std::size_t i = 0; i < dim; ++i) w[i] -= a * basis[m][i];
            // full reorthogonalization
            for (const auto& b : basis) {
                Complex dot(0, 0);
                for (std::size_t i = 0; i < dim; ++i) dot += std::conj(b[i]) * w[i];
                for (std::size_t i = 0; i < dim; ++i) w[i] -= dot * b[i];
            }
            double bnorm = 0.0;
            for (const auto& v : w) bnorm += std::norm(v);
            bnorm = std::sqrt(bnorm);
            if (bnorm < 1e-14) {
                ++m;
                break;  // invariant subspace: expm is exact
            }
            beta.push_back(bnorm);
            basis.emplace_back(dim);
            for (std::size_t i = 0; i < dim; ++i) basis[m + 1][i] = w[i] / bnorm;
        }

        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        Eigen::VectorXcd phase(m);
        for (int i = 0; i < m; ++i)
            phase(i) = std::exp(Complex(0, -dt * es.eigenvalues()(i)));
        Eigen::VectorXcd coef =
            es.eigenvectors() *
            (phase.array() * es.eigenvectors().row(0).transpose().array().cast<Complex>())
                .matrix();

        // error heuristic: weight leaking into the last Krylov vector
        if (m == m_max && std::abs(coef(m - 1)) > tol) return false;

        std::fill(psi.begin(), psi.end(), Complex(0, 0));
        for (int q = 0; q < m; ++q) {
            const Complex c = nrm * coef(q);
            const auto& b = basis[q];
            for (std::size_t i = 0; i < dim; ++i) psi[i] += c * b[i];
        }
        return true;
    }

    Matrix h_, s_;
    ChainModel chain_;
    int d_, n_ = 0;
    std::size_t dim_ = 0, sys_stride_ = 0;
    std::vector<std::size_t> strides_;
    std::vector<double> sqrt_;
};

/// Propagate and record the reduced density matrix at the sample times.
inline std::vector<Matrix> chain_propagate_dense(
    const DenseChainPropagator& prop, const Eigen::VectorXcd& sys0,
    const std::vector<double>& sample_times, double dt_hint = 0.0) {
    auto psi = prop.initial_state(sys0);
    std::vector<Matrix> out;
    double t = 0.0;
    for (double target : sample_times) {
        const double span = target - t;
        if (span > 0.0) {
            const double dt = dt_hint > 0.0 ? dt_hint : span;
            int steps = std::max(1, static_cast<int>(std::ceil(span / dt)));
            for (int s = 0; s < steps; ++s) prop.step(psi, span / steps);
            t = target;
        }
        double nrm = 0.0;
        for (const auto& v : psi) nrm += std::norm(v);
        if (std::abs(std::sqrt(nrm) - 1.0) > 1e-8)
            throw std::runtime_error("dense chain norm drift " +
                                     std::to_string(std::sqrt(nrm) - 1.0));
        out.push_back(prop.reduced_density(psi));
    }
    return out;
}

}  // namespace heom

#endif  // HEOM_CHAIN_DENSE_HPP
