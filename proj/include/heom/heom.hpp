#ifndef HEOM_HEOM_HPP
#define HEOM_HEOM_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "heom/bath.hpp"
#include "heom/hierarchy.hpp"

namespace heom {

struct SystemSpec {
    Matrix hamiltonian;

    explicit SystemSpec(Matrix h) : hamiltonian(std::move(h)) {
        require_hermitian(hamiltonian, 1e-14, "system Hamiltonian");
    }
    int dim() const { return static_cast<int>(hamiltonian.rows()); }
};

enum class AdoScaling { Unscaled, SqrtScaled };

/// Flat array of auxiliary density operators; the root (all-zero index) is
/// the physical reduced density matrix in every scaling convention.
struct HierarchyState {
    std::vector<Complex> data;  // size() = n_ados * n * n, row-major blocks
    int n = 0;
    AdoScaling scaling = AdoScaling::Unscaled;

    Complex* ado(std::size_t pos) {
        return data.data() + pos * static_cast<std::size_t>(n) * n;
    }
    const Complex* ado(std::size_t pos) const {
        return data.data() + pos * static_cast<std::size_t>(n) * n;
    }
};

/// Root ADO = rho_S, everything else zero (factorized initial condition).
inline HierarchyState init_state(const Matrix& rho_s,
                                 const HierarchyIndexSet& hierarchy,
                                 AdoScaling scaling) {
    const int n = static_cast<int>(rho_s.rows());
    require_hermitian(rho_s, 1e-12, "initial density matrix");
    const double tr = rho_s.trace().real();
    if (std::abs(tr - 1.0) > 1e-10)
        throw std::invalid_argument("initial density matrix trace " +
                                    std::to_string(tr) + " != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_s);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw std::invalid_argument("initial density matrix is not positive");

    HierarchyState state;
    state.n = n;
    state.scaling = scaling;
    state.data.assign(hierarchy.size() * static_cast<std::size_t>(n) * n,
                      Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) state.data[i * n + j] = rho_s(i, j);
    return state;
}

/// Matrix-free HEOM right-hand side over all mode families.
///
/// Per ADO: the system commutator, the damping i sum m_k gamma_k, the upward
/// coupling -i u_k [S, rho_{m_k+}], and the downward coupling
/// -i (l_k S rho_{m_k-} - r_k rho_{m_k-} S) with per-family coefficient
/// tables
///   unscaled:            u = 1,                l = n alpha,  r = n alpha~
///   sqrt-scaled (free pole, left  channel):  u = sqrt((n+1)s), l = sqrt(n s)
///   sqrt-scaled (free pole, right channel):  u = sqrt((n+1)s), r = sqrt(n s)
/// where s is the mode's nonzero channel coefficient.
class HeomEngine {
  public:
    HeomEngine(SystemSpec system,
               std::vector<std::pair<Matrix, std::vector<DecayMode>>> baths,
               int depth, std::vector<int> per_mode_cap = {},
               std::uint64_t element_budget = 300000000ull)
        : system_(std::move(system)) {
        n_ = system_.dim();
        for (auto& [coupling, modes] : baths) {
            require_hermitian(coupling, 1e-14, "bath coupling operator");
            if (coupling.rows() != n_)
                throw std::invalid_argument("coupling dimension mismatch");
            bool bath_scaled = false, bath_unscaled = false;
            for (const auto& m : modes)
                (family_is_scaled(m.family) ? bath_scaled : bath_unscaled) = true;
            if (bath_scaled && bath_unscaled)
                throw std::invalid_argument(
                    "mixing sqrt-scaled and unscaled mode families within one "
                    "bath is not supported");
            const int b = static_cast<int>(couplings_.size());
            couplings_.push_back(coupling);
            for (const auto& m : modes) {
                modes_.push_back(m);
                mode_bath_.push_back(b);
            }
        }
        if (modes_.empty()) {
            // closed system: still allow propagation with a single root ADO
            hierarchy_ = std::make_unique<HierarchyIndexSet>(1, 0);
            scaled_ = false;
        } else {
            scaled_ = family_is_scaled(modes_.front().family);
            for (const auto& m : modes_)
                if (family_is_scaled(m.family) != scaled_)
                    throw std::invalid_argument(
                        "mixing sqrt-scaled and unscaled baths in one hierarchy "
                        "is not supported");
            hierarchy_ = std::make_unique<HierarchyIndexSet>(
                static_cast<int>(modes_.size()), depth, std::move(per_mode_cap),
                element_budget, n_);
        }
        build_tables(depth);
        n_threads_ = default_threads();
    }

    const HierarchyIndexSet& hierarchy() const { return *hierarchy_; }
    const Matrix& hamiltonian() const { return system_.hamiltonian; }
    int dim() const { return n_; }
    std::size_t state_size() const {
        return hierarchy_->size() * static_cast<std::size_t>(n_) * n_;
    }
    AdoScaling scaling() const {
        return scaled_ ? AdoScaling::SqrtScaled : AdoScaling::Unscaled;
    }
    const std::vector<DecayMode>& modes() const { return modes_; }

    void set_threads(int t) { n_threads_ = std::max(1, t); }
    int threads() const { return n_threads_; }

    HierarchyState initial_state(const Matrix& rho_s) const {
        return init_state(rho_s, *hierarchy_, scaling());
    }

    void check_state(const HierarchyState& state) const {
        if (state.n != n_ || state.data.size() != state_size())
            throw std::invalid_argument("state layout mismatch");
        if (state.scaling != scaling())
            throw std::invalid_argument(
                "state scaling convention does not match the mode families");
    }

    /// dy = RHS(y); both flat arrays of state_size().
    void rhs(const std::vector<Complex>& y, std::vector<Complex>& dy) const {
        const std::size_t n_ados = hierarchy_->size();
        if (n_threads_ <= 1 || n_ados < 256) {
            rhs_range(y, dy, 0, n_ados);
            return;
        }
        const int nt = n_threads_;
        std::vector<std::thread> pool;
        pool.reserve(nt - 1);
        const std::size_t chunk = (n_ados + nt - 1) / nt;
        for (int t = 1; t < nt; ++t) {
            const std::size_t lo = chunk * t;
            if (lo >= n_ados) break;
            const std::size_t hi = std::min(n_ados, lo + chunk);
            pool.emplace_back([this, &y, &dy, lo, hi] { rhs_range(y, dy, lo, hi); });
        }
        rhs_range(y, dy, 0, std::min(chunk, n_ados));
        for (auto& th : pool) th.join();
    }

  private:
    static int default_threads() {
        if (const char* env = std::getenv("HEOMKIT_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc ? static_cast<int>(hc) : 1;
    }

    void build_tables(int depth) {
        const int K = static_cast<int>(modes_.size());
        const int levels = depth + 2;
        up_fac_.assign(static_cast<std::size_t>(K) * levels, Complex(0, 0));
        left_fac_.assign(static_cast<std::size_t>(K) * levels, Complex(0, 0));
        right_fac_.assign(static_cast<std::size_t>(K) * levels, Complex(0, 0));
        for (int k = 0; k < K; ++k) {
            const auto& m = modes_[k];
            for (int occ = 0; occ < levels; ++occ) {
                const std::size_t at = static_cast<std::size_t>(k) * levels + occ;
                if (!scaled_) {
                    up_fac_[at] = Complex(1.0, 0.0);
                    left_fac_[at] = static_cast<double>(occ) * m.alpha;
                    right_fac_[at] = static_cast<double>(occ) * m.alpha_tilde;
                } else {
                    const bool left_channel = m.alpha != Complex(0.0, 0.0);
                    const Complex sigma = left_channel ? m.alpha : m.alpha_tilde;
                    up_fac_[at] = std::sqrt(static_cast<double>(occ + 1) * sigma);
                    const Complex dn = std::sqrt(static_cast<double>(occ) * sigma);
                    (left_channel ? left_fac_[at] : right_fac_[at]) = dn;
                }
            }
        }
        // per-ADO damping i sum_k m_k gamma_k
        damping_.resize(hierarchy_->size());
        for (std::size_t p = 0; p < hierarchy_->size(); ++p) {
            const std::uint8_t* occ = hierarchy_->occupations(p);
            Complex g(0, 0);
            for (int k = 0; k < K; ++k)
                g += static_cast<double>(occ[k]) * modes_[k].gamma;
            damping_[p] = Complex(0, 1) * g;
        }
        levels_ = levels;
    }

    void rhs_range(const std::vector<Complex>& y, std::vector<Complex>& dy,
                   std::size_t lo, std::size_t hi) const {
        const int n = n_;
        const int nn = n * n;
        const int K = static_cast<int>(modes_.size());
        const int nb = static_cast<int>(couplings_.size());
        const Complex minus_i(0.0, -1.0);

        std::vector<Complex> up_sum(static_cast<std::size_t>(nb) * nn);
        std::vector<Complex> left_sum(static_cast<std::size_t>(nb) * nn);
        std::vector<Complex> right_sum(static_cast<std::size_t>(nb) * nn);
        std::vector<Complex> tmp(nn);

        for (std::size_t p = lo; p < hi; ++p) {
            const Complex* rho = y.data() + p * nn;
            Complex* out = dy.data() + p * nn;

            // -i [H, rho] + damping
            const Complex damp = damping_[p];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Complex acc(0, 0);
                    for (int q = 0; q < n; ++q)
                        acc += system_.hamiltonian(i, q) * rho[q * n + j] -
                               rho[i * n + q] * system_.hamiltonian(q, j);
                    out[i * n + j] = minus_i * acc + damp * rho[i * n + j];
                }

            if (K == 0) continue;
            const std::uint8_t* occ = hierarchy_->occupations(p);
            std::fill(up_sum.begin(), up_sum.end(), Complex(0, 0));
            std::fill(left_sum.begin(), left_sum.end(), Complex(0, 0));
            std::fill(right_sum.begin(), right_sum.end(), Complex(0, 0));
            bool any_up = false, any_left = false, any_right = false;

            for (int k = 0; k < K; ++k) {
                const int b = mode_bath_[k];
                const std::size_t tab =
                    static_cast<std::size_t>(k) * levels_ + occ[k];
                const std::uint32_t u = hierarchy_->up(p, k);
                if (u != HierarchyIndexSet::npos) {
                    const Complex f = up_fac_[tab];
                    if (f != Complex(0, 0)) {
                        const Complex* src = y.data() + static_cast<std::size_t>(u) * nn;
                        Complex* dst = up_sum.data() + static_cast<std::size_t>(b) * nn;
                        for (int e = 0; e < nn; ++e) dst[e] += f * src[e];
                        any_up = true;
                    }
                }
                const std::uint32_t d = hierarchy_->down(p, k);
                if (d != HierarchyIndexSet::npos) {
                    const Complex* src = y.data() + static_cast<std::size_t>(d) * nn;
                    const Complex fl = left_fac_[tab];
                    if (fl != Complex(0, 0)) {
                        Complex* dst = left_sum.data() + static_cast<std::size_t>(b) * nn;
                        for (int e = 0; e < nn; ++e) dst[e] += fl * src[e];
                        any_left = true;
                    }
                    const Complex fr = right_fac_[tab];
                    if (fr != Complex(0, 0)) {
                        Complex* dst = right_sum.data() + static_cast<std::size_t>(b) * nn;
                        for (int e = 0; e < nn; ++e) dst[e] += fr * src[e];
                        any_right = true;
                    }
                }
            }

            for (int b = 0; b < nb; ++b) {
                const Matrix& s = couplings_[b];
                const Complex* us = up_sum.data() + static_cast<std::size_t>(b) * nn;
                const Complex* ls = left_sum.data() + static_cast<std::size_t>(b) * nn;
                const Complex* rs = right_sum.data() + static_cast<std::size_t>(b) * nn;
                if (any_up) {
                    // out += -i (S us - us S)
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            Complex acc(0, 0);
                            for (int q = 0; q < n; ++q)
                                acc += s(i, q) * us[q * n + j] -
                                       us[i * n + q] * s(q, j);
                            out[i * n + j] += minus_i * acc;
                        }
                }
                if (any_left) {
                    // out += -i S ls
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            Complex acc(0, 0);
                            for (int q = 0; q < n; ++q) acc += s(i, q) * ls[q * n + j];
                            out[i * n + j] += minus_i * acc;
                        }
                }
                if (any_right) {
                    // out += +i rs S
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            Complex acc(0, 0);
                            for (int q = 0; q < n; ++q) acc += rs[i * n + q] * s(q, j);
                            out[i * n + j] += Complex(0, 1) * acc;
                        }
                }
            }
        }
    }

    SystemSpec system_;
    int n_ = 0;
    bool scaled_ = false;
    int levels_ = 0;
    int n_threads_ = 1;
    std::vector<Matrix> couplings_;
    std::vector<DecayMode> modes_;
    std::vector<int> mode_bath_;
    std::unique_ptr<HierarchyIndexSet> hierarchy_;
    std::vector<Complex> up_fac_, left_fac_, right_fac_;
    std::vector<Complex> damping_;
};

}  // namespace heom

#endif  // HEOM_HEOM_HPP
