#ifndef HEOM_HIERARCHY_HPP
#define HEOM_HIERARCHY_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace heom {

/// Exact binomial with overflow detection.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > static_cast<unsigned __int128>(1) << 62)
            throw std::overflow_error("binomial overflow");
    }
    return static_cast<std::uint64_t>(acc);
}

/// Number of ADOs with total occupation <= L over K modes.
inline std::uint64_t hierarchy_count(std::uint64_t K, std::uint64_t L) {
    return binomial(K + L, K);
}

/// Dense enumeration of every multi-index m with sum(m) <= L (and optional
/// per-mode caps), in lexicographic order, with the positions of the m_k +- 1
/// neighbors precomputed for the matrix-free right-hand side.
class HierarchyIndexSet {
  public:
    static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

    HierarchyIndexSet(int n_modes, int depth,
                      std::vector<int> per_mode_cap = {},
                      std::uint64_t element_budget = 0, int matrix_dim = 1)
        : K_(n_modes), L_(depth), caps_(std::move(per_mode_cap)) {
        if (K_ < 1) throw std::invalid_argument("hierarchy needs >= 1 mode");
        if (L_ < 0) throw std::invalid_argument("hierarchy depth must be >= 0");
        if (!caps_.empty() && static_cast<int>(caps_.size()) != K_)
            throw std::invalid_argument("per-mode cap list length mismatch");

        const std::uint64_t count = caps_.empty()
                                        ? hierarchy_count(K_, L_)
                                        : capped_count(caps_, L_);
        if (element_budget > 0) {
            const std::uint64_t elems =
                count * static_cast<std::uint64_t>(matrix_dim) *
                static_cast<std::uint64_t>(matrix_dim);
            if (elems > element_budget)
                throw std::runtime_error(
                    "hierarchy of " + std::to_string(count) + " ADOs (" +
                    std::to_string(elems) +
                    " complex elements) exceeds the configured budget of " +
                    std::to_string(element_budget));
        }
        if (count >= npos)
            throw std::runtime_error("hierarchy too large to index");
        size_ = static_cast<std::size_t>(count);

        occ_.resize(size_ * static_cast<std::size_t>(K_));
        level_.resize(size_);
        build_rank_table();
        enumerate();
        build_neighbors();
    }

    int modes() const { return K_; }
    int depth() const { return L_; }
    std::size_t size() const { return size_; }

    const std::uint8_t* occupations(std::size_t pos) const {
        return occ_.data() + pos * static_cast<std::size_t>(K_);
    }
    std::uint8_t level(std::size_t pos) const { return level_[pos]; }

    /// Position of the index with m_k raised by one, or npos.
    std::uint32_t up(std::size_t pos, int k) const {
        return up_[pos * static_cast<std::size_t>(K_) + k];
    }
    /// Position of the index with m_k lowered by one, or npos.
    std::uint32_t down(std::size_t pos, int k) const {
        return down_[pos * static_cast<std::size_t>(K_) + k];
    }

    /// Lexicographic rank; npos when the index is outside the truncation.
    std::uint32_t rank(const std::uint8_t* m) const {
        int total = 0;
        for (int j = 0; j < K_; ++j) {
            total += m[j];
            if (!caps_.empty() && m[j] > caps_[j]) return npos;
        }
        if (total > L_) return npos;
        if (caps_.empty()) {
            std::uint64_t r = 0;
            int budget = L_;
            for (int j = 0; j < K_; ++j) {
                for (int v = 0; v < m[j]; ++v) r += tuples_below(j + 1, budget - v);
                budget -= m[j];
            }
            return static_cast<std::uint32_t>(r);
        }
        // capped sets are small; rank by lookup
        return capped_rank(m);
    }

  private:
    // T(j, s): tuples over modes j..K-1 with sum <= s
    std::uint64_t tuples_below(int j, int s) const {
        if (s < 0) return 0;
        return rank_table_[static_cast<std::size_t>(j) *
                               static_cast<std::size_t>(L_ + 1) +
                           s];
    }

    void build_rank_table() {
        if (!caps_.empty()) return;
        rank_table_.resize(static_cast<std::size_t>(K_ + 1) *
                           static_cast<std::size_t>(L_ + 1));
        for (int s = 0; s <= L_; ++s)
            for (int j = 0; j <= K_; ++j)
                rank_table_[static_cast<std::size_t>(j) *
                                static_cast<std::size_t>(L_ + 1) +
                            s] = binomial(static_cast<std::uint64_t>(K_ - j) + s,
                                          static_cast<std::uint64_t>(K_ - j));
    }

    static std::uint64_t capped_count(const std::vector<int>& caps, int L) {
        std::vector<std::uint64_t> dp(static_cast<std::size_t>(L) + 1, 0);
        dp[0] = 1;
        for (int cap : caps) {
            std::vector<std::uint64_t> next(dp.size(), 0);
            for (int s = 0; s <= L; ++s) {
                if (dp[s] == 0) continue;
                for (int v = 0; v <= cap && s + v <= L; ++v) next[s + v] += dp[s];
            }
            dp.swap(next);
        }
        std::uint64_t total = 0;
        for (auto v : dp) total += v;
        return total;
    }

    std::uint32_t capped_rank(const std::uint8_t* m) const {
        // enumeration is lexicographic, so binary search works
        std::size_t lo = 0, hi = size_;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const std::uint8_t* q = occupations(mid);
            int cmp = 0;
            for (int j = 0; j < K_; ++j) {
                if (q[j] != m[j]) {
                    cmp = q[j] < m[j] ? -1 : 1;
                    break;
                }
            }
            if (cmp == 0) return static_cast<std::uint32_t>(mid);
            if (cmp < 0)
                lo = mid + 1;
            else
                hi = mid;
        }
        return npos;
    }

    void enumerate() {
        std::vector<std::uint8_t> cur(static_cast<std::size_t>(K_), 0);
        std::size_t pos = 0;
        enumerate_rec(cur, 0, L_, 0, pos);
        if (pos != size_) throw std::logic_error("hierarchy enumeration mismatch");
    }

    void enumerate_rec(std::vector<std::uint8_t>& cur, int j, int budget,
                       int level, std::size_t& pos) {
        if (j == K_) {
            std::uint8_t* dst = occ_.data() + pos * static_cast<std::size_t>(K_);
            for (int i = 0; i < K_; ++i) dst[i] = cur[i];
            level_[pos] = static_cast<std::uint8_t>(level);
            ++pos;
            return;
        }
        const int hi = caps_.empty() ? budget : std::min(budget, caps_[j]);
        for (int v = 0; v <= hi; ++v) {
            cur[j] = static_cast<std::uint8_t>(v);
            enumerate_rec(cur, j + 1, budget - v, level + v, pos);
        }
        cur[j] = 0;
    }

    void build_neighbors() {
        up_.assign(size_ * static_cast<std::size_t>(K_), npos);
        down_.assign(size_ * static_cast<std::size_t>(K_), npos);
        std::vector<std::uint8_t> tmp(static_cast<std::size_t>(K_));
        for (std::size_t p = 0; p < size_; ++p) {
            const std::uint8_t* m = occupations(p);
            for (int k = 0; k < K_; ++k) {
                for (int i = 0; i < K_; ++i) tmp[i] = m[i];
                tmp[k] = static_cast<std::uint8_t>(m[k] + 1);
                up_[p * K_ + k] = rank(tmp.data());
                if (m[k] > 0) {
                    tmp[k] = static_cast<std::uint8_t>(m[k] - 1);
                    down_[p * K_ + k] = rank(tmp.data());
                } else {
                    tmp[k] = 0;
                }
            }
        }
    }

    int K_;
    int L_;
    std::vector<int> caps_;
    std::size_t size_ = 0;
    std::vector<std::uint64_t> rank_table_;
    std::vector<std::uint8_t> occ_;
    std::vector<std::uint8_t> level_;
    std::vector<std::uint32_t> up_, down_;
};

/// Storage estimates: dense hierarchy, tensor-train hierarchy, and chain
/// propagation, in complex elements. Pure arithmetic.
struct ResourceEstimate {
    std::uint64_t dense_hierarchy;   // n^2 (L+K)! / (L! K!)
    std::uint64_t mps_hierarchy;     // r^2 N (K-1) + r (n^2 + N)
    std::uint64_t chain_mps;         // N_ch d r^2
};

inline ResourceEstimate estimate_resources(std::uint64_t n, std::uint64_t K,
                                           std::uint64_t L, std::uint64_t r,
                                           std::uint64_t N, std::uint64_t d,
                                           std::uint64_t n_chain) {
    ResourceEstimate est{};
    est.dense_hierarchy = n * n * hierarchy_count(K, L);
    est.mps_hierarchy = (K >= 1) ? r * r * N * (K - 1) + r * (n * n + N) : 0;
    est.chain_mps = n_chain * d * r * r;
    return est;
}

}  // namespace heom

#endif  // HEOM_HIERARCHY_HPP
