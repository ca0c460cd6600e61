#pragma once

// Test-only reference oracles, kept independent of the library code paths they
// check: brute-force series sums, simple-reflection Weyl action, Jacobi-Trudi
// characters, exhaustive affine-orbit search.

#include <complex>
#include <map>
#include <vector>

#include "thetaforge/rootsys.hpp"

namespace oracle {

using thetaforge::Rat;
using thetaforge::RootSystem;
using thetaforge::Weight;
using cplx = std::complex<double>;

inline long long binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// s_i(lam) = lam - lam_i * alpha_i, labels of alpha_i = i-th column of C
inline Weight simple_reflect(const RootSystem& rs, int i, const Weight& lam) {
    Weight out = lam;
    long long c = lam.labels[i];
    for (int j = 0; j < rs.rank(); ++j) out.labels[j] -= c * rs.cartan()[j][i];
    return out;
}

// apply a word of simple reflections right-to-left
inline Weight apply_word(const RootSystem& rs, const std::vector<int>& word, const Weight& lam) {
    Weight cur = lam;
    for (auto it = word.rbegin(); it != word.rend(); ++it) cur = simple_reflect(rs, *it, cur);
    return cur;
}

// parity via explicit cycle decomposition (independent of inversion counting)
inline int perm_parity(const std::vector<int>& p) {
    std::vector<bool> seen(p.size(), false);
    int transpositions = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (std::size_t j = i; !seen[j]; j = p[j]) {
            seen[j] = true;
            ++len;
        }
        transpositions += len - 1;
    }
    return transpositions % 2 == 0 ? 1 : -1;
}

// Exhaustive search over W and a translation box for the witness of
// mu = w(base) + ls * beta with base interior to the dilated alcove.
struct BruteWitness {
    Weight base;
    std::vector<int> perm;
    int sign;
    std::vector<long long> beta;
    bool found = false;
};

inline BruteWitness brute_alcove_reduce(const RootSystem& rs, const Weight& mu, long long ls,
                                        long long box) {
    BruteWitness res;
    const int l = rs.rank();
    for (const auto& w : rs.weyl_group()) {
        std::vector<long long> idx(l, -box);
        while (true) {
            // candidate base solves w(base) + ls*C*idx = mu
            thetaforge::Weight tr = rs.from_root_coordinates(idx);
            Weight target = mu;
            for (int i = 0; i < l; ++i) target.labels[i] -= ls * tr.labels[i];
            // invert w: base = w^{-1}(target)
            thetaforge::WeylElement winv;
            winv.perm.assign(w.perm.size(), 0);
            for (std::size_t i = 0; i < w.perm.size(); ++i) winv.perm[w.perm[i]] = static_cast<int>(i);
            winv.sign = w.sign;
            Weight base = rs.act(winv, target);
            bool interior = base.label_sum() <= ls - 1;
            for (auto x : base.labels)
                if (x < 1) interior = false;
            if (interior) {
                if (res.found) {
                    // freeness: the witness must be unique
                    bool same = res.base == base && res.perm == w.perm && res.beta == idx;
                    if (!same) throw std::runtime_error("brute_alcove_reduce: non-unique witness");
                } else {
                    res = {base, w.perm, w.sign, idx, true};
                }
            }
            int pos = l - 1;
            while (pos >= 0 && idx[pos] == box) {
                idx[pos] = -box;
                --pos;
            }
            if (pos < 0) break;
            ++idx[pos];
        }
    }
    return res;
}

// --- Schur polynomial via Jacobi-Trudi (independent character oracle) ---

// complete homogeneous symmetric polynomial h_k(x_1..x_n)
inline cplx complete_homogeneous(const std::vector<cplx>& x, long long k) {
    if (k < 0) return 0.0;
    // h_k via dynamic programming over variables
    std::vector<cplx> h(static_cast<std::size_t>(k) + 1, 0.0);
    h[0] = 1.0;
    for (auto xi : x) {
        for (long long d = 1; d <= k; ++d) h[d] += xi * h[d - 1];
    }
    return h[k];
}

inline cplx det_small(std::vector<std::vector<cplx>> m) {
    const std::size_t n = m.size();
    cplx det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (std::abs(m[piv][c]) < 1e-300) return 0.0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            cplx f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

// s_lambda(x_1..x_n) = det(h_{lambda_i - i + j}) for the partition from Dynkin labels
inline cplx schur(const std::vector<cplx>& x, const std::vector<long long>& dynkin) {
    const std::size_t n = x.size();
    std::vector<long long> part(n, 0);
    for (std::size_t i = 0; i < dynkin.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) part[j] += dynkin[i];
    std::size_t rows = n;
    std::vector<std::vector<cplx>> m(rows, std::vector<cplx>(rows));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < rows; ++j)
            m[i][j] = complete_homogeneous(x, part[i] - static_cast<long long>(i) + static_cast<long long>(j));
    return det_small(m);
}

// eigenvalues x_i = exp(2 pi i t_i) of the SU(n) torus element for coroot coordinates z
inline std::vector<cplx> torus_eigenvalues(int n, const std::vector<cplx>& z) {
    std::vector<cplx> x(n);
    const cplx I(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        cplx zi = (i < n - 1) ? z[i] : cplx(0.0);
        cplx zim1 = (i > 0) ? z[i - 1] : cplx(0.0);
        x[i] = std::exp(2.0 * M_PI * I * (zi - zim1));
    }
    return x;
}

}  // namespace oracle
