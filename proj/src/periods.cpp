#include "thetaforge/periods.hpp"

#include <algorithm>
#include <numeric>

#include "thetaforge/errors.hpp"
#include "thetaforge/rootsys.hpp"

namespace thetaforge {

namespace {

RatMat to_rat(const IntMat& m) {
    RatMat out(m.size(), std::vector<Rat>(m.empty() ? 0 : m[0].size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) out[i][j] = Rat(m[i][j]);
    return out;
}

RatMat rat_mul(const RatMat& a, const RatMat& b) {
    const std::size_t r = a.size(), mid = b.size(), c = b[0].size();
    RatMat out(r, std::vector<Rat>(c, Rat(0)));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < mid; ++k)
            for (std::size_t j = 0; j < c; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

RatMat rat_transpose(const RatMat& a) {
    RatMat out(a[0].size(), std::vector<Rat>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
    return out;
}

RatMat rat_inverse(RatMat a) {
    const std::size_t n = a.size();
    RatMat inv(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = Rat(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == Rat(0)) ++piv;
        if (piv == n) throw Error("rat_inverse: singular matrix");
        std::swap(a[piv], a[c]);
        std::swap(inv[piv], inv[c]);
        Rat d = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == Rat(0)) continue;
            Rat f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

IntMat rat_to_int(const RatMat& a, const char* what) {
    IntMat out(a.size(), std::vector<long long>(a[0].size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            if (!a[i][j].is_integer()) throw Error(std::string(what) + ": entry not integral");
            out[i][j] = a[i][j].as_int();
        }
    return out;
}

IntMat cartan_int(int n) {
    const int l = n - 1;
    IntMat C(l, std::vector<long long>(l, 0));
    for (int i = 0; i < l; ++i) {
        C[i][i] = 2;
        if (i > 0) C[i][i - 1] = -1;
        if (i + 1 < l) C[i][i + 1] = -1;
    }
    return C;
}

// leading principal minors all positive (exact Sylvester criterion)
bool rat_positive_definite(const RatMat& a) {
    const std::size_t n = a.size();
    for (std::size_t k = 1; k <= n; ++k) {
        RatMat sub(k, std::vector<Rat>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sub[i][j] = a[i][j];
        // fraction-free determinant via Gaussian elimination over Rat
        Rat det(1);
        for (std::size_t c = 0; c < k; ++c) {
            std::size_t piv = c;
            while (piv < k && sub[piv][c] == Rat(0)) ++piv;
            if (piv == k) return false;
            if (piv != c) {
                std::swap(sub[piv], sub[c]);
                det = -det;
            }
            det *= sub[c][c];
            for (std::size_t r = c + 1; r < k; ++r) {
                Rat f = sub[r][c] / sub[c][c];
                for (std::size_t j = c; j < k; ++j) sub[r][j] -= f * sub[c][j];
            }
        }
        if (!(det > Rat(0))) return false;
    }
    return true;
}

void validate(const CanonicalBasisData& d) {
    const int l = d.n - 1;
    if (int_matrix_det(d.A) != 1 || int_matrix_det(d.Atilde) != 1)
        throw Error("canonical_basis: A, A~ must have determinant 1");
    // A^t C A~ = Delta exactly
    RatMat lhs = rat_mul(rat_mul(rat_transpose(to_rat(d.A)), to_rat(cartan_int(d.n))),
                         to_rat(d.Atilde));
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
            if (lhs[i][j] != Rat(i == j ? d.Delta[static_cast<std::size_t>(i)] : 0))
                throw Error("canonical_basis: A^t C A~ != Delta");
    long long prod = 1;
    for (int i = 0; i < l; ++i) {
        prod *= d.Delta[static_cast<std::size_t>(i)];
        if (i + 1 < l && d.Delta[static_cast<std::size_t>(i + 1)] %
                                 d.Delta[static_cast<std::size_t>(i)] !=
                             0)
            throw Error("canonical_basis: divisor chain broken");
    }
    if (prod != d.n) throw Error("canonical_basis: det Delta != n");
    // Omega symmetric with entries in (1/n) Z, positive definite over tau
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            if (d.omega_over_tau[i][j] != d.omega_over_tau[j][i])
                throw Error("canonical_basis: Omega not symmetric");
            Rat scaled = d.omega_over_tau[i][j] * Rat(d.n);
            if (!scaled.is_integer()) throw Error("canonical_basis: Omega entries not in (tau/n) Z");
        }
    if (!rat_positive_definite(d.omega_over_tau))
        throw Error("canonical_basis: Omega/tau not positive definite");
}

}  // namespace

long long int_matrix_det(IntMat m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    // Bareiss fraction-free elimination
    long long prev = 1, sign = 1;
    for (int c = 0; c + 1 < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            sign = -sign;
        }
        for (int r = c + 1; r < n; ++r)
            for (int j = c + 1; j < n; ++j)
                m[r][j] = (m[r][j] * m[c][c] - m[r][c] * m[c][j]) / prev;
        prev = m[c][c];
    }
    return sign * m[n - 1][n - 1];
}

CanonicalBasisData canonical_basis(int n) {
    if (n < 2) throw Error("canonical_basis: n >= 2 required");
    CanonicalBasisData d;
    d.n = n;
    const int l = n - 1;
    if (n == 2) {
        d.A = {{1}};
        d.Atilde = {{1}};
        d.Delta = {2};
        d.omega_over_tau = {{Rat(1, 2)}};
        d.note = "E(alpha, tau alpha) = 2; the SU(2) sections use the half form E_1 = E/2 "
                 "with Delta = (1)";
        validate(d);
        return d;
    }
    // beta = (alpha_1, ..., alpha_{l-1}, n lambda_1); n lambda_1 = l a_1 + (l-1) a_2 + ... + a_l
    d.A.assign(l, std::vector<long long>(l, 0));
    for (int i = 0; i + 1 < l; ++i) d.A[i][i] = 1;
    for (int i = 0; i < l; ++i) d.A[i][l - 1] = l - i;
    d.Delta.assign(l, 1);
    d.Delta[static_cast<std::size_t>(l - 1)] = n;

    RatMat C = to_rat(cartan_int(n));
    RatMat Cinv = rat_inverse(C);
    RatMat Ainv = rat_inverse(to_rat(d.A));
    RatMat AinvT = rat_transpose(Ainv);

    // A~ = C^{-1} A^{-t} Delta, integral and unimodular by the completability lemma
    RatMat deltaM(l, std::vector<Rat>(l, Rat(0)));
    for (int i = 0; i < l; ++i) deltaM[i][i] = Rat(d.Delta[static_cast<std::size_t>(i)]);
    d.Atilde = rat_to_int(rat_mul(rat_mul(Cinv, AinvT), deltaM), "canonical_basis A~");

    d.omega_over_tau = rat_mul(rat_mul(Ainv, Cinv), AinvT);

    // cross-check against the closed formulas for the period matrix
    for (int i = 1; i <= l; ++i) {
        for (int j = i; j <= l; ++j) {
            Rat want;
            if (j <= l - 1)
                want = Rat(static_cast<long long>(n - i) * (l - j));
            else if (i <= l - 1)
                want = Rat(i - l);
            else
                want = Rat(l, n);
            if (d.omega_over_tau[i - 1][j - 1] != want)
                throw Error("canonical_basis: closed-form Omega mismatch at (" +
                            std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    }
    validate(d);
    return d;
}

bool completable_check(int n, const IntMat& A) {
    const int l = n - 1;
    if (static_cast<int>(A.size()) != l) throw DimensionError("completable_check: size");
    long long det = int_matrix_det(A);
    if (det != 1 && det != -1) throw Error("completable_check: A must be unimodular");
    std::vector<long long> delta(l, 1);
    delta[static_cast<std::size_t>(l - 1)] = n;
    RatMat CA = rat_mul(to_rat(cartan_int(n)), to_rat(A));
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            CA[i][j] /= Rat(delta[static_cast<std::size_t>(j)]);
            if (!CA[i][j].is_integer()) return false;
        }
    IntMat M = rat_to_int(CA, "completable_check");
    long long dm = int_matrix_det(M);
    return dm == 1 || dm == -1;
}

bool gamma_n_membership(int n, const IntMat& B) {
    const int l = n - 1;
    if (static_cast<int>(B.size()) != l) throw DimensionError("gamma_n_membership: size");
    if (int_matrix_det(B) != 1) throw Error("gamma_n_membership: det B must be 1");
    for (int i = 0; i + 1 < l; ++i)
        if (((B[i][l - 1] % n) + n) % n != 0) return false;
    return true;
}

PeriodEquivalence period_equivalence(int n, const IntMat& B) {
    if (!gamma_n_membership(n, B)) throw Error("period_equivalence: B not in Gamma_n");
    const int l = n - 1;
    CanonicalBasisData base = canonical_basis(n);
    PeriodEquivalence out;
    out.omega1_over_tau = base.omega_over_tau;
    out.omega2_over_tau = rat_mul(rat_mul(to_rat(B), base.omega_over_tau), rat_transpose(to_rat(B)));

    // Omega2 keeps every canonical-basis invariant
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            if (out.omega2_over_tau[i][j] != out.omega2_over_tau[j][i])
                throw Error("period_equivalence: Omega2 not symmetric");
            if (!(out.omega2_over_tau[i][j] * Rat(n)).is_integer())
                throw Error("period_equivalence: Omega2 entries not in (tau/n) Z");
        }
    if (!rat_positive_definite(out.omega2_over_tau))
        throw Error("period_equivalence: Omega2/tau not positive definite");

    // condition (**): B~ = Delta^{-1} B^{-t} Delta must be integral
    RatMat deltaM(l, std::vector<Rat>(l, Rat(0))), deltaInv(l, std::vector<Rat>(l, Rat(0)));
    for (int i = 0; i < l; ++i) {
        long long di = base.Delta[static_cast<std::size_t>(i)];
        deltaM[i][i] = Rat(di);
        deltaInv[i][i] = Rat(1, di);
    }
    RatMat BinvT = rat_transpose(rat_inverse(to_rat(B)));
    out.btilde = rat_to_int(rat_mul(rat_mul(deltaInv, BinvT), deltaM), "period_equivalence B~");
    RatMat check = rat_mul(rat_mul(rat_transpose(to_rat(B)), deltaM), to_rat(out.btilde));
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
            if (check[i][j] != deltaM[i][j]) throw Error("period_equivalence: (**) violated");
    return out;
}

std::vector<long long> smith_normal_form(IntMat M) {
    const int rows = static_cast<int>(M.size());
    const int cols = rows ? static_cast<int>(M[0].size()) : 0;
    const int rank_cap = std::min(rows, cols);
    std::vector<long long> divisors;
    int s = 0;
    while (s < rank_cap) {
        // find the minimal nonzero pivot in the trailing block
        int pr = -1, pc = -1;
        long long best = 0;
        for (int i = s; i < rows; ++i)
            for (int j = s; j < cols; ++j)
                if (M[i][j] != 0 && (best == 0 || std::abs(M[i][j]) < best)) {
                    best = std::abs(M[i][j]);
                    pr = i;
                    pc = j;
                }
        if (pr < 0) break;
        std::swap(M[pr], M[s]);
        for (int i = 0; i < rows; ++i) std::swap(M[i][pc], M[i][s]);
        bool clean = true;
        for (int i = s + 1; i < rows; ++i) {
            long long q = M[i][s] / M[s][s];
            if (q != 0)
                for (int j = s; j < cols; ++j) M[i][j] -= q * M[s][j];
            if (M[i][s] != 0) clean = false;
        }
        for (int j = s + 1; j < cols; ++j) {
            long long q = M[s][j] / M[s][s];
            if (q != 0)
                for (int i = s; i < rows; ++i) M[i][j] -= q * M[i][s];
            if (M[s][j] != 0) clean = false;
        }
        if (!clean) continue;  // smaller remainders appeared; pick a new pivot
        // divisibility sweep: the pivot must divide the trailing block
        bool divides = true;
        for (int i = s + 1; i < rows && divides; ++i)
            for (int j = s + 1; j < cols && divides; ++j)
                if (M[i][j] % M[s][s] != 0) {
                    for (int jj = s; jj < cols; ++jj) M[s][jj] += M[i][jj];
                    divides = false;
                }
        if (!divides) continue;
        divisors.push_back(std::abs(M[s][s]));
        ++s;
    }
    std::sort(divisors.begin(), divisors.end());
    return divisors;
}

IntMat polarization_form(int n) {
    const int l = n - 1;
    IntMat C = cartan_int(n);
    IntMat E(2 * l, std::vector<long long>(2 * l, 0));
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            E[i][l + j] = C[i][j];
            E[l + i][j] = -C[j][i];
        }
    return E;
}

}  // namespace thetaforge
