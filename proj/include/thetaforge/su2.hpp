#pragma once

#include <vector>

#include "thetaforge/gram.hpp"
#include "thetaforge/lattice_sum.hpp"

namespace thetaforge {

// K = SU(2): half-integral polarization, so levels are indexed by k' with
// t = 2/k' and both integral and (-1)^p-twisted theta families appear.
enum class SU2Family { integral, half };

class SU2Theta {
public:
    SU2Theta(long long kprime, long long m, SU2Family family, cplx tau, double tol = 1e-12,
             int radius_cap = 64);

    SeriesValue eval(cplx z) const;
    cplx d2z(cplx z) const;  // d^2 theta / dz^2, termwise

    long long kprime() const { return kprime_; }
    long long m() const { return m_; }
    SU2Family family() const { return family_; }
    cplx tau() const { return tau_; }

private:
    long long kprime_, m_;
    SU2Family family_;
    cplx tau_;
    LatticeEvaluator ev_;
};

// A basis vector as a combination sum coeff * theta_{label, k'}.
struct SU2Combo {
    std::vector<std::pair<long long, double>> parts;
};

struct SU2DimReport {
    long long kprime = 0;
    long long dim_plus = 0;
    long long dim_minus = 0;
    std::vector<SU2Combo> plus_basis;
    std::vector<SU2Combo> minus_basis;
};

// Weyl decomposition of the level-k' theta space under z -> -z.
SU2DimReport su2_dim_decomposition(long long kprime);

// One psi_{m,k} handle: distribution with Fourier support +-(m+1) mod k',
// alternating signs for the half family under reflection.
struct SU2Psi {
    long long k;
    long long m;  // 0..k
    SU2Family family;
    long long kprime;   // 2k+4, or 2k+3 when orbifold
    bool orbifold;

    // CST image at t = 2/k' times sigma: the level-k' anti-invariant combination
    // e^{-i pi tau/k'} (theta_{m+1} -+ theta_{k'-m-1}); minus sign for integral.
    cplx image_times_sigma(cplx tau, cplx z, double tol = 1e-12) const;
    // CST image at arbitrary t via the damped mode series (the level gate probe).
    cplx image_times_sigma_at_t(cplx tau, double t, cplx z, double tol = 1e-12) const;
};

std::vector<SU2Psi> su2_psi_basis(long long k, SU2Family family, bool orbifold = false);

// Gram of the normalized hat frame via the product form (theta^- combinations
// against  nu_{t tau2}, t = 2/k'), expected identity.
GramReport su2_gram(long long k, cplx tau, int N, SU2Family family = SU2Family::integral,
                    bool parallel = true, double t_override = 0.0, bool orbifold = false);

// Cor-style product map: theta_4^- * (plus basis of level 2k) spans the minus
// space of level 2k+4.  Returns the max relative least-squares fit residual.
double su2_product_isomorphism_check(long long k, cplx tau, int samples, unsigned seed = 20240804);

// Pointwise invariance of |C_t(psi) sigma|^2 e^{-2 t pi tau2 |rho|^2} nu under
// the lattice and the reflection, as for SU(n) but with the SU(2) measure.
DescentReport su2_fundamental_domain_independence(long long k, cplx tau, double t,
                                                  SU2Family family = SU2Family::integral,
                                                  bool orbifold = false, int samples = 20,
                                                  unsigned seed = 20240805);

// Residual of C(psi) sigma against the untwisted (d = 0) automorphy factor
// e^{-2 pi i k' z - pi i k' tau}; order one for the half family, which does
// not descend to moduli-space sections.
double su2_descent_automorphy_residual(long long k, cplx tau, SU2Family family, int samples = 20,
                                       unsigned seed = 20240806);

}  // namespace thetaforge
