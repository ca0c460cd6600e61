#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "thetaforge/lattice_sum.hpp"
#include "thetaforge/rootsys.hpp"

namespace thetaforge {

struct EllipticModulus {
    cplx tau;
    explicit EllipticModulus(cplx t) : tau(t) {
        if (!(t.imag() > 0)) throw Error("EllipticModulus: Im tau must be positive");
    }
    double tau2() const { return tau.imag(); }
};

// Point of h in coroot coordinates: v = sum_j z_j coroot_j.
struct TorusPoint {
    Eigen::VectorXcd coords;

    TorusPoint() = default;
    explicit TorusPoint(Eigen::VectorXcd z) : coords(std::move(z)) {}
    int dim() const { return static_cast<int>(coords.size()); }
};

// lambda(v) = sum_j labels_j z_j  (fundamental-weight pairing with coroots)
cplx weight_pairing(const Weight& lam, const TorusPoint& v);

// Weyl action on h in coroot coordinates, compatible with the weight action:
// (w lam)(w v) = lam(v).
TorusPoint act_point(const RootSystem& rs, const WeylElement& w, const TorusPoint& v);

// Weyl denominator sum_w eps(w) e^{2 pi i w(rho)(v)}.
cplx sigma_eval(const RootSystem& rs, const TorusPoint& v);

enum class ThetaSymmetry { plain, plus, minus, hatplus };

// Genus-one theta functions for SU(n) on h/(coroot + tau coroot), level k,
// with optional Weyl (anti-)symmetrization, and the shifted frame
// theta^-_{gamma+rho,k+n} / theta^-_{rho,n} for symmetry = hatplus.
class NATheta {
public:
    NATheta(const RootSystem& rs, Weight gamma, long long k, EllipticModulus tau,
            ThetaSymmetry symmetry, double tol = 1e-12, int radius_cap = 64);

    SeriesValue eval(const TorusPoint& v) const;

    // sum_ij C^{ij} d^2 theta / dx_i dx_j, termwise (not available for hatplus)
    cplx cartan_laplacian(const TorusPoint& v) const;

    const RootSystem& root_system() const { return *rs_; }
    const Weight& gamma() const { return gamma_; }
    long long level() const { return k_; }
    EllipticModulus modulus() const { return tau_; }
    ThetaSymmetry symmetry() const { return symmetry_; }
    bool identically_zero() const { return terms_.empty() && symmetry_ != ThetaSymmetry::hatplus; }

private:
    struct Term {
        double sign;
        LatticeEvaluator ev;
        Eigen::MatrixXd freq;  // w = freq * coords, freq = level * C
    };
    std::shared_ptr<const RootSystem> rs_;
    Weight gamma_;
    long long k_;
    EllipticModulus tau_;
    ThetaSymmetry symmetry_;
    double tol_;
    int radius_cap_;
    std::vector<Term> terms_;
    std::unique_ptr<NATheta> numerator_, denominator_;  // hatplus only

    friend SeriesValue eval_terms(const std::vector<Term>&, const TorusPoint&);
};

// theta^-_{gamma+rho,k+n}(v) / theta^-_{rho,n}(v) for gamma in D_k.
cplx hat_frame_eval(const RootSystem& rs, const Weight& gamma, long long k, EllipticModulus tau,
                    const TorusPoint& v, double tol = 1e-12);

struct LooijengaReport {
    int dim_plus = 0;
    int dim_minus = 0;
    int samples_used = 0;
    // combinatorial orbit counts for cross-checking the numeric ranks
    long long orbit_count_plus = 0;
    long long orbit_count_minus = 0;
};

// Numeric ranks of the W-invariant / anti-invariant spans of level-k' theta
// functions, from SVD of sampled frame matrices (relative threshold 1e-8).
LooijengaReport looijenga_dim_check(const RootSystem& rs, long long kprime, EllipticModulus tau,
                                    unsigned seed = 20240801);

struct PicardReport {
    int n = 0;
    std::vector<long long> column_gcds;        // one per simple root
    std::vector<long long> invariant_factors;  // of the full (x1, x2) group
    long long group_order = 1;
};

// Exact computation of the W-invariant part of Pic^0(M): the lattice of
// x = x1 + tau x2 with <alpha_j, x> alpha_j integral for all j, modulo
// Lambda_W + tau Lambda_W.  Elementary-divisor (gcd) arithmetic throughout.
PicardReport picard_invariant_check(const RootSystem& rs);

}  // namespace thetaforge
