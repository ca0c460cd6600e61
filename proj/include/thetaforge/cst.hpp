#pragma once

#include <map>
#include <memory>
#include <optional>

#include "thetaforge/nonabelian.hpp"
#include "thetaforge/rootsys.hpp"

namespace thetaforge {

// Finite class-function series  f = sum a_lambda chi_lambda, keys dominant.
struct ClassFunctionSeries {
    std::map<Weight, cplx> terms;

    void add(const Weight& lam, cplx a);
    std::size_t size() const { return terms.size(); }
};

// Weyl character formula with a fallback near zeros of sigma: exact Weyl
// dimension at v = 0, deterministic small perturbation elsewhere.
cplx character_eval(const RootSystem& rs, const Weight& lam, const TorusPoint& v);

// prod_{alpha>0} <lam+rho, alpha> / <rho, alpha>, exact; must come out integral.
long long weyl_dimension(const RootSystem& rs, const Weight& lam);

// psi_{gamma,k}: the Ad-invariant distribution with character expansion
// sum eps_lambda chi_lambda over the dilated-alcove orbit of gamma+rho.
struct PsiDistribution {
    RootSystem rs;
    Weight gamma;
    long long k;

    PsiDistribution(const RootSystem& rs_, Weight gamma_, long long k_);
    long long level_shifted() const { return k + rs.n(); }
    // pairing with chi_mu as a distribution: eps_mu if mu+rho in [gamma+rho], else 0
    int pair_character(const Weight& mu) const;
};

// Holomorphic image of a distribution under C_t^tau.  Either a finite damped
// character series, or the closed product form for a psi at t = 1/(k+n).
class CSTImage {
public:
    CSTImage(const RootSystem& rs, ClassFunctionSeries source, cplx tau, double t);
    CSTImage(const PsiDistribution& psi, cplx tau);  // closed form, t = 1/(k+n)

    cplx eval(const TorusPoint& v) const;
    bool closed_form() const { return theta_minus_ != nullptr; }
    double t() const { return t_; }
    cplx tau() const { return tau_; }

private:
    std::shared_ptr<const RootSystem> rs_;
    ClassFunctionSeries source_;
    cplx tau_;
    double t_;
    std::shared_ptr<const NATheta> theta_minus_;  // theta^-_{gamma+rho, k+n}
    double rho_norm2_ = 0.0;
};

CSTImage cst_apply(const RootSystem& rs, const ClassFunctionSeries& f, cplx tau, double t);

// Truncation of psi to the orbit terms with <lambda+rho,lambda+rho> <= cutoff.
ClassFunctionSeries psi_truncate(const PsiDistribution& psi, const Rat& cutoff);

// A cutoff for which the dropped terms of C_t^tau(psi) * sigma contribute
// less than tol at every point with |Im coords|_inf <= ymax.
Rat psi_cutoff_for_tol(const PsiDistribution& psi, cplx tau, double t, double ymax, double tol);

// e^{-i pi tau |rho|^2/(k+n)} theta^-_{gamma+rho,k+n}(v) / sigma(v).
cplx cst_psi_closed_form(const PsiDistribution& psi, cplx tau, const TorusPoint& v,
                         double tol = 1e-12);

// Max residual over sample points of the two routes around the CST/abelian-CST
// commutative square: phi_C(C_t^tau f) vs C_t^{ab(tau)}(phi f).
double diagram_check_tb1(const RootSystem& rs, const ClassFunctionSeries& f, cplx tau, double t,
                         int samples, unsigned seed = 20240802);

}  // namespace thetaforge
