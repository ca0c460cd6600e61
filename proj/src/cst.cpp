#include "thetaforge/cst.hpp"

#include <cmath>
#include <random>

namespace thetaforge {

namespace {
const cplx I(0.0, 1.0);

// generic drift off the singular locus; no root functional vanishes on it
TorusPoint perturbed(const TorusPoint& v, double eps) {
    TorusPoint out = v;
    double d = 1.0;
    for (int j = 0; j < out.dim(); ++j) {
        out.coords[j] += eps * d;
        d /= M_PI;
    }
    return out;
}

// numerator of the character formula and the growth scale of its terms
std::pair<cplx, double> alternating_sum(const RootSystem& rs, const Weight& shifted,
                                        const TorusPoint& v) {
    cplx s = 0.0;
    double scale = 0.0;
    for (const auto& w : rs.weyl_group()) {
        cplx e = std::exp(2.0 * M_PI * I * weight_pairing(rs.act(w, shifted), v));
        s += static_cast<double>(w.sign) * e;
        scale = std::max(scale, std::abs(e));
    }
    return {s, scale};
}
}  // namespace

void ClassFunctionSeries::add(const Weight& lam, cplx a) {
    if (!lam.dominant()) throw Error("ClassFunctionSeries: key must be dominant");
    terms[lam] += a;
}

long long weyl_dimension(const RootSystem& rs, const Weight& lam) {
    if (!lam.dominant()) throw Error("weyl_dimension: weight not dominant");
    Rat num = 1, den = 1;
    Weight shifted = lam + rs.rho();
    for (const auto& alpha : rs.positive_roots()) {
        num *= rs.inner_product(shifted, alpha);
        den *= rs.inner_product(rs.rho(), alpha);
    }
    Rat dim = num / den;
    if (!dim.is_integer()) throw Error("weyl_dimension: non-integral value " + dim.str());
    return dim.as_int();
}

cplx character_eval(const RootSystem& rs, const Weight& lam, const TorusPoint& v) {
    if (!lam.dominant()) throw Error("character_eval: weight not dominant");
    auto [sigma, scale] = alternating_sum(rs, rs.rho(), v);
    if (std::abs(sigma) >= 1e-12 * std::max(1.0, scale)) {
        auto [num, num_scale] = alternating_sum(rs, lam + rs.rho(), v);
        (void)num_scale;
        return num / sigma;
    }
    bool at_origin = true;
    for (int j = 0; j < v.dim(); ++j)
        if (std::abs(v.coords[j]) > 1e-9) at_origin = false;
    if (at_origin) return static_cast<double>(weyl_dimension(rs, lam));
    // singular but not the origin: fixed deterministic offset
    TorusPoint moved = perturbed(v, 1e-6);
    auto [sigma2, scale2] = alternating_sum(rs, rs.rho(), moved);
    if (std::abs(sigma2) < 1e-12 * std::max(1.0, scale2))
        throw SingularLocusError("character_eval: sigma vanishes after perturbation");
    auto [num2, s2] = alternating_sum(rs, lam + rs.rho(), moved);
    (void)s2;
    return num2 / sigma2;
}

PsiDistribution::PsiDistribution(const RootSystem& rs_, Weight gamma_, long long k_)
    : rs(rs_), gamma(std::move(gamma_)), k(k_) {
    if (k < 0) throw Error("PsiDistribution: k >= 0 required");
    if (!gamma.dominant() || gamma.label_sum() > k)
        throw Error("PsiDistribution: gamma must lie in D_k");
}

int PsiDistribution::pair_character(const Weight& mu) const {
    if (!mu.dominant()) throw Error("PsiDistribution::pair_character: mu not dominant");
    try {
        auto wit = rs.alcove_reduce(mu + rs.rho(), level_shifted());
        if (wit.base == gamma + rs.rho()) return wit.weyl.sign;
        return 0;
    } catch (const SingularWeightError&) {
        return 0;  // on an affine wall, hence outside every free orbit
    }
}

ClassFunctionSeries psi_truncate(const PsiDistribution& psi, const Rat& cutoff) {
    Weight shifted = psi.gamma + psi.rs.rho();
    if (cutoff < psi.rs.norm2(shifted))
        throw Error("psi_truncate: cutoff below the orbit representative norm");
    ClassFunctionSeries out;
    for (const auto& term : psi.rs.affine_orbit(psi.gamma, psi.k, cutoff))
        out.add(term.lambda, static_cast<double>(term.sign));
    return out;
}

Rat psi_cutoff_for_tol(const PsiDistribution& psi, cplx tau, double t, double ymax, double tol) {
    const RootSystem& rs = psi.rs;
    const int l = rs.rank();
    const double tau2 = tau.imag();
    if (!(tau2 > 0) || !(t > 0)) throw Error("psi_cutoff_for_tol: need Im tau > 0, t > 0");
    const double rho2 = rs.norm2(rs.rho()).to_double();
    // largest eigenvalue of C bounds the label norm by the invariant norm
    double lam_max = 2.0 + 2.0 * std::cos(M_PI / rs.n());
    auto shell_log = [&](double r) {
        double count = static_cast<double>(rs.weyl_order()) * rs.n() *
                       std::pow(2.0 * (r + 2.0), l);
        return std::log(count) - M_PI * tau2 * t * (r * r - rho2) +
               2.0 * M_PI * std::sqrt(lam_max) * static_cast<double>(l) * r * ymax;
    };
    double r0 = std::sqrt(rs.norm2(psi.gamma + rs.rho()).to_double());
    for (double r = std::ceil(r0) + 1; r < 4096; r += 1.0) {
        if (shell_log(r + 1) - shell_log(r) > std::log(0.5)) continue;
        if (2.0 * std::exp(shell_log(r)) < tol) return Rat(static_cast<long long>(r * r) + 1);
    }
    throw ResourceError("psi_cutoff_for_tol: no admissible cutoff below the cap");
}

CSTImage::CSTImage(const RootSystem& rs, ClassFunctionSeries source, cplx tau, double t)
    : rs_(std::make_shared<RootSystem>(rs)), source_(std::move(source)), tau_(tau), t_(t) {
    if (!(tau.imag() > 0)) throw Error("CSTImage: Im tau must be positive");
    if (!(t > 0)) throw Error("CSTImage: t must be positive");
}

CSTImage::CSTImage(const PsiDistribution& psi, cplx tau)
    : rs_(std::make_shared<RootSystem>(psi.rs)),
      tau_(tau),
      t_(1.0 / static_cast<double>(psi.level_shifted())) {
    if (!(tau.imag() > 0)) throw Error("CSTImage: Im tau must be positive");
    theta_minus_ = std::make_shared<NATheta>(psi.rs, psi.gamma + psi.rs.rho(), psi.level_shifted(),
                                             EllipticModulus(tau), ThetaSymmetry::minus);
    rho_norm2_ = psi.rs.norm2(psi.rs.rho()).to_double();
}

cplx CSTImage::eval(const TorusPoint& v) const {
    if (closed_form()) {
        auto [sigma, scale] = alternating_sum(*rs_, rs_->rho(), v);
        if (std::abs(sigma) < 1e-12 * std::max(1.0, scale))
            throw SingularLocusError("CSTImage: sigma vanishes at the evaluation point");
        cplx pre = std::exp(-I * M_PI * tau_ * t_ * rho_norm2_);
        return pre * theta_minus_->eval(v).value / sigma;
    }
    cplx s = 0.0;
    for (const auto& [lam, a] : source_.terms) {
        double c = rs_->casimir(lam).to_double();
        s += a * std::exp(I * M_PI * tau_ * t_ * c) * character_eval(*rs_, lam, v);
    }
    return s;
}

CSTImage cst_apply(const RootSystem& rs, const ClassFunctionSeries& f, cplx tau, double t) {
    return CSTImage(rs, f, tau, t);
}

cplx cst_psi_closed_form(const PsiDistribution& psi, cplx tau, const TorusPoint& v, double tol) {
    (void)tol;
    return CSTImage(psi, tau).eval(v);
}

double diagram_check_tb1(const RootSystem& rs, const ClassFunctionSeries& f, cplx tau, double t,
                         int samples, unsigned seed) {
    CSTImage upper = cst_apply(rs, f, tau, t);
    const double sqrtW = std::sqrt(static_cast<double>(rs.weyl_order()));
    const double rho2 = rs.norm2(rs.rho()).to_double();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd z(rs.rank());
        for (int j = 0; j < rs.rank(); ++j) z[j] = cplx(u(rng), 0.1 * u(rng));
        TorusPoint v(z);

        // phi_C(C_t^tau f) = e^{i pi tau t |rho|^2} sigma/sqrt(|W|) * (C_t^tau f)
        cplx path1 = std::exp(I * M_PI * tau * t * rho2) * sigma_eval(rs, v) / sqrtW * upper.eval(v);

        // C_t^{ab(tau)}(phi f): each mode w(lam+rho) damped by e^{i pi tau t |lam+rho|^2}
        cplx path2 = 0.0;
        for (const auto& [lam, a] : f.terms) {
            double n2 = rs.norm2(lam + rs.rho()).to_double();
            cplx damp = std::exp(I * M_PI * tau * t * n2);
            for (const auto& w : rs.weyl_group()) {
                Weight mu = rs.act(w, lam + rs.rho());
                path2 += a * static_cast<double>(w.sign) * damp *
                         std::exp(2.0 * M_PI * I * weight_pairing(mu, v));
            }
        }
        path2 /= sqrtW;

        worst = std::max(worst, std::abs(path1 - path2) / std::max(1.0, std::abs(path2)));
    }
    return worst;
}

}  // namespace thetaforge
