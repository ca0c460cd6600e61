#include "thetaforge/su2.hpp"

#include <cmath>
#include <random>

namespace thetaforge {

namespace {
const cplx I(0.0, 1.0);

LatticeSeries su2_series(long long kprime, long long m, SU2Family family, cplx tau) {
    LatticeSeries s;
    s.A = Eigen::MatrixXcd::Constant(1, 1, static_cast<double>(kprime) * tau);
    s.c = Eigen::VectorXd::Constant(1, static_cast<double>(m) / static_cast<double>(kprime));
    s.h = Eigen::VectorXd::Constant(1, family == SU2Family::half ? 0.5 : 0.0);
    return s;
}

long long canonical_label(long long m, long long kprime) {
    return ((m % kprime) + kprime) % kprime;
}
}  // namespace

SU2Theta::SU2Theta(long long kprime, long long m, SU2Family family, cplx tau, double tol,
                   int radius_cap)
    : kprime_(kprime),
      m_(canonical_label(m, kprime)),
      family_(family),
      tau_(tau),
      ev_(su2_series(kprime, canonical_label(m, kprime), family, tau), tol, radius_cap) {
    if (kprime < 1) throw Error("SU2Theta: level must be >= 1");
    if (!(tau.imag() > 0)) throw Error("SU2Theta: Im tau must be positive");
}

SeriesValue SU2Theta::eval(cplx z) const {
    Eigen::VectorXcd w(1);
    w[0] = static_cast<double>(kprime_) * z;
    return ev_.eval(w);
}

cplx SU2Theta::d2z(cplx z) const {
    Eigen::VectorXcd w(1);
    w[0] = static_cast<double>(kprime_) * z;
    const double kp2 = static_cast<double>(kprime_) * static_cast<double>(kprime_);
    return -4.0 * M_PI * M_PI * kp2 *
           ev_.eval_weighted(w, Eigen::MatrixXcd::Identity(1, 1)).value;
}

SU2DimReport su2_dim_decomposition(long long kprime) {
    if (kprime < 1) throw Error("su2_dim_decomposition: k' >= 1 required");
    SU2DimReport rep;
    rep.kprime = kprime;
    if (kprime % 2 == 0) {
        long long k = kprime / 2;
        rep.dim_plus = k + 1;
        rep.dim_minus = k - 1;
        rep.plus_basis.push_back({{{0, 1.0}}});
        rep.plus_basis.push_back({{{k, 1.0}}});
        for (long long j = 1; j < k; ++j) {
            rep.plus_basis.push_back({{{j, 1.0}, {2 * k - j, 1.0}}});
            rep.minus_basis.push_back({{{j, 1.0}, {2 * k - j, -1.0}}});
        }
    } else {
        long long k = (kprime - 1) / 2;
        rep.dim_plus = k + 1;
        rep.dim_minus = k;
        rep.plus_basis.push_back({{{0, 1.0}}});
        for (long long j = 1; j <= k; ++j) {
            rep.plus_basis.push_back({{{j, 1.0}, {kprime - j, 1.0}}});
            rep.minus_basis.push_back({{{j, 1.0}, {kprime - j, -1.0}}});
        }
    }
    return rep;
}

std::vector<SU2Psi> su2_psi_basis(long long k, SU2Family family, bool orbifold) {
    if (k < 0) throw Error("su2_psi_basis: k >= 0 required");
    long long kprime = orbifold ? 2 * k + 3 : 2 * k + 4;
    std::vector<SU2Psi> out;
    for (long long m = 0; m <= k; ++m) out.push_back(SU2Psi{k, m, family, kprime, orbifold});
    return out;
}

cplx SU2Psi::image_times_sigma(cplx tau, cplx z, double tol) const {
    SU2Theta a(kprime, m + 1, family, tau, tol);
    SU2Theta b(kprime, kprime - m - 1, family, tau, tol);
    double sign = family == SU2Family::integral ? -1.0 : 1.0;
    cplx pre = std::exp(-I * M_PI * tau / static_cast<double>(kprime));
    return pre * (a.eval(z).value + sign * b.eval(z).value);
}

cplx SU2Psi::image_times_sigma_at_t(cplx tau, double t, cplx z, double tol) const {
    // modes q = +-(m+1) + k' Z with the reflection signs, each damped by
    // e^{i pi tau t (q^2-1)/2}; the half family adds (-1)^p per branch
    const double y = std::abs(z.imag());
    long long Q = 8;
    for (; Q < 4096; Q *= 2) {
        double tail = -M_PI * tau.imag() * t * 0.5 * (static_cast<double>(Q) * Q - 1.0) +
                      2.0 * M_PI * Q * y;
        if (tail < std::log(tol) - 4.0) break;
    }
    cplx sum = 0.0;
    for (long long q = -Q; q <= Q; ++q) {
        double coeff = 0.0;
        long long p = 0;
        if (canonical_label(q - (m + 1), kprime) == 0) {
            coeff = 1.0;
            p = (q - (m + 1)) / kprime;
        } else if (canonical_label(q + (m + 1), kprime) == 0) {
            coeff = -1.0;
            p = (q + (m + 1)) / kprime;  // q = -(m+1) + k' p, reflected branch
        } else {
            continue;
        }
        if (family == SU2Family::half && (((p % 2) + 2) % 2 == 1)) coeff = -coeff;
        double c_half = 0.5 * (static_cast<double>(q) * static_cast<double>(q) - 1.0);
        sum += coeff *
               std::exp(I * M_PI * tau * t * c_half + 2.0 * M_PI * I * static_cast<double>(q) * z);
    }
    return sum;
}

GramReport su2_gram(long long k, cplx tau, int N, SU2Family family, bool parallel,
                    double t_override, bool orbifold) {
    auto psis = su2_psi_basis(k, family, orbifold);
    const long long kprime = psis.front().kprime;
    FrameSet fs;
    fs.S = Eigen::MatrixXcd::Constant(1, 1, tau / static_cast<double>(kprime));
    fs.G = Eigen::MatrixXcd::Constant(1, 1, tau);
    fs.M = Eigen::MatrixXd::Constant(1, 1, static_cast<double>(kprime));
    const double h = family == SU2Family::half ? 0.5 : 0.0;
    const double reflected_sign = family == SU2Family::integral ? -1.0 : 1.0;
    for (const auto& psi : psis) {
        FrameSet::Piece a;
        a.sign = 1.0;
        a.m0 = Eigen::VectorXd::Constant(1, static_cast<double>(psi.m + 1));
        a.h = Eigen::VectorXd::Constant(1, h);
        FrameSet::Piece b;
        b.sign = reflected_sign;
        b.m0 = Eigen::VectorXd::Constant(1, static_cast<double>(kprime - psi.m - 1));
        b.h = Eigen::VectorXd::Constant(1, h);
        fs.frames.push_back({a, b});
    }
    const double t = t_override > 0.0 ? t_override : 2.0 / static_cast<double>(kprime);
    CellMeasure measure{t, Eigen::MatrixXd::Constant(1, 1, tau.imag() / 2.0),
                        Eigen::MatrixXd::Constant(1, 1, 2.0)};
    return gram_kernel(fs, measure, QuadratureGrid::standard(1, N), 0.5, 1e-12, parallel);
}

double su2_product_isomorphism_check(long long k, cplx tau, int samples, unsigned seed) {
    if (k < 1) throw Error("su2_product_isomorphism_check: k >= 1 required");
    const long long low = 2 * k, high = 2 * k + 4;
    auto plus = su2_dim_decomposition(low).plus_basis;
    auto minus = su2_dim_decomposition(high).minus_basis;
    if (static_cast<long long>(minus.size()) != k + 1)
        throw Error("su2_product_isomorphism_check: dimension bookkeeping failed");

    SU2Theta t14(4, 1, SU2Family::integral, tau), t34(4, 3, SU2Family::integral, tau);
    auto combo_eval = [&](const SU2Combo& c, long long kprime, cplx z) {
        cplx v = 0.0;
        for (auto [m, coeff] : c.parts)
            v += coeff * SU2Theta(kprime, m, SU2Family::integral, tau).eval(z).value;
        return v;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    const int rows = std::max(samples, static_cast<int>(2 * (k + 2)));
    Eigen::MatrixXcd basis(rows, static_cast<Eigen::Index>(minus.size()));
    Eigen::MatrixXcd products(rows, static_cast<Eigen::Index>(plus.size()));
    for (int s = 0; s < rows; ++s) {
        cplx z(u(rng), 0.15 * u(rng));
        cplx t4m = t14.eval(z).value - t34.eval(z).value;
        for (std::size_t j = 0; j < minus.size(); ++j)
            basis(s, static_cast<Eigen::Index>(j)) = combo_eval(minus[j], high, z);
        for (std::size_t j = 0; j < plus.size(); ++j)
            products(s, static_cast<Eigen::Index>(j)) = t4m * combo_eval(plus[j], low, z);
    }

    // the products must be independent and lie in the span of the minus basis
    Eigen::JacobiSVD<Eigen::MatrixXcd> rank_svd(products);
    int rank = 0;
    for (int i = 0; i < rank_svd.singularValues().size(); ++i)
        if (rank_svd.singularValues()(i) > 1e-10 * rank_svd.singularValues()(0)) ++rank;
    if (rank != static_cast<int>(plus.size()))
        throw ConvergenceError("su2_product_isomorphism_check: product family is rank-deficient");

    double worst = 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
    for (std::size_t j = 0; j < plus.size(); ++j) {
        Eigen::VectorXcd rhs = products.col(static_cast<Eigen::Index>(j));
        Eigen::VectorXcd coef = svd.solve(rhs);
        double res = (basis * coef - rhs).norm() / std::max(1e-30, rhs.norm());
        worst = std::max(worst, res);
    }
    return worst;
}

DescentReport su2_fundamental_domain_independence(long long k, cplx tau, double t,
                                                  SU2Family family, bool orbifold, int samples,
                                                  unsigned seed) {
    auto psis = su2_psi_basis(k, family, orbifold);
    const double tau2 = tau.imag();
    auto G = [&](const SU2Psi& psi, cplx z) {
        cplx f = psi.image_times_sigma_at_t(tau, t, z);
        double y = z.imag();
        // nu_{t tau2} on Im of the coroot coordinate; gram entry <a,a> = 2
        double logdens = 0.5 * std::log(2.0 / (t * tau2)) + 0.5 * std::log(2.0) -
                         (4.0 * M_PI / (t * tau2)) * y * y;
        return std::norm(f) * std::exp(-M_PI * t * tau2 + logdens);  // |rho|^2 = 1/2
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    DescentReport rep;
    for (int s = 0; s < samples; ++s) {
        cplx z(u(rng), 0.35 * tau2 * u(rng));
        const auto& psi = psis[static_cast<std::size_t>(s) % psis.size()];
        double base = G(psi, z);
        double scale = std::max(std::abs(base), 1e-30);
        rep.max_weyl = std::max(rep.max_weyl, std::abs(G(psi, -z) - base) / scale);
        rep.max_lattice = std::max(rep.max_lattice, std::abs(G(psi, z + 1.0) - base) / scale);
        rep.max_tau_lattice =
            std::max(rep.max_tau_lattice, std::abs(G(psi, z + tau) - base) / scale);
    }
    return rep;
}

double su2_descent_automorphy_residual(long long k, cplx tau, SU2Family family, int samples,
                                       unsigned seed) {
    auto psis = su2_psi_basis(k, family);
    const long long kprime = psis.front().kprime;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        cplx z(u(rng), 0.2 * u(rng));
        const auto& psi = psis[static_cast<std::size_t>(s) % psis.size()];
        cplx f = psi.image_times_sigma(tau, z);
        cplx fshift = psi.image_times_sigma(tau, z + tau);
        cplx factor = std::exp(-2.0 * M_PI * I * static_cast<double>(kprime) * z -
                               M_PI * I * static_cast<double>(kprime) * tau);
        cplx expect = factor * f;
        worst = std::max(worst, std::abs(fshift - expect) / std::max(1.0, std::abs(expect)));
    }
    return worst;
}

}  // namespace thetaforge
