#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "thetaforge/errors.hpp"
#include "thetaforge/nonabelian.hpp"

using namespace thetaforge;

namespace {
const cplx I(0.0, 1.0);

TorusPoint pt(std::initializer_list<cplx> v) {
    Eigen::VectorXcd z(static_cast<int>(v.size()));
    int i = 0;
    for (auto x : v) z[i++] = x;
    return TorusPoint(z);
}

TorusPoint random_point(std::mt19937_64& rng, int l, double yscale = 0.15) {
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    Eigen::VectorXcd z(l);
    for (int j = 0; j < l; ++j) z[j] = cplx(u(rng), yscale * u(rng));
    return TorusPoint(z);
}

// literal coroot-coordinate series over root coordinates |a|_inf <= R
cplx brute_natheta(const RootSystem& rs, const Weight& mu, long long k, cplx tau,
                   const TorusPoint& v, int R) {
    const int l = rs.rank();
    cplx sum = 0.0;
    std::vector<int> a(l, -R);
    while (true) {
        // weight q = mu/k + alpha in exact label coordinates: q = mu + k*C*a, then /k
        std::vector<Rat> q(l);
        for (int i = 0; i < l; ++i) {
            long long lab = mu.labels[i];
            for (int j = 0; j < l; ++j) lab += k * rs.cartan()[i][j] * a[j];
            q[i] = Rat(lab, k);
        }
        Rat n2 = rs.inner_product(q, q);
        cplx pairing = 0.0;
        for (int i = 0; i < l; ++i) pairing += q[i].to_double() * v.coords[i];
        sum += std::exp(M_PI * I * static_cast<double>(k) * tau * n2.to_double() +
                        2.0 * M_PI * I * static_cast<double>(k) * pairing);
        int pos = l - 1;
        while (pos >= 0 && a[pos] == R) {
            a[pos] = -R;
            --pos;
        }
        if (pos < 0) break;
        ++a[pos];
    }
    return sum;
}

cplx brute_natheta_dx2(const RootSystem& rs, const Weight& mu, long long k, cplx tau,
                       const TorusPoint& v, int i0, int j0, int R) {
    const int l = rs.rank();
    cplx sum = 0.0;
    std::vector<int> a(l, -R);
    while (true) {
        std::vector<Rat> q(l);
        for (int i = 0; i < l; ++i) {
            long long lab = mu.labels[i];
            for (int j = 0; j < l; ++j) lab += k * rs.cartan()[i][j] * a[j];
            q[i] = Rat(lab, k);
        }
        Rat n2 = rs.inner_product(q, q);
        cplx pairing = 0.0;
        for (int i = 0; i < l; ++i) pairing += q[i].to_double() * v.coords[i];
        cplx der = (2.0 * M_PI * I * static_cast<double>(k) * q[i0].to_double()) *
                   (2.0 * M_PI * I * static_cast<double>(k) * q[j0].to_double());
        sum += der * std::exp(M_PI * I * static_cast<double>(k) * tau * n2.to_double() +
                              2.0 * M_PI * I * static_cast<double>(k) * pairing);
        int pos = l - 1;
        while (pos >= 0 && a[pos] == R) {
            a[pos] = -R;
            --pos;
        }
        if (pos < 0) break;
        ++a[pos];
    }
    return sum;
}
}  // namespace

TEST_CASE("sigma") {
    RootSystem r3(3);
    CHECK(std::abs(sigma_eval(r3, pt({0.0, 0.0}))) < 1e-14);

    RootSystem r2(2);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        cplx z(0.3 * static_cast<double>(t) / 10.0 + 0.05, 0.1);
        cplx want = 2.0 * I * std::sin(2.0 * M_PI * z);
        CHECK(std::abs(sigma_eval(r2, pt({z})) - want) < 1e-12);
    }

    // anti-invariance under every Weyl element
    for (int n : {2, 3, 4}) {
        RootSystem rs(n);
        for (int t = 0; t < 8; ++t) {
            TorusPoint v = random_point(rng, rs.rank());
            cplx sv = sigma_eval(rs, v);
            for (const auto& w : rs.weyl_group()) {
                cplx sw = sigma_eval(rs, act_point(rs, w, v));
                CHECK(std::abs(sw - static_cast<double>(w.sign) * sv) /
                          std::max(1.0, std::abs(sv)) <
                      1e-12);
            }
        }
    }
}

TEST_CASE("weight/point action compatibility") {
    RootSystem r4(4);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        TorusPoint v = random_point(rng, 3);
        Weight lam({static_cast<long long>(rng() % 5) - 2, static_cast<long long>(rng() % 5) - 2,
                    static_cast<long long>(rng() % 5) - 2});
        const auto& W = r4.weyl_group();
        const auto& w = W[rng() % W.size()];
        cplx a = weight_pairing(r4.act(w, lam), act_point(r4, w, v));
        cplx b = weight_pairing(lam, v);
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("plain natheta against brute series") {
    RootSystem r3(3);
    EllipticModulus tau(cplx(0.3, 0.9));
    std::mt19937_64 rng(7);
    for (int t = 0; t < 6; ++t) {
        Weight g({static_cast<long long>(rng() % 3), static_cast<long long>(rng() % 3)});
        NATheta th(r3, g, 3, tau, ThetaSymmetry::plain);
        TorusPoint v = random_point(rng, 2);
        cplx got = th.eval(v).value;
        cplx want = brute_natheta(r3, r3.alcove_reduce_closed(g, 3), 3, tau.tau, v, 8);
        CHECK(std::abs(got - want) < 1e-10);
    }
}

TEST_CASE("minus frame: singular labels vanish, anti-symmetry") {
    RootSystem r3(3);
    EllipticModulus tau(cplx(0.0, 1.0));
    NATheta sing(r3, Weight({0, 1}), 3, tau, ThetaSymmetry::minus);
    CHECK(sing.identically_zero());
    std::mt19937_64 rng(9);
    CHECK(sing.eval(random_point(rng, 2)).value == cplx(0.0));

    // theta^-_{rho,3}(-v) = -theta^-_{rho,3}(v)
    NATheta th(r3, r3.rho(), 3, tau, ThetaSymmetry::minus);
    for (int t = 0; t < 8; ++t) {
        TorusPoint v = random_point(rng, 2);
        TorusPoint neg(-v.coords);
        cplx a = th.eval(neg).value, b = th.eval(v).value;
        CHECK(std::abs(a + b) / std::max(1.0, std::abs(b)) < 1e-10);
    }

    // pointwise W-(anti-)invariance of the symmetrized frames
    NATheta plus(r3, Weight({1, 0}), 2, tau, ThetaSymmetry::plus);
    NATheta minus(r3, Weight({2, 1}), 5, tau, ThetaSymmetry::minus);
    for (int t = 0; t < 5; ++t) {
        TorusPoint v = random_point(rng, 2);
        cplx pv = plus.eval(v).value, mv = minus.eval(v).value;
        for (const auto& w : r3.weyl_group()) {
            TorusPoint wv = act_point(r3, w, v);
            CHECK(std::abs(plus.eval(wv).value - pv) / std::max(1.0, std::abs(pv)) < 1e-9);
            CHECK(std::abs(minus.eval(wv).value - static_cast<double>(w.sign) * mv) /
                      std::max(1.0, std::abs(mv)) <
                  1e-9);
        }
    }
}

TEST_CASE("quasi-periodicity in both lattice directions") {
    std::mt19937_64 rng(11);
    for (int n : {3, 4}) {
        RootSystem rs(n);
        EllipticModulus tau(cplx(0.2, 0.8));
        long long k = 3;
        Weight g = rs.level_k_weights(k)[2];
        NATheta th(rs, g, k, tau, ThetaSymmetry::plain);
        for (int t = 0; t < 6; ++t) {
            TorusPoint v = random_point(rng, rs.rank());
            int j = static_cast<int>(rng() % rs.rank());

            // v -> v + coroot_j : periodic
            TorusPoint vp = v;
            vp.coords[j] += 1.0;
            cplx a = th.eval(vp).value, b = th.eval(v).value;
            CHECK(std::abs(a - b) / std::max(1.0, std::abs(b)) < 1e-9);

            // v -> v + tau coroot_j : e^{-2 pi i k alpha_j(v) - pi i k tau <a_j,a_j>}
            TorusPoint vt = v;
            vt.coords[j] += tau.tau;
            cplx alpha_v = 0.0;
            for (int i = 0; i < rs.rank(); ++i)
                alpha_v += static_cast<double>(rs.cartan()[i][j]) * v.coords[i];
            cplx factor = std::exp(-2.0 * M_PI * I * static_cast<double>(k) * alpha_v -
                                   M_PI * I * static_cast<double>(k) * tau.tau * 2.0);
            cplx lhs = th.eval(vt).value, rhs = factor * b;
            CHECK(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)) < 1e-9);
        }
    }
}

TEST_CASE("hat frame") {
    RootSystem r3(3);
    EllipticModulus tau(cplx(0.1, 1.1));
    std::mt19937_64 rng(13);

    // k = 0: numerator equals denominator
    NATheta hat0(r3, Weight({0, 0}), 0, tau, ThetaSymmetry::hatplus);
    for (int t = 0; t < 5; ++t) {
        TorusPoint v = random_point(rng, 2);
        CHECK(std::abs(hat0.eval(v).value - 1.0) < 1e-10);
    }

    // W-invariance and the product identity hat * theta^-_{rho,n} = theta^-_{gamma+rho,k+n}
    Weight g({1, 0});
    long long k = 1;
    NATheta hat(r3, g, k, tau, ThetaSymmetry::hatplus);
    NATheta den(r3, r3.rho(), 3, tau, ThetaSymmetry::minus);
    NATheta num(r3, g + r3.rho(), k + 3, tau, ThetaSymmetry::minus);
    for (int t = 0; t < 6; ++t) {
        TorusPoint v = random_point(rng, 2);
        cplx h = hat.eval(v).value;
        for (const auto& w : r3.weyl_group()) {
            cplx hw = hat_frame_eval(r3, g, k, tau, act_point(r3, w, v));
            CHECK(std::abs(hw - h) / std::max(1.0, std::abs(h)) < 1e-9);
        }
        cplx prod = h * den.eval(v).value;
        cplx want = num.eval(v).value;
        CHECK(std::abs(prod - want) / std::max(1.0, std::abs(want)) < 1e-10);
    }

    // independence of the representative of gamma in Lambda_W / (W x k Lambda_R)
    const auto& W = r3.weyl_group();
    Weight shifted = r3.act(W[3], g);
    auto tr = r3.from_root_coordinates({1, 0});
    for (int i = 0; i < 2; ++i) shifted.labels[i] += k * tr.labels[i];
    NATheta hat_shifted(r3, shifted, k, tau, ThetaSymmetry::hatplus);
    for (int t = 0; t < 5; ++t) {
        TorusPoint v = random_point(rng, 2);
        cplx a = hat.eval(v).value, b = hat_shifted.eval(v).value;
        CHECK(std::abs(a - b) / std::max(1.0, std::abs(a)) < 1e-12);
    }

    // singular locus rejected
    CHECK_THROWS_AS(hat.eval(pt({0.0, 0.0})), SingularLocusError);
}

TEST_CASE("looijenga dimension checks") {
    EllipticModulus tau(cplx(0.0, 1.0));
    RootSystem r3(3);

    auto rep = looijenga_dim_check(r3, 3, tau);
    CHECK(rep.dim_minus == 1);
    CHECK(rep.orbit_count_minus == 1);
    CHECK(rep.dim_plus == rep.orbit_count_plus);

    auto low = looijenga_dim_check(r3, 2, tau);
    CHECK(low.dim_minus == 0);

    for (long long k : {1, 2}) {
        auto r = looijenga_dim_check(r3, k + 3, tau);
        CHECK(r.dim_minus == oracle::binomial(3 + k - 1, k));
        CHECK(r.dim_plus == r.orbit_count_plus);
        CHECK(r.orbit_count_plus == oracle::binomial(3 + (k + 3) - 1, k + 3));
    }
}

TEST_CASE("picard invariants") {
    CHECK(picard_invariant_check(RootSystem(3)).group_order == 1);
    CHECK(picard_invariant_check(RootSystem(4)).group_order == 1);
    CHECK(picard_invariant_check(RootSystem(5)).group_order == 1);
    auto p2 = picard_invariant_check(RootSystem(2));
    CHECK(p2.group_order == 4);
    CHECK(p2.invariant_factors == std::vector<long long>{2, 2});
}

TEST_CASE("heat flow in tau") {
    RootSystem r3(3);
    std::mt19937_64 rng(17);
    const cplx tau0(0.2, 1.0);
    const long long k = 2;
    Weight g({1, 1});
    const double h = 1e-4;
    NATheta thp(r3, g, k, EllipticModulus(tau0 + h), ThetaSymmetry::plain);
    NATheta thm(r3, g, k, EllipticModulus(tau0 - h), ThetaSymmetry::plain);
    for (int t = 0; t < 6; ++t) {
        TorusPoint v = random_point(rng, 2);
        cplx dtau = (thp.eval(v).value - thm.eval(v).value) / (2.0 * h);
        cplx rhs = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                rhs += r3.cartan_inv()[i][j].to_double() *
                       brute_natheta_dx2(r3, g, k, tau0, v, i, j, 8);
        rhs *= -I / (4.0 * M_PI * static_cast<double>(k));
        CHECK(std::abs(dtau - rhs) / std::max(1.0, std::abs(rhs)) < 1e-5);
    }
}
