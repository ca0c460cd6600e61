#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "thetaforge/abelian.hpp"
#include "thetaforge/errors.hpp"

using namespace thetaforge;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {
const cplx I(0.0, 1.0);

PolarizedTorus unit_torus_1d(long long k, long long d = 1) {
    MatrixXcd om(1, 1);
    om(0, 0) = I;
    return PolarizedTorus(1, om, {d}, k);
}

VectorXcd zvec(std::initializer_list<cplx> v) {
    VectorXcd z(static_cast<int>(v.size()));
    int i = 0;
    for (auto x : v) z[i++] = x;
    return z;
}
}  // namespace

// literal Eq-series over |p|_inf <= R, summed with no reduction tricks
static cplx brute_theta(const MatrixXcd& Om, long long k, const std::vector<long long>& delta,
                        const std::vector<long long>& m, const VectorXcd& z, int R) {
    const int l = static_cast<int>(z.size());
    cplx sum = 0.0;
    std::vector<int> p(l, -R);
    while (true) {
        VectorXcd u(l);
        for (int i = 0; i < l; ++i) u[i] = static_cast<double>(m[i] + k * delta[i] * p[i]);
        cplx quad = (u.transpose() * (Om / static_cast<double>(k)) * u)(0, 0);
        cplx lin = u.dot(z);  // u real; dot conjugates the left arg, harmless
        sum += std::exp(M_PI * I * quad + 2.0 * M_PI * I * lin);
        int pos = l - 1;
        while (pos >= 0 && p[pos] == R) {
            p[pos] = -R;
            --pos;
        }
        if (pos < 0) break;
        ++p[pos];
    }
    return sum;
}

static cplx brute_theta_dz2(const MatrixXcd& Om, long long k, const std::vector<long long>& delta,
                            const std::vector<long long>& m, const VectorXcd& z, int i, int j, int R) {
    const int l = static_cast<int>(z.size());
    cplx sum = 0.0;
    std::vector<int> p(l, -R);
    while (true) {
        VectorXcd u(l);
        for (int d = 0; d < l; ++d) u[d] = static_cast<double>(m[d] + k * delta[d] * p[d]);
        cplx quad = (u.transpose() * (Om / static_cast<double>(k)) * u)(0, 0);
        cplx lin = u.dot(z);
        sum += (2.0 * M_PI * I * u[i]) * (2.0 * M_PI * I * u[j]) *
               std::exp(M_PI * I * quad + 2.0 * M_PI * I * lin);
        int pos = l - 1;
        while (pos >= 0 && p[pos] == R) {
            p[pos] = -R;
            --pos;
        }
        if (pos < 0) break;
        ++p[pos];
    }
    return sum;
}

TEST_CASE("theta value at the origin") {
    ThetaEvaluator ev(unit_torus_1d(1), ThetaLabel{{0}});
    auto v = ev.eval(zvec({0.0}));
    CHECK(std::abs(v.value - 1.0864348112133080) < 1e-13);
    cplx brute = brute_theta(ev.torus().omega, 1, {1}, {0}, zvec({0.0}), 20);
    CHECK(std::abs(v.value - brute) < 1e-14);
    CHECK(v.tail_bound < 1e-11);
}

TEST_CASE("certified tail honesty and truncation consistency") {
    MatrixXcd om(2, 2);
    om << cplx(0.2, 1.0), cplx(0.3, 0.1), cplx(0.3, 0.1), cplx(-0.1, 1.2);
    PolarizedTorus T(2, om, {1, 2}, 2);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<long long> m = {static_cast<long long>(rng() % 2),
                                    static_cast<long long>(rng() % 4)};
        VectorXcd z = zvec({cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
        ThetaEvaluator loose(T, ThetaLabel{m}, 1e-6);
        ThetaEvaluator tight(T, ThetaLabel{m}, 1e-12);
        auto a = loose.eval(z), b = tight.eval(z);
        CHECK(std::abs(a.value - b.value) <= 2.0 * a.tail_bound);
        cplx brute = brute_theta(om, 2, {1, 2}, m, z, 24);
        CHECK(std::abs(a.value - brute) <= a.tail_bound + 1e-13);
        CHECK(std::abs(b.value - brute) <= b.tail_bound + 1e-13);
    }
}

TEST_CASE("lattice periodicity") {
    ThetaEvaluator ev(unit_torus_1d(1), ThetaLabel{{0}});
    auto a = ev.eval(zvec({cplx(0.3, 0.2)}));
    auto b = ev.eval(zvec({cplx(1.3, 0.2)}));
    CHECK(std::abs(a.value - b.value) < 1e-12);
}

TEST_CASE("automorphy factor and quasi-periodicity") {
    // b = 0 gives 1
    PolarizedTorus T1 = unit_torus_1d(2);
    CHECK(std::abs(automorphy_factor(T1, {0}, zvec({cplx(0.7, -0.2)})) - 1.0) < 1e-15);

    // l=1, delta=1, k=2, Omega=i, b=beta~_1, z=0.1 -> e^{-0.4 pi i} e^{2 pi}
    cplx want = std::exp(-2.0 * M_PI * I * cplx(0.2)) * std::exp(-M_PI * I * 2.0 * I);
    CHECK(std::abs(automorphy_factor(T1, {1}, zvec({cplx(0.1)})) - want) < 1e-12);

    // theta(z + b) = e(b, z) theta(z) for random z and lattice vectors
    MatrixXcd om(2, 2);
    om << cplx(0.0, 1.1), cplx(0.2, 0.3), cplx(0.2, 0.3), cplx(0.1, 0.9);
    PolarizedTorus T(2, om, {1, 2}, 2);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<long long> m = {static_cast<long long>(rng() % 2),
                                    static_cast<long long>(rng() % 4)};
        ThetaEvaluator ev(T, ThetaLabel{m});
        VectorXcd z = zvec({cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
        std::vector<long long> b = {static_cast<long long>(rng() % 3) - 1,
                                    static_cast<long long>(rng() % 3) - 1};
        VectorXcd zb = z;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                zb[i] += om(i, j) * static_cast<double>(T.delta[j] * b[j]);
        cplx lhs = ev.eval(zb).value;
        cplx rhs = automorphy_factor(T, b, z) * ev.eval(z).value;
        double scale = std::max(1.0, std::abs(rhs));
        CHECK(std::abs(lhs - rhs) / scale < 1e-10);
    }
}

TEST_CASE("change of basis") {
    MatrixXcd om = MatrixXcd::Identity(2, 2) * I;
    PolarizedTorus T(2, om, {1, 1}, 2);

    auto idchange = change_of_basis(T, {{1, 0}, {0, 1}});
    CHECK(idchange.omega_new.isApprox(om, 1e-14));

    auto bc = change_of_basis(T, {{1, 1}, {0, 1}});
    MatrixXcd expect(2, 2);
    expect << 2.0 * I, I, I, I;
    CHECK(bc.omega_new.isApprox(expect, 1e-14));
    Eigen::LLT<Eigen::MatrixXd> llt(bc.omega_new.imag());
    CHECK(llt.info() == Eigen::Success);

    // theta_{m~}(z~, Omega~) = theta_m(z, Omega) on random samples
    PolarizedTorus Tnew(2, bc.omega_new, {1, 1}, 2);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<long long> m = {static_cast<long long>(rng() % 2),
                                    static_cast<long long>(rng() % 2)};
        VectorXcd z = zvec({cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
        cplx lhs = ThetaEvaluator(Tnew, ThetaLabel{bc.relabel(m)}).eval(bc.transform_point(z)).value;
        cplx rhs = ThetaEvaluator(T, ThetaLabel{m}).eval(z).value;
        CHECK(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)) < 1e-10);
    }

    CHECK_THROWS(change_of_basis(T, {{2, 0}, {0, 1}}));
}

TEST_CASE("heat measure") {
    PolarizedTorus T = unit_torus_1d(1);
    VectorXd eta(1), xi(1);
    eta << 0.37;
    xi << 0.0;
    CHECK(heat_measure_eval(T, 1.0, eta, xi) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    // eta-independence
    VectorXd eta2(1);
    eta2 << 0.91;
    xi << 0.4;
    CHECK(heat_measure_eval(T, 1.0, eta, xi) == heat_measure_eval(T, 1.0, eta2, xi));

    // quasi-periodicity (the |e|^{-2} law) for a 2d non-diagonal Omega
    MatrixXcd om(2, 2);
    om << cplx(0.1, 1.0), cplx(-0.2, 0.2), cplx(-0.2, 0.2), cplx(0.0, 0.8);
    PolarizedTorus T2(2, om, {1, 3}, 2);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int j = 0; j < 2; ++j) {
        VectorXd e(2), x(2);
        e << u(rng), u(rng);
        x << u(rng), u(rng);
        VectorXd xs = x;
        xs[j] += 1.0;
        VectorXcd z(2);
        for (int i = 0; i < 2; ++i) {
            z[i] = cplx(e[i], 0.0);
            for (int jj = 0; jj < 2; ++jj) z[i] += om(i, jj) * static_cast<double>(T2.delta[jj]) * x[jj];
        }
        std::vector<long long> b(2, 0);
        b[j] = 1;
        double lhs = heat_measure_eval(T2, 0.5, e, xs);
        double rhs = std::pow(std::abs(automorphy_factor(T2, b, z)), -2.0) *
                     heat_measure_eval(T2, 0.5, e, x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }

    HeatMeasure hm(1, 1.0, Eigen::MatrixXd::Identity(1, 1));
    VectorXd y0(1);
    y0 << 0.0;
    CHECK(hm.point(y0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("bohr-sommerfeld distributions") {
    auto d = bs_distribution_theta0(2, 2, {1, 2}, {1, 3});
    CHECK(d.pair_mode({1, 3}) == 1.0);
    CHECK(d.pair_mode({1 + 2, 3 - 4}) == 1.0);
    CHECK(d.pair_mode({0, 3}) == 0.0);
    CHECK(d.pair_mode({1, 2}) == 0.0);

    // A-matrix of delta-point coefficients is sqrt(label_count) times unitary
    PolarizedTorus T(2, MatrixXcd::Identity(2, 2) * I, {1, 2}, 2);
    auto labels = all_labels(T);
    const auto N = static_cast<long long>(labels.size());
    REQUIRE(N == T.label_count());
    Eigen::MatrixXcd A(N, N);
    for (long long r = 0; r < N; ++r) {
        auto coeff = bs_delta_coefficients(T, labels[static_cast<std::size_t>(r)].m);
        for (long long c = 0; c < N; ++c) A(r, c) = coeff[static_cast<std::size_t>(c)];
    }
    Eigen::MatrixXcd G = A.adjoint() * A;
    CHECK((G - static_cast<double>(N) * Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff() <
          1e-10);
}

TEST_CASE("abelian cst") {
    PolarizedTorus T = unit_torus_1d(1);
    CHECK_THROWS(abelian_cst(0.5, T, {0}));
    auto ev = abelian_cst(1.0, T, {0});
    CHECK(std::abs(ev.eval(zvec({0.0})).value - 1.0864348112133080) < 1e-13);

    // image dimension = delta_1...delta_l k^l
    PolarizedTorus T2(2, MatrixXcd::Identity(2, 2) * I, {1, 2}, 2);
    CHECK(T2.label_count() == 8);
    CHECK(all_labels(T2).size() == 8);

    // heat flow: d theta / dt = pi Delta^{ab(-i Omega)} theta, via a central
    // difference in the time scale against a termwise-differentiated series
    MatrixXcd om(2, 2);
    om << cplx(0.2, 1.0), cplx(0.3, 0.1), cplx(0.3, 0.1), cplx(-0.1, 1.2);
    PolarizedTorus T3(2, om, {1, 1}, 2);
    ThetaEvaluator ev3(T3, ThetaLabel{{1, 0}});
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-0.25, 0.25);
    for (int trial = 0; trial < 6; ++trial) {
        VectorXcd z = zvec({cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
        // time scale s multiplies Omega/k; physical t = s/k, so du/dt = k du/ds
        const double h = 1e-4;
        cplx dplus = ev3.eval_scaled_time(1.0 + h, z).value;
        cplx dminus = ev3.eval_scaled_time(1.0 - h, z).value;
        cplx du_dt = static_cast<double>(T3.k) * (dplus - dminus) / (2.0 * h);
        cplx rhs = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                rhs += om(i, j) * brute_theta_dz2(om, 2, {1, 1}, {1, 0}, z, i, j, 20);
        rhs *= -I / (4.0 * M_PI);  // pi * Delta^{ab(-i Omega)} collapses to this multiple
        CHECK(std::abs(du_dt - rhs) / std::max(1.0, std::abs(rhs)) < 1e-6);
    }
}
