#include "thetaforge/gram.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "thetaforge/cst.hpp"
#include "thetaforge/parallel.hpp"

namespace thetaforge {

namespace {
const cplx I(0.0, 1.0);

using clock_type = std::chrono::steady_clock;

double elapsed(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void finalize(GramReport& rep) {
    const auto d = rep.matrix.rows();
    rep.max_offdiag = 0.0;
    rep.max_diag_deviation = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            if (i == j)
                rep.max_diag_deviation =
                    std::max(rep.max_diag_deviation, std::abs(rep.matrix(i, i) - 1.0));
            else
                rep.max_offdiag = std::max(rep.max_offdiag, std::abs(rep.matrix(i, j)));
        }
}

std::vector<int> unflatten(std::size_t idx, int l, int N) {
    std::vector<int> out(l);
    for (int d = l - 1; d >= 0; --d) {
        out[d] = static_cast<int>(idx % N);
        idx /= N;
    }
    return out;
}
}  // namespace

QuadratureGrid QuadratureGrid::standard(int l, int N) {
    if (N < 4) throw Error("QuadratureGrid: N >= 4 required");
    QuadratureGrid g;
    g.l = l;
    g.points_per_dim = N;
    g.offset = Eigen::VectorXd::Constant(l, 0.5);
    return g;
}

int QuadratureGrid::default_points(int l) {
    if (l <= 1) return 64;
    if (l == 2) return 24;
    return 12;
}

double CellMeasure::constant() const { return std::exp(log_constant()); }

double CellMeasure::log_constant() const {
    const int l = static_cast<int>(omega2.rows());
    return 0.5 * l * std::log(2.0 / t) + 0.5 * std::log(omega2.determinant()) +
           std::log(std::abs(D.determinant()));
}

double CellMeasure::weight(const Eigen::VectorXd& xi) const {
    Eigen::VectorXd dxi = D * xi;
    return std::exp(log_constant() - (2.0 * M_PI / t) * dxi.dot(omega2 * dxi));
}

GramReport gram_kernel(const FrameSet& frames, const CellMeasure& measure,
                       const QuadratureGrid& grid, double weyl_factor, double term_tol,
                       bool parallel) {
    auto t0 = clock_type::now();
    const int l = grid.l;
    const int N = grid.points_per_dim;
    const int d = static_cast<int>(frames.frames.size());
    if (d == 0) throw Error("gram_kernel: no frames");

    const Eigen::MatrixXd imS = frames.S.imag();
    Eigen::LLT<Eigen::MatrixXd> imS_llt(imS);
    if (imS_llt.info() != Eigen::Success) throw Error("gram_kernel: Im S not positive definite");
    const Eigen::MatrixXd Minv = frames.M.inverse();
    const Eigen::MatrixXd Qa = frames.M.transpose() * imS * frames.M;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Qa);
    const double lam_min_a = es.eigenvalues().minCoeff();

    std::size_t n_xi = 1;
    for (int i = 0; i < l; ++i) n_xi *= static_cast<std::size_t>(N);
    const std::size_t bins = n_xi;  // N^l eta-frequency classes

    const std::size_t nblocks = std::min<std::size_t>(64, n_xi);
    std::vector<Eigen::MatrixXcd> partial(nblocks, Eigen::MatrixXcd::Zero(d, d));

    auto body = [&](std::size_t block, std::size_t lo, std::size_t hi) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
        std::vector<std::vector<cplx>> bin(d, std::vector<cplx>(bins));
        for (std::size_t xi_flat = lo; xi_flat < hi; ++xi_flat) {
            auto jidx = unflatten(xi_flat, l, N);
            Eigen::VectorXd xi(l);
            for (int i = 0; i < l; ++i) xi[i] = (jidx[i] + grid.offset[i]) / N;

            Eigen::VectorXcd g = frames.G * xi.cast<cplx>();
            Eigen::VectorXd img = g.imag();
            Eigen::VectorXd mu = imS_llt.solve(img);
            const double log_env = M_PI * mu.dot(imS * mu);

            Eigen::VectorXd dxi = measure.D * xi;
            const double wexp = measure.log_constant() -
                                (2.0 * M_PI / measure.t) * dxi.dot(measure.omega2 * dxi) +
                                2.0 * log_env;
            const double w_red = std::exp(wexp);

            for (auto& b : bin) std::fill(b.begin(), b.end(), cplx(0.0));

            for (int f = 0; f < d; ++f) {
                for (const auto& piece : frames.frames[static_cast<std::size_t>(f)]) {
                    Eigen::VectorXd astar = Minv * (-mu - piece.m0);
                    Eigen::VectorXi a0(l);
                    for (int i = 0; i < l; ++i) a0[i] = static_cast<int>(std::lround(astar[i]));
                    const double s = (a0.cast<double>() - astar).norm();
                    const int R = certified_radius(lam_min_a, l, s, term_tol, 64);

                    Eigen::VectorXi idx = Eigen::VectorXi::Constant(l, -R);
                    while (true) {
                        Eigen::VectorXd a(l);
                        for (int i = 0; i < l; ++i) a[i] = a0[i] + idx[i];
                        Eigen::VectorXd ud = piece.m0 + frames.M * a;  // exactly integral
                        cplx quad = 0.0;
                        for (int i = 0; i < l; ++i) {
                            cplx row = 0.0;
                            for (int j = 0; j < l; ++j) row += frames.S(i, j) * ud[j];
                            quad += ud[i] * row;
                        }
                        cplx lin = 0.0;
                        for (int i = 0; i < l; ++i) lin += ud[i] * g[i];
                        double hph = piece.h.size() ? piece.h.dot(a) : 0.0;
                        cplx amp = piece.sign * std::exp(M_PI * I * quad + 2.0 * M_PI * I * lin +
                                                         2.0 * M_PI * I * hph - log_env);
                        // reduce u mod N per axis; the quotient couples to the offset
                        std::size_t bflat = 0;
                        double mo = 0.0;
                        for (int i = 0; i < l; ++i) {
                            long long ui = static_cast<long long>(std::llround(ud[i]));
                            long long b = ((ui % N) + N) % N;
                            mo += static_cast<double>((ui - b) / N) * grid.offset[i];
                            bflat = bflat * static_cast<std::size_t>(N) + static_cast<std::size_t>(b);
                        }
                        amp *= std::exp(2.0 * M_PI * I * mo);
                        bin[static_cast<std::size_t>(f)][bflat] += amp;

                        int pos = l - 1;
                        while (pos >= 0 && idx[pos] == R) {
                            idx[pos] = -R;
                            --pos;
                        }
                        if (pos < 0) break;
                        ++idx[pos];
                    }
                }
            }
            for (int f = 0; f < d; ++f)
                for (int fp = f; fp < d; ++fp) {
                    cplx dot = 0.0;
                    const auto& bf = bin[static_cast<std::size_t>(f)];
                    const auto& bg = bin[static_cast<std::size_t>(fp)];
                    for (std::size_t b = 0; b < bins; ++b) dot += std::conj(bf[b]) * bg[b];
                    acc(f, fp) += w_red * dot;
                }
        }
        partial[block] = acc;
    };

    if (parallel) {
        par::for_blocks(n_xi, nblocks, body);
    } else {
        const std::size_t base = n_xi / nblocks, rem = n_xi % nblocks;
        std::size_t lo = 0;
        for (std::size_t b = 0; b < nblocks; ++b) {
            std::size_t hi = lo + base + (b < rem ? 1 : 0);
            body(b, lo, hi);
            lo = hi;
        }
    }

    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& p : partial) H += p;  // fixed combine order
    H *= weyl_factor / static_cast<double>(n_xi);
    for (int f = 0; f < d; ++f)
        for (int fp = 0; fp < f; ++fp) H(f, fp) = std::conj(H(fp, f));

    GramReport rep;
    rep.matrix = H;
    rep.n_used = N;
    rep.measure_constant = measure.constant();
    finalize(rep);
    rep.seconds = elapsed(t0);
    return rep;
}

GramReport gram_reference(const std::vector<PointFrame>& frames, const CellMeasure& measure,
                          const QuadratureGrid& grid, double weyl_factor) {
    auto t0 = clock_type::now();
    const int l = grid.l;
    const int N = grid.points_per_dim;
    const int d = static_cast<int>(frames.size());
    std::size_t n_side = 1;
    for (int i = 0; i < l; ++i) n_side *= static_cast<std::size_t>(N);

    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
    Eigen::VectorXcd vals(d);
    for (std::size_t xf = 0; xf < n_side; ++xf) {
        auto jidx = unflatten(xf, l, N);
        Eigen::VectorXd xi(l);
        for (int i = 0; i < l; ++i) xi[i] = (jidx[i] + grid.offset[i]) / N;
        const double w = measure.weight(xi);
        for (std::size_t ef = 0; ef < n_side; ++ef) {
            auto eidx = unflatten(ef, l, N);
            Eigen::VectorXd eta(l);
            for (int i = 0; i < l; ++i) eta[i] = (eidx[i] + grid.offset[i]) / N;
            for (int f = 0; f < d; ++f) vals[f] = frames[static_cast<std::size_t>(f)](eta, xi);
            for (int f = 0; f < d; ++f)
                for (int fp = f; fp < d; ++fp) H(f, fp) += w * std::conj(vals[f]) * vals[fp];
        }
    }
    double denom = static_cast<double>(n_side) * static_cast<double>(n_side);
    H *= weyl_factor / denom;
    for (int f = 0; f < d; ++f)
        for (int fp = 0; fp < f; ++fp) H(f, fp) = std::conj(H(fp, f));

    GramReport rep;
    rep.matrix = H;
    rep.n_used = N;
    rep.measure_constant = measure.constant();
    finalize(rep);
    rep.seconds = elapsed(t0);
    return rep;
}

namespace {
FrameSet abelian_frames(const PolarizedTorus& torus, const std::vector<ThetaLabel>& labels) {
    FrameSet fs;
    const int l = torus.l;
    Eigen::MatrixXd D = torus.delta_mat();
    fs.S = torus.omega / static_cast<double>(torus.k);
    fs.G = torus.omega * D;
    fs.M = static_cast<double>(torus.k) * D;
    for (const auto& lbl : labels) {
        FrameSet::Piece p;
        p.sign = 1.0;
        p.m0.resize(l);
        for (int i = 0; i < l; ++i) p.m0[i] = static_cast<double>(lbl.m[i]);
        fs.frames.push_back({p});
    }
    return fs;
}

CellMeasure abelian_measure(const PolarizedTorus& torus) {
    return CellMeasure{1.0 / static_cast<double>(torus.k), torus.omega2(), torus.delta_mat()};
}

Eigen::MatrixXd cartan_d(const RootSystem& rs) {
    const int l = rs.rank();
    Eigen::MatrixXd C(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) C(i, j) = static_cast<double>(rs.cartan()[i][j]);
    return C;
}

Eigen::MatrixXd cartan_inv_d(const RootSystem& rs) {
    const int l = rs.rank();
    Eigen::MatrixXd Ci(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) Ci(i, j) = rs.cartan_inv()[i][j].to_double();
    return Ci;
}

FrameSet nonabelian_frames(const RootSystem& rs, long long k, EllipticModulus tau) {
    const long long ls = k + rs.n();
    const int l = rs.rank();
    FrameSet fs;
    fs.S = (tau.tau / static_cast<double>(ls)) * cartan_inv_d(rs).cast<cplx>();
    fs.G = tau.tau * Eigen::MatrixXcd::Identity(l, l);
    fs.M = static_cast<double>(ls) * cartan_d(rs);
    for (const auto& gamma : rs.level_k_weights(k)) {
        std::vector<FrameSet::Piece> pieces;
        Weight shifted = gamma + rs.rho();
        for (const auto& w : rs.weyl_group()) {
            Weight mu = rs.act(w, shifted);
            FrameSet::Piece p;
            p.sign = static_cast<double>(w.sign);
            p.m0.resize(l);
            for (int i = 0; i < l; ++i) p.m0[i] = static_cast<double>(mu.labels[i]);
            pieces.push_back(p);
        }
        fs.frames.push_back(std::move(pieces));
    }
    return fs;
}

CellMeasure nonabelian_measure(const RootSystem& rs, EllipticModulus tau, double t) {
    return CellMeasure{t, tau.tau2() * cartan_inv_d(rs), cartan_d(rs)};
}
}  // namespace

GramReport abelian_gram(const PolarizedTorus& torus, const std::vector<ThetaLabel>& labels, int N,
                        double tol, bool parallel) {
    return gram_kernel(abelian_frames(torus, labels), abelian_measure(torus),
                       QuadratureGrid::standard(torus.l, N), 1.0, tol, parallel);
}

GramReport abelian_gram_reference(const PolarizedTorus& torus, const std::vector<ThetaLabel>& labels,
                                  int N, double tol) {
    std::vector<PointFrame> frames;
    for (const auto& lbl : labels) {
        auto ev = std::make_shared<ThetaEvaluator>(torus, lbl, tol);
        frames.push_back([ev, &torus](const Eigen::VectorXd& eta, const Eigen::VectorXd& xi) {
            Eigen::VectorXcd z = eta.cast<cplx>() + torus.omega * torus.delta_mat() * xi.cast<cplx>();
            return ev->eval(z).value;
        });
    }
    return gram_reference(frames, abelian_measure(torus), QuadratureGrid::standard(torus.l, N), 1.0);
}

GramReport nonabelian_gram(const RootSystem& rs, long long k, EllipticModulus tau, int N,
                           double tol, bool parallel, double t_override) {
    const double t = t_override > 0.0 ? t_override : 1.0 / static_cast<double>(k + rs.n());
    return gram_kernel(nonabelian_frames(rs, k, tau), nonabelian_measure(rs, tau, t),
                       QuadratureGrid::standard(rs.rank(), N),
                       1.0 / static_cast<double>(rs.weyl_order()), tol, parallel);
}

GramReport nonabelian_gram_reference(const RootSystem& rs, long long k, EllipticModulus tau, int N,
                                     double tol) {
    std::vector<PointFrame> frames;
    for (const auto& gamma : rs.level_k_weights(k)) {
        auto th = std::make_shared<NATheta>(rs, gamma + rs.rho(), k + rs.n(), tau,
                                            ThetaSymmetry::minus, tol);
        frames.push_back([th, tau](const Eigen::VectorXd& eta, const Eigen::VectorXd& xi) {
            Eigen::VectorXcd z = eta.cast<cplx>() + tau.tau * xi.cast<cplx>();
            return th->eval(TorusPoint(z)).value;
        });
    }
    const double t = 1.0 / static_cast<double>(k + rs.n());
    return gram_reference(frames, nonabelian_measure(rs, tau, t),
                          QuadratureGrid::standard(rs.rank(), N),
                          1.0 / static_cast<double>(rs.weyl_order()));
}

GramReport gram_converged(const std::function<GramReport(int)>& at_N, int N0, double entry_tol,
                          int max_refinements) {
    GramReport prev = at_N(N0);
    int N = N0;
    for (int step = 0; step < max_refinements; ++step) {
        N *= 2;
        GramReport next = at_N(N);
        double delta = (next.matrix - prev.matrix).cwiseAbs().maxCoeff();
        next.refinement_trace = prev.refinement_trace;
        next.refinement_trace.push_back(delta);
        if (delta <= entry_tol) return next;
        prev = std::move(next);
    }
    std::string trace;
    for (double dlt : prev.refinement_trace) trace += " " + std::to_string(dlt);
    throw ConvergenceError("gram_converged: entries still moving after refinements:" + trace);
}

double hall_inner_product_check(const RootSystem& rs, long long k, EllipticModulus tau, int N,
                                Eigen::MatrixXcd* kernel_out, Eigen::MatrixXcd* series_out) {
    const long long ls = k + rs.n();
    const double t = 1.0 / static_cast<double>(ls);
    const double rho2 = rs.norm2(rs.rho()).to_double();

    // prefactor cancellation |e^{-i pi tau t |rho|^2}|^2 e^{-2 t pi tau2 |rho|^2} = 1
    double cancel = std::norm(std::exp(-I * M_PI * tau.tau * t * rho2)) *
                    std::exp(-2.0 * M_PI * tau.tau2() * t * rho2);
    if (std::abs(cancel - 1.0) > 1e-14)
        throw Error("hall_inner_product_check: prefactor cancellation failed");

    GramReport kernel = nonabelian_gram(rs, k, tau, N);

    // independent route: truncated character series for C_t(psi), times sigma,
    // integrated against the pushforward density e^{-2 t pi tau2 |rho|^2} nu
    std::vector<PointFrame> frames;
    for (const auto& gamma : rs.level_k_weights(k)) {
        PsiDistribution psi(rs, gamma, k);
        Rat cutoff = psi_cutoff_for_tol(psi, tau.tau, t, tau.tau2(), 1e-10);
        auto img = std::make_shared<CSTImage>(cst_apply(rs, psi_truncate(psi, cutoff), tau.tau, t));
        auto rsp = std::make_shared<RootSystem>(rs);
        frames.push_back([img, rsp, tau](const Eigen::VectorXd& eta, const Eigen::VectorXd& xi) {
            Eigen::VectorXcd z = eta.cast<cplx>() + tau.tau * xi.cast<cplx>();
            TorusPoint v(z);
            return img->eval(v) * sigma_eval(*rsp, v);
        });
    }
    CellMeasure measure = nonabelian_measure(rs, tau, t);
    GramReport series = gram_reference(frames, measure, QuadratureGrid::standard(rs.rank(), N),
                                       std::exp(-2.0 * t * M_PI * tau.tau2() * rho2) /
                                           static_cast<double>(rs.weyl_order()));

    if (kernel_out) *kernel_out = kernel.matrix;
    if (series_out) *series_out = series.matrix;
    return (kernel.matrix - series.matrix).cwiseAbs().maxCoeff();
}

DescentReport fundamental_domain_independence(const RootSystem& rs, long long k,
                                              EllipticModulus tau, double t, int samples,
                                              unsigned seed) {
    if (!(t > 0)) throw Error("fundamental_domain_independence: t must be positive");
    const double rho2 = rs.norm2(rs.rho()).to_double();
    const int l = rs.rank();
    const Eigen::MatrixXd C = cartan_d(rs);
    const double logdetC = std::log(C.determinant());

    // G(v) = |C_t(psi)(v) sigma(v)|^2 e^{-2 t pi tau2 |rho|^2} nu_{t tau2}(v)
    std::vector<CSTImage> images;
    for (const auto& gamma : rs.level_k_weights(k)) {
        PsiDistribution psi(rs, gamma, k);
        Rat cutoff = psi_cutoff_for_tol(psi, tau.tau, t, 2.5 * tau.tau2(), 1e-12);
        images.push_back(cst_apply(rs, psi_truncate(psi, cutoff), tau.tau, t));
    }
    auto G = [&](const CSTImage& img, const TorusPoint& v) {
        cplx f = img.eval(v) * sigma_eval(rs, v);
        Eigen::VectorXd y = v.coords.imag();
        double logdens = 0.5 * l * std::log(2.0 / (t * tau.tau2())) + 0.5 * logdetC -
                         (2.0 * M_PI / (t * tau.tau2())) * y.dot(C * y);
        return std::norm(f) * std::exp(-2.0 * t * M_PI * tau.tau2() * rho2 + logdens);
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    DescentReport rep;
    const auto& W = rs.weyl_group();
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd z(l);
        for (int j = 0; j < l; ++j) z[j] = cplx(u(rng), 0.35 * u(rng) * tau.tau2());
        TorusPoint v(z);
        const auto& img = images[static_cast<std::size_t>(s) % images.size()];
        double base = G(img, v);
        double scale = std::max(std::abs(base), 1e-30);

        const auto& w = W[rng() % W.size()];
        rep.max_weyl = std::max(rep.max_weyl, std::abs(G(img, act_point(rs, w, v)) - base) / scale);

        TorusPoint vl = v;
        vl.coords[static_cast<int>(rng() % l)] += 1.0;
        rep.max_lattice = std::max(rep.max_lattice, std::abs(G(img, vl) - base) / scale);

        TorusPoint vt = v;
        vt.coords[static_cast<int>(rng() % l)] += tau.tau;
        rep.max_tau_lattice = std::max(rep.max_tau_lattice, std::abs(G(img, vt) - base) / scale);
    }
    return rep;
}

}  // namespace thetaforge
