#include "thetaforge/nonabelian.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace thetaforge {

cplx weight_pairing(const Weight& lam, const TorusPoint& v) {
    if (static_cast<int>(lam.rank()) != v.dim()) throw DimensionError("weight_pairing: size");
    cplx s = 0.0;
    for (int j = 0; j < v.dim(); ++j) s += static_cast<double>(lam.labels[j]) * v.coords[j];
    return s;
}

TorusPoint act_point(const RootSystem& rs, const WeylElement& w, const TorusPoint& v) {
    if (v.dim() != rs.rank()) throw DimensionError("act_point: size");
    const int n = rs.n();
    // diagonal entries t_i = z_i - z_{i-1}, permuted, then partial sums back
    std::vector<cplx> t(n);
    for (int i = 0; i < n; ++i) {
        cplx zi = (i < n - 1) ? v.coords[i] : cplx(0.0);
        cplx zim1 = (i > 0) ? v.coords[i - 1] : cplx(0.0);
        t[i] = zi - zim1;
    }
    std::vector<cplx> wt(n);
    for (int i = 0; i < n; ++i) {
        int pre = 0;
        for (int j = 0; j < n; ++j)
            if (w.perm[j] == i) {
                pre = j;
                break;
            }
        wt[i] = t[pre];
    }
    TorusPoint out;
    out.coords.resize(n - 1);
    cplx acc = 0.0;
    for (int j = 0; j < n - 1; ++j) {
        acc += wt[j];
        out.coords[j] = acc;
    }
    return out;
}

cplx sigma_eval(const RootSystem& rs, const TorusPoint& v) {
    if (v.dim() != rs.rank()) throw DimensionError("sigma_eval: point size");
    const cplx I(0.0, 1.0);
    cplx s = 0.0;
    for (const auto& w : rs.weyl_group()) {
        Weight wr = rs.act(w, rs.rho());
        s += static_cast<double>(w.sign) * std::exp(2.0 * M_PI * I * weight_pairing(wr, v));
    }
    return s;
}

namespace {

Eigen::MatrixXd cartan_matrix_d(const RootSystem& rs) {
    const int l = rs.rank();
    Eigen::MatrixXd C(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) C(i, j) = static_cast<double>(rs.cartan()[i][j]);
    return C;
}

// one plain series theta_{mu, level} in coroot coordinates:
//   sum_{a in Z^l} exp(i pi level tau (a+c)' C (a+c) + 2 pi i level (a+c)' C x)
LatticeSeries plain_series(const RootSystem& rs, const Weight& mu, long long level, cplx tau) {
    const int l = rs.rank();
    LatticeSeries s;
    s.A = static_cast<double>(level) * tau * cartan_matrix_d(rs);
    s.c.resize(l);
    // c = C^{-1} mu / level (root coordinates of mu/level)
    for (int i = 0; i < l; ++i) {
        Rat ci = 0;
        for (int j = 0; j < l; ++j) ci += rs.cartan_inv()[i][j] * Rat(mu.labels[j]);
        s.c[i] = ci.to_double() / static_cast<double>(level);
    }
    s.h = Eigen::VectorXd::Zero(l);
    return s;
}

// True iff the affine stabilizer of gamma at this level is nontrivial.
bool affine_singular(const RootSystem& rs, const Weight& gamma, long long level) {
    Weight red = rs.alcove_reduce_closed(gamma, level);
    if (red.label_sum() == level) return true;
    for (auto x : red.labels)
        if (x == 0) return true;
    return false;
}

}  // namespace

NATheta::NATheta(const RootSystem& rs, Weight gamma, long long k, EllipticModulus tau,
                 ThetaSymmetry symmetry, double tol, int radius_cap)
    : rs_(std::make_shared<RootSystem>(rs)),
      gamma_(std::move(gamma)),
      k_(k),
      tau_(tau),
      symmetry_(symmetry),
      tol_(tol),
      radius_cap_(radius_cap) {
    if (static_cast<int>(gamma_.rank()) != rs_->rank()) throw DimensionError("NATheta: gamma rank");
    Eigen::MatrixXd C = cartan_matrix_d(*rs_);

    if (symmetry_ == ThetaSymmetry::hatplus) {
        if (k_ < 0) throw Error("NATheta: hatplus requires level >= 0");
        // labels live in Lambda_W / (W x k Lambda_R); canonicalize into D_k
        if (k_ >= 1) {
            gamma_ = rs_->alcove_reduce_closed(gamma_, k_);
        } else {
            Weight red = gamma_;
            bool changed = true;
            while (changed) {  // plain dominance reduction, k = 0 has no translations
                changed = false;
                for (int i = 0; i < rs_->rank(); ++i)
                    if (red.labels[i] < 0) {
                        long long c = red.labels[i];
                        for (int j = 0; j < rs_->rank(); ++j)
                            red.labels[j] -= c * rs_->cartan()[j][i];
                        changed = true;
                    }
            }
            if (!red.is_zero()) throw Error("NATheta: hatplus at k = 0 requires gamma ~ 0");
            gamma_ = red;
        }
        numerator_ = std::make_unique<NATheta>(*rs_, gamma_ + rs_->rho(), k_ + rs_->n(), tau_,
                                               ThetaSymmetry::minus, tol_, radius_cap_);
        denominator_ = std::make_unique<NATheta>(*rs_, rs_->rho(), rs_->n(), tau_,
                                                 ThetaSymmetry::minus, tol_, radius_cap_);
        return;
    }

    if (k_ < 1) throw Error("NATheta: level must be >= 1");
    const double lev = static_cast<double>(k_);
    auto add_term = [&](double sign, const Weight& mu) {
        terms_.push_back(Term{
            sign, LatticeEvaluator(plain_series(*rs_, mu, k_, tau_.tau), tol_, radius_cap_),
            lev * C});
    };

    switch (symmetry_) {
        case ThetaSymmetry::plain:
            add_term(1.0, rs_->alcove_reduce_closed(gamma_, k_));
            break;
        case ThetaSymmetry::plus: {
            Weight g = rs_->alcove_reduce_closed(gamma_, k_);
            for (const auto& w : rs_->weyl_group()) add_term(1.0, rs_->act(w, g));
            break;
        }
        case ThetaSymmetry::minus: {
            if (affine_singular(*rs_, gamma_, k_)) break;  // identically zero
            for (const auto& w : rs_->weyl_group())
                add_term(static_cast<double>(w.sign), rs_->act(w, gamma_));
            break;
        }
        default:
            throw Error("NATheta: unknown symmetry");
    }
}

SeriesValue NATheta::eval(const TorusPoint& v) const {
    if (v.dim() != rs_->rank()) throw DimensionError("NATheta: point size");
    if (symmetry_ == ThetaSymmetry::hatplus) {
        SeriesValue num = numerator_->eval(v);
        SeriesValue den = denominator_->eval(v);
        double floor = 1e-12 * std::max(1.0, den.envelope);
        if (std::abs(den.value) < floor)
            throw SingularLocusError("hat_frame: evaluation point on the singular locus");
        SeriesValue out;
        out.value = num.value / den.value;
        out.envelope = num.envelope / std::abs(den.value);
        out.tail_bound =
            (num.tail_bound + std::abs(num.value / den.value) * den.tail_bound) / std::abs(den.value);
        out.radius = std::max(num.radius, den.radius);
        return out;
    }
    SeriesValue out;
    out.value = 0.0;
    out.tail_bound = 0.0;
    out.envelope = 0.0;
    out.radius = 0;
    for (const auto& t : terms_) {
        Eigen::VectorXcd w = t.freq * v.coords;
        SeriesValue sv = t.ev.eval(w);
        out.value += t.sign * sv.value;
        out.tail_bound += sv.tail_bound;
        out.envelope = std::max(out.envelope, sv.envelope);
        out.radius = std::max(out.radius, sv.radius);
    }
    return out;
}

cplx NATheta::cartan_laplacian(const TorusPoint& v) const {
    if (symmetry_ == ThetaSymmetry::hatplus)
        throw Error("NATheta: cartan_laplacian undefined for the hat frame");
    if (v.dim() != rs_->rank()) throw DimensionError("NATheta: point size");
    // frequencies in x are k C (a + c); contracting with C^{-1} leaves the
    // weight k^2 (a+c)' C (a+c) on each term
    Eigen::MatrixXcd B = cartan_matrix_d(*rs_).cast<cplx>();
    const double k2 = static_cast<double>(k_) * static_cast<double>(k_);
    cplx sum = 0.0;
    for (const auto& t : terms_) {
        Eigen::VectorXcd w = t.freq * v.coords;
        sum += t.sign * t.ev.eval_weighted(w, B).value;
    }
    return -4.0 * M_PI * M_PI * k2 * sum;
}

cplx hat_frame_eval(const RootSystem& rs, const Weight& gamma, long long k, EllipticModulus tau,
                    const TorusPoint& v, double tol) {
    NATheta hat(rs, gamma, k, tau, ThetaSymmetry::hatplus, tol);
    return hat.eval(v).value;
}

LooijengaReport looijenga_dim_check(const RootSystem& rs, long long kprime, EllipticModulus tau,
                                    unsigned seed) {
    if (kprime < 1) throw Error("looijenga_dim_check: k' >= 1 required");
    LooijengaReport rep;
    auto reps = rs.level_k_weights(kprime);  // orbit representatives, D_{k'}
    rep.orbit_count_plus = static_cast<long long>(reps.size());
    rep.orbit_count_minus =
        kprime >= rs.n() ? static_cast<long long>(rs.level_k_weights(kprime - rs.n()).size()) : 0;

    std::vector<NATheta> plus, minus;
    for (const auto& g : reps) {
        plus.emplace_back(rs, g, kprime, tau, ThetaSymmetry::plus);
        minus.emplace_back(rs, g, kprime, tau, ThetaSymmetry::minus);
    }

    auto rank_of = [&](const std::vector<NATheta>& fam, int samples, unsigned sd) {
        const int d = static_cast<int>(fam.size());
        std::mt19937_64 rng(sd);
        std::uniform_real_distribution<double> u(-0.45, 0.45);
        Eigen::MatrixXcd M(samples, d);
        for (int s = 0; s < samples; ++s) {
            Eigen::VectorXcd z(rs.rank());
            for (int j = 0; j < rs.rank(); ++j) z[j] = cplx(u(rng), 0.12 * u(rng));
            TorusPoint v(z);
            for (int c = 0; c < d; ++c) M(s, c) = fam[c].eval(v).value;
        }
        for (int c = 0; c < d; ++c) {
            double m = M.col(c).cwiseAbs().maxCoeff();
            if (m > 0) M.col(c) /= m;
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
        int r = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-8 * smax) ++r;
        return r;
    };

    int samples = static_cast<int>(reps.size()) + 8;
    for (int attempt = 0; attempt < 3; ++attempt) {
        int rp1 = rank_of(plus, samples, seed + attempt);
        int rp2 = rank_of(plus, samples + 8, seed + 17 + attempt);
        int rm1 = rank_of(minus, samples, seed + 31 + attempt);
        int rm2 = rank_of(minus, samples + 8, seed + 47 + attempt);
        if (rp1 == rp2 && rm1 == rm2) {
            rep.dim_plus = rp1;
            rep.dim_minus = rm1;
            rep.samples_used = samples;
            return rep;
        }
        samples *= 2;
    }
    throw ConvergenceError("looijenga_dim_check: sampled rank did not stabilize");
}

PicardReport picard_invariant_check(const RootSystem& rs) {
    PicardReport rep;
    rep.n = rs.n();
    // x1 = sum c_j lambda_j is W-invariant in Pic^0 iff c_j alpha_j is integral
    // for every j; the j-th condition is the Smith form (gcd) of the j-th
    // Cartan column, so c_j ranges over (1/g_j) Z.
    for (int j = 0; j < rs.rank(); ++j) {
        long long g = 0;
        for (int i = 0; i < rs.rank(); ++i) g = std::gcd(g, std::abs(rs.cartan()[i][j]));
        rep.column_gcds.push_back(g);
    }
    rep.group_order = 1;
    for (auto g : rep.column_gcds) {
        // the x1 and the tau x2 components each contribute one factor Z_g
        for (int component = 0; component < 2; ++component) {
            if (g > 1) rep.invariant_factors.push_back(g);
            rep.group_order *= g;
        }
    }
    std::sort(rep.invariant_factors.begin(), rep.invariant_factors.end());
    return rep;
}

}  // namespace thetaforge
