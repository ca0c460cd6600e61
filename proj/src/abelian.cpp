#include "thetaforge/abelian.hpp"

#include <cmath>

#include "thetaforge/rational.hpp"

namespace thetaforge {

PolarizedTorus::PolarizedTorus(int l_, Eigen::MatrixXcd omega_, std::vector<long long> delta_,
                               long long k_)
    : l(l_), omega(std::move(omega_)), delta(std::move(delta_)), k(k_) {
    if (l < 1) throw Error("PolarizedTorus: l < 1");
    if (omega.rows() != l || omega.cols() != l) throw DimensionError("PolarizedTorus: Omega size");
    if (static_cast<int>(delta.size()) != l) throw DimensionError("PolarizedTorus: delta size");
    if (k < 1) throw Error("PolarizedTorus: level k must be >= 1");
    if (!omega.isApprox(omega.transpose(), 1e-12)) throw Error("PolarizedTorus: Omega not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(omega.imag());
    if (llt.info() != Eigen::Success) throw Error("PolarizedTorus: Im Omega not positive definite");
    for (int i = 0; i < l; ++i) {
        if (delta[i] <= 0) throw Error("PolarizedTorus: delta entries must be positive");
        if (i + 1 < l && delta[i + 1] % delta[i] != 0)
            throw Error("PolarizedTorus: delta divisibility violated");
    }
}

long long PolarizedTorus::label_count() const {
    long long c = 1;
    for (auto d : delta) c *= d * k;
    return c;
}

Eigen::MatrixXd PolarizedTorus::delta_mat() const {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(l, l);
    for (int i = 0; i < l; ++i) D(i, i) = static_cast<double>(delta[i]);
    return D;
}

ThetaLabel ThetaLabel::canonical(const PolarizedTorus& t, std::vector<long long> m) {
    if (static_cast<int>(m.size()) != t.l) throw DimensionError("ThetaLabel: size");
    for (int i = 0; i < t.l; ++i) {
        long long mod = t.k * t.delta[i];
        m[i] = ((m[i] % mod) + mod) % mod;
    }
    return ThetaLabel{std::move(m)};
}

std::vector<ThetaLabel> all_labels(const PolarizedTorus& t) {
    std::vector<ThetaLabel> out;
    std::vector<long long> cur(t.l, 0);
    while (true) {
        out.push_back(ThetaLabel{cur});
        int pos = t.l - 1;
        while (pos >= 0 && cur[pos] + 1 >= t.k * t.delta[pos]) {
            cur[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++cur[pos];
    }
    return out;
}

namespace {
LatticeSeries make_series(const PolarizedTorus& t, const ThetaLabel& m, double time_scale) {
    LatticeSeries s;
    Eigen::MatrixXd D = t.delta_mat();
    s.A = time_scale * static_cast<double>(t.k) * D * t.omega * D;
    s.c.resize(t.l);
    for (int i = 0; i < t.l; ++i)
        s.c[i] = static_cast<double>(m.m[i]) / static_cast<double>(t.k * t.delta[i]);
    s.h = Eigen::VectorXd::Zero(t.l);
    return s;
}
}  // namespace

ThetaEvaluator::ThetaEvaluator(PolarizedTorus torus, ThetaLabel label, double tol, int radius_cap)
    : torus_(std::move(torus)),
      label_(ThetaLabel::canonical(torus_, label.m)),
      tol_(tol),
      radius_cap_(radius_cap),
      ev_(make_series(torus_, label_, 1.0), tol, radius_cap) {}

SeriesValue ThetaEvaluator::eval(const Eigen::VectorXcd& z) const {
    if (z.size() != torus_.l) throw DimensionError("ThetaEvaluator: point size");
    // w = k delta z
    Eigen::VectorXcd w(torus_.l);
    for (int i = 0; i < torus_.l; ++i)
        w[i] = static_cast<double>(torus_.k * torus_.delta[i]) * z[i];
    return ev_.eval(w);
}

cplx ThetaEvaluator::omega_laplacian(const Eigen::VectorXcd& z) const {
    if (z.size() != torus_.l) throw DimensionError("ThetaEvaluator: point size");
    Eigen::VectorXcd w(torus_.l);
    for (int i = 0; i < torus_.l; ++i)
        w[i] = static_cast<double>(torus_.k * torus_.delta[i]) * z[i];
    // frequencies are k delta (p + c); the contraction weight in (p+c) is delta Omega delta
    Eigen::MatrixXd D = torus_.delta_mat();
    Eigen::MatrixXcd B = D * torus_.omega * D;
    double k2 = static_cast<double>(torus_.k) * static_cast<double>(torus_.k);
    return -4.0 * M_PI * M_PI * k2 * ev_.eval_weighted(w, B).value;
}

SeriesValue ThetaEvaluator::eval_scaled_time(double time_scale, const Eigen::VectorXcd& z) const {
    LatticeEvaluator scaled(make_series(torus_, label_, time_scale), tol_, radius_cap_);
    Eigen::VectorXcd w(torus_.l);
    for (int i = 0; i < torus_.l; ++i)
        w[i] = static_cast<double>(torus_.k * torus_.delta[i]) * z[i];
    return scaled.eval(w);
}

cplx automorphy_factor(const PolarizedTorus& t, const std::vector<long long>& b,
                       const Eigen::VectorXcd& z) {
    if (static_cast<int>(b.size()) != t.l || z.size() != t.l)
        throw DimensionError("automorphy_factor: size");
    // F(z, b) = -sum_j b_j delta_j z_j ;  F(b, b) = -(delta b)^T Omega (delta b)
    cplx Fzb = 0.0;
    Eigen::VectorXcd db(t.l);
    for (int j = 0; j < t.l; ++j) {
        Fzb -= static_cast<double>(b[j] * t.delta[j]) * z[j];
        db[j] = static_cast<double>(b[j] * t.delta[j]);
    }
    cplx Fbb = -(db.transpose() * t.omega * db)(0, 0);
    const cplx I(0.0, 1.0);
    double kk = static_cast<double>(t.k);
    return std::exp(2.0 * M_PI * I * kk * Fzb + M_PI * I * kk * Fbb);
}

namespace {
// exact inverse-transpose of an integer unimodular matrix
std::vector<std::vector<long long>> unimodular_inverse_transpose(
    const std::vector<std::vector<long long>>& P) {
    const int n = static_cast<int>(P.size());
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n)), inv(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a[i][j] = Rat(P[i][j]);
            inv[i][j] = Rat(i == j ? 1 : 0);
        }
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (a[r][c] != Rat(0)) {
                piv = r;
                break;
            }
        if (piv < 0) throw Error("change_of_basis: singular P");
        std::swap(a[piv], a[c]);
        std::swap(inv[piv], inv[c]);
        Rat d = a[c][c];
        for (int j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c] == Rat(0)) continue;
            Rat f = a[r][c];
            for (int j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    std::vector<std::vector<long long>> out(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!inv[j][i].is_integer()) throw Error("change_of_basis: P not unimodular");
            out[i][j] = inv[j][i].as_int();
        }
    return out;
}

long long int_det(std::vector<std::vector<long long>> m) {
    const int n = static_cast<int>(m.size());
    // fraction-free Gaussian elimination (Bareiss)
    long long prev = 1;
    long long sign = 1;
    for (int c = 0; c < n - 1; ++c) {
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
}  // namespace

BasisChange change_of_basis(const PolarizedTorus& t, const std::vector<std::vector<long long>>& P) {
    if (static_cast<int>(P.size()) != t.l) throw DimensionError("change_of_basis: P size");
    for (const auto& row : P)
        if (static_cast<int>(row.size()) != t.l) throw DimensionError("change_of_basis: P size");
    long long det = int_det(P);
    if (det != 1 && det != -1) throw Error("change_of_basis: P must be unimodular, det = " +
                                           std::to_string(det));
    for (auto d : t.delta)
        if (d != 1) throw Error("change_of_basis: implemented for principal polarization only");
    Eigen::MatrixXd Pd(t.l, t.l);
    for (int i = 0; i < t.l; ++i)
        for (int j = 0; j < t.l; ++j) Pd(i, j) = static_cast<double>(P[i][j]);
    BasisChange bc;
    bc.omega_new = Pd * t.omega * Pd.transpose();
    bc.p = P;
    bc.p_inv_t = unimodular_inverse_transpose(P);
    bc.k = t.k;
    return bc;
}

std::vector<long long> BasisChange::relabel(const std::vector<long long>& m) const {
    const int n = static_cast<int>(p.size());
    if (static_cast<int>(m.size()) != n) throw DimensionError("BasisChange::relabel");
    std::vector<long long> out(n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out[i] += p_inv_t[i][j] * m[j];
        out[i] = ((out[i] % k) + k) % k;
    }
    return out;
}

Eigen::VectorXcd BasisChange::transform_point(const Eigen::VectorXcd& z) const {
    const int n = static_cast<int>(p.size());
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i] += static_cast<double>(p[i][j]) * z[j];
    return out;
}

HeatMeasure::HeatMeasure(int l_, double t_, Eigen::MatrixXd gram_)
    : l(l_), t(t_), gram(std::move(gram_)) {
    if (!(t > 0)) throw Error("HeatMeasure: t must be positive");
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw Error("HeatMeasure: gram not positive definite");
    normalization = std::pow(2.0 / t, 0.5 * l) * std::sqrt(gram.determinant());
}

double HeatMeasure::point(const Eigen::VectorXd& y) const {
    return normalization * std::exp(-(2.0 * M_PI / t) * y.dot(gram * y));
}

double heat_measure_cell(double t, const Eigen::MatrixXd& omega2, const Eigen::MatrixXd& D,
                         const Eigen::VectorXd& xi) {
    const int l = static_cast<int>(xi.size());
    Eigen::VectorXd dxi = D * xi;
    return std::pow(2.0 / t, 0.5 * l) * std::sqrt(omega2.determinant()) *
           std::abs(D.determinant()) * std::exp(-(2.0 * M_PI / t) * dxi.dot(omega2 * dxi));
}

double heat_measure_eval(const PolarizedTorus& t, double time, const Eigen::VectorXd& eta,
                         const Eigen::VectorXd& xi) {
    if (eta.size() != t.l || xi.size() != t.l) throw DimensionError("heat_measure_eval: size");
    return heat_measure_cell(time, t.omega2(), t.delta_mat(), xi);
}

BSDistribution bs_distribution_theta0(int l, long long k, const std::vector<long long>& delta,
                                      const std::vector<long long>& m) {
    if (static_cast<int>(delta.size()) != l || static_cast<int>(m.size()) != l)
        throw DimensionError("bs_distribution_theta0: size");
    BSDistribution d;
    d.modulus.resize(l);
    d.m.resize(l);
    for (int i = 0; i < l; ++i) {
        d.modulus[i] = k * delta[i];
        if (m[i] < 0 || m[i] >= d.modulus[i]) throw Error("bs_distribution_theta0: label range");
        d.m[i] = m[i];
    }
    return d;
}

bool BSDistribution::supports(const std::vector<long long>& q) const {
    if (q.size() != m.size()) throw DimensionError("BSDistribution::supports");
    for (std::size_t i = 0; i < m.size(); ++i) {
        long long r = ((q[i] - m[i]) % modulus[i] + modulus[i]) % modulus[i];
        if (r != 0) return false;
    }
    return true;
}

std::vector<cplx> bs_delta_coefficients(const PolarizedTorus& t, const std::vector<long long>& mprime) {
    if (static_cast<int>(mprime.size()) != t.l) throw DimensionError("bs_delta_coefficients: size");
    auto labels = all_labels(t);
    std::vector<cplx> out;
    out.reserve(labels.size());
    const cplx I(0.0, 1.0);
    for (const auto& lbl : labels) {
        double phase = 0.0;
        for (int j = 0; j < t.l; ++j)
            phase += static_cast<double>(mprime[j]) * static_cast<double>(lbl.m[j]) /
                     static_cast<double>(t.k * t.delta[j]);
        out.push_back(std::exp(-2.0 * M_PI * I * phase));
    }
    return out;
}

ThetaEvaluator abelian_cst(double t, const PolarizedTorus& torus, const std::vector<long long>& m,
                           double tol) {
    if (std::abs(t * static_cast<double>(torus.k) - 1.0) > 1e-12)
        throw Error("abelian_cst: requires t = 1/k");
    return ThetaEvaluator(torus, ThetaLabel::canonical(torus, m), tol);
}

}  // namespace thetaforge
