#include "thetaforge/lattice_sum.hpp"

#include <cmath>

namespace thetaforge {

int certified_radius(double lambda_min, int l, double s, double tol, int cap) {
    if (!(lambda_min > 0)) throw Error("certified_radius: Im A not positive definite");
    auto shell_log = [&](int r) {
        double d = r - s;
        double count = 2.0 * l * std::pow(2.0 * r + 1.0, l - 1);
        return std::log(count) - M_PI * lambda_min * d * d;
    };
    for (int R = static_cast<int>(std::ceil(s)) + 1; R <= cap; ++R) {
        // shell-to-shell ratio must be <= 1/2 from R+1 on; both factors are
        // monotone in r, so checking the first step suffices
        double ratio = shell_log(R + 2) - shell_log(R + 1);
        if (ratio > std::log(0.5)) continue;
        double first = shell_log(R + 1);
        if (2.0 * std::exp(first) < tol) return R;
    }
    throw ResourceError("certified_radius: tail bound unsatisfiable within radius cap " +
                        std::to_string(cap));
}

LatticeEvaluator::LatticeEvaluator(LatticeSeries series, double tol, int radius_cap)
    : series_(std::move(series)), tol_(tol), radius_cap_(radius_cap) {
    const int l = series_.dim();
    if (series_.A.rows() != l || series_.A.cols() != l)
        throw DimensionError("LatticeEvaluator: A size mismatch");
    if (series_.h.size() == 0) series_.h = Eigen::VectorXd::Zero(l);
    if (!(tol_ > 0)) throw Error("LatticeEvaluator: tol must be positive");
    if (!series_.A.isApprox(series_.A.transpose(), 1e-12))
        throw Error("LatticeEvaluator: A must be symmetric");
    im_A_ = series_.A.imag();
    im_A_llt_.compute(im_A_);
    if (im_A_llt_.info() != Eigen::Success)
        throw Error("LatticeEvaluator: Im A not positive definite");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im_A_);
    lambda_min_ = es.eigenvalues().minCoeff();
}

Eigen::VectorXd LatticeEvaluator::reduced_center(const Eigen::VectorXd& y) const {
    // minimizer of -pi (a+c+mu)' ImA (a+c+mu) over a, with mu = ImA^{-1} y
    Eigen::VectorXd mu = im_A_llt_.solve(y);
    return -series_.c - mu;
}

SeriesValue LatticeEvaluator::eval(const Eigen::VectorXcd& w) const {
    return eval_weighted(w, Eigen::MatrixXcd());
}

SeriesValue LatticeEvaluator::eval_weighted(const Eigen::VectorXcd& w,
                                            const Eigen::MatrixXcd& B) const {
    const int l = series_.dim();
    if (w.size() != l) throw DimensionError("LatticeEvaluator: point dimension mismatch");
    const bool weighted = B.size() != 0;
    const Eigen::VectorXd y = w.imag();
    const Eigen::VectorXd mu = im_A_llt_.solve(y);
    const double log_env = M_PI * mu.dot(im_A_ * mu);
    const Eigen::VectorXd center = -series_.c - mu;

    Eigen::VectorXi a0(l);
    for (int i = 0; i < l; ++i) a0[i] = static_cast<int>(std::lround(center[i]));
    const double s = (a0.cast<double>() - center).norm();
    const int R = certified_radius(lambda_min_, l, s, tol_, radius_cap_);

    // reduced terms exp(i pi (a+c)'A(a+c) + 2 pi i (a+c).w + 2 pi i h.a - log_env)
    // have non-positive real exponent; the envelope is reapplied at the end
    cplx sum = 0.0;
    Eigen::VectorXi idx = Eigen::VectorXi::Constant(l, -R);
    const cplx ipi(0.0, M_PI);
    while (true) {
        Eigen::VectorXd ac(l);
        for (int i = 0; i < l; ++i) ac[i] = a0[i] + idx[i] + series_.c[i];
        cplx quad = 0.0;
        for (int i = 0; i < l; ++i) {
            cplx row = 0.0;
            for (int j = 0; j < l; ++j) row += series_.A(i, j) * ac[j];
            quad += ac[i] * row;
        }
        cplx lin = 0.0;
        double hphase = 0.0;
        for (int i = 0; i < l; ++i) {
            lin += ac[i] * w[i];
            hphase += series_.h[i] * (a0[i] + idx[i]);
        }
        cplx term = std::exp(ipi * quad + 2.0 * ipi * lin + cplx(0.0, 2.0 * M_PI * hphase) - log_env);
        if (weighted) {
            cplx wq = 0.0;
            for (int i = 0; i < l; ++i) {
                cplx row = 0.0;
                for (int j = 0; j < l; ++j) row += B(i, j) * ac[j];
                wq += ac[i] * row;
            }
            term *= wq;
        }
        sum += term;

        int pos = l - 1;
        while (pos >= 0 && idx[pos] == R) {
            idx[pos] = -R;
            --pos;
        }
        if (pos < 0) break;
        ++idx[pos];
    }
    const double env = std::exp(log_env);
    SeriesValue out;
    out.envelope = env;
    out.radius = R;
    out.tail_bound = tol_ * env;
    out.value = sum * env;
    return out;
}

}  // namespace thetaforge
