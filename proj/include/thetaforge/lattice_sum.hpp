#pragma once

#include <Eigen/Dense>
#include <complex>

#include "thetaforge/errors.hpp"

namespace thetaforge {

using cplx = std::complex<double>;

// One Gaussian lattice series
//
//   F(w) = sum_{a in Z^l} exp( i pi (a+c)^T A (a+c) + 2 pi i (a+c).w + 2 pi i h.a )
//
// with A complex symmetric, Im A positive definite.  Every theta series in this
// library (general polarization, coroot-coordinate, SU(2) integral/half) is an
// instance for suitable (A, c, h) and a linear map from the evaluation point to w.
struct LatticeSeries {
    Eigen::MatrixXcd A;
    Eigen::VectorXd c;
    Eigen::VectorXd h;  // zero unless a per-term alternating phase is needed

    int dim() const { return static_cast<int>(c.size()); }
};

struct SeriesValue {
    cplx value;
    double tail_bound;  // certified bound on |F - value|
    double envelope;    // exp(pi mu^T Im(A) mu), mu = Im(A)^{-1} Im(w); 1 for real w
    int radius;         // box half-width actually used
};

// Smallest half-width R such that the discarded Gaussian tail, measured
// relative to the envelope, is provably < tol.  The bound compares the shell
// sums sum_{|a|_inf = r} exp(-pi lambda_min (r-s)^2) with a geometric series.
// Throws ResourceError past `cap`.
int certified_radius(double lambda_min, int l, double s, double tol, int cap);

class LatticeEvaluator {
public:
    LatticeEvaluator(LatticeSeries series, double tol, int radius_cap = 64);

    // Certified evaluation: |F(w) - value| <= tail_bound <= tol * envelope.
    SeriesValue eval(const Eigen::VectorXcd& w) const;

    // Termwise-weighted sum  sum (a+c)^T B (a+c) exp(...), for derivative
    // contractions; same truncation box as eval.
    SeriesValue eval_weighted(const Eigen::VectorXcd& w, const Eigen::MatrixXcd& B) const;

    const LatticeSeries& series() const { return series_; }
    double tol() const { return tol_; }
    int radius_cap() const { return radius_cap_; }
    double lambda_min() const { return lambda_min_; }

    // Gaussian center of the reduced series at imaginary part y = Im(w).
    Eigen::VectorXd reduced_center(const Eigen::VectorXd& y) const;

private:
    LatticeSeries series_;
    double tol_;
    int radius_cap_;
    double lambda_min_;           // of Im A
    Eigen::MatrixXd im_A_;
    Eigen::LLT<Eigen::MatrixXd> im_A_llt_;
};

}  // namespace thetaforge
