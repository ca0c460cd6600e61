#pragma once

#include <Eigen/Dense>
#include <vector>

#include "thetaforge/lattice_sum.hpp"

namespace thetaforge {

// Polarized abelian variety data (l, Omega, delta, k): Omega in the Siegel
// upper half space, delta the elementary divisors, k the level.
struct PolarizedTorus {
    int l;
    Eigen::MatrixXcd omega;
    std::vector<long long> delta;
    long long k;

    PolarizedTorus(int l_, Eigen::MatrixXcd omega_, std::vector<long long> delta_, long long k_);

    long long label_count() const;  // delta_1 ... delta_l k^l
    Eigen::MatrixXd delta_mat() const;
    Eigen::MatrixXd omega2() const { return omega.imag(); }
};

// m_j in {0, ..., k delta_j - 1}
struct ThetaLabel {
    std::vector<long long> m;
    static ThetaLabel canonical(const PolarizedTorus& t, std::vector<long long> m);
};
std::vector<ThetaLabel> all_labels(const PolarizedTorus& t);  // lexicographic

// Truncated-lattice-sum evaluator for theta_m(z, Omega) with a certified tail.
class ThetaEvaluator {
public:
    ThetaEvaluator(PolarizedTorus torus, ThetaLabel label, double tol = 1e-12, int radius_cap = 64);

    SeriesValue eval(const Eigen::VectorXcd& z) const;
    SeriesValue eval_scaled_time(double time_scale, const Eigen::VectorXcd& z) const;
    // sum_ij Omega_ij d^2 theta / dz_i dz_j, termwise
    cplx omega_laplacian(const Eigen::VectorXcd& z) const;

    const PolarizedTorus& torus() const { return torus_; }
    const ThetaLabel& label() const { return label_; }
    double tol() const { return tol_; }

private:
    PolarizedTorus torus_;
    ThetaLabel label_;
    double tol_;
    int radius_cap_;
    LatticeEvaluator ev_;
};

// e(b, z) for b given by integer coordinates in the tilde-beta directions.
cplx automorphy_factor(const PolarizedTorus& t, const std::vector<long long>& b,
                       const Eigen::VectorXcd& z);

// Unimodular change of canonical basis (principal polarization):
// Omega~ = P Omega P^t, m~ = P^{-t} m mod k, z~ = P z, and
// theta_{m~}(z~, Omega~) = theta_m(z, Omega).
struct BasisChange {
    Eigen::MatrixXcd omega_new;
    std::vector<std::vector<long long>> p;
    std::vector<std::vector<long long>> p_inv_t;
    long long k;

    std::vector<long long> relabel(const std::vector<long long>& m) const;
    Eigen::VectorXcd transform_point(const Eigen::VectorXcd& z) const;
};
BasisChange change_of_basis(const PolarizedTorus& t, const std::vector<std::vector<long long>>& P);

// Averaged heat kernel density in point form: value depends on the imaginary
// part y of the evaluation point only.
struct HeatMeasure {
    int l;
    double t;
    Eigen::MatrixXd gram;
    double normalization;

    HeatMeasure(int l_, double t_, Eigen::MatrixXd gram_);
    double point(const Eigen::VectorXd& y) const;
};

// nu_t^ab(eta, xi) in cell coordinates; the density is eta-free.  D is the
// divisor matrix (diag(delta) for a canonical basis, the R matrix otherwise).
double heat_measure_cell(double t, const Eigen::MatrixXd& omega2, const Eigen::MatrixXd& D,
                         const Eigen::VectorXd& xi);
double heat_measure_eval(const PolarizedTorus& t, double time, const Eigen::VectorXd& eta,
                         const Eigen::VectorXd& xi);

// theta^0_m distribution on (S^1)^l: Fourier support is the coset m + k delta Z^l.
struct BSDistribution {
    std::vector<long long> m;
    std::vector<long long> modulus;  // k delta_j

    bool supports(const std::vector<long long>& q) const;
    // value of the pairing with e^{-2 pi i q . x}; 1 on the support, else 0
    double pair_mode(const std::vector<long long>& q) const { return supports(q) ? 1.0 : 0.0; }
};
BSDistribution bs_distribution_theta0(int l, long long k, const std::vector<long long>& delta,
                                      const std::vector<long long>& m);

// Coefficients of delta_{m'} over the theta^0_m basis, in all_labels order.
std::vector<cplx> bs_delta_coefficients(const PolarizedTorus& t, const std::vector<long long>& mprime);

// CST image of theta^0_m for the matrix Omega at t = 1/k (the only admissible t).
ThetaEvaluator abelian_cst(double t, const PolarizedTorus& torus, const std::vector<long long>& m,
                           double tol = 1e-12);

}  // namespace thetaforge
