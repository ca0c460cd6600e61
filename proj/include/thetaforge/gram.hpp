#pragma once

#include <functional>
#include <vector>

#include "thetaforge/abelian.hpp"
#include "thetaforge/nonabelian.hpp"

namespace thetaforge {

// Uniform shifted product grid on [0,1)^{2l}: eta_d = (i_d + offset_d)/N and
// the same for xi.  The default midpoint shift keeps the grid off the
// singular locus.
struct QuadratureGrid {
    int l;
    int points_per_dim;
    Eigen::VectorXd offset;

    static QuadratureGrid standard(int l, int N);
    static int default_points(int l);  // 64 (l=1), 24 (l=2), 12 (l=3)
};

// Cell density nu_t(eta, xi) = (2/t)^{l/2} sqrt(det Omega2) |det D|
//                              exp(-(2 pi / t) (D xi)' Omega2 (D xi)).
struct CellMeasure {
    double t;
    Eigen::MatrixXd omega2;
    Eigen::MatrixXd D;

    double constant() const;
    double log_constant() const;
    double weight(const Eigen::VectorXd& xi) const;
};

// Frames for the binned kernel, in integer-frequency form: each frame is
//   sum_pieces sign * sum_{a in Z^l} exp(i pi u'Su + 2 pi i u'(G xi) + 2 pi i u'eta + 2 pi i h'a),
// with u = m0 + M a integral.  S, G, M are shared across the set.
struct FrameSet {
    Eigen::MatrixXcd S;
    Eigen::MatrixXcd G;
    Eigen::MatrixXd M;  // integer entries

    struct Piece {
        double sign;
        Eigen::VectorXd m0;  // integer entries
        Eigen::VectorXd h;   // empty = zero
    };
    std::vector<std::vector<Piece>> frames;
};

struct GramReport {
    Eigen::MatrixXcd matrix;
    double max_offdiag = 0.0;
    double max_diag_deviation = 0.0;
    int n_used = 0;
    double seconds = 0.0;
    double measure_constant = 0.0;
    std::vector<double> refinement_trace;  // entry deltas per refinement step, if any
};

// Production kernel: the eta sum collapses through exact per-axis
// orthogonality of the grid Fourier modes, leaving a xi loop that is
// data-parallel; partial sums are combined over a fixed block decomposition,
// so results do not depend on the worker count.
GramReport gram_kernel(const FrameSet& frames, const CellMeasure& measure,
                       const QuadratureGrid& grid, double weyl_factor, double term_tol = 1e-12,
                       bool parallel = true);

// Literal 2l-dimensional grid loop over point evaluators; the reference
// implementation the kernel is tested against.
using PointFrame = std::function<cplx(const Eigen::VectorXd& eta, const Eigen::VectorXd& xi)>;
GramReport gram_reference(const std::vector<PointFrame>& frames, const CellMeasure& measure,
                          const QuadratureGrid& grid, double weyl_factor);

// ----- spec operations -----

GramReport abelian_gram(const PolarizedTorus& torus, const std::vector<ThetaLabel>& labels, int N,
                        double tol = 1e-12, bool parallel = true);
GramReport abelian_gram_reference(const PolarizedTorus& torus, const std::vector<ThetaLabel>& labels,
                                  int N, double tol = 1e-12);

// Gram of the shifted frame in the CFT hermitean structure, computed in the
// pole-free product form over theta^-_{gamma+rho, k+n}.
GramReport nonabelian_gram(const RootSystem& rs, long long k, EllipticModulus tau, int N,
                           double tol = 1e-12, bool parallel = true, double t_override = 0.0);
GramReport nonabelian_gram_reference(const RootSystem& rs, long long k, EllipticModulus tau, int N,
                                     double tol = 1e-12);

// N-refinement wrapper: doubles N until entries stabilize within entry_tol.
GramReport gram_converged(const std::function<GramReport(int)>& at_N, int N0,
                          double entry_tol = 1e-6, int max_refinements = 2);

// Two independent routes to the modified Hall inner product: the product-form
// kernel vs the truncated character series under the pushforward density.
// Returns the max entrywise disagreement; entries of both routes are written
// to *kernel_out / *series_out when non-null.
double hall_inner_product_check(const RootSystem& rs, long long k, EllipticModulus tau, int N,
                                Eigen::MatrixXcd* kernel_out = nullptr,
                                Eigen::MatrixXcd* series_out = nullptr);

struct DescentReport {
    double max_weyl = 0.0;          // residual under v -> w(v)
    double max_lattice = 0.0;       // v -> v + coroot
    double max_tau_lattice = 0.0;   // v -> v + tau coroot
    double max() const { return std::max(max_weyl, std::max(max_lattice, max_tau_lattice)); }
};

// Pointwise invariance of |C_t^tau(psi) sigma|^2 e^{-2 t pi tau2 |rho|^2} nu
// under W x (coroot + tau coroot); the tau-direction residual is the level
// gate (order one unless 1/t = k+n).
DescentReport fundamental_domain_independence(const RootSystem& rs, long long k,
                                              EllipticModulus tau, double t, int samples = 20,
                                              unsigned seed = 20240803);

}  // namespace thetaforge
