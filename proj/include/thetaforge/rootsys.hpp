#pragma once

#include <vector>

#include "thetaforge/rational.hpp"

namespace thetaforge {

// Integer weight in the fundamental-weight basis (Dynkin labels), length n-1.
struct Weight {
    std::vector<long long> labels;

    Weight() = default;
    explicit Weight(std::vector<long long> l) : labels(std::move(l)) {}

    std::size_t rank() const { return labels.size(); }
    bool dominant() const {
        for (auto x : labels)
            if (x < 0) return false;
        return true;
    }
    long long label_sum() const {
        long long s = 0;
        for (auto x : labels) s += x;
        return s;
    }
    bool is_zero() const {
        for (auto x : labels)
            if (x != 0) return false;
        return true;
    }
    friend bool operator==(const Weight& a, const Weight& b) { return a.labels == b.labels; }
    friend bool operator<(const Weight& a, const Weight& b) { return a.labels < b.labels; }
    friend Weight operator+(const Weight& a, const Weight& b);
    friend Weight operator-(const Weight& a, const Weight& b);
    std::string str() const;
};

// Element of S_n acting on sl(n) weights; perm[i] is the (0-based) image of i.
struct WeylElement {
    std::vector<int> perm;
    int sign = 1;

    bool is_identity() const {
        for (std::size_t i = 0; i < perm.size(); ++i)
            if (perm[i] != static_cast<int>(i)) return false;
        return true;
    }
    friend bool operator==(const WeylElement& a, const WeylElement& b) { return a.perm == b.perm; }
};

// Witness for one affine-orbit membership: mu = w(base) + level_shifted * beta,
// with beta given in root-lattice coordinates and base interior to the dilated alcove.
struct AffineOrbitWitness {
    Weight base;
    long long level_shifted = 0;
    WeylElement weyl;
    std::vector<long long> translation;
};

struct OrbitTerm {
    Weight lambda;  // dominant, lambda+rho in the orbit
    int sign;       // epsilon_lambda
};

// All A_{n-1} combinatorial data for SU(n): Cartan matrix and its exact inverse,
// Weyl group (lazily enumerated), inner products, Casimir values, alcove machinery.
class RootSystem {
public:
    explicit RootSystem(int n, int max_weyl_n = 8);

    int n() const { return n_; }
    int rank() const { return l_; }
    long long weyl_order() const;

    const std::vector<std::vector<long long>>& cartan() const { return cartan_; }
    const std::vector<std::vector<Rat>>& cartan_inv() const { return cartan_inv_; }
    const Weight& rho() const { return rho_; }
    const Weight& highest_root() const { return highest_root_; }

    // <a,b> = a^T C^{-1} b on Dynkin-label vectors, exact.
    Rat inner_product(const std::vector<Rat>& a, const std::vector<Rat>& b) const;
    Rat inner_product(const Weight& a, const Weight& b) const;
    Rat norm2(const Weight& a) const { return inner_product(a, a); }

    // c_lambda = <lambda+rho,lambda+rho> - <rho,rho>; lambda must be dominant.
    Rat casimir(const Weight& lam) const;

    // <lambda, alpha_hat> in the inner product; equals the label sum for A_{n-1}.
    long long highest_root_pairing(const Weight& lam) const { return lam.label_sum(); }

    // True iff <lam, alpha> != 0 for every positive root alpha.
    bool regular(const Weight& lam) const;

    const std::vector<WeylElement>& weyl_group() const;
    WeylElement identity() const;
    WeylElement compose(const WeylElement& a, const WeylElement& b) const;  // a after b

    Weight act(const WeylElement& w, const Weight& lam) const;

    // Positive roots as label vectors; n(n-1)/2 of them.
    const std::vector<Weight>& positive_roots() const;

    // Root-lattice coordinates of a weight (throws if not in the root lattice).
    std::vector<long long> root_coordinates(const Weight& w) const;
    Weight from_root_coordinates(const std::vector<long long>& c) const;

    // All dominant lambda with label sum <= k, lexicographic.
    std::vector<Weight> level_k_weights(long long k) const;

    // Reduce mu into the interior of the level_shifted-dilated alcove under
    // W x level_shifted*Lambda_R; throws SingularWeightError on walls.
    AffineOrbitWitness alcove_reduce(const Weight& mu, long long level_shifted) const;

    // Same reduction into the closed alcove, walls allowed (used for theta labels).
    Weight alcove_reduce_closed(const Weight& mu, long long level) const;

    // All dominant lambda with lambda+rho in the (W x (k+n)Lambda_R)-orbit of
    // gamma+rho and <lambda+rho,lambda+rho> <= cutoff, with signs.
    std::vector<OrbitTerm> affine_orbit(const Weight& gamma, long long k, const Rat& cutoff) const;

private:
    int n_, l_, max_weyl_n_;
    std::vector<std::vector<long long>> cartan_;
    std::vector<std::vector<Rat>> cartan_inv_;
    Weight rho_, highest_root_;
    std::vector<WeylElement> weyl_;       // cached at construction when n <= max_weyl_n
    std::vector<Weight> positive_roots_;  // cached at construction

    void check_rank(std::size_t got) const;
};

}  // namespace thetaforge
