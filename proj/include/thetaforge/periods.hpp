#pragma once

#include <string>
#include <vector>

#include "thetaforge/rational.hpp"

namespace thetaforge {

using IntMat = std::vector<std::vector<long long>>;
using RatMat = std::vector<std::vector<Rat>>;

// Canonical basis of Lambda_R + tau Lambda_R for sl(n) with respect to
// E(alpha_i, tau alpha_j) = C_ij:  beta = alpha A, beta~ = tau alpha A~,
// A^t C A~ = Delta, and the period matrix Omega = tau A^{-1} C^{-1} A^{-t}.
// tau stays symbolic: omega_over_tau holds the rational matrix Omega / tau.
struct CanonicalBasisData {
    int n = 0;
    IntMat A;
    IntMat Atilde;
    std::vector<long long> Delta;
    RatMat omega_over_tau;
    std::string note;  // n = 2 records the half-form rescaling used by the SU(2) sections
};

CanonicalBasisData canonical_basis(int n);

// beta = alpha A is completable iff beta Delta^{-1} is a basis of Lambda_W,
// i.e. C A Delta^{-1} is integer unimodular.
bool completable_check(int n, const IntMat& A);

// Gamma_n: modular B in SL(l,Z) whose top-right (l-1)-column is 0 mod n.
bool gamma_n_membership(int n, const IntMat& B);

struct PeriodEquivalence {
    RatMat omega1_over_tau;
    RatMat omega2_over_tau;  // B Omega1 B^t
    IntMat btilde;           // witness for B^t Delta B~ = Delta
};

PeriodEquivalence period_equivalence(int n, const IntMat& B);

// Elementary divisors (Smith normal form), sorted by divisibility.
std::vector<long long> smith_normal_form(IntMat M);

// The alternating form E on the 2l-lattice in the (alpha, tau alpha) basis.
IntMat polarization_form(int n);

long long int_matrix_det(IntMat M);

}  // namespace thetaforge
