#pragma once

#include <string>
#include <vector>

#include "thetaforge/lattice_sum.hpp"

namespace thetaforge {

struct CheckResult {
    std::string name;
    double value = 0.0;      // residual, or 0/1 for boolean checks
    double threshold = 0.0;  // pass condition against the value
    bool larger_is_pass = false;  // negative controls pass when the residual is large
    bool pass = false;
    std::string note;
};

struct CheckConfig {
    int n = 3;
    long long k = 1;
    cplx tau{0.0, 1.0};
    double t_detune = 0.0;  // added to 1/(k+n) (resp. 2/k') in the descent checks
    int quadrature_n = 0;   // 0: per-rank default
    double tolerance = 1e-6;
    unsigned seed = 20240807;
    int samples = 20;
};

// The property suite behind `thetaforge checks`: diagram commutativity,
// quasi-periodicity, heat-flow residuals, descent/level gates, unitarity
// Grams, exact appendix identities, Verlinde counts, character oracles.
// Individual failures are recorded, never thrown.
std::vector<CheckResult> run_checks(const CheckConfig& cfg);

struct VerlindeRow {
    int n;
    long long k;
    long long count;
    long long binom;
    bool match;
};

std::vector<VerlindeRow> verlinde_table(int n_min, int n_max, long long k_min, long long k_max);

}  // namespace thetaforge
