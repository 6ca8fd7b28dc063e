#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "recip/common.hpp"

namespace recip {

// Hecke eigenvalues of the fixed weight-12 level-1 newform (the discriminant
// form), exact in 128-bit integers, plus the divisor functions tau_w and
// tau_w^{(q)}.

struct HeckeTable {
    int weight = 12;
    int64_t n_max = 0;
    std::vector<int128> tau;    // tau[0] unused, tau[1..n_max]
    std::vector<double> lambda; // lambda[n] = tau[n] / n^{(weight-1)/2}

    double lam(int64_t n) const { return lambda[static_cast<size_t>(n)]; }
};

// Expands Delta = x prod (1-x^n)^24 as x * (eta^3)^8 where eta^3 is the
// sparse Jacobi cube series sum (-1)^k (2k+1) x^{k(k+1)/2}. Exact in int128
// with running magnitude checks. kappa must be 12.
HeckeTable build_hecke_table(int weight, int64_t n_max);

// Exact check of tau(m) tau(n) = sum_{d | (m,n)} d^11 tau(mn/d^2).
// Requires m*n <= n_max.
bool verify_hecke(int64_t m, int64_t n, const HeckeTable& table);

// tau_w(n) = sum_{ab=n} (a/b)^w; with q set, n is first replaced by n/(n,q).
cplx divisor_tau(cplx w, int64_t n, std::optional<int64_t> q = std::nullopt);

// | tau_w^{(q)}(m) tau_w^{(q)}(n) - sum_{d|(m,n)} tau_w^{(q)}(mn/d^2) |
double verify_divisor_hecke(cplx w, int64_t m, int64_t n, int64_t q);

// Independent construction for cross-checking small tau values:
// Delta = x * (sum_k (-1)^k (2k+1) x^{k(k+1)/2})^8, expanded by repeated
// exact polynomial multiplication of the dense arrays (no sparse shortcut).
std::vector<int128> tau_by_dense_jacobi(int64_t n_max);

}  // namespace recip
