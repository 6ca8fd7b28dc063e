#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "recip/common.hpp"

namespace recip {

// Exact and fast evaluation of Kloosterman sums
//   S(a,b;c) = sum_{d mod c, (d,c)=1} e((dbar*a + d*b)/c),
// Ramanujan sums, and the prime reduction identities these sums satisfy.
// S(a,b;1) = 1 by the empty-modulus convention.

int64_t mod_inverse(int64_t a, int64_t c);  // throws NotCoprime

// Direct definition sum with Kahan compensation. O(c log c). This is the
// reference evaluator against which the row tables are validated.
double kloosterman(int64_t a, int64_t b, int64_t c);

// Exact integer Ramanujan sum S(0,n;c) = sum_{d | (n,c)} mu(c/d) d.
int64_t ramanujan_sum(int64_t n, int64_t c);

// Small factorization utilities (trial division; moduli here are <= ~1e6).
struct PrimePower {
    int64_t p;
    int e;
    int64_t pe;  // p^e
};
std::vector<PrimePower> factorize(int64_t n);
int64_t euler_phi(int64_t n);
int mobius(int64_t n);
int64_t divisor_count(int64_t n);

// Per-modulus table of S(1,r;c) for r = 0..c-1. For (a,c)=1,
// S(a,b;c) = values[a*b mod c]; by symmetry the same index works when
// (b,c)=1. Rows are built with an FFT (cost O(c log c), below the O(c^2)
// contract) and carry local sub-rows for each prime power p^e || c so that
// arguments sharing factors with c can be evaluated via twisted
// multiplicativity.
struct KloostermanRow {
    int64_t modulus = 0;
    std::vector<double> values;
    double imag_residue = 0.0;  // max |Im| discarded by the FFT; must be tiny

    struct Local {
        int64_t p;
        int e;
        int64_t pe;
        int64_t cofactor_inv;  // (c/p^e)^{-1} mod p^e
        // tables[f-1][r] = S(1,r;p^f) for f = 1..e (clause-3 reductions step
        // down through the exponent levels)
        std::vector<std::vector<double>> tables;
    };
    std::vector<Local> locals;

    size_t bytes() const;
};

using RowPtr = std::shared_ptr<const KloostermanRow>;

// Builds (or fetches from the process-wide LRU cache) the row for modulus c.
// Throws RowTooLarge when a single row would exceed the cache capacity.
RowPtr kloosterman_row(int64_t c);

// LRU cache controls (bytes). Safe for concurrent use; rows are immutable
// once published.
void set_row_cache_capacity(size_t bytes);
size_t row_cache_bytes();
void clear_row_cache();

// General evaluator: any a, b (negative allowed), any c >= 1. Uses the row
// table when one argument is coprime to c, otherwise splits c into prime
// powers and applies twisted multiplicativity plus the p-power reductions.
double kloosterman_lookup(int64_t a, int64_t b, const KloostermanRow& row);

// Cusp-pair sum S_{infty0}(m,n;c sqrt(N)) = S(Nbar m, n; c), defined for
// (c,N)=1 only.
struct CuspPairParams {
    int64_t level;    // N, positive squarefree
    int64_t modulus;  // c, coprime to N
    int64_t m, n;
    CuspPairParams(int64_t N, int64_t c, int64_t m_, int64_t n_);
};
double kloosterman_cusp_pair(int64_t m, int64_t n, int64_t c, int64_t N);

// Reduction identities for a prime p:
//   (1) p || c:        S(m,pn;c) = eps * S(pbar m, n; c/p),
//                      eps = -1 if p∤m, eps = p-1 if p|m
//   (2) p^2 | c, p∤m:  S(m,pn;c) = 0
//   (3)                S(pm,pn;p^2 c) = p S(m,n;pc)
struct KlooLemmaReport {
    int clause = 0;  // 1, 2 or 3; 0 = no clause applies
    bool applicable = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};
// Evaluates every applicable clause for (m,n,c,p); clause 3 is always
// applicable and is checked at modulus p^2*c.
std::vector<KlooLemmaReport> check_kloo_lemma(int64_t m, int64_t n, int64_t c, int64_t p);

// |S(a,b;c1*c2) - S(a c2bar, b c2bar; c1) * S(a c1bar, b c1bar; c2)|
double check_crt_multiplicativity(int64_t a, int64_t b, int64_t c1, int64_t c2);

// Weil bound envelope tau0(c) gcd(m,n,c)^{1/2} c^{1/2}.
double weil_bound(int64_t m, int64_t n, int64_t c);

}  // namespace recip
