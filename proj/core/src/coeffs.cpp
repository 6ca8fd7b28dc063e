#include "recip/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recip/exp_sums.hpp"

namespace recip {

namespace {

constexpr int128 kInt128Max = (~static_cast<unsigned __int128>(0)) >> 1;

// Euler's pentagonal series prod (1-x^n) = sum (-1)^k x^{k(3k-1)/2}, both
// signs of k. Terms are +/-1, returned as (exponent, sign).
std::vector<std::pair<int64_t, int>> pentagonal_terms(int64_t L) {
    std::vector<std::pair<int64_t, int>> t;
    t.push_back({0, 1});
    for (int64_t k = 1;; ++k) {
        int64_t g1 = k * (3 * k - 1) / 2;
        int64_t g2 = k * (3 * k + 1) / 2;
        int sign = (k % 2 == 0) ? 1 : -1;
        bool any = false;
        if (g1 <= L) { t.push_back({g1, sign}); any = true; }
        if (g2 <= L) { t.push_back({g2, sign}); any = true; }
        if (!any) break;
    }
    std::sort(t.begin(), t.end());
    return t;
}

// out = in * E truncated at degree L, E given as sparse +/-1 terms.
void sparse_mul(const std::vector<int128>& in, std::vector<int128>& out,
                const std::vector<std::pair<int64_t, int>>& terms, int64_t L) {
    std::fill(out.begin(), out.end(), static_cast<int128>(0));
    for (const auto& [T, sign] : terms) {
        const int128* src = in.data();
        int128* dst = out.data() + T;
        int64_t count = L + 1 - T;
        if (sign > 0) {
            for (int64_t i = 0; i < count; ++i) dst[i] += src[i];
        } else {
            for (int64_t i = 0; i < count; ++i) dst[i] -= src[i];
        }
    }
}

unsigned __int128 abs128(int128 v) {
    return v < 0 ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
}

}  // namespace

HeckeTable build_hecke_table(int weight, int64_t n_max) {
    if (weight != 12)
        throw UnsupportedWeight("build_hecke_table: only weight 12 (the discriminant form)");
    if (n_max < 1 || n_max > 1000000)
        throw NeedsWidening("build_hecke_table: n_max out of supported range [1, 1e6]");

    int64_t L = n_max - 1;  // need coefficients of E^24 up to degree n_max - 1
    auto terms = pentagonal_terms(L);
    std::vector<int128> cur(static_cast<size_t>(L + 1), 0), next(static_cast<size_t>(L + 1), 0);
    cur[0] = 1;
    // magnitude guard: a pass multiplies the max coefficient by at most the
    // number of sparse terms, so require headroom before each pass
    unsigned __int128 guard = static_cast<unsigned __int128>(kInt128Max) / (2 * terms.size());
    for (int pass = 0; pass < 24; ++pass) {
        unsigned __int128 maxv = 0;
        for (const auto& v : cur) maxv = std::max(maxv, abs128(v));
        if (maxv > guard) throw NeedsWidening("build_hecke_table: coefficient overflow risk");
        sparse_mul(cur, next, terms, L);
        std::swap(cur, next);
    }

    HeckeTable table;
    table.weight = weight;
    table.n_max = n_max;
    table.tau.assign(static_cast<size_t>(n_max + 1), 0);
    table.lambda.assign(static_cast<size_t>(n_max + 1), 0.0);
    for (int64_t n = 1; n <= n_max; ++n) {
        table.tau[static_cast<size_t>(n)] = cur[static_cast<size_t>(n - 1)];
        double nd = static_cast<double>(n);
        table.lambda[static_cast<size_t>(n)] =
            static_cast<double>(table.tau[static_cast<size_t>(n)]) / std::pow(nd, 5.5);
    }
    return table;
}

bool verify_hecke(int64_t m, int64_t n, const HeckeTable& table) {
    if (m < 1 || n < 1 || m * n > table.n_max)
        throw NeedsWidening("verify_hecke: m*n beyond table range");
    int128 lhs;
    if (__builtin_mul_overflow(table.tau[static_cast<size_t>(m)],
                               table.tau[static_cast<size_t>(n)], &lhs))
        throw NeedsWidening("verify_hecke: tau(m)tau(n) overflows");
    int64_t g = std::gcd(m, n);
    int128 rhs = 0;
    for (int64_t d = 1; d <= g; ++d) {
        if (g % d != 0) continue;
        int128 dp = 1;
        for (int i = 0; i < 11; ++i)
            if (__builtin_mul_overflow(dp, static_cast<int128>(d), &dp))
                throw NeedsWidening("verify_hecke: d^11 overflows");
        int128 term;
        if (__builtin_mul_overflow(dp, table.tau[static_cast<size_t>(m / d * (n / d))], &term))
            throw NeedsWidening("verify_hecke: term overflows");
        if (__builtin_add_overflow(rhs, term, &rhs))
            throw NeedsWidening("verify_hecke: sum overflows");
    }
    return lhs == rhs;
}

cplx divisor_tau(cplx w, int64_t n, std::optional<int64_t> q) {
    if (n < 1) throw Error("divisor_tau: n must be positive");
    if (q) n /= std::gcd(n, *q);
    cplx total = 0.0;
    for (int64_t a = 1; a * a <= n; ++a) {
        if (n % a != 0) continue;
        int64_t b = n / a;
        // pair (a,b) and (b,a)
        double l = std::log(static_cast<double>(a)) - std::log(static_cast<double>(b));
        total += std::exp(w * l);
        if (a != b) total += std::exp(-w * l);
    }
    return total;
}

double verify_divisor_hecke(cplx w, int64_t m, int64_t n, int64_t q) {
    cplx lhs = divisor_tau(w, m, q) * divisor_tau(w, n, q);
    cplx rhs = 0.0;
    int64_t g = std::gcd(m, n);
    for (int64_t d = 1; d <= g; ++d) {
        if (g % d != 0) continue;
        rhs += divisor_tau(w, (m / d) * (n / d), q);
    }
    return std::abs(lhs - rhs);
}

std::vector<int128> tau_by_dense_jacobi(int64_t n_max) {
    int64_t L = n_max - 1;
    // dense Jacobi cube series
    std::vector<int128> J(static_cast<size_t>(L + 1), 0);
    for (int64_t k = 0; k * (k + 1) / 2 <= L; ++k)
        J[static_cast<size_t>(k * (k + 1) / 2)] = (k % 2 == 0 ? 1 : -1) * (2 * k + 1);
    std::vector<int128> cur(J), next(static_cast<size_t>(L + 1), 0);
    for (int pass = 1; pass < 8; ++pass) {
        std::fill(next.begin(), next.end(), static_cast<int128>(0));
        for (int64_t i = 0; i <= L; ++i) {
            if (cur[static_cast<size_t>(i)] == 0) continue;
            for (int64_t j = 0; i + j <= L; ++j) {
                if (J[static_cast<size_t>(j)] == 0) continue;
                next[static_cast<size_t>(i + j)] += cur[static_cast<size_t>(i)] * J[static_cast<size_t>(j)];
            }
        }
        std::swap(cur, next);
    }
    std::vector<int128> tau(static_cast<size_t>(n_max + 1), 0);
    for (int64_t n = 1; n <= n_max; ++n) tau[static_cast<size_t>(n)] = cur[static_cast<size_t>(n - 1)];
    return tau;
}

}  // namespace recip
