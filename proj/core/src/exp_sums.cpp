#include "recip/exp_sums.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <list>
#include <numeric>
#include <unordered_map>

namespace recip {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
std::mutex g_fftw_mutex;  // fftw planner is not thread safe
}  // namespace

int64_t mod_inverse(int64_t a, int64_t c) {
    if (c <= 0) throw NotCoprime("mod_inverse: modulus must be positive");
    a %= c;
    if (a < 0) a += c;
    if (c == 1) return 0;
    int64_t r0 = c, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        int64_t r2 = r0 - q * r1;
        int64_t s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw NotCoprime("mod_inverse: arguments share a factor");
    if (s0 < 0) s0 += c;
    return s0;
}

double kloosterman(int64_t a, int64_t b, int64_t c) {
    if (c < 1) throw NotCoprime("kloosterman: modulus must be >= 1");
    if (c == 1) return 1.0;
    a %= c; if (a < 0) a += c;
    b %= c; if (b < 0) b += c;
    KahanSum acc;
    for (int64_t d = 1; d < c; ++d) {
        if (std::gcd(d, c) != 1) continue;
        int64_t dbar = mod_inverse(d, c);
        int64_t idx = (static_cast<int128>(dbar) * a + static_cast<int128>(d) * b) % c;
        acc.add(std::cos(kTwoPi * static_cast<double>(idx) / static_cast<double>(c)));
    }
    return acc.value();
}

std::vector<PrimePower> factorize(int64_t n) {
    std::vector<PrimePower> out;
    for (int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            PrimePower pp{p, 0, 1};
            while (n % p == 0) {
                n /= p;
                ++pp.e;
                pp.pe *= p;
            }
            out.push_back(pp);
        }
    }
    if (n > 1) out.push_back({n, 1, n});
    return out;
}

int64_t euler_phi(int64_t n) {
    int64_t r = n;
    for (const auto& pp : factorize(n)) r -= r / pp.p;
    return r;
}

int mobius(int64_t n) {
    int m = 1;
    for (const auto& pp : factorize(n)) {
        if (pp.e > 1) return 0;
        m = -m;
    }
    return m;
}

int64_t divisor_count(int64_t n) {
    int64_t t = 1;
    for (const auto& pp : factorize(n)) t *= (pp.e + 1);
    return t;
}

int64_t ramanujan_sum(int64_t n, int64_t c) {
    if (c < 1) throw NotCoprime("ramanujan_sum: modulus must be >= 1");
    if (c == 1) return 1;
    n %= c; if (n < 0) n += c;
    int64_t g = std::gcd(n, c);
    // sum over d | g of mu(c/d) d
    int64_t total = 0;
    for (int64_t d = 1; d * d <= g; ++d) {
        if (g % d != 0) continue;
        total += static_cast<int64_t>(mobius(c / d)) * d;
        int64_t e = g / d;
        if (e != d) total += static_cast<int64_t>(mobius(c / e)) * e;
    }
    return total;
}

double weil_bound(int64_t m, int64_t n, int64_t c) {
    int64_t g = std::gcd(std::gcd(std::llabs(m), std::llabs(n)), c);
    if (g == 0) g = c;
    return static_cast<double>(divisor_count(c)) * std::sqrt(static_cast<double>(g)) *
           std::sqrt(static_cast<double>(c));
}

// ---- row construction ------------------------------------------------------

namespace {

// S(1,r;c) for all r at once: the DFT of a_d = e(dbar/c) over units d.
//   S(1,r;c) = sum_d cos(2pi (dbar + d r)/c) = Re sum_d e(dbar/c) e(dr/c).
std::vector<double> build_row_values(int64_t c, double* imag_residue) {
    std::vector<double> out(static_cast<size_t>(c));
    if (c == 1) {
        out[0] = 1.0;
        *imag_residue = 0.0;
        return out;
    }
    std::vector<std::complex<double>> a(static_cast<size_t>(c), 0.0);
    for (int64_t d = 1; d < c; ++d) {
        if (std::gcd(d, c) != 1) continue;
        int64_t dbar = mod_inverse(d, c);
        double t = kTwoPi * static_cast<double>(dbar) / static_cast<double>(c);
        a[static_cast<size_t>(d)] += std::complex<double>(std::cos(t), std::sin(t));
    }
    std::vector<std::complex<double>> f(static_cast<size_t>(c));
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(c),
                                          reinterpret_cast<fftw_complex*>(a.data()),
                                          reinterpret_cast<fftw_complex*>(f.data()),
                                          FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    // FFTW_BACKWARD computes sum_d a_d e^{+2pi i d r / c} with no scaling.
    double worst = 0.0;
    for (int64_t r = 0; r < c; ++r) {
        out[static_cast<size_t>(r)] = f[static_cast<size_t>(r)].real();
        worst = std::max(worst, std::fabs(f[static_cast<size_t>(r)].imag()));
    }
    *imag_residue = worst;
    return out;
}

struct RowCache {
    std::mutex mu;
    size_t capacity = 512u << 20;  // 512 MiB default
    size_t used = 0;
    std::list<int64_t> order;  // front = most recent
    struct Entry {
        RowPtr row;
        std::list<int64_t>::iterator pos;
    };
    std::unordered_map<int64_t, Entry> map;
};

RowCache& cache() {
    static RowCache c;
    return c;
}

}  // namespace

size_t KloostermanRow::bytes() const {
    size_t b = sizeof(*this) + values.size() * sizeof(double);
    for (const auto& l : locals) b += sizeof(l) + l.values.size() * sizeof(double);
    return b;
}

RowPtr kloosterman_row(int64_t c) {
    if (c < 1) throw NotCoprime("kloosterman_row: modulus must be >= 1");
    auto& C = cache();
    {
        std::lock_guard<std::mutex> lock(C.mu);
        auto it = C.map.find(c);
        if (it != C.map.end()) {
            C.order.erase(it->second.pos);
            C.order.push_front(c);
            it->second.pos = C.order.begin();
            return it->second.row;
        }
    }
    auto row = std::make_shared<KloostermanRow>();
    row->modulus = c;
    row->values = build_row_values(c, &row->imag_residue);
    auto fac = factorize(c);
    if (fac.size() > 1 || (fac.size() == 1 && fac[0].e > 1)) {
        for (const auto& pp : fac) {
            KloostermanRow::Local loc;
            loc.p = pp.p;
            loc.e = pp.e;
            loc.pe = pp.pe;
            loc.cofactor_inv = mod_inverse((c / pp.pe) % pp.pe, pp.pe);
            double junk = 0.0;
            int64_t pf = 1;
            for (int f = 1; f <= pp.e; ++f) {
                pf *= pp.p;
                loc.tables.push_back(build_row_values(pf, &junk));
            }
            row->locals.push_back(std::move(loc));
        }
    }
    size_t sz = row->bytes();
    {
        std::lock_guard<std::mutex> lock(cache().mu);
        auto& Cc = cache();
        if (sz > Cc.capacity) throw RowTooLarge("kloosterman_row: row exceeds cache capacity");
        while (Cc.used + sz > Cc.capacity && !Cc.order.empty()) {
            int64_t victim = Cc.order.back();
            Cc.order.pop_back();
            auto vit = Cc.map.find(victim);
            Cc.used -= vit->second.row->bytes();
            Cc.map.erase(vit);
        }
        Cc.order.push_front(c);
        Cc.map[c] = {row, Cc.order.begin()};
        Cc.used += sz;
    }
    return row;
}

void set_row_cache_capacity(size_t bytes) {
    std::lock_guard<std::mutex> lock(cache().mu);
    cache().capacity = bytes;
}

size_t row_cache_bytes() {
    std::lock_guard<std::mutex> lock(cache().mu);
    return cache().used;
}

void clear_row_cache() {
    std::lock_guard<std::mutex> lock(cache().mu);
    cache().map.clear();
    cache().order.clear();
    cache().used = 0;
}

namespace {

// S(a,b;p^e) with the p-divisibility reductions applied recursively.
double local_prime_power(int64_t a, int64_t b, const KloostermanRow::Local& loc, int e,
                         int64_t pe) {
    if (e == 0) return 1.0;
    int64_t p = loc.p;
    int64_t am = a % pe; if (am < 0) am += pe;
    int64_t bm = b % pe; if (bm < 0) bm += pe;
    bool pa = (am % p == 0), pb = (bm % p == 0);
    if (!pa || !pb) {
        int64_t idx = static_cast<int64_t>((static_cast<int128>(am) * bm) % pe);
        return loc.tables[static_cast<size_t>(e - 1)][static_cast<size_t>(idx)];
    }
    if (e == 1) return static_cast<double>(p - 1);  // S(0,0;p) over units
    return static_cast<double>(p) * local_prime_power(am / p, bm / p, loc, e - 1, pe / p);
}

}  // namespace

double kloosterman_lookup(int64_t a, int64_t b, const KloostermanRow& row) {
    int64_t c = row.modulus;
    if (c == 1) return 1.0;
    int64_t am = a % c; if (am < 0) am += c;
    int64_t bm = b % c; if (bm < 0) bm += c;
    if (std::gcd(am, c) == 1 || std::gcd(bm, c) == 1) {
        int64_t idx = static_cast<int64_t>((static_cast<int128>(am) * bm) % c);
        return row.values[static_cast<size_t>(idx)];
    }
    if (row.locals.empty()) {
        // prime modulus with p | a and p | b: the unit sum
        return static_cast<double>(c - 1);
    }
    // twisted multiplicativity across the prime powers of c:
    //   S(a,b;uv) = S(a vbar, b vbar; u) S(a ubar, b ubar; v)
    double prod = 1.0;
    for (const auto& loc : row.locals) {
        int64_t pe = loc.pe;
        int64_t t = loc.cofactor_inv;  // (c/pe)^{-1} mod pe
        int64_t aa = static_cast<int64_t>((static_cast<int128>(a % pe + pe) * t) % pe);
        int64_t bb = static_cast<int64_t>((static_cast<int128>(b % pe + pe) * t) % pe);
        prod *= local_prime_power(aa, bb, loc, loc.e, pe);
        if (prod == 0.0) return 0.0;
    }
    return prod;
}

CuspPairParams::CuspPairParams(int64_t N, int64_t c, int64_t m_, int64_t n_)
    : level(N), modulus(c), m(m_), n(n_) {
    if (N < 1 || c < 1) throw ModulusNotAllowed("cusp pair: level and modulus must be positive");
    if (std::gcd(c, N) != 1) throw ModulusNotAllowed("cusp pair: modulus must be coprime to level");
}

double kloosterman_cusp_pair(int64_t m, int64_t n, int64_t c, int64_t N) {
    CuspPairParams params(N, c, m, n);
    if (c == 1) return 1.0;
    int64_t nbar = mod_inverse(N % c, c);
    int64_t mm = m % c; if (mm < 0) mm += c;
    int64_t a = static_cast<int64_t>((static_cast<int128>(nbar) * mm) % c);
    return kloosterman_lookup(a, n, *kloosterman_row(c));
}

std::vector<KlooLemmaReport> check_kloo_lemma(int64_t m, int64_t n, int64_t c, int64_t p) {
    std::vector<KlooLemmaReport> out;
    int vp = 0;
    int64_t cc = c;
    while (cc % p == 0) { cc /= p; ++vp; }

    if (vp == 1) {
        KlooLemmaReport r;
        r.clause = 1;
        r.applicable = true;
        r.lhs = kloosterman(m, p * n, c);
        int64_t c1 = c / p;
        double eps = (m % p == 0) ? static_cast<double>(p - 1) : -1.0;
        int64_t pbar = c1 == 1 ? 0 : mod_inverse(p % c1, c1);
        int64_t mm = c1 == 1 ? 0 : ((m % c1) + c1) % c1;
        r.rhs = eps * (c1 == 1 ? 1.0 : kloosterman(static_cast<int64_t>((static_cast<int128>(pbar) * mm) % c1), n, c1));
        r.gap = std::fabs(r.lhs - r.rhs);
        out.push_back(r);
    }
    if (vp >= 2 && m % p != 0) {
        KlooLemmaReport r;
        r.clause = 2;
        r.applicable = true;
        r.lhs = kloosterman(m, p * n, c);
        r.rhs = 0.0;
        r.gap = std::fabs(r.lhs);
        out.push_back(r);
    }
    {
        KlooLemmaReport r;
        r.clause = 3;
        r.applicable = true;
        r.lhs = kloosterman(p * m, p * n, p * p * c);
        r.rhs = static_cast<double>(p) * kloosterman(m, n, p * c);
        r.gap = std::fabs(r.lhs - r.rhs);
        out.push_back(r);
    }
    if (out.empty()) {
        out.push_back(KlooLemmaReport{});  // inapplicable marker
    }
    return out;
}

double check_crt_multiplicativity(int64_t a, int64_t b, int64_t c1, int64_t c2) {
    if (std::gcd(c1, c2) != 1) throw NotCoprime("crt check: moduli must be coprime");
    double lhs = kloosterman(a, b, c1 * c2);
    double rhs;
    if (c1 == 1 || c2 == 1) {
        rhs = kloosterman(a, b, c1 * c2);
    } else {
        int64_t c2bar = mod_inverse(c2 % c1, c1);
        int64_t c1bar = mod_inverse(c1 % c2, c2);
        rhs = kloosterman(a * c2bar, b * c2bar, c1) * kloosterman(a * c1bar, b * c1bar, c2);
    }
    return std::fabs(lhs - rhs);
}

}  // namespace recip
