#include "recip/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace recip {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

// Lanczos g = 607/128, 15 terms (Godfrey's coefficients; ~15 digits).
constexpr double kLanczosG = 4.7421875;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

bool near_nonpositive_integer(cplx z, double tol = 1e-13) {
    if (z.real() > 0.5) return false;
    double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) < tol && std::abs(z.imag()) < tol;
}

cplx lanczos_log_gamma_pos(cplx z) {
    // requires Re(z) >= 0.5
    cplx acc = kLanczos[0];
    for (size_t k = 1; k < kLanczos.size(); ++k) acc += kLanczos[k] / (z + static_cast<double>(k - 1));
    cplx t = z + (kLanczosG - 0.5);
    return 0.5 * std::log(2.0 * kPi) + (z - 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

cplx log_gamma(cplx z) {
    if (near_nonpositive_integer(z)) throw GammaPole("log_gamma: pole at nonpositive integer");
    if (z.real() >= 0.5) return lanczos_log_gamma_pos(z);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z); keep the log branch
    // continuous enough for our uses (we only exponentiate or difference it).
    cplx lg = std::log(kPi) - std::log(std::sin(kPi * z)) - lanczos_log_gamma_pos(1.0 - z);
    return lg;
}

cplx gamma(cplx z) {
    if (near_nonpositive_integer(z)) throw GammaPole("gamma: pole at nonpositive integer");
    if (z.real() >= 0.5) return std::exp(lanczos_log_gamma_pos(z));
    return kPi / (std::sin(kPi * z) * std::exp(lanczos_log_gamma_pos(1.0 - z)));
}

cplx gamma_upper(cplx a, double x) {
    if (!(x > 0.0)) throw Error("gamma_upper: x must be positive");
    bool use_cf = (x >= a.real() + 1.0) || (a.real() <= 0.5);
    if (use_cf) {
        // Legendre continued fraction, modified Lentz.
        const double tiny = 1e-290;
        cplx b = x + 1.0 - a;
        cplx c = 1.0 / tiny;
        cplx d = 1.0 / b;
        cplx h = d;
        for (int i = 1; i < 20000; ++i) {
            cplx an = -static_cast<double>(i) * (static_cast<double>(i) - a);
            b += 2.0;
            d = an * d + b;
            if (std::abs(d) < tiny) d = tiny;
            c = b + an / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            cplx del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < 1e-16) break;
        }
        return std::exp(-x + a * std::log(x)) * h;
    }
    // lower series: gamma(a,x) = x^a e^{-x} sum_k x^k / (a (a+1) ... (a+k))
    cplx sum = 1.0 / a;
    cplx term = sum;
    for (int k = 1; k < 10000; ++k) {
        term *= x / (a + static_cast<double>(k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    cplx lower = std::exp(-x + a * std::log(x)) * sum;
    return gamma(a) - lower;
}

// ---- zeta -------------------------------------------------------------------

cplx zeta(cplx s) {
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-12) throw ZetaPole("zeta: pole at s=1");
    if (s.real() <= 0.0) throw Error("zeta: implemented for Re(s) > 0 only");
    cplx denom = 1.0 - std::exp((1.0 - s) * std::log(2.0));
    if (std::abs(denom) < 1e-6)
        throw Error("zeta: too close to a zero of 1-2^{1-s}; unsupported point");
    // Cohen-Villegas-Zagier acceleration of eta(s)
    int n = static_cast<int>(30 + 1.1 * std::abs(s.imag())) + 10;
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d;
    cplx sum = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        sum += c * std::exp(-s * std::log(static_cast<double>(k + 1)));
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
    }
    return sum / (d * denom);
}

cplx zeta_restricted(cplx s, int64_t N) {
    cplx z = zeta(s);
    if (N > 1) {
        int64_t n = N;
        for (int64_t p = 2; p * p <= n; ++p) {
            if (n % p != 0) continue;
            z *= 1.0 - std::exp(-s * std::log(static_cast<double>(p)));
            while (n % p == 0) n /= p;
        }
        if (n > 1) z *= 1.0 - std::exp(-s * std::log(static_cast<double>(n)));
    }
    return z;
}

// ---- Bessel -----------------------------------------------------------------

std::vector<double> bessel_j_int_all(int lmax, double x) {
    if (x < 0.0 || x > 1e4) throw BesselRange("bessel_j_int: x out of range [0, 1e4]");
    std::vector<double> out(static_cast<size_t>(lmax + 1), 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    // Miller's algorithm: downward recurrence from well above both the order
    // and the turning point, normalized by J_0 + 2 sum J_{2k} = 1.
    int start = static_cast<int>(std::max<double>(lmax, x) + 15.0 +
                                 8.0 * std::pow(std::max(x, 1.0), 1.0 / 3.0));
    start += start % 2;
    double jp = 0.0, j = 1e-290, norm = 0.0;
    for (int l = start; l >= 1; --l) {
        double jm = (2.0 * l / x) * j - jp;
        jp = j;
        j = jm;
        if (l - 1 <= lmax) out[static_cast<size_t>(l - 1)] = j;
        if ((l - 1) % 2 == 0 && l - 1 > 0) norm += 2.0 * j;
        if (std::abs(j) > 1e250) {  // rescale
            double f = 1e-250;
            j *= f; jp *= f; norm *= f;
            for (auto& v : out) v *= f;
        }
    }
    norm += j;  // J_0 contribution
    for (auto& v : out) v /= norm;
    return out;
}

double bessel_j_int(int l, double x) {
    if (l < 0) throw BesselRange("bessel_j_int: order must be >= 0");
    return bessel_j_int_all(l, x)[static_cast<size_t>(l)];
}

cplx bessel_j_imag(double t, double x) {
    if (std::abs(t) > 20.0 || x <= 0.0 || x > 50.0)
        throw BesselRange("bessel_j_imag: need |t| <= 20 and 0 < x <= 50");
    // ascending series J_nu(x) = sum_k (-1)^k (x/2)^{nu+2k} / (k! Gamma(nu+k+1))
    cplx nu(0.0, 2.0 * t);
    double lx = std::log(0.5 * x);
    cplx ginv = 1.0 / gamma(nu + 1.0);  // 1/Gamma(nu+k+1), updated per term
    double x24 = 0.25 * x * x;
    cplx term = std::exp(nu * lx) * ginv;
    KahanSumC acc;
    acc.add(term);
    for (int k = 1; k < 400; ++k) {
        term *= -x24 / (static_cast<double>(k) * (nu + static_cast<double>(k)));
        acc.add(term);
        if (std::abs(term) < 1e-17 * (1.0 + std::abs(acc.value())) && k > x) break;
    }
    return acc.value();
}

// ---- adaptive Gauss-Kronrod ---------------------------------------------------

namespace {

// G7-K15 nodes/weights on [-1,1]
constexpr std::array<double, 8> kKX = {
    0.000000000000000000000000000000000, 0.207784955007898467600689403773245,
    0.405845151377397166906606412076961, 0.586087235467691130294144838258730,
    0.741531185599394439863864773280788, 0.864864423359769072789712788640926,
    0.949107912342758524526189684047851, 0.991455371120812639206854697526329};
constexpr std::array<double, 8> kKW = {
    0.209482141084727828012999174891714, 0.204432940075298892414161999234649,
    0.190350578064785409913256402421014, 0.169004726639267902826583426598550,
    0.140653259715525918745189590510238, 0.104790010322250183839876322541518,
    0.063092092629978553290700663189204, 0.022935322010529224963732008058970};
constexpr std::array<double, 4> kGW = {
    0.417959183673469387755102040816327, 0.381830050505118944950369775488975,
    0.279705391489276667901467771423780, 0.129484966168869693270611432679082};

template <typename V>
void gk15(const std::function<V(double)>& f, double a, double b, V* result, double* err) {
    double hlgth = 0.5 * (b - a);
    double centr = 0.5 * (a + b);
    V fc = f(centr);
    V resk = fc * kKW[0];
    V resg = fc * kGW[0];
    for (int j = 1; j < 8; ++j) {
        double absc = hlgth * kKX[j];
        V f1 = f(centr - absc);
        V f2 = f(centr + absc);
        resk += (f1 + f2) * kKW[j];
        if (j % 2 == 0) resg += (f1 + f2) * kGW[j / 2];
    }
    *result = resk * hlgth;
    *err = std::abs(resk - resg) * std::abs(hlgth);
}

template <typename V>
V adaptive_quad(const std::function<V(double)>& f, double a, double b, double tol,
                double* err_out, int depth = 0) {
    V whole;
    double err;
    gk15(f, a, b, &whole, &err);
    if (err < tol || depth > 28) {
        if (err_out) *err_out += err;
        return whole;
    }
    double mid = 0.5 * (a + b);
    return adaptive_quad(f, a, mid, 0.5 * tol, err_out, depth + 1) +
           adaptive_quad(f, mid, b, 0.5 * tol, err_out, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double* err_est) {
    double err = 0.0;
    double v = adaptive_quad<double>(f, a, b, abs_tol, &err);
    if (err_est) *err_est = err;
    return v;
}

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                 double* err_est) {
    double err = 0.0;
    cplx v = adaptive_quad<cplx>(f, a, b, abs_tol, &err);
    if (err_est) *err_est = err;
    return v;
}

// ---- vertical line integrals ---------------------------------------------------

cplx vertical_line_integral(const std::function<cplx(cplx)>& f, ContourSpec& spec) {
    double T = spec.half_height, h = spec.step, xi = spec.abscissa;
    int n = static_cast<int>(std::floor(T / h));
    KahanSumC acc;
    double edge = 0.0;
    for (int k = -n; k <= n; ++k) {
        cplx val = f(cplx(xi, k * h));
        if (std::abs(k) == n) {
            edge = std::max(edge, std::abs(val));
            val *= 0.5;  // trapezoid endpoints
        }
        acc.add(val);
    }
    cplx result = acc.value() * (h / (2.0 * kPi));
    // geometric tail from the decay rate observed just past the endpoints
    spec.tail_estimate = edge * h;
    if (edge > 0.0) {
        double probe = std::max(std::abs(f(cplx(xi, (n + 4) * h))),
                                std::abs(f(cplx(xi, -(n + 4) * h))));
        if (probe < edge) {
            double rate = std::pow(probe / edge, 1.0 / 4.0);
            spec.tail_estimate = edge * h * rate / std::max(1e-16, 1.0 - rate);
        } else if (edge * h > 1e-13 * std::abs(result) + 1e-300) {
            throw ContourTail(
                "vertical_line_integral: integrand not decaying at the truncation height");
        }
    }
    return result;
}

cplx vertical_line_integral_adaptive(const std::function<cplx(cplx)>& f, double xi,
                                     double abs_tol, ContourSpec* spec_out) {
    ContourSpec spec;
    spec.abscissa = xi;
    spec.step = 0.25;
    spec.half_height = 40.0;
    // grow T until the edge samples are negligible
    for (int i = 0; i < 8; ++i) {
        double edge = std::max(std::abs(f(cplx(xi, spec.half_height))),
                               std::abs(f(cplx(xi, -spec.half_height))));
        if (edge * spec.step < 0.01 * abs_tol) break;
        spec.half_height *= 1.6;
    }
    cplx prev = vertical_line_integral(f, spec);
    for (int i = 0; i < 6; ++i) {
        ContourSpec finer = spec;
        finer.step = 0.5 * spec.step;
        cplx cur = vertical_line_integral(f, finer);
        bool done = std::abs(cur - prev) < abs_tol;
        prev = cur;
        spec = finer;
        if (done) break;
    }
    if (spec_out) *spec_out = spec;
    return prev;
}

// ---- test functions -------------------------------------------------------------

namespace {

std::map<std::string, TestFunction> build_registry() {
    std::map<std::string, TestFunction> reg;
    {
        TestFunction g;
        g.name = "gauss13";
        g.evaluate = [](double x) { return std::pow(x, 13) * std::exp(-x * x); };
        // int x^{u+12} e^{-x^2} dx = Gamma((u+13)/2)/2
        g.mellin_closed = [](cplx u) { return 0.5 * std::exp(log_gamma(0.5 * (u + 13.0))); };
        g.vanishing_order = 12;
        g.mellin_strip_left = -13.0;
        g.support_hint = 14.0;
        g.window_lo = 1e-2;
        g.window_hi = 12.0;
        reg[g.name] = g;
    }
    {
        TestFunction e;
        e.name = "exp13";
        e.evaluate = [](double x) { return std::pow(x, 13) * std::exp(-x); };
        // int x^{u+12} e^{-x} dx = Gamma(u+13)
        e.mellin_closed = [](cplx u) { return std::exp(log_gamma(u + 13.0)); };
        e.vanishing_order = 12;
        e.mellin_strip_left = -13.0;
        e.support_hint = 70.0;
        e.window_lo = 1e-2;
        e.window_hi = 60.0;
        reg[e.name] = e;
    }
    return reg;
}

const std::map<std::string, TestFunction>& registry() {
    static const auto reg = build_registry();
    return reg;
}

}  // namespace

const TestFunction& test_function(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) throw ConfigError("unknown test function: " + name);
    return it->second;
}

std::vector<std::string> test_function_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : registry()) names.push_back(k);
    return names;
}

cplx mellin(const TestFunction& fn, cplx u) {
    if (u.real() <= fn.mellin_strip_left)
        throw MellinStrip("mellin: Re(u) left of the analyticity strip");
    return fn.mellin_closed(u);
}

cplx mellin_by_quadrature(const TestFunction& fn, cplx u, double abs_tol) {
    if (u.real() <= fn.mellin_strip_left)
        throw MellinStrip("mellin_by_quadrature: Re(u) left of the analyticity strip");
    double cut = fn.support_hint * 3.0 + 40.0;
    auto integrand = [&](double x) -> cplx {
        if (x <= 0.0) return 0.0;
        return std::exp((u - 1.0) * std::log(x)) * fn.evaluate(x);
    };
    return integrate_c(integrand, 0.0, cut, abs_tol);
}

}  // namespace recip
