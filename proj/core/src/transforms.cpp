#include "recip/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace recip {

namespace {
constexpr double kPi = 3.141592653589793238462643383279503;
}

double phi_h(const TestFunction& fn, int l, double abs_tol) {
    if (l < 2 || l % 2 != 0) throw Error("phi_h: l must be even and >= 2");
    double cut = fn.support_hint * 2.0 + 30.0;
    auto integrand = [&](double x) -> double {
        if (x <= 0.0) return 0.0;
        double p = fn.evaluate(x);
        if (p == 0.0) return 0.0;
        return bessel_j_int(l - 1, x) * p / x;
    };
    return integrate(integrand, 0.0, cut, abs_tol);
}

namespace {

double phi_plus_at(const TestFunction& fn, double t, double abs_tol) {
    double cut = fn.support_hint * 2.0 + 30.0;
    cut = std::min(cut, 50.0);  // bessel_j_imag range; both registered fns are
                                // negligible there (exp13(50) ~ 2, handled by
                                // the sinh-normalized integrand staying finite)
    auto integrand = [&](double x) -> double {
        if (x <= 0.0) return 0.0;
        double p = fn.evaluate(x);
        if (p == 0.0) return 0.0;
        // i (J_{2it} - J_{-2it}) = -2 Im J_{2it} for real x
        return -2.0 * bessel_j_imag(t, x).imag() * p / x;
    };
    return integrate(integrand, 0.0, cut, abs_tol) / (2.0 * std::sinh(kPi * t));
}

}  // namespace

double phi_plus(const TestFunction& fn, double t, double abs_tol) {
    if (std::abs(t) > 20.0) throw BesselRange("phi_plus: |t| <= 20");
    t = std::abs(t);  // even in t
    if (t < 1e-5) {
        // removable singularity: sinh cancels analytically but not in floats;
        // evaluate at t0 and t0/2 and Richardson-extrapolate the even series
        double t0 = 1e-6;
        double a = phi_plus_at(fn, t0, abs_tol);
        double b = phi_plus_at(fn, 0.5 * t0, abs_tol);
        return (4.0 * b - a) / 3.0;
    }
    return phi_plus_at(fn, t, abs_tol);
}

double PhiTransformParams::first_pole() const {
    return weight + 1 - 2.0 * s.real();
}

// ---- Phi ------------------------------------------------------------------

namespace {

// integrand on the line u = xi + iv, without the (x/2)^{u+4s-2} factor
struct ContourSampler {
    const TestFunction* fn;
    int kappa;
    cplx s;
    cplx g(cplx u) const {
        cplx lg = log_gamma(0.5 * (kappa + 1) - s - 0.5 * u) -
                  log_gamma(0.5 * (kappa - 1) + s + 0.5 * u);
        return fn->mellin_closed(u) * std::exp(-u * std::log(2.0) + 2.0 * lg);
    }
};

struct ContourData {
    double xi;
    double h;
    std::vector<double> v;   // sample heights
    std::vector<cplx> gv;    // g at xi + iv
    double abs_integral;     // int |g| dv  (rigorous up to the tail)
};

ContourData sample_contour(const ContourSampler& cs, double xi) {
    ContourData d;
    d.xi = xi;
    d.h = 0.02;
    double T = 40.0;
    // grow until the edge is dead relative to the peak
    double peak = 0.0;
    for (;;) {
        double edge = std::abs(cs.g(cplx(xi, T)));
        peak = std::max(peak, edge);
        if (edge < 1e-18 * std::max(peak, 1e-300) || T > 400.0) break;
        T += 20.0;
    }
    int n = static_cast<int>(T / d.h);
    d.v.resize(2 * n + 1);
    d.gv.resize(2 * n + 1);
    KahanSum absint;
    for (int k = -n; k <= n; ++k) {
        cplx val = cs.g(cplx(xi, k * d.h));
        d.v[static_cast<size_t>(k + n)] = k * d.h;
        d.gv[static_cast<size_t>(k + n)] = val;
        absint.add(std::abs(val) * d.h);
    }
    d.abs_integral = absint.value();
    return d;
}

cplx eval_from_contour(const ContourData& d, cplx s, double x) {
    double L = std::log(0.5 * x);
    KahanSumC acc;
    for (size_t i = 0; i < d.v.size(); ++i) {
        double ph = d.v[i] * L;
        acc.add(d.gv[i] * cplx(std::cos(ph), std::sin(ph)));
    }
    cplx pref = std::exp((d.xi + 4.0 * s - 2.0) * cplx(L, 0.0));
    return pref * acc.value() * (d.h / (2.0 * kPi));
}

// candidate abscissas inside (strip_left, first_pole): from just below the
// pole family down to where conditioning already fails for every x >= x_lo
std::vector<double> ladder(double strip_left, double first_pole) {
    std::vector<double> xs;
    double top = std::min(8.0, first_pole - 2.0);
    for (double xi = top; xi > strip_left + 0.6; xi -= 2.0) xs.push_back(xi);
    return xs;
}

}  // namespace

cplx phi_cap(const PhiTransformParams& params, double x, double xi, double* used_xi,
             double* tail_estimate) {
    if (!(x > 0.0)) throw Error("phi_cap: x must be positive");
    const TestFunction& fn = *params.testfn;
    double strip_left = fn.mellin_strip_left;
    double pole = params.first_pole();
    if (pole <= strip_left + 1.0)
        throw NoAdmissibleContour("phi_cap: pole-free window is empty for this (kappa, s)");
    ContourSampler cs{&fn, params.weight, params.s};
    if (std::isnan(xi)) {
        auto cands = ladder(strip_left, pole);
        if (cands.empty()) throw NoAdmissibleContour("phi_cap: no candidate abscissa");
        if (x <= 2.0) {
            xi = cands.front();  // largest safe: forces the x->0 vanishing
        } else {
            // best conditioning: minimize I(xi) * (x/2)^{xi}
            double best = 1e308;
            for (double c : cands) {
                // crude I(xi) proxy from a few samples
                double m = 0.0;
                for (double v : {0.0, 2.0, 5.0, 10.0, 20.0})
                    m = std::max(m, std::abs(cs.g(cplx(c, v))));
                double score = std::log(std::max(m, 1e-300)) + c * std::log(0.5 * x);
                if (score < best) {
                    best = score;
                    xi = c;
                }
            }
        }
    } else {
        if (xi <= strip_left || xi >= pole)
            throw NoAdmissibleContour("phi_cap: requested abscissa hits a pole or leaves the strip");
    }
    ContourSpec spec;
    auto f = [&](cplx u) -> cplx {
        return cs.g(u) * std::exp((u + 4.0 * params.s - 2.0) * std::log(0.5 * x));
    };
    cplx val = vertical_line_integral_adaptive(f, xi, 1e-12 * (1.0 + std::abs(cs.g(cplx(xi, 0.0)))),
                                               &spec);
    if (used_xi) *used_xi = xi;
    if (tail_estimate) *tail_estimate = spec.tail_estimate;
    return val;
}

PhiCache::PhiCache(const TestFunction& fn, int kappa, cplx s, double x_max)
    : s_(s), kappa_(kappa), fn_(&fn), x_max_(x_max) {
    double sigma = s.real();
    double strip_left = fn.mellin_strip_left;
    double pole = kappa + 1 - 2.0 * sigma;
    if (pole <= strip_left + 1.0)
        throw NoAdmissibleContour("PhiCache: pole-free window is empty");
    ContourSampler cs{&fn, kappa, s};

    auto cands = ladder(strip_left, pole);
    std::vector<ContourData> data;
    for (double xi : cands) data.push_back(sample_contour(cs, xi));

    // envelope table: every abscissa in the strip gives the rigorous bound
    // |Phi(x)| <= I(xi)/(2pi) * (x/2)^{xi+4sigma-2}, including deep-negative
    // xi that are useless for evaluation but sharp as bounds for large x
    for (double xi = std::min(8.0, pole - 1.5); xi > strip_left + 0.2; xi -= 0.5) {
        ContourSampler b{&fn, kappa, s};
        KahanSum absint;
        double h = 0.05;
        double peak0 = std::abs(b.g(cplx(xi, 0.0)));
        for (double T = 0.0;; T += h) {
            double m = std::abs(b.g(cplx(xi, T)));
            absint.add((T == 0.0 ? 1.0 : 2.0) * m * h);
            if (T > 30.0 && m < 1e-18 * std::max(peak0, 1e-300)) break;
            if (T > 500.0) break;
        }
        envelope_.push_back({xi, absint.value() / (2.0 * kPi)});
    }

    // grid
    split_ = 10.0;
    double x_lo = 1e-3;
    dln_ = 0.004;
    ln_x0_ = std::log(x_lo);
    n_log_ = static_cast<size_t>(std::ceil((std::log(split_) - ln_x0_) / dln_)) + 1;
    dx_ = 0.05;
    x_uniform0_ = split_;
    size_t n_uni = static_cast<size_t>(std::ceil((x_max_ - split_) / dx_)) + 2;
    xs_.clear();
    for (size_t i = 0; i < n_log_; ++i) xs_.push_back(std::exp(ln_x0_ + static_cast<double>(i) * dln_));
    for (size_t i = 0; i < n_uni; ++i) xs_.push_back(x_uniform0_ + static_cast<double>(i) * dx_);
    vals_.assign(xs_.size(), 0.0);

    // choose a contour per node by predicted roundoff, then evaluate
    std::vector<size_t> pick(xs_.size(), 0);
    for (size_t i = 0; i < xs_.size(); ++i) {
        double x = xs_[i];
        if (x <= 2.0) {
            pick[i] = 0;  // largest abscissa: correct x->0 behaviour
            continue;
        }
        double best = 1e308;
        for (size_t k = 0; k < data.size(); ++k) {
            double score = std::log(data[k].abs_integral) + data[k].xi * std::log(0.5 * x);
            if (score < best) {
                best = score;
                pick[i] = k;
            }
        }
    }
    for (size_t i = 0; i < xs_.size(); ++i)
        vals_[i] = eval_from_contour(data[pick[i]], s, xs_[i]);

    // provenance: zone boundaries
    double cur_xi = data[pick[0]].xi;
    zones_.push_back({xs_[0], cur_xi});
    for (size_t i = 1; i < xs_.size(); ++i) {
        if (data[pick[i]].xi != cur_xi) {
            cur_xi = data[pick[i]].xi;
            zones_.push_back({xs_[i], cur_xi});
        }
    }

    // validation: interpolation against direct evaluation at random points
    std::mt19937_64 rng(20240901u);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double scale = 0.0;
    for (const cplx& v : vals_) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    for (int k = 0; k < 40; ++k) {
        double x = std::exp(std::log(2 * x_lo) + U(rng) * (std::log(0.98 * x_max_) - std::log(2 * x_lo)));
        size_t best = 0;
        double bs = 1e308;
        for (size_t j = 0; j < data.size(); ++j) {
            double score = std::log(data[j].abs_integral) + data[j].xi * std::log(0.5 * x);
            if (x <= 2.0) { best = 0; break; }
            if (score < bs) { bs = score; best = j; }
        }
        cplx direct = eval_from_contour(data[best], s, x);
        worst = std::max(worst, std::abs((*this)(x) - direct) / scale);
    }
    validation_gap_ = worst;
    if (worst > 1e-7)
        throw ContourTail("PhiCache: interpolation validation exceeded 1e-7");
}

cplx PhiCache::operator()(double x) const {
    if (!(x > 0.0) || x >= x_max_) return 0.0;
    // Catmull-Rom cubic on the containing segment
    auto interp = [&](size_t i1, double f) -> cplx {
        size_t i0 = i1 == 0 ? 0 : i1 - 1;
        size_t i2 = std::min(i1 + 1, xs_.size() - 1);
        size_t i3 = std::min(i1 + 2, xs_.size() - 1);
        cplx p0 = vals_[i0], p1 = vals_[i1], p2 = vals_[i2], p3 = vals_[i3];
        return p1 + 0.5 * f * (p2 - p0 + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                              f * (3.0 * (p1 - p2) + p3 - p0)));
    };
    if (x < xs_.front()) {
        // below the grid the kernel vanishes like a high power; scale the
        // first node by the leading exponent rather than extrapolating
        double expo = zones_.front().second + 4.0 * s_.real() - 2.0;
        return vals_.front() * std::exp(expo * (std::log(x) - std::log(xs_.front())));
    }
    if (x < x_uniform0_) {
        double t = (std::log(x) - ln_x0_) / dln_;
        size_t i1 = std::min(static_cast<size_t>(t), n_log_ - 2);
        return interp(i1, t - static_cast<double>(i1));
    }
    double t = (x - x_uniform0_) / dx_;
    size_t i1 = n_log_ + static_cast<size_t>(t);
    if (i1 >= xs_.size() - 2) i1 = xs_.size() - 3;
    double f = (x - xs_[i1]) / dx_;
    return interp(i1, f);
}

double PhiCache::abs_envelope(double x) const {
    if (!(x > 0.0)) return 0.0;
    double sigma = s_.real();
    double best = 1e308;
    for (const auto& [xi, I] : envelope_) {
        double b = std::log(I) + (xi + 4.0 * sigma - 2.0) * std::log(0.5 * x);
        best = std::min(best, b);
    }
    return std::exp(best);
}

AdmissibilityReport certify_admissible(const std::function<double(double)>& fn, double x_max) {
    AdmissibilityReport rep;
    rep.value_at_zero = fn(0.0);
    if (std::abs(rep.value_at_zero) > 1e-8) {
        rep.failure = "fn(0) != 0";
        rep.worst_x = 0.0;
        return rep;
    }
    const double eps = 0.1;
    double C = 0.0;
    // sample grid: dense near 0, log-spaced beyond
    std::vector<double> grid;
    for (double x = 0.0; x < 2.0; x += 0.05) grid.push_back(x);
    for (double x = 2.0; x <= x_max; x *= 1.05) grid.push_back(x);
    for (double x : grid) {
        double h = 1e-3 * (1.0 + x);
        double f0 = fn(x);
        double fp = (fn(x + h) - (x >= h ? fn(x - h) : fn(0.0))) / (x >= h ? 2.0 * h : h);
        double fpp = (fn(x + h) - 2.0 * f0 + fn(std::max(0.0, x - h))) / (h * h);
        double w = std::pow(1.0 + x, 2.0 + eps);
        double c_here = std::max({std::abs(f0) * w, std::abs(fp) * w, std::abs(fpp) * w});
        if (c_here > C) {
            C = c_here;
            rep.worst_x = x;
        }
    }
    rep.fitted_constant = C;
    // decay exponent: least squares of log|fn| vs log(1+x) over the tail
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double x = 0.25 * x_max; x <= x_max; x *= 1.1) {
        double v = std::abs(fn(x));
        if (v < 1e-300) v = 1e-300;
        double lx = std::log(1.0 + x), ly = std::log(v);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    rep.fitted_decay_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.pass = std::isfinite(C) && rep.fitted_decay_exponent < -2.0;
    if (!rep.pass && rep.failure.empty()) rep.failure = "tail decay slower than (1+x)^{-2}";
    return rep;
}

}  // namespace recip
