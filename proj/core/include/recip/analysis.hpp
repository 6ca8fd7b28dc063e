#pragma once

#include <functional>
#include <string>
#include <vector>

#include "recip/common.hpp"

namespace recip {

// ---- gamma family ----------------------------------------------------------

// Lanczos approximation with reflection for Re(z) < 1/2. Relative error
// ~1e-13 or better for |z| <= 200. Throws GammaPole at nonpositive integers.
cplx gamma(cplx z);
// Principal-branch log-gamma (Lanczos + reflection), continuous on the
// positive half plane; used where gamma over/underflows.
cplx log_gamma(cplx z);

// Upper incomplete gamma Gamma(a,x) for complex a and real x > 0; entire in
// a. Continued fraction for x >= Re(a)+1 or Re(a) <= 0.5, else the lower
// series. Absolute/relative error ~1e-13 in the engine's ranges.
cplx gamma_upper(cplx a, double x);

// ---- zeta ------------------------------------------------------------------

// Riemann zeta via the Cohen-Villegas-Zagier alternating-series
// acceleration; valid for Re(s) > 0, s != 1 (and away from the spurious
// zeros of 1-2^{1-s}, which the engine's spectral points never approach).
cplx zeta(cplx s);
// zeta_N(s) = zeta(s) * prod_{p | N} (1 - p^{-s})
cplx zeta_restricted(cplx s, int64_t N);

// ---- Bessel ----------------------------------------------------------------

// J_l(x) for integer order l >= 0, 0 <= x <= 1e4, via Miller's downward
// recurrence with the even-order normalization sum. Absolute error ~1e-13.
double bessel_j_int(int l, double x);
// All orders 0..lmax at once (same cost as one call).
std::vector<double> bessel_j_int_all(int lmax, double x);

// J_{2it}(x) by the ascending series; |t| <= 20, 0 < x <= 50.
cplx bessel_j_imag(double t, double x);

// ---- quadrature ------------------------------------------------------------

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]; absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double* err_est = nullptr);
cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 double abs_tol, double* err_est = nullptr);

// ---- vertical line integrals ------------------------------------------------

struct ContourSpec {
    double abscissa = 0.0;     // xi
    double half_height = 40.0; // T
    double step = 0.125;       // h
    double tail_estimate = 0.0;
};

// (1/2pi) int_{-T}^{T} f(xi + iv) dv by the trapezoid rule (the 1/(2pi i)
// times i dv Jacobian). Checks that |f| at the endpoints is consistent with
// the assumed decay and records a tail estimate; throws ContourTail when the
// integrand has visibly not decayed.
cplx vertical_line_integral(const std::function<cplx(cplx)>& f, ContourSpec& spec);

// Convenience driver: doubles T and halves h until the value is stable to
// abs_tol; returns the refined spec through *spec.
cplx vertical_line_integral_adaptive(const std::function<cplx(cplx)>& f, double xi,
                                     double abs_tol, ContourSpec* spec = nullptr);

// ---- admissible test functions ----------------------------------------------

struct TestFunction {
    std::string name;
    std::function<double(double)> evaluate;      // phi(x), x >= 0
    std::function<cplx(cplx)> mellin_closed;     // phi~(u) = int x^{u-1} phi dx
    int vanishing_order = 0;                     // J: phi^{(j)}(0) = 0 for j <= J
    double mellin_strip_left = 0.0;              // phi~ analytic for Re u > this
    double support_hint = 0.0;                   // phi негligible beyond this x
    double window_lo = 0.0, window_hi = 0.0;     // default argument window
};

// Registry fixed at startup: gauss13 phi(x) = x^13 exp(-x^2) and
// exp13 phi(x) = x^13 exp(-x); both have J = 12 and closed Mellin forms.
const TestFunction& test_function(const std::string& name);
std::vector<std::string> test_function_names();

// phi~(u) via the registered closed form; throws MellinStrip outside the
// analyticity strip.
cplx mellin(const TestFunction& fn, cplx u);

// Quadrature cross-check of the closed Mellin form (test oracle).
cplx mellin_by_quadrature(const TestFunction& fn, cplx u, double abs_tol = 1e-10);

}  // namespace recip
