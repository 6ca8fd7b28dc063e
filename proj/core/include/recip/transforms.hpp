#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "recip/analysis.hpp"
#include "recip/common.hpp"

namespace recip {

// The three integral transforms: Kuznetsov weights phi_h, phi_+ and the
// reciprocity kernel Phi_{kappa,s}.

// phi_h(l) = int_0^inf J_{l-1}(x) phi(x) dx/x, l >= 2 even.
double phi_h(const TestFunction& fn, int l, double abs_tol = 1e-10);

// phi_+(t) = i/(2 sinh pi t) int (J_{2it} - J_{-2it}) phi(x) dx/x.
// The combination equals -2 Im J_{2it}, so the value is real by
// construction; t = 0 is evaluated at t = 1e-6 with one Richardson step.
double phi_plus(const TestFunction& fn, double t, double abs_tol = 1e-9);

// Parameters for Phi_{kappa,s}; the contour map records, per argument
// regime, the abscissa actually used (filled in by evaluation).
struct PhiTransformParams {
    const TestFunction* testfn = nullptr;
    int weight = 12;  // kappa
    cplx s;
    double first_pole() const;  // kappa + 1 - 2 sigma, nearest numerator pole
};

// Single-point evaluation of
//   Phi(x) = (1/2pi i) int_(xi) phi~(u) 2^{-u} [G((k+1)/2-s-u/2)/G((k-1)/2+s+u/2)]^2
//            (x/2)^{u+4s-2} du.
// If xi is NaN an abscissa is chosen automatically: the largest safe one for
// x <= 2, otherwise the best-conditioned one (deep negative contours are
// admissible analytically but lose all significance in double precision,
// so "as far left as possible" is bounded by a conditioning estimate).
// Returns the value; *used_xi / *tail report provenance.
cplx phi_cap(const PhiTransformParams& params, double x,
             double xi = std::numeric_limits<double>::quiet_NaN(),
             double* used_xi = nullptr, double* tail_estimate = nullptr);

// Dense interpolation cache: log-spaced nodes in the power-law region,
// uniform nodes through the oscillatory region, one Fourier-style contour
// sweep per abscissa. Values are complex for complex s (real s gives a real
// kernel, asserted by tests).
class PhiCache {
  public:
    PhiCache(const TestFunction& fn, int kappa, cplx s, double x_max = 600.0);

    cplx operator()(double x) const;        // 0 beyond x_max
    double abs_envelope(double x) const;    // rigorous |Phi(x)| bound, any x > 0
    double x_max() const { return x_max_; }
    cplx spectral_point() const { return s_; }

    // max |interpolated - direct| / scale over random probe points, filled
    // at construction; the build throws ContourTail if it exceeds 1e-7.
    double validation_gap() const { return validation_gap_; }
    const std::vector<std::pair<double, double>>& contour_zones() const { return zones_; }

  private:
    cplx s_;
    int kappa_;
    const TestFunction* fn_;
    double x_max_;
    double split_;  // log grid below, uniform grid above
    std::vector<double> xs_;
    std::vector<cplx> vals_;
    size_t n_log_;
    double ln_x0_, dln_, x_uniform0_, dx_;
    double validation_gap_ = 0.0;
    std::vector<std::pair<double, double>> zones_;  // (x threshold, xi used)
    // envelope data: candidate xi -> integral of |g| along the contour
    std::vector<std::pair<double, double>> envelope_;  // (xi, I(xi)/2pi * 2^{-(xi+4s-2)}... folded)
    friend struct PhiCacheTestAccess;
};

// Numerical admissibility certificate: fn(0) ~ 0 and fn, fn', fn'' bounded
// by C (1+x)^{-2-eps}; C is fitted and the tail decay exponent measured.
struct AdmissibilityReport {
    bool pass = false;
    double value_at_zero = 0.0;
    double fitted_constant = 0.0;      // C with eps = 0.1
    double fitted_decay_exponent = 0.0;  // slope of log|fn| on the tail
    double worst_x = 0.0;
    std::string failure;
};
AdmissibilityReport certify_admissible(const std::function<double(double)>& fn,
                                       double x_max = 100.0);

}  // namespace recip
