#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace recip {

using cplx = std::complex<double>;
using int128 = __int128;

// ---- error taxonomy ----------------------------------------------------
// Every failure mode named in the module contracts gets its own type so
// callers can discriminate without string matching.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define RECIP_DEFINE_ERROR(name)                  \
    struct name : Error {                         \
        using Error::Error;                       \
    }

RECIP_DEFINE_ERROR(NotCoprime);
RECIP_DEFINE_ERROR(RowTooLarge);
RECIP_DEFINE_ERROR(ModulusNotAllowed);
RECIP_DEFINE_ERROR(UnsupportedWeight);
RECIP_DEFINE_ERROR(NeedsWidening);
RECIP_DEFINE_ERROR(GammaPole);
RECIP_DEFINE_ERROR(ZetaPole);
RECIP_DEFINE_ERROR(BesselRange);
RECIP_DEFINE_ERROR(MellinStrip);
RECIP_DEFINE_ERROR(ContourTail);
RECIP_DEFINE_ERROR(NoAdmissibleContour);
RECIP_DEFINE_ERROR(DirectSeriesDiverges);
RECIP_DEFINE_ERROR(ContinuationTail);
RECIP_DEFINE_ERROR(SeriesDiverges);
RECIP_DEFINE_ERROR(EqualPrimes);
RECIP_DEFINE_ERROR(OutsideHalfPlane);
RECIP_DEFINE_ERROR(ConfigError);

#undef RECIP_DEFINE_ERROR

// ---- compensated summation ----------------------------------------------

class KahanSum {
  public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class KahanSumC {
  public:
    void add(cplx z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

  private:
    KahanSum re_, im_;
};

// ---- misc ----------------------------------------------------------------

std::string to_string_int128(int128 v);

// Parse "a+bi" style complex literals ("1.5", "1.4+0.3i", "-2i", "i").
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

inline double rel_gap_of(cplx lhs, cplx rhs) {
    double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0) return 0.0;
    return std::abs(lhs - rhs) / scale;
}

}  // namespace recip
