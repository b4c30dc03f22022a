#pragma once

#include "rmt/specfun.hpp"
#include "rmt/types.hpp"

namespace rmt {

// Expectation D_N(z, w*) = < det(z - J) det(w* - J*) > as a function of x = z w*.
struct CharPolyValue {
  Complex raw;         // D_N(z, w*); inf when outside double range (see representable)
  Complex normalized;  // D_N / D_N(0, 0); inf when outside double range
  double log_scale;    // log |D_N(z, w*)|, always finite unless D_N = 0
  Complex reduced;     // e^{-c x} D_N / D_N(0,0), c = 1 for A and 2 otherwise
  bool representable;  // raw and normalized both finite
};

// D_N(0, 0): N!, N! (N+1) / 2^N, (2N)! / 4^N. Throws std::overflow_error when
// the value leaves double range; log_dn_origin never overflows.
double dn_origin(EnsembleClass cls, int n);
double log_dn_origin(EnsembleClass cls, int n);

CharPolyValue dn_pair(EnsembleClass cls, int n, Complex x);

// f_N(x) = e^{2x} sum_j N!/j! (4x)^{N-j} Gamma(2j+1, 2x), evaluated through
// truncated exponentials; f_N = 4^N D_N^{AII}.
Complex f_n_sum(int n, Complex x);
Complex log_f_n_sum(int n, Complex x);

// f_N(x) = int_0^inf int_0^inf e^{-u-v} (4 x v + (2x + u)^2)^N du dv by tensor
// Gauss-Laguerre; nodes double from 8 until the relative change is < 1e-10.
double f_n_quad(int n, double x);

// Rescaled pair value e^{-d_N r^2} D_N(sqrt(d_N) s z, sqrt(d_N) s w*) / D_N(0,0) at |z w*| = r^2.
double rescaled_f(EnsembleClass cls, int n, double r);

// |F' - ((2N+1)/(2x) - 1) F + Gamma(2N+2, 2x) / (2x Gamma(2N+1))| with
// F(x) = e^{-2x} f_N(x) / (2N)!, F' by term-wise differentiation.
double ode_residual(int n, double x);

}  // namespace rmt
