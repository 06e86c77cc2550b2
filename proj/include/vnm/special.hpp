#pragma once

namespace vnm {

/// Modified Bessel function of the first kind, order zero.
double bessel_i0(double x);

/// exp(-|x|) I0(x); finite for all x.
double bessel_i0_scaled(double x);

}  // namespace vnm
