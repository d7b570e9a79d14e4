#ifndef SYNTHFORGE_NORMAL_HPP
#define SYNTHFORGE_NORMAL_HPP

namespace synthforge {

// Standard normal CDF via erfc; accurate over the full double range.
double normalCdf(double x);

// Inverse standard normal CDF. Rational approximation refined with one
// Halley step; absolute error well below 1e-9 on (0,1).
double normalQuantile(double p);

double normalPdf(double x);

}  // namespace synthforge

#endif
