#pragma once

// Bessel functions of the first kind for the half-integer orders needed by
// radial Fourier transforms in dimensions 1 to 5.

#include <stdexcept>

namespace pinwheel {

class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Largest argument accepted by bessel_j.
inline constexpr double kBesselMaxArgument = 1.0e4;
/// Crossover from the power series to the Hankel expansion.
inline constexpr double kBesselSeriesLimit = 12.0;

/// True for nu in {-1/2, 0, 1/2, 1, 3/2, 2}.
bool bessel_order_supported(double nu);

/// J_nu(x) for 0 <= x <= 1e4. Throws OutOfRange otherwise.
double bessel_j(double nu, double x);

/// The two branches, exposed for testing near the crossover.
double bessel_j_series(double nu, double x);
double bessel_j_hankel(double nu, double x);

/// Gamma(nu+1) J_nu(x) / (x/2)^nu, which tends to 1 as x -> 0.
double bessel_j_normalized(double nu, double x);

}  // namespace pinwheel
