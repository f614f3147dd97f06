#include "pinwheel/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pinwheel {

namespace {

void check(double nu, double x) {
  if (!bessel_order_supported(nu)) {
    throw OutOfRange("unsupported Bessel order " + std::to_string(nu));
  }
  if (!(x >= 0.0) || x > kBesselMaxArgument) {
    throw OutOfRange("Bessel argument " + std::to_string(x) + " outside [0, 1e4]");
  }
}

// sum_l (-1)^l Gamma(nu+1) / (l! Gamma(nu+l+1)) (x/2)^(2l)
long double normalized_series(long double nu, long double x) {
  const long double q = x * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int l = 1; l < 200; ++l) {
    term *= -q / (static_cast<long double>(l) * (nu + l));
    sum += term;
    if (std::fabs(term) < 1e-21L * std::fmax(1.0L, std::fabs(sum)) && l > q) break;
  }
  return sum;
}

}  // namespace

bool bessel_order_supported(double nu) {
  return nu == -0.5 || nu == 0.0 || nu == 0.5 || nu == 1.0 || nu == 1.5 || nu == 2.0;
}

double bessel_j_series(double nu, double x) {
  check(nu, x);
  if (x == 0.0) return nu == 0.0 ? 1.0 : (nu > 0.0 ? 0.0 : HUGE_VAL);
  const long double lx = x;
  const long double prefactor = std::pow(lx / 2.0L, static_cast<long double>(nu)) /
                                std::tgamma(static_cast<long double>(nu) + 1.0L);
  return static_cast<double>(prefactor * normalized_series(nu, lx));
}

double bessel_j_hankel(double nu, double x) {
  check(nu, x);
  if (x <= 0.0) throw OutOfRange("Hankel expansion needs x > 0");
  const long double mu = 4.0L * nu * nu;
  const long double lx = x;
  // a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! 8^k); P takes even k, Q odd k.
  long double p = 0.0L;
  long double q = 0.0L;
  long double a = 1.0L;
  long double previous = HUGE_VALL;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const long double odd = 2.0L * k - 1.0L;
      a *= (mu - odd * odd) / (8.0L * k * lx);
    }
    const long double size = std::fabs(a);
    if (size > previous) break;  // asymptotic series: stop at the smallest term
    const long double sign = (k / 2) % 2 == 0 ? 1.0L : -1.0L;
    if (k % 2 == 0) {
      p += sign * a;
    } else {
      q += sign * a;
    }
    if (size == 0.0L || size < 1e-21L) break;
    previous = size;
  }
  const long double chi = lx - (nu / 2.0L + 0.25L) * std::numbers::pi_v<long double>;
  return static_cast<double>(std::sqrt(2.0L / (std::numbers::pi_v<long double> * lx)) *
                             (p * std::cos(chi) - q * std::sin(chi)));
}

double bessel_j(double nu, double x) {
  check(nu, x);
  return x <= kBesselSeriesLimit ? bessel_j_series(nu, x) : bessel_j_hankel(nu, x);
}

double bessel_j_normalized(double nu, double x) {
  check(nu, x);
  if (x <= kBesselSeriesLimit) return static_cast<double>(normalized_series(nu, x));
  return std::tgamma(nu + 1.0) * bessel_j_hankel(nu, x) / std::pow(x / 2.0, nu);
}

}  // namespace pinwheel
