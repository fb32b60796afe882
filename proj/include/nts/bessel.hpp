#ifndef NTS_BESSEL_HPP
#define NTS_BESSEL_HPP

namespace nts {

// Modified Bessel function of the second kind K_nu(tau), nu > 0, tau > 0.
// With scaled = true returns e^tau * K_nu(tau), which stays representable
// for large tau where K_nu itself underflows.
//
// Half-integer orders use the closed forms (exact up to rounding); other
// real orders are evaluated by adaptive quadrature of the integral
// representation K_nu(tau) = int_0^inf cosh(nu*u) e^{-tau*cosh(u)} du.
double bessel_k(double nu, double tau, bool scaled = false);

inline double bessel_k_scaled(double nu, double tau) { return bessel_k(nu, tau, true); }

}  // namespace nts

#endif
