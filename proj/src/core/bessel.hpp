#ifndef DIRAC2D_BESSEL_HPP
#define DIRAC2D_BESSEL_HPP

#include <vector>

#include "types.hpp"

namespace dirac2d {

/// H_0^(1)(z) and H_1^(1)(z) evaluated together (they share all the work).
struct HankelPair {
    Complex h0{}, h1{};
};

/// Hankel functions of the first kind, orders 0 and 1, for complex z in the
/// closed upper half plane (small negative Im z is tolerated). Relative
/// accuracy ~1e-13 over 1e-8 <= |z| <= 1e3.
///
/// Method: power series for |z| <= 7; for 7 < |z| < 16.5 a Taylor
/// continuation of the Bessel ODE along the ray arg(z) = const, seeded by the
/// large-argument expansion at |z| = 17 (marching inward is the stable
/// direction for H^(1) when Im z >= 0); the large-argument expansion itself
/// for |z| >= 16.5.
///
/// Throws std::domain_error on z = 0 and std::range_error when the result
/// over/underflows (e.g. Im z > ~700).
HankelPair hankel1_pair(Complex z);

Complex hankel1(int order, Complex z);

/// J_0(z), J_1(z) for complex z. Power series where safe; elsewhere assembled
/// from H^(1)(z) and its Schwarz reflection (near-real z).
struct BesselJPair {
    Complex j0{}, j1{};
};
BesselJPair besselj01(Complex z);

/// J_0..J_nmax by Miller's backward recurrence (any complex z != 0).
std::vector<Complex> besselj_seq(Complex z, int nmax);

/// H^(1)_0..H^(1)_nmax by forward recurrence (stable since Y_n grows in n).
std::vector<Complex> hankel1_seq(Complex z, int nmax);

}  // namespace dirac2d

#endif
