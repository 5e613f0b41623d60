#ifndef DIRAC2D_MUELLER_HPP
#define DIRAC2D_MUELLER_HPP

#include "fields.hpp"
#include "operators.hpp"

namespace dirac2d {

/// Classical two-density transmission system in the Cauchy data
/// (phi, psi) = (u+, du+/dnu) of the interior field, used as an independent
/// cross-check of the four-density system where arg(k+) = 0:
///
///   [ I + D+ - D-              S-/ehat - S+            ] [phi]   [u0    ]
///   [ T+ - T-     (1+1/ehat)/2 I + S'-/ehat - S'+      ] [psi] = [dnu u0]
///
/// with G_k = Phi_k/2 and the incident trace identities folding the RHS.
struct MuellerSystem {
    std::shared_ptr<const Mesh> mesh;
    Complex k_minus, k_plus, eps_hat;
    Matrix A;  // 2N x 2N
};

MuellerSystem assemble_mueller(Complex k_minus, Complex k_hat, Complex eps_hat,
                               std::shared_ptr<const Mesh> mesh);

Vector mueller_rhs_plane_wave(const MuellerSystem& sys, Vec2 direction);

/// Fields from the solved Cauchy data:
///   U+ = S+ psi - W+ phi (interior),
///   U- = W-(phi - u0) - S-(psi/ehat - dnu u0) (exterior, scattered).
std::vector<Complex> mueller_eval_U(const MuellerSystem& sys, const Vector& phi_psi,
                                    Vec2 direction, const std::vector<Vec2>& points,
                                    Region region);

}  // namespace dirac2d

#endif
