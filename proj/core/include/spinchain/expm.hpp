#pragma once

#include "spinchain/types.hpp"

namespace spinchain {

/// Matrix exponential by scaling and squaring with a diagonal Pade approximant whose order
/// (3, 5, 7, 9 or 13) is picked from the 1-norm of the argument.
CMatrix expm(const CMatrix& a);

/// exp(-i h dt) for real symmetric h, through its eigendecomposition.
CMatrix expm_hermitian(const RMatrix& h, double dt);

enum class ExpmMethod { Pade, Eigen };

/// exp(-i h dt) by the chosen method.
CMatrix unitary_step(const RMatrix& h, double dt, ExpmMethod method = ExpmMethod::Pade);

}  // namespace spinchain
