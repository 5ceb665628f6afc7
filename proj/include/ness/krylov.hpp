// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "ness/types.hpp"

namespace ness {

using MatVec = std::function<void(const Vec& in, Vec& out)>;

struct ExpmvOptions {
    int krylov_dim = 30;
    double rtol = 1e-9;
    double atol = 1e-12;
    int max_steps = 200000;
};

// w = exp(t A) v by adaptive Krylov (Arnoldi) steps with a posteriori error control.
Vec expmv(const MatVec& A, double anorm, const Vec& v, double t, const ExpmvOptions& opt = {});

// Infinity norm of a sparse matrix.
double norm_inf(const SpMat& A);

} // namespace ness
