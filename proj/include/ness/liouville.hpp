// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "ness/generators.hpp"
#include "ness/krylov.hpp"

namespace ness {

// Column stacking: vec([[a,b],[c,d]]) = (a,c,b,d).
Vec vectorize(const Mat& rho);
Mat devectorize(const Vec& v);

// vec(L(rho)) = Lhat vec(rho), with vec(A X B) = (B^T kron A) vec(X).
SpMat liouvillian(const GeneratorBundle& g);

// Superoperator of the channels (and corrections) of one bath.
SpMat bath_superoperator(const GeneratorBundle& g, int bath);

// Sum over channels of (i w)^k rate phase (conj(B) kron A): k-th chi-derivative of the tilted generator.
SpMat jump_derivative(const GeneratorBundle& g, const Counter& c, int k);

// Direct action without vectorization.
Mat apply(const GeneratorBundle& g, const Mat& rho);
Mat apply_bath(const GeneratorBundle& g, int bath, const Mat& rho);

enum class SteadyMethod { LU, Iterative, Variational };

struct SteadyOptions {
    SteadyMethod method = SteadyMethod::LU;
    bool check_uniqueness = true;
    bool compute_gap = false;
    double tol = 1e-12;
};

struct SteadyState {
    Mat rho;
    double residual = 0.0;
    std::optional<double> gap;
};

SteadyState steady_state(const SpMat& L, const SteadyOptions& opt = {});
SteadyState steady_state(const GeneratorBundle& g, const SteadyOptions& opt = {});

// Solve L x = rhs with tr(devec(x)) = trace_value; rhs must have zero trace.
class SingularSolver {
public:
    explicit SingularSolver(const SpMat& L);
    Vec solve(const Vec& rhs, cplx trace_value) const;
    Eigen::Index dim() const { return d_; }

private:
    Eigen::Index d_;
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
};

struct SpectrumResult {
    Vec values;                // sorted by decreasing real part
    std::optional<Mat> right;  // columns x_a
    std::optional<Mat> left;   // columns y_a with y_a^dag x_b = delta_ab
    bool purely_imaginary_flag = false;
};

// k <= 0: full spectrum (d^2 <= 4096). Otherwise k rapidities closest to zero.
SpectrumResult spectrum(const SpMat& L, int k = 0, bool vectors = false);

struct EvolveOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    bool spectral = false;
};
std::vector<Mat> evolve(const SpMat& L, const Mat& rho0, const std::vector<double>& times,
                        const EvolveOptions& opt = {});

// rho_0 and corrections rho_1..rho_n of the steady state of L0 + mu L1.
std::vector<Mat> perturbative_steady(const SpMat& L0, const SpMat& L1, int order);

struct Flow {
    double value;
    bool conserved;  // [H, O] = 0
};
Flow dissipative_current(const Mat& rho, const GeneratorBundle& g, int bath, const SpMat& O);

// -i <[H_bond, O_k]>; rejects bonds with [H_bond, O_k + O_{k+1}] != 0.
double bond_current(const Mat& rho, const SpMat& H_bond, const SpMat& O_k, const SpMat& O_k1);

enum class EntropyMode { Global, Local };
double entropy_production(const Mat& rho, const GeneratorBundle& g, EntropyMode mode,
                          bool check_mode = true);

double expect(const Mat& rho, const SpMat& O);
double trace_distance(const Mat& a, const Mat& b);

} // namespace ness
