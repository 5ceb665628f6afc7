// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ness/types.hpp"

namespace ness {

enum class Family { XXZ, XYZ, TightBinding };
enum class Statistics { Fermion, Boson };

inline constexpr double kGolden = 1.6180339887498948482;

struct PotentialSpec {
    enum class Kind { Uniform, Disorder, AAH, Fibonacci };
    Kind kind = Kind::Uniform;
    double h = 0.0;          // uniform value, disorder half-width, Fibonacci magnitude
    std::uint64_t seed = 0;  // disorder only
    double lambda = 0.0;     // AAH
    double alphaQ = 0.0;
    double betaQ = kGolden;
    double phi = 0.0;
};

struct HamiltonianSpec {
    Family family = Family::XXZ;
    int L = 2;
    double J = 1.0;
    double Delta = 0.0;
    double Jx = 1.0, Jy = 1.0, Jz = 0.0;
    Statistics statistics = Statistics::Fermion;  // TightBinding only
    std::optional<Mat> hopping;                   // TightBinding: full single-particle matrix overriding J
    PotentialSpec potential;
    int boson_cutoff = 2;                         // max occupation per site
    Eigen::Index max_dim = Eigen::Index(1) << 14;
};

enum class SiteOp { X, Y, Z, Plus, Minus, Number, Annihilate, Create };

// Local Hilbert-space dimension (2, or cutoff+1 for bosons).
int local_dim(const HamiltonianSpec& spec);
Eigen::Index hilbert_dim(const HamiltonianSpec& spec);
bool is_bosonic(const HamiltonianSpec& spec);
bool is_spin(const HamiltonianSpec& spec);

RVec potential_values(const PotentialSpec& p, int L);

// h_ij of the quadratic part: tight-binding matrix, or the Jordan-Wigner image
// of an XX chain (hopping -2J, onsite 2h_i). Throws for interacting spin models.
Mat single_particle_matrix(const HamiltonianSpec& spec);

SpMat build_hamiltonian(const HamiltonianSpec& spec);

// Bond term H^{k,k+1} (sites are 1-based, 1 <= k < L), without onsite fields.
SpMat bond_hamiltonian(const HamiltonianSpec& spec, int k);

// Onsite term of site k alone.
SpMat onsite_hamiltonian(const HamiltonianSpec& spec, int k);

SpMat site_operator(SiteOp kind, int i, const HamiltonianSpec& spec);

// Operator through which a reservoir couples at site i: sigma^- (spins),
// c_i with Jordan-Wigner string (fermions), a_i (bosons).
SpMat coupling_operator(const HamiltonianSpec& spec, int i);

SpMat total_number(const HamiltonianSpec& spec);

SiteOp parse_site_op(const std::string& s);

} // namespace ness
