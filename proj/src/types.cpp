// SPDX-License-Identifier: Apache-2.0
#include "ness/types.hpp"

#include <vector>

namespace ness {

SpMat kron(const SpMat& a, const SpMat& b)
{
    SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<size_t>(a.nonZeros() * b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SpMat::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SpMat::InnerIterator ib(b, kb); ib; ++ib)
                    trip.emplace_back(ia.row() * b.rows() + ib.row(),
                                      ia.col() * b.cols() + ib.col(),
                                      ia.value() * ib.value());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SpMat identity(Eigen::Index n)
{
    SpMat id(n, n);
    id.setIdentity();
    return id;
}

SpMat to_sparse(const Mat& m, double drop)
{
    std::vector<Eigen::Triplet<cplx>> trip;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > drop) trip.emplace_back(i, j, m(i, j));
    SpMat out(m.rows(), m.cols());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

double max_abs(const Mat& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace ness
