// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cfem/types.hpp"

namespace cfem::numerics
{

// Working precision for root refinement. 140 decimal digits keep the integer
// coefficients of degree <= 64 Pade denominators exact and leave enough digits
// for root condition numbers around 1e35.
using HighPrecisionReal = boost::multiprecision::number<
    boost::multiprecision::backends::cpp_bin_float<140>, boost::multiprecision::et_off>;

// Balances a real square matrix in place by powers of two (Parlett-Reinsch),
// leaving its eigenvalues unchanged.
void balance_matrix(RMatrix &a);

// All roots of c[0] + c[1] x + ... + c[n] x^n.
//
// Initial estimates are the eigenvalues of the balanced companion matrix of the
// monic polynomial; they are then refined by simultaneous Newton (Aberth)
// iterations on the unnormalized coefficients in HighPrecisionReal arithmetic.
// Every returned root satisfies |p(r)| <= 1e3 eps sum |c_j| |r|^j at working
// precision; otherwise NumericalError reports the worst residual.
std::vector<Complex> poly_roots(std::span<const double> coeffs);
std::vector<Complex> poly_roots(std::span<const HighPrecisionReal> coeffs);

}  // namespace cfem::numerics
