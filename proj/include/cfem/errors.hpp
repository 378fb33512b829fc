// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cfem
{

// Invalid input: out-of-range parameters, empty grids, mismatched sizes.
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

// A pole, resonance or singular pivot was hit.
class SingularityError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// An iterative numerical kernel (root finder, eigensolver) did not converge.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfem
