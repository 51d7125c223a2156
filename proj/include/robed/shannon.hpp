// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "robed/abtest.hpp"
#include "robed/linreg.hpp"

namespace robed {

enum class EigRepresentation { param_div, entropy_diff, lklhd_div };

/// Shannon expected information gain with the representation it was
/// computed from.
struct EigValue {
  double value;
  EigRepresentation representation;
};

/// 0.5 log det((1/sigma^2) H Sigma_0 H^T + I).
EigValue shannon_eig_linreg(const LinRegModel& model, const DesignBatch& batch);

/// Exact enumeration of E_x[KL(posterior || prior)], additive over groups.
/// Throws a capacity error beyond the enumeration cap.
EigValue shannon_eig_abtest(const ABModel& model, const Allocation& alloc);

}  // namespace robed
