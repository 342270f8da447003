#pragma once

#include "twistforge/kodaira.hpp"
#include "twistforge/weierstrass.hpp"

namespace twistforge {

struct TateResult {
    LocalData data;
    /// Minimal integral model at p, in the coordinates the algorithm ends in:
    /// the singular point is at the origin for bad reduction, and the deeper
    /// normalizations have been applied for additive types.
    WeierstrassModel minimal_model;
    /// Change of variables from the input model onto minimal_model.
    Isomorphism iso;
    /// Number of non-minimal restarts that were needed.
    int restarts = 0;
};

/// Runs Tate's algorithm for E at p. The input may have non-integral
/// coefficients; they are cleared by a scaling first. Throws singular_model
/// when the discriminant vanishes.
TateResult tate_local_data(const WeierstrassModel& E, const Prime& p);

/// Split vs nonsplit test for a multiplicative-reduction model whose singular
/// point sits at the origin: decided by whether T^2 + a1 T - a2 splits over
/// the residue field.
ReductionKind multiplicative_splitness(const WeierstrassModel& E, const Prime& p);

}  // namespace twistforge
