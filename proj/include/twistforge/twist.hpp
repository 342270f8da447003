#pragma once

#include "twistforge/strongly_minimal.hpp"

namespace twistforge {

enum class TwistPath { TableFast, ModelDerived };

/// Local data of E and of its quadratic twist E^d at one prime.
/// At odd p with v(d) = 0 the twisted type always equals the base type.
struct TwistLocalData {
    LocalData base;
    LocalData twisted;
    TwistClass d;
    Prime p;
    TwistPath path;
};

/// Coarse type families used to index the twist rules.
enum class RFam { I0, In, II, III, IV, IStar0, IStarN, IVStar, IIIStar, IIStar };
RFam rfam_of(const KodairaType& t);

/// Strongly-minimal model of the quadratic twist, produced by applying the
/// tabulated normalizing isomorphism to twist_model(S.model, d). The
/// returned map sends twist_model(S.model, d) onto the result. Each applied
/// rule's valuation pattern is asserted; a failure raises table_mismatch.
std::pair<StronglyMinimalModel, Isomorphism> twist_strongly_minimal(
    const StronglyMinimalModel& S, const TwistClass& d);

/// Odd residue characteristic: type and Tamagawa numbers read off the
/// tabulated conditions; discriminant/conductor data through the
/// strongly-minimal twist model.
TwistLocalData twist_data_odd(const StronglyMinimalModel& S, const TwistClass& d);

/// p = 2: for v(d) = 0 the hardcoded condition rows (TableFast); for
/// v(d) = 1 the model-derived route through twist_strongly_minimal.
TwistLocalData twist_data_q2(const StronglyMinimalModel& S, const TwistClass& d);

/// Model-derived route at any p: build the strongly-minimal twist model and
/// read all its local data off the coefficient conditions.
TwistLocalData twist_data_model_derived(const StronglyMinimalModel& S, const TwistClass& d);

/// Dispatcher: odd p -> twist_data_odd, p = 2 -> twist_data_q2.
TwistLocalData twist_local_data(const StronglyMinimalModel& S, const TwistClass& d);

/// Exact value of the tabulated condition polynomial P_{R,j} for the given
/// valuation of d, evaluated at the model's coefficients and d.
/// Throws unknown_polynomial when no such entry exists.
Rational evaluate_prj(const KodairaType& R, int v_d, int j, const StronglyMinimalModel& S,
                      const TwistClass& d);

/// Canonical text dump of all embedded twist data (normalizing isomorphisms,
/// condition polynomials, and the model-selection rules), for auditing.
std::string render_twist_tables();

}  // namespace twistforge
