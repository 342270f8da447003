#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "twistforge/tate.hpp"

namespace twistforge {

/// Identifiers for the strongly-minimal coefficient patterns, one per row of
/// the classification (split by residue characteristic and, where the shape
/// differs, by the parity of n).
enum class RowId {
    I0_2a,
    I0_2b,
    I0_2c,
    I0_odd,
    In_2_odd,
    In_2_even,
    In_odd,
    II_2,
    II_odd,
    III_2,
    III_odd,
    IV_2,
    IV_odd,
    IStar0_2,
    IStar0_odd,
    IStarN_2_odd,
    IStarN_2_even,
    IStarN_odd,
    IVStar_2,
    IVStar_odd,
    IIIStar_2,
    IIIStar_odd,
    IIStar_2,
    IIStar_odd,
};

const char* row_name(RowId id);

/// Pattern of the row, instantiated at n (ignored by rows without a
/// parameter). Bounds that are half-integers in the source tables are
/// rounded up, which is equivalent for integer valuations.
ValuationVector row_pattern(RowId id, long n);
SideCondition row_side(RowId id);
KodairaType row_type(RowId id, long n);

/// All rows for one residue characteristic.
std::vector<RowId> rows_for(const Prime& p);

struct RowMatch {
    RowId id;
    KodairaType type;
};

/// The unique strongly-minimal row matched by E at p, or nullopt. A model
/// matching two rows would be a table defect; that raises ambiguous_match.
std::optional<RowMatch> classify(const WeierstrassModel& E, const Prime& p);

struct StronglyMinimalModel {
    WeierstrassModel model;
    Prime p;
    KodairaType type;
    RowId row;
};

/// Transforms a model that is minimal and integral at p into a strongly-
/// minimal one. The returned map has v_p(u) = 0, so the discriminant
/// valuation is preserved. Raises not_minimal when v_p(Delta) exceeds the
/// true minimal valuation.
std::pair<StronglyMinimalModel, Isomorphism> to_strongly_minimal(const WeierstrassModel& E,
                                                                 const Prime& p);

/// Tamagawa number read off the matched row's coefficient conditions.
long tamagawa_from_row(const StronglyMinimalModel& S);

/// Minimal discriminant valuation and conductor exponent over Q_2, read off
/// the coefficient conditions of the strongly-minimal model.
std::pair<long, long> disc_conductor_q2(const StronglyMinimalModel& S);

/// Reduction kind read off the row (split vs nonsplit from the coefficient
/// conditions for I_n).
ReductionKind reduction_from_row(const StronglyMinimalModel& S);

/// Complete local data assembled from the coefficient conditions alone:
/// type and c from the row, (delta, f) from the Q_2 conditions when p = 2
/// and from v_p(Delta) plus Ogg's formula otherwise.
LocalData local_data_from_tables(const StronglyMinimalModel& S);

/// Convenience: oracle-normalize E (must be minimal at p) and classify.
StronglyMinimalModel strongly_minimal_of(const WeierstrassModel& E, const Prime& p);

}  // namespace twistforge
