#pragma once

#include <string>
#include <vector>

#include "twistforge/twist.hpp"

namespace twistforge {

/// Enumeration box and filters for a differential run.
struct CorpusSpec {
    Bigint p{2};
    std::array<std::pair<long, long>, 5> box{};  // inclusive [lo, hi] per a_i
    std::vector<Bigint> dset;                    // twist representatives (canonicalized on use)
    long max_delta_valuation = -1;               // skip curves above this v_p(Delta); -1 = off
    std::string required_type;                   // keep only this oracle type; "" = off

    static CorpusSpec from_json(const std::string& text);
    std::string to_json() const;
};

struct DiffRecord {
    WeierstrassModel curve;
    Bigint d;
    LocalData fast_base, fast_twisted;
    LocalData oracle_base, oracle_twisted;
    std::string detail;  // which side disagreed / error text
};

struct DiffReport {
    long total = 0;          // (curve, d) pairs examined
    long agreements = 0;
    std::vector<DiffRecord> disagreements;
    long skipped_singular = 0;  // singular curves in the box (counted once per d)
    double elapsed_seconds = 0;

    bool balanced() const {
        return total == agreements + static_cast<long>(disagreements.size()) + skipped_singular;
    }
};

/// Runs the fast paths against the Tate oracle over the whole corpus.
/// Disagreements are data, not errors. jobs <= 0 picks a default; the
/// TWISTFORGE_JOBS environment variable overrides the argument.
DiffReport run_differential(const CorpusSpec& spec, int jobs = 0);

/// Greedy shrink of a disagreeing (curve, d) pair: coefficients move toward
/// zero while the mismatch persists. Raises an error when the input agrees.
WeierstrassModel minimize_witness(const WeierstrassModel& curve, const Bigint& d, const Prime& p);

/// One line of JSON per disagreement plus a trailing summary record.
std::string report_to_json_lines(const DiffReport& rep, const CorpusSpec& spec);

/// Compares the fast paths against the oracle for one (curve, d) pair.
/// Returns true on agreement; on disagreement fills rec.
bool differential_check(const WeierstrassModel& E, const Prime& p, const Bigint& d,
                        DiffRecord& rec);

}  // namespace twistforge
