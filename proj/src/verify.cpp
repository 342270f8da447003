#include "twistforge/verify.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "json.hpp"

namespace twistforge {

using nlohmann::json;

CorpusSpec CorpusSpec::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("spec: ") + e.what());
    }
    CorpusSpec s;
    if (!j.contains("p") || !j.contains("box") || !j.contains("dset"))
        throw parse_error("spec: need fields p, box, dset");
    s.p = Bigint(j["p"].get<long long>());
    const auto& box = j["box"];
    if (!box.is_array() || box.size() != 5) throw parse_error("spec: box must have 5 ranges");
    for (int i = 0; i < 5; ++i) {
        if (!box[i].is_array() || box[i].size() != 2)
            throw parse_error("spec: each box entry is [lo, hi]");
        s.box[i] = {box[i][0].get<long>(), box[i][1].get<long>()};
        if (s.box[i].first > s.box[i].second) throw parse_error("spec: empty box range");
    }
    for (const auto& d : j["dset"]) s.dset.emplace_back(d.get<long long>());
    if (j.contains("filters")) {
        const auto& f = j["filters"];
        if (f.contains("max_delta_valuation"))
            s.max_delta_valuation = f["max_delta_valuation"].get<long>();
        if (f.contains("type")) s.required_type = f["type"].get<std::string>();
    }
    return s;
}

std::string CorpusSpec::to_json() const {
    json j;
    j["p"] = p.get_si();
    j["box"] = json::array();
    for (auto [lo, hi] : box) j["box"].push_back(json::array({lo, hi}));
    j["dset"] = json::array();
    for (const auto& d : dset) j["dset"].push_back(d.get_si());
    json f;
    if (max_delta_valuation >= 0) f["max_delta_valuation"] = max_delta_valuation;
    if (!required_type.empty()) f["type"] = required_type;
    if (!f.empty()) j["filters"] = f;
    return j.dump();
}

namespace {

json local_data_json(const LocalData& d) {
    return json{{"type", d.type.str()}, {"delta", d.delta}, {"f", d.f},
                {"c", d.c},             {"m", d.m},         {"reduction", reduction_str(d.reduction)}};
}

json ainvs_json(const WeierstrassModel& E) {
    json a = json::array();
    for (const Rational* x : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6}) {
        if (x->is_integer() && x->num().fits_slong_p())
            a.push_back(x->num().get_si());
        else
            a.push_back(x->str());
    }
    return a;
}

}  // namespace

bool differential_check(const WeierstrassModel& E, const Prime& p, const Bigint& d,
                        DiffRecord& rec) {
    rec.curve = E;
    rec.d = d;
    try {
        TateResult base = tate_local_data(E, p);
        TwistClass dc = canonicalize_twist(d, p);
        TateResult tw = tate_local_data(twist_model(E, dc), p);
        rec.oracle_base = base.data;
        rec.oracle_twisted = tw.data;

        auto S = to_strongly_minimal(base.minimal_model, p).first;
        TwistLocalData fast = twist_local_data(S, dc);
        TwistLocalData m = twist_data_model_derived(S, dc);
        rec.fast_base = fast.base;
        rec.fast_twisted = fast.twisted;

        if (!(fast.base == base.data)) {
            rec.detail = "base data disagrees";
            return false;
        }
        if (!(fast.twisted == tw.data)) {
            rec.detail = "twisted data disagrees";
            return false;
        }
        if (!(m.base == base.data) || !(m.twisted == tw.data)) {
            rec.fast_base = m.base;
            rec.fast_twisted = m.twisted;
            rec.detail = "model-derived path disagrees";
            return false;
        }
        return true;
    } catch (const error& e) {
        rec.detail = std::string("exception: ") + e.what();
        return false;
    }
}

namespace {

struct BoxIter {
    std::array<std::pair<long, long>, 5> box;
    std::array<long, 5> dim;
    long long count = 1;

    explicit BoxIter(const std::array<std::pair<long, long>, 5>& b) : box(b) {
        for (int i = 0; i < 5; ++i) {
            dim[i] = box[i].second - box[i].first + 1;
            count *= dim[i];
        }
    }
    WeierstrassModel at(long long idx) const {
        long a[5];
        for (int i = 4; i >= 0; --i) {
            a[i] = box[i].first + static_cast<long>(idx % dim[i]);
            idx /= dim[i];
        }
        return {Rational(a[0]), Rational(a[1]), Rational(a[2]), Rational(a[3]), Rational(a[4])};
    }
};

int resolve_jobs(int jobs) {
    if (const char* env = std::getenv("TWISTFORGE_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    if (jobs > 0) return jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct ShardResult {
    long total = 0, agreements = 0, skipped = 0;
    std::vector<std::pair<long long, DiffRecord>> bad;  // keyed for deterministic order
};

}  // namespace

DiffReport run_differential(const CorpusSpec& spec, int jobs) {
    auto t0 = std::chrono::steady_clock::now();
    Prime p(spec.p);
    BoxIter it(spec.box);
    int njobs = resolve_jobs(jobs);

    auto worker = [&](long long lo, long long hi, ShardResult& out) {
        for (long long i = lo; i < hi; ++i) {
            WeierstrassModel E = it.at(i);
            bool singular = E.is_singular();
            if (!singular && spec.max_delta_valuation >= 0) {
                Val v = valuation(E.discriminant(), p);
                if (v > Val(spec.max_delta_valuation)) continue;
            }
            if (!singular && !spec.required_type.empty()) {
                if (tate_local_data(E, p).data.type.str() != spec.required_type) continue;
            }
            for (size_t k = 0; k < spec.dset.size(); ++k) {
                out.total += 1;
                if (singular) {
                    out.skipped += 1;
                    continue;
                }
                DiffRecord rec;
                if (differential_check(E, p, spec.dset[k], rec))
                    out.agreements += 1;
                else
                    out.bad.emplace_back(i * static_cast<long long>(spec.dset.size()) + k,
                                         std::move(rec));
            }
        }
    };

    std::vector<ShardResult> shards(njobs);
    if (njobs == 1) {
        worker(0, it.count, shards[0]);
    } else {
        std::vector<std::thread> threads;
        long long chunk = (it.count + njobs - 1) / njobs;
        for (int t = 0; t < njobs; ++t) {
            long long lo = t * chunk, hi = std::min<long long>(it.count, lo + chunk);
            if (lo >= hi) break;
            threads.emplace_back([&, lo, hi, t] { worker(lo, hi, shards[t]); });
        }
        for (auto& th : threads) th.join();
    }

    DiffReport rep;
    std::vector<std::pair<long long, DiffRecord>> bad;
    for (auto& s : shards) {
        rep.total += s.total;
        rep.agreements += s.agreements;
        rep.skipped_singular += s.skipped;
        for (auto& b : s.bad) bad.emplace_back(std::move(b));
    }
    std::sort(bad.begin(), bad.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& b : bad) rep.disagreements.push_back(std::move(b.second));
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!rep.balanced()) throw error("run_differential: report totals do not balance");
    return rep;
}

WeierstrassModel minimize_witness(const WeierstrassModel& curve, const Bigint& d,
                                  const Prime& p) {
    DiffRecord rec;
    if (differential_check(curve, p, d, rec))
        throw error("minimize_witness: input pair does not disagree");

    auto still_bad = [&](const WeierstrassModel& E) {
        if (E.is_singular()) return false;
        DiffRecord r;
        return !differential_check(E, p, d, r);
    };

    WeierstrassModel cur = curve;
    bool improved = true;
    while (improved) {
        improved = false;
        Rational* slots[5] = {&cur.a1, &cur.a2, &cur.a3, &cur.a4, &cur.a6};
        for (Rational* slot : slots) {
            if (slot->is_zero()) continue;
            Rational orig = *slot;
            for (const Rational& cand :
                 {Rational(0), orig / Rational(2), orig - Rational(orig.sign())}) {
                if (cand == orig) continue;
                if (!cand.is_integer() && orig.is_integer()) continue;
                *slot = cand;
                if (still_bad(cur)) {
                    improved = true;
                    break;
                }
                *slot = orig;
            }
            if (improved) break;
        }
    }
    return cur;
}

std::string report_to_json_lines(const DiffReport& rep, const CorpusSpec& spec) {
    std::string out;
    for (const auto& rec : rep.disagreements) {
        json j{{"ainvs", ainvs_json(rec.curve)},
               {"p", spec.p.get_si()},
               {"d", rec.d.get_si()},
               {"fast", {{"base", local_data_json(rec.fast_base)},
                          {"twisted", local_data_json(rec.fast_twisted)}}},
               {"oracle", {{"base", local_data_json(rec.oracle_base)},
                            {"twisted", local_data_json(rec.oracle_twisted)}}},
               {"detail", rec.detail}};
        out += j.dump() + "\n";
    }
    json s{{"summary", true},
           {"total", rep.total},
           {"agreements", rep.agreements},
           {"disagreements", static_cast<long>(rep.disagreements.size())},
           {"skipped_singular", rep.skipped_singular},
           {"elapsed_seconds", rep.elapsed_seconds}};
    out += s.dump() + "\n";
    return out;
}

}  // namespace twistforge
