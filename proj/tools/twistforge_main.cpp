#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "twistforge/verify.hpp"

using namespace twistforge;
using nlohmann::json;

namespace {

json local_json(const LocalData& d) {
    return json{{"type", d.type.str()}, {"delta", d.delta}, {"f", d.f},
                {"c", d.c},             {"m", d.m},         {"reduction", reduction_str(d.reduction)}};
}

json model_json(const WeierstrassModel& E) { return json::parse(format_ainvs(E)); }

struct CurveArgs {
    std::string ainvs;
    std::string curve;  // full JSON object {"ainvs":..., "p":..., "d":...}
    long long p = 0;
    long long d = 1;

    void attach(CLI::App* cmd, bool want_d) {
        cmd->add_option("--ainvs", ainvs, "a-invariants as a JSON list of 5 entries");
        cmd->add_option("--p", p, "prime of the local field");
        if (want_d) cmd->add_option("--d", d, "twist representative (nonzero integer)");
        cmd->add_option("--curve", curve, "curve as a JSON object {\"ainvs\":..,\"p\":..,\"d\":..}");
    }

    WeierstrassModel model() const {
        if (!curve.empty()) {
            json j = json::parse(curve);
            return parse_ainvs(j.at("ainvs").dump());
        }
        if (ainvs.empty()) throw parse_error("missing --ainvs (or --curve)");
        return parse_ainvs(ainvs);
    }
    Prime prime() const {
        if (!curve.empty()) {
            json j = json::parse(curve);
            return Prime(Bigint(j.at("p").get<long long>()));
        }
        if (p < 2) throw parse_error("missing or bad --p");
        return Prime(Bigint(p));
    }
    Bigint twist_rep() const {
        if (!curve.empty()) {
            json j = json::parse(curve);
            if (j.contains("d")) return Bigint(j["d"].get<long long>());
        }
        return Bigint(d);
    }
};

int cmd_localdata(const CurveArgs& args) {
    TateResult r = tate_local_data(args.model(), args.prime());
    json out = local_json(r.data);
    out["minimal_ainvs"] = model_json(r.minimal_model);
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_strongmin(const CurveArgs& args) {
    auto [S, phi] = to_strongly_minimal(args.model(), args.prime());
    json out{{"ainvs", model_json(S.model)},
             {"type", S.type.str()},
             {"row", row_name(S.row)},
             {"iso", json::array({phi.u.str(), phi.r.str(), phi.s.str(), phi.w.str()})},
             {"local", local_json(local_data_from_tables(S))}};
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_twist(const CurveArgs& args) {
    Prime p = args.prime();
    TateResult base = tate_local_data(args.model(), p);
    auto S = to_strongly_minimal(base.minimal_model, p).first;
    TwistClass dc = canonicalize_twist(args.twist_rep(), p);
    TwistLocalData t = twist_local_data(S, dc);
    json out{{"d", args.twist_rep().get_si()},
             {"d_canonical", dc.d.get_si()},
             {"path", t.path == TwistPath::TableFast ? "table_fast" : "model_derived"},
             {"base", local_json(t.base)},
             {"twisted", local_json(t.twisted)}};
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_verify(const std::string& spec_path, int jobs) {
    std::ifstream in(spec_path);
    if (!in) {
        std::cerr << "verify: cannot open spec file '" << spec_path << "'\n";
        return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    CorpusSpec spec = CorpusSpec::from_json(buf.str());
    DiffReport rep = run_differential(spec, jobs);
    std::cout << report_to_json_lines(rep, spec);
    return rep.disagreements.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact local data of elliptic curves over Q_p and their quadratic twists"};
    app.require_subcommand(1);

    CurveArgs ld_args, sm_args, tw_args;
    auto* ld = app.add_subcommand("localdata", "Kodaira type, delta, f, c at p (Tate oracle)");
    ld_args.attach(ld, false);
    auto* sm = app.add_subcommand("strongmin", "strongly-minimal model and the map onto it");
    sm_args.attach(sm, false);
    auto* tw = app.add_subcommand("twist", "local data of the quadratic twist by d");
    tw_args.attach(tw, true);

    std::string spec_path;
    int jobs = 0;
    auto* vf = app.add_subcommand("verify", "differential run of fast paths vs the oracle");
    vf->add_option("--spec", spec_path, "corpus spec JSON file")->required();
    vf->add_option("--jobs", jobs, "worker threads (TWISTFORGE_JOBS overrides)");

    try {
        app.parse(argc, argv);
        if (ld->parsed()) return cmd_localdata(ld_args);
        if (sm->parsed()) return cmd_strongmin(sm_args);
        if (tw->parsed()) return cmd_twist(tw_args);
        if (vf->parsed()) return cmd_verify(spec_path, jobs);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
