#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "sqp/certify.hpp"
#include "sqp/corpus.hpp"
#include "sqp/criterion.hpp"
#include "sqp/type2.hpp"
#include "sqp/util.hpp"

using nlohmann::json;

namespace {

struct InputOpts {
    std::string pd;    // inline PD text
    std::string path;  // file to read
};

void add_input_flags(CLI::App* cmd, InputOpts& in) {
    cmd->add_option("--pd", in.pd, "inline PD text, e.g. \"X(1,4,2,5) ...\"");
    cmd->add_option("--in", in.path, "read input from this file");
}

// input priority: --pd, then --in, then stdin when it is a pipe
std::string gather_text(const InputOpts& in) {
    if (!in.pd.empty()) return in.pd;
    if (!in.path.empty()) {
        std::ifstream f(in.path);
        if (!f) throw sqp::parse_error("cannot open input file: " + in.path);
        std::ostringstream os;
        os << f.rdbuf();
        return os.str();
    }
    std::string text;
    if (!isatty(fileno(stdin))) {
        std::ostringstream os;
        os << std::cin.rdbuf();
        text = os.str();
    }
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw CLI::ValidationError(
            "input", "no input: pass --pd, --in, or pipe a diagram in");
    return text;
}

sqp::Diagram load_diagram(const InputOpts& in) {
    return sqp::parse_pd(gather_text(in));
}

class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw sqp::parse_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

json invariants_json(const sqp::SurfaceInvariants& si) {
    return json{{"euler", si.euler},
                {"betti", si.betti},
                {"boundary", si.boundary},
                {"split-parts", si.split_parts},
                {"genus-twice", si.genus_twice}};
}

json verdict_json(const sqp::Verdict& v) {
    json j{{"kind", sqp::kind_name(v.cls.kind)},
           {"negative-count", v.cls.negative_count},
           {"canonical-qp", v.canonical_qp},
           // the criterion only ever answers one way
           {"sqp", v.sqp_yes ? "yes" : "undecided"},
           {"cycles-examined", v.report.cycles_examined},
           {"reasons", v.reasons}};
    if (v.report.min_weight)
        j["min-cycle-weight"] = *v.report.min_weight;
    else
        j["min-cycle-weight"] = nullptr;
    if (v.cls.negative_crossing >= 0)
        j["negative-crossing"] = v.cls.negative_crossing;
    return j;
}

json record_json(const sqp::ScanRecord& r, long long work_cap) {
    json j{{"name", r.name},
           {"pd", r.pd},
           {"ok", r.ok},
           {"kind", r.kind},
           {"canonical-qp", r.canonical_qp},
           {"sqp", r.sqp_yes ? "yes" : "undecided"},
           {"work-cap", work_cap},
           {"elapsed-ms", r.elapsed_ms}};
    if (!r.ok) j["error"] = r.error;
    if (r.min_cycle_weight)
        j["min-cycle-weight"] = *r.min_cycle_weight;
    else
        j["min-cycle-weight"] = nullptr;
    if (r.ok) j["invariants"] = invariants_json(r.inv);
    if (!r.certificate.empty()) j["certificate"] = r.certificate;
    return j;
}

int run_validate(const InputOpts& in, const std::string& out_path) {
    sqp::Diagram d = load_diagram(in);
    Output out(out_path);
    int pos = 0, neg = 0;
    for (const auto& x : d.xs) (x.sign() > 0 ? pos : neg)++;
    out.stream() << json{{"ok", true},
                         {"crossings", d.n()},
                         {"positive", pos},
                         {"negative", neg},
                         {"loops", static_cast<int>(d.loops.size())},
                         {"link-components", sqp::link_components(d)}}
                        .dump()
                 << "\n";
    return 0;
}

int run_graph(const InputOpts& in, const std::string& out_path) {
    sqp::Diagram d = load_diagram(in);
    sqp::SeifertGraph sg =
        sqp::seifert_graph(sqp::move_infinity(sqp::seifert_circles(d)));
    Output out(out_path);
    out.stream() << json{{"vertices", sg.g.nv},
                         {"edges", sg.g.ne()},
                         {"plane", sg.plane},
                         {"graph", sqp::serialize_graph(sg.g)}}
                        .dump()
                 << "\n";
    return 0;
}

int run_check(const InputOpts& in, const std::string& out_path,
              long long work_cap) {
    sqp::Diagram d = load_diagram(in);
    sqp::Verdict v = sqp::sqp_verdict(d, work_cap);
    json j = verdict_json(v);
    j["invariants"] = invariants_json(sqp::surface_invariants(d));
    Output out(out_path);
    out.stream() << j.dump() << "\n";
    return 0;
}

int run_certify(const InputOpts& in, const std::string& out_path,
                long long work_cap) {
    sqp::Diagram d = load_diagram(in);
    sqp::Verdict v = sqp::sqp_verdict(d, work_cap);
    json j;
    if (!v.canonical_qp) {
        j["status"] = sqp::certificate_status(d, work_cap);
    } else {
        sqp::Certificate c = sqp::certify(d, work_cap);
        std::string why;
        bool ok = sqp::verify(c, &why, work_cap);
        j["status"] = ok ? "verified" : "failed: " + why;
        j["certificate"] = sqp::serialize_certificate(c);
    }
    Output out(out_path);
    out.stream() << j.dump() << "\n";
    return 0;
}

int run_type2(const InputOpts& in, const std::string& out_path,
              long long work_cap) {
    sqp::Diagram d = load_diagram(in);
    sqp::Type2Trace tr = sqp::reduce_type2(d, work_cap);
    json j{{"kind", sqp::kind_name(sqp::classify(d).kind)},
           {"sigma", invariants_json(sqp::surface_invariants(d))},
           {"trace", json::parse(sqp::serialize_trace(tr))}};
    Output out(out_path);
    out.stream() << j.dump() << "\n";
    return 0;
}

int run_scan(const InputOpts& in, const std::string& out_path,
             const sqp::ScanOptions& opt) {
    std::vector<std::pair<std::string, std::string>> inputs;
    {
        std::istringstream is(gather_text(in));
        auto rows = sqp::ingest_table(is, opt.strict,
                                      [](int line, const std::string& what) {
                                          std::cerr << "line " << line << ": "
                                                    << what << "\n";
                                      });
        inputs.reserve(rows.size());
        for (const auto& r : rows)
            inputs.push_back({r.name, sqp::serialize_pd(r.d)});
    }
    auto records = sqp::batch_scan(inputs, opt);
    Output out(out_path);
    for (const auto& r : records) {
        out.stream() << record_json(r, opt.work_cap).dump() << "\n";
        out.stream().flush();
    }
    return 0;
}

int run_gen(const std::string& which, const std::vector<int>& args,
            const std::string& profile, std::uint64_t seed,
            const std::string& out_path) {
    sqp::Diagram d;
    if (which == "torus") {
        if (args.size() != 2)
            throw CLI::ValidationError("gen", "torus needs: strands crossings");
        d = sqp::gen_torus(args[0], args[1]);
    } else if (which == "pretzel") {
        if (args.size() != 3)
            throw CLI::ValidationError("gen", "pretzel needs: p q r");
        d = sqp::gen_pretzel(args[0], args[1], args[2]);
    } else if (which == "random") {
        if (args.size() != 1)
            throw CLI::ValidationError("gen", "random needs: crossings");
        sqp::SignProfile p;
        if (profile == "positive")
            p = sqp::SignProfile::positive;
        else if (profile == "almost-positive")
            p = sqp::SignProfile::almost_positive;
        else if (profile == "mixed")
            p = sqp::SignProfile::mixed;
        else
            throw CLI::ValidationError(
                "gen", "profile must be positive, almost-positive, or mixed");
        d = sqp::gen_random(args[0], p, seed);
    } else {
        throw CLI::ValidationError("gen",
                                   "unknown generator: " + which +
                                       " (torus, pretzel, random)");
    }
    Output out(out_path);
    out.stream() << sqp::serialize_pd(d) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strong quasipositivity toolkit for link diagrams"};
    app.require_subcommand(1);

    InputOpts in;
    std::string out_path;
    long long work_cap = sqp::kDefaultWorkCap;

    auto* validate = app.add_subcommand("validate", "parse a diagram and report its shape");
    auto* graph = app.add_subcommand("graph", "print the Seifert graph of a diagram");
    auto* check = app.add_subcommand(
        "check", "classify a diagram and run the cycle-weight criterion");
    auto* certify = app.add_subcommand(
        "certify", "build and verify a quasipositivity certificate");
    auto* type2 = app.add_subcommand(
        "type2", "analyse the generalized surface of a type II diagram");
    auto* scan = app.add_subcommand("scan", "run the pipeline over a CSV table");
    auto* gen = app.add_subcommand("gen", "write a generated diagram as PD text");

    for (auto* cmd : {validate, graph, check, certify, type2, scan}) {
        add_input_flags(cmd, in);
        cmd->add_option("--out", out_path, "write output here instead of stdout");
    }
    for (auto* cmd : {check, certify, type2, scan})
        cmd->add_option("--work-cap", work_cap,
                        "abort analyses that exceed this many work units")
            ->check(CLI::PositiveNumber);

    sqp::ScanOptions scan_opt;
    scan->add_flag("--strict", scan_opt.strict,
                   "abort on the first malformed row");
    scan->add_flag("--certify", scan_opt.with_certificate,
                   "attach a certificate status to each record");
    scan->add_option("--jobs", scan_opt.jobs, "worker threads")
        ->check(CLI::PositiveNumber);

    std::string gen_which, gen_profile = "positive";
    std::vector<int> gen_args;
    std::uint64_t gen_seed = 0;
    gen->add_option("generator", gen_which, "torus | pretzel | random")
        ->required();
    gen->add_option("params", gen_args, "generator parameters");
    gen->add_option("--profile", gen_profile,
                    "sign profile for random: positive, almost-positive, mixed");
    gen->add_option("--seed", gen_seed, "random generator seed");
    gen->add_option("--out", out_path, "write output here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(validate)) return run_validate(in, out_path);
        if (app.got_subcommand(graph)) return run_graph(in, out_path);
        if (app.got_subcommand(check)) return run_check(in, out_path, work_cap);
        if (app.got_subcommand(certify))
            return run_certify(in, out_path, work_cap);
        if (app.got_subcommand(type2)) return run_type2(in, out_path, work_cap);
        if (app.got_subcommand(scan)) {
            scan_opt.work_cap = work_cap;
            return run_scan(in, out_path, scan_opt);
        }
        if (app.got_subcommand(gen))
            return run_gen(gen_which, gen_args, gen_profile, gen_seed,
                           out_path);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 2;
}
