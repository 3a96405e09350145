// hlf: command-line front end. Exit codes: 0 all-pass, 1 expectation or
// property failure, 2 input error.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hlf/error.hpp"
#include "hlf/jobs.hpp"

namespace {

using hlf::Json;

struct Flags {
    std::string field = "Fq(5)((u))((t))";
    std::string elem, seq, limit, topology = "higher";
    std::string open, open2, target, scheme, source, map;
    std::string modulus, theta = "theta", vars, gens;
    std::optional<int> rank, to_chart;
    int chart = 0;
    std::optional<uint64_t> seed;
    int battery = 100;
    bool json = false;
    std::string suite, job;
};

uint64_t resolve_seed(const Flags &f)
{
    if (f.seed)
        return *f.seed;
    if (const char *env = std::getenv("HLF_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception &) {
            hlf::fail(hlf::ErrorCode::InvalidInput, "HLF_SEED must be an unsigned integer");
        }
    }
    return 1;
}

void print_text(const Json &j, const std::string &indent = "")
{
    for (const auto &[k, v] : j.items()) {
        if (v.is_object()) {
            std::cout << indent << k << ":\n";
            print_text(v, indent + "  ");
        } else {
            std::cout << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    }
}

void emit(const Json &j, bool json)
{
    if (json)
        std::cout << j.dump(2) << "\n";
    else
        print_text(j);
}

void print_check_text(const Json &report)
{
    const Json suites = report.contains("suites") ? report.at("suites") : Json::array({report});
    for (const auto &s : suites) {
        for (const auto &c : s.at("checks")) {
            std::cout << (c.at("ok").get<bool>() ? "PASS " : "FAIL ") << s.at("suite").get<std::string>() << "/"
                      << c.at("name").get<std::string>() << "  passed=" << c.at("passed") << " failed=" << c.at("failed");
            if (c.at("detail").contains("first_failure"))
                std::cout << "  first failure: " << c.at("detail").at("first_failure").get<std::string>();
            if (c.at("detail").contains("error"))
                std::cout << "  error: " << c.at("detail").at("error").get<std::string>();
            std::cout << "\n";
        }
    }
    std::cout << (report.at("ok").get<bool>() ? "all checks passed" : "some checks failed") << " (seed "
              << report.at("seed") << ")\n";
}

Json inputs_for(const std::string &kind, const Flags &f, const CLI::App &sub)
{
    Json in;
    auto put = [&](const char *flag, const char *key, const std::string &v) {
        if (sub.count(flag))
            in[key] = v;
    };
    in["field"] = f.field;
    if (kind == "valuation") {
        in["elem"] = f.elem;
        if (f.rank)
            in["rank"] = *f.rank;
    } else if (kind == "member") {
        in["elem"] = f.elem;
        in["open"] = f.open;
    } else if (kind == "converge" || kind == "units") {
        in["seq"] = f.seq;
        put("--limit", "limit", f.limit);
        if (kind == "converge")
            in["topology"] = f.topology;
    } else if (kind == "points-member") {
        in.erase("field");
        in["scheme"] = f.scheme;
        in["point"] = f.elem;
        in["chart"] = f.chart;
        if (f.to_chart)
            in["to_chart"] = *f.to_chart;
    } else if (kind == "points-map") {
        in.erase("field");
        in["source"] = f.source;
        in["target"] = f.scheme;
        in["map"] = f.map;
        in["point"] = f.elem;
    } else if (kind == "points-converge") {
        in.erase("field");
        in["scheme"] = f.scheme;
        in["seq"] = f.seq;
        in["limit"] = f.limit;
        in["topology"] = f.topology;
    } else if (kind == "weil") {
        in["modulus"] = f.modulus;
        in["theta"] = f.theta;
        in["vars"] = f.vars;
        put("--gens", "generators", f.gens);
        put("--elem", "point", f.elem);
        put("--seq", "seq", f.seq);
        put("--limit", "limit", f.limit);
    } else if (kind == "witness-subgroup") {
        in["open"] = f.open;
    } else if (kind == "witness-product") {
        in["open"] = f.open;
        put("--open2", "open2", f.open2);
        put("--target", "target", f.target);
    }
    return in;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"hlf: valuations, topologies and points over higher local fields"};
    app.require_subcommand(1);
    Flags f;
    app.add_flag("--json", f.json, "print JSON");

    const std::map<std::string, std::string> kinds = {
        {"val", "valuation"},
        {"member", "member"},
        {"converge", "converge"},
        {"units", "units"},
        {"points-member", "points-member"},
        {"points-map", "points-map"},
        {"points-converge", "points-converge"},
        {"weil", "weil"},
        {"witness-subgroup", "witness-subgroup"},
        {"witness-product", "witness-product"},
    };
    std::map<std::string, CLI::App *> subs;
    auto field = [&](CLI::App *s) { s->add_option("--field", f.field, "field, e.g. \"Fq(5)((u))((t))\""); };

    auto *val = app.add_subcommand("val", "rank-r valuation of an element");
    field(val);
    val->add_option("--elem", f.elem)->required();
    val->add_option("--rank", f.rank);
    subs["val"] = val;

    auto *mem = app.add_subcommand("member", "membership in a basic open");
    field(mem);
    mem->add_option("--elem", f.elem)->required();
    mem->add_option("--open", f.open, "descriptor JSON, @file or file")->required();
    subs["member"] = mem;

    for (const char *name : {"converge", "units"}) {
        auto *s = app.add_subcommand(name, std::string(name) == "units" ? "unit sequence in both routes"
                                                                         : "decide convergence of a family");
        field(s);
        s->add_option("--seq", f.seq, "family in n")->required();
        s->add_option("--limit", f.limit);
        if (std::string(name) == "converge")
            s->add_option("--topology", f.topology)
                ->check(CLI::IsMember({"valuation", "higher", "parshin"}));
        subs[name] = s;
    }

    auto *pm = app.add_subcommand("points-member", "is a tuple a point of a scheme");
    pm->add_option("--scheme", f.scheme, "scheme JSON")->required();
    pm->add_option("--elem,--point", f.elem, "comma separated coordinates")->required();
    pm->add_option("--chart", f.chart);
    pm->add_option("--to-chart", f.to_chart);
    subs["points-member"] = pm;

    auto *pmap = app.add_subcommand("points-map", "image of a point under a polynomial map");
    pmap->add_option("--source", f.source)->required();
    pmap->add_option("--scheme", f.scheme, "target scheme")->required();
    pmap->add_option("--map", f.map, "';' separated polynomials")->required();
    pmap->add_option("--elem,--point", f.elem)->required();
    subs["points-map"] = pmap;

    auto *pc = app.add_subcommand("points-converge", "convergence of a family of points");
    pc->add_option("--scheme", f.scheme)->required();
    pc->add_option("--seq", f.seq, "comma separated families")->required();
    pc->add_option("--limit", f.limit, "comma separated coordinates")->required();
    pc->add_option("--topology", f.topology)->check(CLI::IsMember({"valuation", "higher"}));
    subs["points-converge"] = pc;

    auto *weil = app.add_subcommand("weil", "Weil restriction along R[theta]/(m)");
    field(weil);
    weil->add_option("--modulus", f.modulus, "monic m(theta)")->required();
    weil->add_option("--theta", f.theta);
    weil->add_option("--vars", f.vars, "';' separated")->required();
    weil->add_option("--gens", f.gens, "';' separated, in the vars and theta");
    weil->add_option("--elem,--point", f.elem, "S-point: one 'c_0, c_1' per variable, ';' separated");
    weil->add_option("--seq", f.seq, "S-family, same shape as --point");
    weil->add_option("--limit", f.limit);
    subs["weil"] = weil;

    auto *ws = app.add_subcommand("witness-subgroup", "element of C inside a subgroup-shaped open");
    field(ws);
    ws->add_option("--open", f.open)->required();
    subs["witness-subgroup"] = ws;

    auto *wp = app.add_subcommand("witness-product", "x in U, y in V with xy outside W");
    field(wp);
    wp->add_option("--open", f.open)->required();
    wp->add_option("--open2", f.open2, "V (default U)");
    wp->add_option("--target", f.target, "W (default: canonical proper-leveled open)");
    subs["witness-product"] = wp;

    auto *check = app.add_subcommand("check", "run a property suite");
    check->add_option("suite", f.suite)
        ->required()
        ->check(CLI::IsMember({"axioms", "topology", "counterexamples", "points", "weil", "all"}));
    check->add_option("--seed", f.seed, "default: HLF_SEED or 1");
    check->add_option("--battery-size", f.battery)->check(CLI::PositiveNumber);

    auto *run = app.add_subcommand("run", "run a JSON job file");
    run->add_option("job", f.job)->required();

    for (auto &[name, s] : subs) {
        (void)name;
        s->add_flag("--json", f.json, "print JSON");
    }
    check->add_flag("--json", f.json, "print JSON");
    run->add_flag("--json", f.json, "print JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*check) {
            const Json in{{"suite", f.suite}, {"seed", resolve_seed(f)}, {"battery_size", f.battery}};
            const Json report = hlf::run_task_inputs("check-suite", in);
            if (f.json)
                std::cout << report.dump(2) << "\n";
            else
                print_check_text(report);
            return report.at("ok").get<bool>() ? 0 : 1;
        }
        if (*run) {
            const Json report = hlf::run_job(hlf::load_json_arg(f.job));
            std::cout << report.dump(2) << "\n";
            return hlf::job_ok(report) ? 0 : 1;
        }
        for (const auto &[name, s] : subs)
            if (*s) {
                const std::string kind = kinds.at(name);
                emit(hlf::run_task_inputs(kind, inputs_for(kind, f, *s)), f.json);
                return 0;
            }
    } catch (const hlf::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
