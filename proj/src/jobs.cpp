#include "hlf/jobs.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "hlf/error.hpp"
#include "hlf/points.hpp"
#include "hlf/suites.hpp"
#include "hlf/units.hpp"
#include "hlf/valuation.hpp"
#include "hlf/witness.hpp"

namespace hlf {

namespace {

constexpr const char *kDefaultField = "Fq(5)((u))((t))";

std::string str_in(const Json &in, const char *key)
{
    if (!in.contains(key))
        fail(ErrorCode::InvalidInput, std::string("missing input '") + key + "'");
    const Json &v = in.at(key);
    if (v.is_number_integer())
        return std::to_string(v.get<int64_t>());
    if (!v.is_string())
        fail(ErrorCode::InvalidInput, std::string("input '") + key + "' must be a string");
    return v.get<std::string>();
}

FieldPtr field_in(const Json &in) { return Field::parse(in.value("field", std::string(kDefaultField))); }

Json json_in(const Json &in, const char *key)
{
    if (!in.contains(key))
        fail(ErrorCode::InvalidInput, std::string("missing input '") + key + "'");
    const Json &v = in.at(key);
    return v.is_string() ? load_json_arg(v.get<std::string>()) : v;
}

Json member_json(const MemberResult &r)
{
    Json j{{"member", verdict_name(r.verdict)}};
    if (!r.path.empty())
        j["path"] = r.path;
    if (!r.reason.empty())
        j["reason"] = r.reason;
    return j;
}

Json coords_json(const std::vector<Element> &xs)
{
    Json a = Json::array();
    for (const auto &x : xs)
        a.push_back(x.str());
    return a;
}

std::vector<std::string> strings_in(const Json &in, const char *key)
{
    if (!in.contains(key))
        return {};
    const Json &v = in.at(key);
    if (v.is_string()) {
        std::vector<std::string> out;
        std::stringstream ss(v.get<std::string>());
        std::string item;
        while (std::getline(ss, item, ';'))
            out.push_back(item);
        return out;
    }
    return v.get<std::vector<std::string>>();
}

Point point_in(const FieldPtr &f, const Json &in, const char *key)
{
    return parse_point(f, str_in(in, key), in.value("chart", 0));
}

Json task_valuation(const Json &in)
{
    const FieldPtr f = field_in(in);
    const Element x = Element::parse(f, str_in(in, "elem"));
    const int r = in.value("rank", f->dim());
    if (r < 1 || r > f->dim())
        fail(ErrorCode::InvalidInput, "rank must lie in 1.." + std::to_string(f->dim()));
    Json j{{"field", f->str()}, {"elem", x.str()}, {"rank", r}, {"valuation", rank_valuation(x, r)}};
    Json levels = Json::array();
    for (int l = 1; l <= f->dim(); ++l)
        levels.push_back(in_integer_ring(x, l));
    j["in_integer_ring"] = levels;
    return j;
}

Json task_member(const Json &in)
{
    const FieldPtr f = field_in(in);
    const Element x = Element::parse(f, str_in(in, "elem"));
    return member_json(member(x, BasicOpen::from_json(json_in(in, "open"))));
}

Json task_converge(const Json &in)
{
    const FieldPtr f = field_in(in);
    const SeqFamily s = SeqFamily::parse(f, str_in(in, "seq"));
    const Element l = Element::parse(f, in.contains("limit") ? str_in(in, "limit") : "0");
    const std::string top = in.value("topology", std::string("higher"));
    if (top == "parshin") {
        const UnitVerdict v = unit_converges(s, l);
        Json j = v.tau.to_json();
        j["topology"] = "parshin";
        j["lambda"] = v.lambda.to_json();
        return j;
    }
    return converges(s, l, parse_topology(top)).to_json();
}

Json task_units(const Json &in)
{
    const FieldPtr f = field_in(in);
    const SeqFamily s = SeqFamily::parse(f, str_in(in, "seq"));
    const Element l = Element::parse(f, in.contains("limit") ? str_in(in, "limit") : "1");
    return unit_converges(s, l).to_json();
}

Json task_points_member(const Json &in)
{
    const ChartedScheme X = ChartedScheme::from_json(json_in(in, "scheme"));
    const FieldPtr f = X.charts.front().base.carrier();
    const Point x = point_in(f, in, "point");
    if (x.chart < 0 || x.chart >= static_cast<int>(X.charts.size()))
        fail(ErrorCode::InvalidInput, "unknown chart " + std::to_string(x.chart));
    Json j = member_json(member_points(X.charts[static_cast<std::size_t>(x.chart)], x.coords));
    j["point"] = coords_json(x.coords);
    j["chart"] = x.chart;
    if (in.contains("to_chart")) {
        const auto y = chart_transfer(X, x, in.at("to_chart").get<int>());
        j["transfer"] = y ? Json(coords_json(y->coords)) : Json("OUT_OF_CHART");
    }
    return j;
}

Json task_points_map(const Json &in)
{
    const AffinePresentation src = AffinePresentation::from_json(json_in(in, "source"));
    const AffinePresentation tgt = AffinePresentation::from_json(json_in(in, "target"));
    const FieldPtr f = src.base.carrier();
    std::vector<RPoly> phi;
    for (const auto &p : strings_in(in, "map"))
        phi.push_back(RPoly::parse(f, src.vars, p));
    const Point x = point_in(f, in, "point");
    if (!member_points(src, x.coords).yes())
        fail(ErrorCode::InvalidInput, "point " + x.str() + " is not on the source");
    return Json{{"image", coords_json(apply_map(phi, tgt, x).coords)}};
}

Json task_points_converge(const Json &in)
{
    const AffinePresentation X = AffinePresentation::from_json(json_in(in, "scheme"));
    const FieldPtr f = X.base.carrier();
    PointSeqFamily fam;
    fam.coords = parse_family_tuple(f, str_in(in, "seq"));
    fam.limit = point_in(f, in, "limit");
    return point_seq_converges(X, fam, parse_topology(in.value("topology", std::string("higher")))).to_json();
}

// S-families as one "c_0, c_1, ..." tuple per variable
Json task_weil(const Json &in)
{
    const FieldPtr f = field_in(in);
    const Extension S = Extension::parse(f, in.value("theta", std::string("theta")), str_in(in, "modulus"));
    const ExtPresentation Y = ExtPresentation::make(S, strings_in(in, "vars"), strings_in(in, "generators"));
    const WeilRestriction W = weil_restrict(Y, RingMorphismDesc::finite_free(S));
    Json j{{"extension", S.str()}, {"restriction", W.X.to_json()}};
    if (in.contains("point")) {
        SPoint y;
        for (const auto &c : strings_in(in, "point"))
            y.push_back(parse_point(f, c).coords);
        const Point x = W.encode(y);
        j["encoded"] = coords_json(x.coords);
        j["on_Y"] = member_s_points(Y, y);
        j["on_restriction"] = verdict_name(member_points(W.X, x.coords).verdict);
    }
    if (in.contains("seq")) {
        SPointFamily fam;
        for (const auto &c : strings_in(in, "seq"))
            fam.coords.push_back(parse_family_tuple(f, c));
        for (const auto &c : strings_in(in, "limit"))
            fam.limit.push_back(parse_point(f, c).coords);
        const Verdict vs = s_point_seq_converges(Y, fam);
        const Verdict vx = point_seq_converges(W.X, encode_family(W, fam));
        j["over_S"] = vs.to_json();
        j["restricted"] = vx.to_json();
        j["agree"] = vs.kind == vx.kind;
    }
    return j;
}

Json task_witness_subgroup(const Json &in)
{
    const FieldPtr f = field_in(in);
    const BasicOpen U = BasicOpen::from_json(json_in(in, "open"));
    const SubgroupEscape s = subgroup_escape_witness(f, U);
    const Element p = Element::parse(f, "t^" + std::to_string(s.a) + "*u^-" + std::to_string(s.c));
    const Element q = Element::parse(f, "t^-" + std::to_string(s.a) + "*u^" + std::to_string(s.c));
    return Json{{"a", s.a},
                {"c", s.c},
                {"element", s.element.str()},
                {"first", p.str()},
                {"second", q.str()},
                {"first_in_U", verdict_name(member(p, U).verdict)},
                {"second_in_U", verdict_name(member(q, U).verdict)},
                {"element_in_U", verdict_name(member(s.element, U).verdict)}};
}

Json task_witness_product(const Json &in)
{
    const FieldPtr f = field_in(in);
    const BasicOpen U = BasicOpen::from_json(json_in(in, "open"));
    const BasicOpen V = in.contains("open2") ? BasicOpen::from_json(json_in(in, "open2")) : U;
    const BasicOpen W = in.contains("target") ? BasicOpen::from_json(json_in(in, "target")) : canonical_product_target();
    const auto p = product_escape_witness(f, U, V, W);
    if (!p)
        return Json{{"witness", nullptr}};
    return Json{{"x", p->x.str()},
                {"y", p->y.str()},
                {"product", (p->x * p->y).str()},
                {"x_in_U", verdict_name(member(p->x, U).verdict)},
                {"y_in_V", verdict_name(member(p->y, V).verdict)},
                {"product_in_W", verdict_name(member(p->x * p->y, W).verdict)}};
}

Json task_check(const Json &in)
{
    const std::string name = in.value("suite", std::string("all"));
    const uint64_t seed = in.value("seed", uint64_t{0});
    const int battery = in.value("battery_size", 100);
    if (name != "all")
        return run_suite(name, seed, battery).to_json();
    Json suites = Json::array();
    bool ok = true;
    for (const auto &s : suite_names()) {
        const SuiteReport r = run_suite(s, seed, battery);
        ok = ok && r.ok();
        suites.push_back(r.to_json());
    }
    return Json{{"suite", "all"}, {"seed", seed}, {"battery_size", battery}, {"ok", ok}, {"suites", suites}};
}

bool subset_match(const Json &expect, const Json &got)
{
    if (expect.is_object()) {
        if (!got.is_object())
            return false;
        for (const auto &[k, v] : expect.items())
            if (!got.contains(k) || !subset_match(v, got.at(k)))
                return false;
        return true;
    }
    return expect == got;
}

} // namespace

Json load_json_arg(const std::string &arg)
{
    std::string text = arg;
    if (!arg.empty() && arg.front() != '{' && arg.front() != '[') {
        const std::string path = arg.front() == '@' ? arg.substr(1) : arg;
        std::ifstream is(path);
        if (!is)
            fail(ErrorCode::InvalidInput, "cannot read '" + path + "'");
        std::stringstream ss;
        ss << is.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::InvalidInput, std::string("bad JSON: ") + e.what());
    }
}

Json run_task_inputs(const std::string &kind, const Json &inputs)
{
    if (!inputs.is_object())
        fail(ErrorCode::InvalidInput, "inputs must be an object");
    try {
        if (kind == "valuation")
            return task_valuation(inputs);
        if (kind == "member")
            return task_member(inputs);
        if (kind == "converge")
            return task_converge(inputs);
        if (kind == "units")
            return task_units(inputs);
        if (kind == "points-member")
            return task_points_member(inputs);
        if (kind == "points-map")
            return task_points_map(inputs);
        if (kind == "points-converge")
            return task_points_converge(inputs);
        if (kind == "weil")
            return task_weil(inputs);
        if (kind == "witness-subgroup")
            return task_witness_subgroup(inputs);
        if (kind == "witness-product")
            return task_witness_product(inputs);
        if (kind == "check-suite")
            return task_check(inputs);
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::InvalidInput, std::string("bad input: ") + e.what());
    }
    fail(ErrorCode::InvalidInput, "unknown task kind '" + kind + "'");
}

Json run_task(const Json &task)
{
    Json entry;
    entry["id"] = task.is_object() && task.contains("id") ? task.at("id") : Json(nullptr);
    try {
        if (!task.is_object() || !task.contains("id") || !task.contains("kind"))
            fail(ErrorCode::InvalidInput, "task needs 'id' and 'kind'");
        const std::string kind = task.at("kind").get<std::string>();
        entry["kind"] = kind;
        Json result = run_task_inputs(kind, task.value("inputs", Json::object()));
        entry["result"] = result;
        if (!task.contains("expect"))
            entry["status"] = "done";
        else
            entry["status"] = subset_match(task.at("expect"), result) ? "pass" : "fail";
    } catch (const Error &e) {
        entry["error"] = Json{{"code", error_name(e.code())}, {"message", e.what()}};
        const bool expected = task.is_object() && task.contains("expect") && task.at("expect").is_object() &&
                              task.at("expect").value("error", std::string()) == error_name(e.code());
        entry["status"] = expected ? "pass" : "error";
    } catch (const nlohmann::json::exception &e) {
        entry["error"] = Json{{"code", "INVALID_INPUT"}, {"message", e.what()}};
        entry["status"] = "error";
    }
    return entry;
}

Json run_job(const Json &job)
{
    if (!job.is_object() || !job.contains("tasks") || !job.at("tasks").is_array())
        fail(ErrorCode::InvalidInput, "job needs a 'tasks' array");
    Json tasks = Json::array();
    std::set<std::string> seen;
    int pass = 0, fail_n = 0, error = 0, done = 0;
    for (const auto &t : job.at("tasks")) {
        Json e;
        const std::string id = t.is_object() && t.contains("id") ? t.at("id").dump() : "";
        if (!id.empty() && !seen.insert(id).second) {
            e = Json{{"id", t.at("id")},
                     {"error", Json{{"code", "INVALID_INPUT"}, {"message", "duplicate task id"}}},
                     {"status", "error"}};
        } else {
            e = run_task(t);
        }
        const std::string s = e.at("status").get<std::string>();
        pass += s == "pass";
        fail_n += s == "fail";
        error += s == "error";
        done += s == "done";
        tasks.push_back(e);
    }
    return Json{{"tasks", tasks},
                {"summary", Json{{"total", tasks.size()}, {"pass", pass}, {"fail", fail_n}, {"error", error},
                                 {"done", done}}}};
}

bool job_ok(const Json &report)
{
    const Json &s = report.at("summary");
    return s.at("fail").get<int>() == 0 && s.at("error").get<int>() == 0;
}

} // namespace hlf
