#include "hlf/points.hpp"

#include <algorithm>

#include "hlf/error.hpp"
#include "hlf/expansion.hpp"
#include "hlf/valuation.hpp"

namespace hlf {

namespace {

std::string trim(std::string_view s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return std::string(s.substr(a, b - a));
}

// "(a, b)" -> "a, b" when the outer parentheses enclose everything
std::string strip_outer(std::string s)
{
    s = trim(s);
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        int depth = 0;
        bool encloses = true;
        for (std::size_t i = 0; i < s.size(); ++i) {
            depth += s[i] == '(' ? 1 : s[i] == ')' ? -1 : 0;
            if (depth == 0 && i + 1 < s.size()) {
                encloses = false;
                break;
            }
        }
        if (!encloses)
            break;
        s = trim(std::string_view(s).substr(1, s.size() - 2));
    }
    return s;
}

std::vector<std::string> split_commas(std::string_view text)
{
    const std::string s = strip_outer(std::string(text));
    std::vector<std::string> out;
    if (s.empty())
        return out;
    std::size_t st = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == ',') {
            out.push_back(trim(std::string_view(s).substr(st, i - st)));
            st = i + 1;
        }
    return out;
}

bool mentions(const Ast &a, const std::vector<std::string> &vars)
{
    if (a.kind == Ast::Kind::Ident)
        return std::find(vars.begin(), vars.end(), a.name) != vars.end();
    for (const auto &k : a.kids)
        if (mentions(k, vars))
            return true;
    return false;
}

RPoly eval_rpoly(const FieldPtr &f, const std::vector<std::string> &vars, const Ast &a)
{
    const int n = static_cast<int>(vars.size());
    if (!mentions(a, vars))
        return RPoly::constant(eval_element(f, a), n);
    switch (a.kind) {
    case Ast::Kind::Ident: {
        const auto it = std::find(vars.begin(), vars.end(), a.name);
        return RPoly::var(f, n, static_cast<int>(it - vars.begin()));
    }
    case Ast::Kind::Neg: return -eval_rpoly(f, vars, a.kids[0]);
    case Ast::Kind::Add: return eval_rpoly(f, vars, a.kids[0]) + eval_rpoly(f, vars, a.kids[1]);
    case Ast::Kind::Sub: return eval_rpoly(f, vars, a.kids[0]) - eval_rpoly(f, vars, a.kids[1]);
    case Ast::Kind::Mul: return eval_rpoly(f, vars, a.kids[0]) * eval_rpoly(f, vars, a.kids[1]);
    case Ast::Kind::Div: {
        if (mentions(a.kids[1], vars))
            throw SyntaxError(a.kids[1].pos, "division by a polynomial in the scheme variables");
        const Element d = eval_element(f, a.kids[1]);
        if (d.is_zero())
            fail(ErrorCode::DivisionByZero, "denominator at position " + std::to_string(a.kids[1].pos) + " is zero");
        return eval_rpoly(f, vars, a.kids[0]).scale(d.inv());
    }
    case Ast::Kind::Pow: {
        const Affine e = eval_affine(a.kids[1], "");
        if (e.intercept < 0 || e.intercept > 1000)
            throw SyntaxError(a.kids[1].pos, "exponent of a scheme variable must be in [0, 1000]");
        return eval_rpoly(f, vars, a.kids[0]).pow(static_cast<uint32_t>(e.intercept));
    }
    case Ast::Kind::Int: break;
    }
    return RPoly::constant(eval_element(f, a), n);
}

Element elem_pow(const Element &x, uint32_t e)
{
    return e == 0 ? Element::integer(x.field(), 1) : x.pow(e);
}

void require_arity(std::size_t got, std::size_t want, const std::string &what)
{
    if (got != want)
        fail(ErrorCode::ArityMismatch,
             what + ": expected " + std::to_string(want) + " coordinates, got " + std::to_string(got));
}

// product of coordinate verdicts
Verdict combine(std::vector<Verdict> vs, Topology top)
{
    Verdict out;
    out.topology = top;
    Json coords = Json::array();
    int unknown = -1, diverging = -1;
    for (std::size_t k = 0; k < vs.size(); ++k) {
        coords.push_back(vs[k].to_json());
        if (vs[k].diverges() && diverging < 0)
            diverging = static_cast<int>(k);
        if (vs[k].kind == Verdict::Kind::Unknown && unknown < 0)
            unknown = static_cast<int>(k);
    }
    if (diverging >= 0) {
        const Verdict &d = vs[static_cast<std::size_t>(diverging)];
        out.kind = Verdict::Kind::Diverges;
        out.witness = d.witness;
        out.valuation_ball = d.valuation_ball;
        out.witness_from = d.witness_from;
        out.witness_verified = d.witness_verified;
        out.reason = "coordinate " + std::to_string(diverging) + (d.reason.empty() ? "" : ": " + d.reason);
        return out;
    }
    if (unknown >= 0) {
        out.kind = Verdict::Kind::Unknown;
        out.reason = "coordinate " + std::to_string(unknown) + ": " + vs[static_cast<std::size_t>(unknown)].reason;
        return out;
    }
    out.kind = Verdict::Kind::Converges;
    out.certificate = Json{{"kind", "componentwise"}, {"coordinates", coords}};
    out.tail = [vs](const BasicOpen &U) {
        int64_t n0 = INT64_MIN;
        for (const auto &v : vs)
            n0 = std::max(n0, v.tail(U));
        return n0;
    };
    out.valuation_tail = [vs](int64_t m) {
        int64_t n0 = INT64_MIN;
        for (const auto &v : vs)
            n0 = std::max(n0, v.valuation_tail(m));
        return n0;
    };
    return out;
}

// first n >= from after which a(n) > b(n) holds for good; a must be eventually larger
int64_t eventually_above(const Affine &a, const Affine &b, int64_t from)
{
    if (a.slope == b.slope)
        return from;
    // (a.slope - b.slope) n > b.intercept - a.intercept
    const int64_t ds = a.slope - b.slope, di = b.intercept - a.intercept;
    int64_t n = di / ds;
    while (n * ds <= di)
        ++n;
    while ((n - 1) * ds > di)
        --n;
    return std::max(from, n);
}

// eventual order of affine forms
bool eventually_less(const Affine &a, const Affine &b) { return a < b; }

SeqFamily residue_family(const SeqFamily &s)
{
    const FieldPtr &f = s.field();
    if (f->base() != Field::Base::Finite || f->dim() < 1)
        fail(ErrorCode::UnsupportedField, "residue of families is implemented for F_q towers");
    const FieldPtr res = f->residue();
    const int top = f->coords().back().var;
    auto pos = [&](const FTerm &t) { return t.e[static_cast<std::size_t>(top)]; };
    std::vector<FTerm> den = s.den();
    if (den.empty()) {
        FTerm one;
        one.c = f->one();
        den.push_back(one);
    }
    Affine lead = pos(den.front());
    for (const auto &t : den)
        if (eventually_less(pos(t), lead))
            lead = pos(t);
    int64_t start = s.start();
    auto keep = [&](const std::vector<FTerm> &ts, bool numerator) {
        std::vector<FTerm> out;
        for (const auto &t : ts) {
            const Affine p = pos(t);
            if (p == lead) {
                FTerm r;
                r.c = t.c;
                for (int v = 0, w = 0; v < f->nvars(); ++v)
                    if (v != top)
                        r.e[static_cast<std::size_t>(w++)] = t.e[static_cast<std::size_t>(v)];
                out.push_back(r);
            } else if (eventually_less(lead, p)) {
                start = eventually_above(p, lead, start);
            } else if (numerator) {
                fail(ErrorCode::NotIntegral, "term " + fterm_str(*f, t, true) + " has eventually negative v_F");
            }
        }
        return out;
    };
    std::vector<FTerm> rn = keep(s.num(), true), rd = keep(den, false);
    return SeqFamily::from_terms(res, std::move(rn), std::move(rd)).with_start(start);
}

LaurentPoly radical_poly(const LaurentPoly &p, int k, int d, int shift)
{
    std::vector<Term> ts;
    for (auto t : p.terms()) {
        t.e[static_cast<std::size_t>(k)] = t.e[static_cast<std::size_t>(k)] * d + shift;
        ts.push_back(t);
    }
    return LaurentPoly::from_terms(std::move(ts));
}

std::vector<FTerm> radical_terms(const std::vector<FTerm> &ts, int k, int d, int shift)
{
    std::vector<FTerm> out;
    for (auto t : ts) {
        auto &e = t.e[static_cast<std::size_t>(k)];
        e = e * d + Affine{0, shift};
        out.push_back(t);
    }
    return out;
}

SeqFamily family_to_field(const Extension &S, const SeqFamily &s, int shift)
{
    const int k = *S.radical_var();
    return SeqFamily::from_terms(S.as_field(), radical_terms(s.num(), k, S.degree(), shift),
                                 radical_terms(s.den(), k, S.degree(), 0))
        .with_start(s.start());
}

SElem s_zero(const Extension &S) { return SElem(static_cast<std::size_t>(S.degree()), Element(S.base)); }

SElem s_pow(const Extension &S, const SElem &a, uint32_t e)
{
    SElem r = s_embed(S, Element::integer(S.base, 1)), b = a;
    for (; e; e >>= 1) {
        if (e & 1)
            r = s_mul(S, r, b);
        if (e > 1)
            b = s_mul(S, b, b);
    }
    return r;
}

} // namespace

// ---- base rings

const char *ring_kind_name(BaseRing::Kind k)
{
    switch (k) {
    case BaseRing::Kind::Field: return "field";
    case BaseRing::Kind::ValuationRing: return "valuation-ring";
    case BaseRing::Kind::RankIntegers: return "rank-integers";
    case BaseRing::Kind::ResidueField: return "residue-field";
    }
    return "?";
}

FieldPtr BaseRing::carrier() const
{
    if (kind != Kind::ResidueField)
        return field;
    if (field->dim() == 0)
        fail(ErrorCode::InvalidInput, "dimension-0 field has no residue field");
    return field->residue();
}

RingFlags BaseRing::flags() const
{
    // F, its valuation ring, O_F and the residue field are all asserted to satisfy the hypotheses
    return flag_override ? *flag_override : RingFlags{};
}

bool BaseRing::contains(const Element &x) const
{
    require_same_field(*carrier(), *x.field());
    switch (kind) {
    case Kind::Field:
    case Kind::ResidueField: return true;
    case Kind::ValuationRing: return x.is_zero() || x.top_valuation() >= 0;
    case Kind::RankIntegers: return in_integer_ring(x, 1);
    }
    return false;
}

bool BaseRing::is_unit(const Element &x) const
{
    require_same_field(*carrier(), *x.field());
    if (x.is_zero())
        return false;
    switch (kind) {
    case Kind::Field:
    case Kind::ResidueField: return true;
    case Kind::ValuationRing: return x.top_valuation() == 0;
    case Kind::RankIntegers: {
        const ValVec v = x.valuation();
        return std::all_of(v.begin(), v.end(), [](int64_t a) { return a == 0; });
    }
    }
    return false;
}

std::string BaseRing::name() const { return std::string(ring_kind_name(kind)) + " of " + field->str(); }

Json BaseRing::to_json() const { return Json{{"field", field->str()}, {"ring", ring_kind_name(kind)}}; }

BaseRing BaseRing::parse(const FieldPtr &f, const std::string &kind)
{
    BaseRing r;
    r.field = f;
    for (auto k : {Kind::Field, Kind::ValuationRing, Kind::RankIntegers, Kind::ResidueField})
        if (kind == ring_kind_name(k)) {
            r.kind = k;
            return r;
        }
    fail(ErrorCode::InvalidInput, "unknown base ring '" + kind + "'");
}

// ---- polynomials

RPoly RPoly::constant(const Element &c, int nvars)
{
    RPoly p(c.field(), nvars);
    p.add_term(Mono(static_cast<std::size_t>(nvars), 0), c);
    return p;
}

RPoly RPoly::var(const FieldPtr &f, int nvars, int i)
{
    RPoly p(f, nvars);
    Mono m(static_cast<std::size_t>(nvars), 0);
    m.at(static_cast<std::size_t>(i)) = 1;
    p.add_term(m, Element::integer(f, 1));
    return p;
}

RPoly RPoly::parse(const FieldPtr &f, const std::vector<std::string> &vars, std::string_view text)
{
    for (const auto &v : vars)
        if (f->var_index(v) >= 0)
            fail(ErrorCode::InvalidInput, "variable '" + v + "' clashes with a parameter of " + f->str());
    return eval_rpoly(f, vars, parse_expr(text));
}

void RPoly::add_term(const Mono &m, const Element &c)
{
    if (c.is_zero())
        return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_.emplace(m, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero())
        t_.erase(it);
}

int RPoly::degree(int var) const
{
    int d = -1;
    for (const auto &[m, c] : t_)
        d = std::max(d, static_cast<int>(m.at(static_cast<std::size_t>(var))));
    return d;
}

RPoly RPoly::operator+(const RPoly &o) const
{
    require_same_field(*f_, *o.f_);
    require_arity(static_cast<std::size_t>(o.n_), static_cast<std::size_t>(n_), "polynomial sum");
    RPoly r = *this;
    for (const auto &[m, c] : o.t_)
        r.add_term(m, c);
    return r;
}

RPoly RPoly::operator-() const
{
    RPoly r(f_, n_);
    for (const auto &[m, c] : t_)
        r.t_.emplace(m, -c);
    return r;
}

RPoly RPoly::operator-(const RPoly &o) const { return *this + (-o); }

RPoly RPoly::operator*(const RPoly &o) const
{
    require_same_field(*f_, *o.f_);
    require_arity(static_cast<std::size_t>(o.n_), static_cast<std::size_t>(n_), "polynomial product");
    RPoly r(f_, n_);
    for (const auto &[m1, c1] : t_)
        for (const auto &[m2, c2] : o.t_) {
            Mono m = m1;
            for (std::size_t i = 0; i < m.size(); ++i)
                m[i] += m2[i];
            r.add_term(m, c1 * c2);
        }
    return r;
}

RPoly RPoly::scale(const Element &c) const
{
    RPoly r(f_, n_);
    for (const auto &[m, a] : t_)
        r.add_term(m, a * c);
    return r;
}

RPoly RPoly::pow(uint32_t e) const
{
    RPoly r = constant(Element::integer(f_, 1), n_), b = *this;
    for (; e; e >>= 1) {
        if (e & 1)
            r = r * b;
        if (e > 1)
            b = b * b;
    }
    return r;
}

Element RPoly::eval(const std::vector<Element> &x) const
{
    require_arity(x.size(), static_cast<std::size_t>(n_), "polynomial evaluation");
    Element s(f_);
    for (const auto &[m, c] : t_) {
        Element term = c;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i])
                term = term * elem_pow(x[i], m[i]);
        s = s + term;
    }
    return s;
}

RPoly RPoly::compose(const std::vector<RPoly> &xs, int nvars) const
{
    require_arity(xs.size(), static_cast<std::size_t>(n_), "polynomial composition");
    RPoly s(f_, nvars);
    for (const auto &[m, c] : t_) {
        RPoly term = constant(c, nvars);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i])
                term = term * xs[i].pow(m[i]);
        s = s + term;
    }
    return s;
}

RPoly RPoly::map_coeffs(const FieldPtr &g, const std::function<Element(const Element &)> &phi) const
{
    RPoly r(g, n_);
    for (const auto &[m, c] : t_)
        r.add_term(m, phi(c));
    return r;
}

std::map<uint32_t, RPoly> RPoly::split(int var) const
{
    std::map<uint32_t, RPoly> out;
    for (const auto &[m, c] : t_) {
        Mono r = m;
        const uint32_t k = r.at(static_cast<std::size_t>(var));
        r[static_cast<std::size_t>(var)] = 0;
        auto it = out.try_emplace(k, f_, n_).first;
        it->second.add_term(r, c);
    }
    return out;
}

std::string RPoly::str(const std::vector<std::string> &vars) const
{
    if (t_.empty())
        return "0";
    std::string s;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        const auto &[m, c] = *it;
        std::string mono;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) {
                if (!mono.empty())
                    mono += "*";
                mono += vars.at(i);
                if (m[i] > 1)
                    mono += "^" + std::to_string(m[i]);
            }
        std::string term;
        if (mono.empty())
            term = "(" + c.str() + ")";
        else if (c.is_one())
            term = mono;
        else
            term = "(" + c.str() + ")*" + mono;
        s += (s.empty() ? "" : " + ") + term;
    }
    return s;
}

// ---- presentations and points

AffinePresentation AffinePresentation::make(const BaseRing &base, std::vector<std::string> vars,
                                            const std::vector<std::string> &gens)
{
    AffinePresentation X;
    X.base = base;
    X.vars = std::move(vars);
    for (const auto &g : gens)
        X.gens.push_back(RPoly::parse(base.carrier(), X.vars, g));
    X.validate();
    return X;
}

void AffinePresentation::validate() const
{
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (base.carrier()->var_index(vars[i]) >= 0)
            fail(ErrorCode::InvalidInput, "variable '" + vars[i] + "' clashes with a parameter of " + base.field->str());
        for (std::size_t j = 0; j < i; ++j)
            if (vars[i] == vars[j])
                fail(ErrorCode::InvalidInput, "duplicate variable '" + vars[i] + "'");
    }
    for (const auto &g : gens) {
        require_arity(static_cast<std::size_t>(g.nvars()), vars.size(), "generator");
        for (const auto &[m, c] : g.terms())
            if (!base.contains(c))
                fail(ErrorCode::NotIntegral, "generator coefficient " + c.str() + " is not in the " + base.name());
    }
}

Json AffinePresentation::to_json() const
{
    Json j = base.to_json();
    j["vars"] = vars;
    Json g = Json::array();
    for (const auto &p : gens)
        g.push_back(p.str(vars));
    j["generators"] = g;
    return j;
}

AffinePresentation AffinePresentation::from_json(const Json &j)
{
    const FieldPtr f = Field::parse(j.at("field").get<std::string>());
    const BaseRing R = BaseRing::parse(f, j.value("ring", std::string("field")));
    return make(R, j.at("vars").get<std::vector<std::string>>(),
                j.value("generators", std::vector<std::string>{}));
}

AffinePresentation affine_space(const BaseRing &base, int m, const std::string &prefix)
{
    std::vector<std::string> vars;
    for (int i = 1; i <= m; ++i)
        vars.push_back(m == 1 ? prefix : prefix + std::to_string(i));
    return AffinePresentation::make(base, vars, {});
}

AffinePresentation product(const AffinePresentation &a, const AffinePresentation &b)
{
    if (!a.base.field->same(*b.base.field) || a.base.kind != b.base.kind)
        fail(ErrorCode::FieldMismatch, "product over different base rings");
    AffinePresentation X;
    X.base = a.base;
    X.vars = a.vars;
    X.vars.insert(X.vars.end(), b.vars.begin(), b.vars.end());
    const int n = X.arity(), na = a.arity();
    std::vector<RPoly> ia, ib;
    for (int i = 0; i < na; ++i)
        ia.push_back(RPoly::var(a.base.carrier(), n, i));
    for (int i = 0; i < b.arity(); ++i)
        ib.push_back(RPoly::var(a.base.carrier(), n, na + i));
    for (const auto &g : a.gens)
        X.gens.push_back(g.compose(ia, n));
    for (const auto &g : b.gens)
        X.gens.push_back(g.compose(ib, n));
    X.validate();
    return X;
}

std::string Point::str() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < coords.size(); ++i)
        s += (i ? ", " : "") + coords[i].str();
    s += ")";
    if (chart)
        s += " in chart " + std::to_string(chart);
    return s;
}

Point parse_point(const FieldPtr &f, std::string_view text, int chart)
{
    Point p;
    p.chart = chart;
    for (const auto &c : split_commas(text))
        p.coords.push_back(Element::parse(f, c));
    return p;
}

MemberResult member_points(const AffinePresentation &X, const std::vector<Element> &coords)
{
    require_arity(coords.size(), static_cast<std::size_t>(X.arity()), "point of " + X.base.name());
    MemberResult r;
    for (std::size_t k = 0; k < coords.size(); ++k)
        if (!X.base.contains(coords[k])) {
            r.verdict = MemberResult::Verdict::No;
            r.path = {static_cast<int64_t>(k)};
            r.reason = "coordinate " + std::to_string(k) + " = " + coords[k].str() + " is not in the " + X.base.name();
            return r;
        }
    for (std::size_t g = 0; g < X.gens.size(); ++g) {
        const Element v = X.gens[g].eval(coords);
        if (!v.is_zero()) {
            r.verdict = MemberResult::Verdict::No;
            r.reason = "generator " + std::to_string(g) + " evaluates to " + v.str();
            return r;
        }
    }
    return r;
}

Point apply_map(const std::vector<RPoly> &phi, const AffinePresentation &target, const Point &x)
{
    require_arity(phi.size(), static_cast<std::size_t>(target.arity()), "map components");
    Point y;
    for (const auto &p : phi)
        y.coords.push_back(p.eval(x.coords));
    const MemberResult m = member_points(target, y.coords);
    if (!m.yes())
        fail(ErrorCode::TargetViolation, "image " + y.str() + " is not a point of the target: " + m.reason);
    return y;
}

std::vector<SeqFamily> parse_family_tuple(const FieldPtr &f, std::string_view text)
{
    std::vector<SeqFamily> out;
    for (const auto &c : split_commas(text))
        out.push_back(SeqFamily::parse(f, c));
    return out;
}

Verdict point_seq_converges(const AffinePresentation &X, const PointSeqFamily &f, Topology top)
{
    require_arity(f.coords.size(), static_cast<std::size_t>(X.arity()), "point family");
    const MemberResult lim = member_points(X, f.limit.coords);
    if (!lim.yes())
        fail(ErrorCode::InvalidInput, "limit " + f.limit.str() + " is not a point: " + lim.reason);
    int64_t start = 1;
    for (const auto &c : f.coords)
        start = std::max(start, c.start());
    for (int64_t n = start; n < start + 3; ++n) {
        std::vector<Element> pt;
        for (const auto &c : f.coords)
            pt.push_back(c.at(n));
        const MemberResult m = member_points(X, pt);
        if (!m.yes())
            fail(ErrorCode::InvalidInput, "family leaves the scheme at n = " + std::to_string(n) + ": " + m.reason);
    }
    std::vector<Verdict> vs;
    for (std::size_t k = 0; k < f.coords.size(); ++k)
        vs.push_back(converges(f.coords[k], f.limit.coords[k], top));
    return combine(std::move(vs), top);
}

bool in_principal_open(const BaseRing &R, const RPoly &f, const Point &x) { return R.is_unit(f.eval(x.coords)); }

// ---- charts

const Transition *ChartedScheme::find(int from, int to) const
{
    for (const auto &t : transitions)
        if (t.from == from && t.to == to)
            return &t;
    return nullptr;
}

void ChartedScheme::validate(Rng &rng, int samples) const
{
    if (charts.empty())
        fail(ErrorCode::InvalidInput, "scheme without charts");
    const BaseRing &R = charts.front().base;
    const RingFlags fl = R.flags();
    if (!fl.all())
        fail(ErrorCode::InvalidInput, "the " + R.name() + " does not satisfy the hypotheses for charted points (local " +
                                          std::to_string(fl.local) + ", units open " + std::to_string(fl.units_open) +
                                          ", inversion " + std::to_string(fl.inversion_seq_continuous) + ")");
    for (const auto &c : charts) {
        if (!c.base.field->same(*R.field) || c.base.kind != R.kind)
            fail(ErrorCode::InvalidInput, "charts over different base rings");
        c.validate();
    }
    const int nc = static_cast<int>(charts.size());
    for (const auto &t : transitions) {
        if (t.from < 0 || t.from >= nc || t.to < 0 || t.to >= nc || t.from == t.to)
            fail(ErrorCode::InvalidInput, "transition between unknown charts");
        const auto &A = charts[static_cast<std::size_t>(t.from)], &B = charts[static_cast<std::size_t>(t.to)];
        require_arity(static_cast<std::size_t>(t.localizer.nvars()), static_cast<std::size_t>(A.arity()), "localizer");
        require_arity(t.maps.size(), static_cast<std::size_t>(B.arity()), "transition");
        for (const auto &[p, k] : t.maps)
            require_arity(static_cast<std::size_t>(p.nvars()), static_cast<std::size_t>(A.arity()), "transition map");
        if (!A.gens.empty() || !find(t.to, t.from))
            continue;
        int done = 0;
        for (int tries = 0; done < samples && tries < 40 * samples; ++tries) {
            Point x;
            x.chart = t.from;
            for (int i = 0; i < A.arity(); ++i)
                x.coords.push_back(random_element(R.carrier(), rng, false, 2));
            if (!member_points(A, x.coords).yes())
                continue;
            const auto y = chart_transfer(*this, x, t.to);
            if (!y)
                continue;
            const auto z = chart_transfer(*this, *y, t.from);
            if (!z || !(*z == x))
                fail(ErrorCode::InvalidInput, "transitions " + std::to_string(t.from) + " <-> " + std::to_string(t.to) +
                                                  " do not compose to the identity at " + x.str());
            ++done;
        }
    }
}

Json ChartedScheme::to_json() const
{
    Json j = charts.front().base.to_json();
    Json cs = Json::array();
    for (const auto &c : charts) {
        Json g = Json::array();
        for (const auto &p : c.gens)
            g.push_back(p.str(c.vars));
        cs.push_back(Json{{"vars", c.vars}, {"generators", g}});
    }
    j["charts"] = cs;
    Json ts = Json::array();
    for (const auto &t : transitions) {
        const auto &vars = charts[static_cast<std::size_t>(t.from)].vars;
        Json ms = Json::array();
        for (const auto &[p, k] : t.maps)
            ms.push_back(Json{{"num", p.str(vars)}, {"power", k}});
        ts.push_back(Json{{"from", t.from}, {"to", t.to}, {"localizer", t.localizer.str(vars)}, {"maps", ms}});
    }
    j["transitions"] = ts;
    return j;
}

ChartedScheme ChartedScheme::from_json(const Json &j)
{
    const FieldPtr f = Field::parse(j.at("field").get<std::string>());
    const BaseRing R = BaseRing::parse(f, j.value("ring", std::string("field")));
    ChartedScheme X;
    if (!j.contains("charts")) {
        X.charts.push_back(AffinePresentation::from_json(j));
        return X;
    }
    for (const auto &c : j.at("charts"))
        X.charts.push_back(AffinePresentation::make(R, c.at("vars").get<std::vector<std::string>>(),
                                                    c.value("generators", std::vector<std::string>{})));
    for (const auto &tj : j.value("transitions", Json::array())) {
        Transition t;
        t.from = tj.at("from").get<int>();
        t.to = tj.at("to").get<int>();
        if (t.from < 0 || t.from >= static_cast<int>(X.charts.size()))
            fail(ErrorCode::InvalidInput, "transition from an unknown chart");
        const auto &vars = X.charts[static_cast<std::size_t>(t.from)].vars;
        t.localizer = RPoly::parse(R.carrier(), vars, tj.at("localizer").get<std::string>());
        for (const auto &m : tj.at("maps"))
            t.maps.emplace_back(RPoly::parse(R.carrier(), vars, m.at("num").get<std::string>()),
                                m.value("power", 0u));
        X.transitions.push_back(std::move(t));
    }
    return X;
}

ChartedScheme projective_line(const BaseRing &base)
{
    ChartedScheme X;
    X.charts.push_back(AffinePresentation::make(base, {"X"}, {}));
    X.charts.push_back(AffinePresentation::make(base, {"Y"}, {}));
    const FieldPtr f = base.carrier();
    const RPoly one = RPoly::constant(Element::integer(f, 1), 1);
    X.transitions.push_back(Transition{0, 1, RPoly::var(f, 1, 0), {{one, 1}}});
    X.transitions.push_back(Transition{1, 0, RPoly::var(f, 1, 0), {{one, 1}}});
    return X;
}

std::optional<Point> chart_transfer(const ChartedScheme &X, const Point &x, int j)
{
    if (x.chart == j)
        return x;
    const Transition *t = X.find(x.chart, j);
    if (!t)
        fail(ErrorCode::InvalidInput, "no transition from chart " + std::to_string(x.chart) + " to " + std::to_string(j));
    const BaseRing &R = X.charts.at(static_cast<std::size_t>(j)).base;
    if (!in_principal_open(R, t->localizer, x))
        return std::nullopt;
    const Element fx = t->localizer.eval(x.coords);
    Point y;
    y.chart = j;
    for (const auto &[p, k] : t->maps)
        y.coords.push_back(p.eval(x.coords) / elem_pow(fx, k));
    const MemberResult m = member_points(X.charts[static_cast<std::size_t>(j)], y.coords);
    if (!m.yes())
        fail(ErrorCode::TargetViolation, "transferred point " + y.str() + " violates chart " + std::to_string(j) +
                                             ": " + m.reason);
    return y;
}

bool points_equal(const ChartedScheme &X, const Point &a, const Point &b)
{
    if (a.chart == b.chart)
        return a.coords == b.coords;
    if (const auto bb = chart_transfer(X, b, a.chart))
        return bb->coords == a.coords;
    if (const auto aa = chart_transfer(X, a, b.chart))
        return aa->coords == b.coords;
    return false;
}

// ---- extensions

Extension Extension::parse(const FieldPtr &f, const std::string &theta, std::string_view modulus)
{
    const RPoly m = RPoly::parse(f, {theta}, modulus);
    const int d = m.degree(0);
    if (d < 1)
        fail(ErrorCode::NotFree, "modulus of degree < 1 gives no free extension");
    Extension S;
    S.base = f;
    S.theta = theta;
    S.modulus.assign(static_cast<std::size_t>(d) + 1, Element(f));
    for (const auto &[mono, c] : m.terms())
        S.modulus[mono[0]] = c;
    const Element lead = S.modulus.back();
    for (auto &c : S.modulus)
        c = c / lead;
    return S;
}

std::string Extension::str() const
{
    RPoly m(base, 1);
    for (int k = 0; k <= degree(); ++k)
        m = m + RPoly::var(base, 1, 0).pow(static_cast<uint32_t>(k)).scale(modulus[static_cast<std::size_t>(k)]);
    return base->str() + "[" + theta + "]/(" + m.str({theta}) + ")";
}

std::optional<int> Extension::radical_var() const
{
    if (base->base() != Field::Base::Finite)
        return std::nullopt;
    for (int k = 1; k < degree(); ++k)
        if (!modulus[static_cast<std::size_t>(k)].is_zero())
            return std::nullopt;
    for (int v = 0; v < base->nvars(); ++v)
        if (-modulus[0] == Element::param(base, v))
            return v;
    return std::nullopt;
}

FieldPtr Extension::as_field() const
{
    const auto k = radical_var();
    if (!k)
        fail(ErrorCode::UnsupportedField, str() + " is not presented as a higher local field");
    std::vector<std::string> vars = base->vars();
    vars[static_cast<std::size_t>(*k)] = theta;
    return Field::make(Field::Base::Finite, &base->fq(), 0, {}, vars);
}

SElem s_add(const SElem &a, const SElem &b)
{
    require_arity(b.size(), a.size(), "extension element");
    SElem r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = r[i] + b[i];
    return r;
}

SElem s_mul(const Extension &S, const SElem &a, const SElem &b)
{
    const std::size_t d = static_cast<std::size_t>(S.degree());
    require_arity(a.size(), d, "extension element");
    require_arity(b.size(), d, "extension element");
    std::vector<Element> r(2 * d - 1, Element(S.base));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            r[i + j] = r[i + j] + a[i] * b[j];
    for (std::size_t e = 2 * d - 2; e >= d; --e) {
        const Element c = r[e];
        if (!c.is_zero())
            for (std::size_t i = 0; i < d; ++i)
                r[e - d + i] = r[e - d + i] - c * S.modulus[i];
        r[e] = Element(S.base);
    }
    r.resize(d);
    return r;
}

SElem s_embed(const Extension &S, const Element &x)
{
    SElem r = s_zero(S);
    r[0] = x;
    return r;
}

Element s_to_field(const Extension &S, const SElem &a)
{
    const FieldPtr g = S.as_field();
    const int k = *S.radical_var();
    Element s(g);
    for (int j = 0; j < S.degree(); ++j) {
        const Element &x = a.at(static_cast<std::size_t>(j));
        s = s + Element::fraction(g, radical_poly(x.num(), k, S.degree(), j), radical_poly(x.den(), k, S.degree(), 0));
    }
    return s;
}

// ---- base change

RingMorphismDesc RingMorphismDesc::inclusion(const BaseRing &source)
{
    if (source.kind == BaseRing::Kind::ResidueField)
        fail(ErrorCode::InvalidInput, "the residue field is not a subring of F");
    RingMorphismDesc s;
    s.kind = Kind::Inclusion;
    s.source = source;
    return s;
}

RingMorphismDesc RingMorphismDesc::residue(const FieldPtr &f)
{
    RingMorphismDesc s;
    s.kind = Kind::Residue;
    s.source = BaseRing{f, BaseRing::Kind::ValuationRing, std::nullopt};
    return s;
}

RingMorphismDesc RingMorphismDesc::finite_free(const Extension &S)
{
    RingMorphismDesc s;
    s.kind = Kind::FiniteFree;
    s.source = BaseRing{S.base, BaseRing::Kind::Field, std::nullopt};
    s.ext = S;
    return s;
}

BaseRing RingMorphismDesc::target() const
{
    switch (kind) {
    case Kind::Inclusion: return BaseRing{source.field, BaseRing::Kind::Field, std::nullopt};
    case Kind::Residue: return BaseRing{source.field, BaseRing::Kind::ResidueField, std::nullopt};
    case Kind::FiniteFree: return BaseRing{ext->as_field(), BaseRing::Kind::Field, std::nullopt};
    }
    return source;
}

Element RingMorphismDesc::apply(const Element &x) const
{
    switch (kind) {
    case Kind::Inclusion:
        if (!source.contains(x))
            fail(ErrorCode::NotIntegral, x.str() + " is not in the " + source.name());
        return x;
    case Kind::Residue: return hlf::residue(x);
    case Kind::FiniteFree: return s_to_field(*ext, s_embed(*ext, x));
    }
    return x;
}

SeqFamily RingMorphismDesc::apply(const SeqFamily &s) const
{
    switch (kind) {
    case Kind::Inclusion: require_same_field(*source.field, *s.field()); return s;
    case Kind::Residue: return residue_family(s);
    case Kind::FiniteFree: return family_to_field(*ext, s, 0);
    }
    return s;
}

AffinePresentation base_change(const RingMorphismDesc &sigma, const AffinePresentation &X)
{
    if (!X.base.field->same(*sigma.source.field) || X.base.kind == BaseRing::Kind::ResidueField)
        fail(ErrorCode::FieldMismatch, "presentation over " + X.base.name() + " vs morphism from " + sigma.source.name());
    if (sigma.kind == RingMorphismDesc::Kind::Residue && X.base.kind != BaseRing::Kind::ValuationRing &&
        X.base.kind != BaseRing::Kind::RankIntegers)
        fail(ErrorCode::NotIntegral, "reduction needs a presentation over an integer ring");
    AffinePresentation Y;
    Y.base = sigma.target();
    Y.vars = X.vars;
    for (const auto &g : X.gens)
        Y.gens.push_back(g.map_coeffs(Y.base.carrier(), [&](const Element &c) { return sigma.apply(c); }));
    Y.validate();
    return Y;
}

Point base_change_point(const RingMorphismDesc &sigma, const AffinePresentation &X, const Point &x)
{
    const AffinePresentation Y = base_change(sigma, X);
    Point y;
    y.chart = x.chart;
    for (const auto &c : x.coords) {
        if (!X.base.contains(c))
            fail(ErrorCode::NotIntegral, c.str() + " is not in the " + X.base.name());
        y.coords.push_back(sigma.apply(c));
    }
    const MemberResult m = member_points(Y, y.coords);
    if (!m.yes())
        fail(ErrorCode::TargetViolation, "base-changed point " + y.str() + " fails: " + m.reason);
    return y;
}

BasicOpen reduction_open_image(const BasicOpen &U) { return residue_image(U); }

std::optional<Point> reduction_preimage(const AffinePresentation &X, const Point &xbar)
{
    if (X.base.kind != BaseRing::Kind::ValuationRing)
        fail(ErrorCode::InvalidInput, "reduction starts from points over the valuation ring");
    const FieldPtr f = X.base.field;
    const AffinePresentation Xbar = base_change(RingMorphismDesc::residue(f), X);
    if (!member_points(Xbar, xbar.coords).yes())
        fail(ErrorCode::InvalidInput, xbar.str() + " is not a residue point");
    Point x;
    bool exact = true;
    for (const auto &c : xbar.coords) {
        const Lift l = lift_h(f, c);
        exact = exact && l.exact;
        x.coords.push_back(l.value);
    }
    auto reduces = [&](const Point &p) {
        if (!member_points(X, p.coords).yes())
            return false;
        for (std::size_t k = 0; k < p.coords.size(); ++k)
            if (hlf::residue(p.coords[k]) != xbar.coords[k])
                return false;
        return true;
    };
    if (exact && reduces(x))
        return x;
    if (X.gens.size() != 1)
        return std::nullopt;
    for (int j = 0; j < X.arity(); ++j) {
        const auto parts = X.gens[0].split(j);
        if (X.gens[0].degree(j) != 1)
            continue;
        const Element a = parts.at(1).eval(x.coords);
        const Element b = parts.count(0) ? parts.at(0).eval(x.coords) : Element(f);
        if (!X.base.is_unit(a))
            continue;
        Point y = x;
        y.coords[static_cast<std::size_t>(j)] = -b / a;
        if (reduces(y))
            return y;
    }
    return std::nullopt;
}

// ---- Weil restriction

ExtPresentation ExtPresentation::make(const Extension &S, std::vector<std::string> vars,
                                      const std::vector<std::string> &gens)
{
    ExtPresentation Y;
    Y.S = S;
    Y.vars = std::move(vars);
    std::vector<std::string> all = Y.vars;
    all.push_back(S.theta);
    for (const auto &g : gens)
        Y.gens.push_back(RPoly::parse(S.base, all, g));
    return Y;
}

bool member_s_points(const ExtPresentation &Y, const SPoint &y)
{
    require_arity(y.size(), static_cast<std::size_t>(Y.arity()), "S-point");
    SElem theta = s_zero(Y.S);
    if (Y.S.degree() > 1)
        theta[1] = Element::integer(Y.S.base, 1);
    else
        theta[0] = -Y.S.modulus[0];
    for (const auto &g : Y.gens) {
        SElem acc = s_zero(Y.S);
        for (const auto &[m, c] : g.terms()) {
            SElem term = s_embed(Y.S, c);
            for (std::size_t i = 0; i < y.size(); ++i)
                if (m[i])
                    term = s_mul(Y.S, term, s_pow(Y.S, y[i], m[i]));
            if (m.back())
                term = s_mul(Y.S, term, s_pow(Y.S, theta, m.back()));
            acc = s_add(acc, term);
        }
        for (const auto &c : acc)
            if (!c.is_zero())
                return false;
    }
    return true;
}

Point WeilRestriction::encode(const SPoint &y) const
{
    require_arity(y.size(), static_cast<std::size_t>(Y.arity()), "S-point");
    Point x;
    for (const auto &s : y) {
        require_arity(s.size(), static_cast<std::size_t>(Y.S.degree()), "extension element");
        x.coords.insert(x.coords.end(), s.begin(), s.end());
    }
    return x;
}

SPoint WeilRestriction::decode(const Point &x) const
{
    const std::size_t d = static_cast<std::size_t>(Y.S.degree());
    require_arity(x.coords.size(), d * static_cast<std::size_t>(Y.arity()), "restricted point");
    SPoint y;
    for (std::size_t j = 0; j < static_cast<std::size_t>(Y.arity()); ++j)
        y.emplace_back(x.coords.begin() + static_cast<std::ptrdiff_t>(j * d),
                       x.coords.begin() + static_cast<std::ptrdiff_t>((j + 1) * d));
    return y;
}

WeilRestriction weil_restrict(const ExtPresentation &Y, const RingMorphismDesc &sigma)
{
    if (sigma.kind != RingMorphismDesc::Kind::FiniteFree || !sigma.ext)
        fail(ErrorCode::NotFree, "Weil restriction needs a finite free morphism with a basis");
    if (!sigma.ext->base->same(*Y.S.base) || sigma.ext->modulus != Y.S.modulus)
        fail(ErrorCode::NotFree, "the morphism is not the extension " + Y.S.str());
    const FieldPtr f = Y.S.base;
    const int d = Y.S.degree(), m = Y.arity(), N = m * d + 1;
    WeilRestriction W;
    W.Y = Y;
    W.X.base = BaseRing{f, BaseRing::Kind::Field, std::nullopt};
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < d; ++k)
            W.X.vars.push_back(Y.vars[static_cast<std::size_t>(j)] + "_" + std::to_string(k));
    // Y_j = sum_k X_jk theta^k in the ring R[X][theta]
    const RPoly theta = RPoly::var(f, N, N - 1);
    std::vector<RPoly> subst;
    for (int j = 0; j < m; ++j) {
        RPoly s(f, N);
        for (int k = 0; k < d; ++k)
            s = s + RPoly::var(f, N, j * d + k) * theta.pow(static_cast<uint32_t>(k));
        subst.push_back(s);
    }
    subst.push_back(theta);
    for (const auto &g : Y.gens) {
        auto parts = g.compose(subst, N).split(N - 1);
        // theta^e = -sum_i m_i theta^(e-d+i) for e >= d, from the top down
        for (auto it = parts.rbegin(); it != parts.rend() && static_cast<int>(it->first) >= d;
             it = parts.rbegin()) {
            const uint32_t e = it->first;
            const RPoly c = it->second;
            parts.erase(e);
            for (int i = 0; i < d; ++i) {
                const Element &mi = Y.S.modulus[static_cast<std::size_t>(i)];
                if (mi.is_zero())
                    continue;
                const uint32_t to = e - static_cast<uint32_t>(d) + static_cast<uint32_t>(i);
                auto jt = parts.try_emplace(to, f, N).first;
                jt->second = jt->second - c.scale(mi);
            }
        }
        for (int k = 0; k < d; ++k) {
            const auto it = parts.find(static_cast<uint32_t>(k));
            RPoly comp(f, N - 1);
            if (it != parts.end()) {
                std::vector<RPoly> drop;
                for (int i = 0; i < N - 1; ++i)
                    drop.push_back(RPoly::var(f, N - 1, i));
                drop.push_back(RPoly::constant(Element::integer(f, 1), N - 1));
                comp = it->second.compose(drop, N - 1);
            }
            if (!comp.is_zero())
                W.X.gens.push_back(comp);
        }
    }
    W.X.validate();
    return W;
}

Verdict s_point_seq_converges(const ExtPresentation &Y, const SPointFamily &f, Topology top)
{
    require_arity(f.coords.size(), static_cast<std::size_t>(Y.arity()), "S-point family");
    if (!member_s_points(Y, f.limit))
        fail(ErrorCode::InvalidInput, "limit is not an S-point");
    std::vector<Verdict> vs;
    if (!Y.S.radical_var()) {
        // module topology: coordinates in the basis
        for (std::size_t j = 0; j < f.coords.size(); ++j)
            for (std::size_t k = 0; k < f.coords[j].size(); ++k)
                vs.push_back(converges(f.coords[j][k], f.limit.at(j).at(k), top));
        return combine(std::move(vs), top);
    }
    const FieldPtr g = Y.S.as_field();
    for (std::size_t j = 0; j < f.coords.size(); ++j) {
        require_arity(f.coords[j].size(), static_cast<std::size_t>(Y.S.degree()), "extension family");
        SeqFamily s(g);
        for (std::size_t k = 0; k < f.coords[j].size(); ++k)
            s = s + family_to_field(Y.S, f.coords[j][k], static_cast<int>(k));
        vs.push_back(converges(s, s_to_field(Y.S, f.limit.at(j)), top));
    }
    return combine(std::move(vs), top);
}

PointSeqFamily encode_family(const WeilRestriction &W, const SPointFamily &f)
{
    PointSeqFamily p;
    for (const auto &c : f.coords)
        p.coords.insert(p.coords.end(), c.begin(), c.end());
    p.limit = W.encode(f.limit);
    return p;
}

} // namespace hlf
