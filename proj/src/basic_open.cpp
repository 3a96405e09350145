#include "hlf/basic_open.hpp"

#include <algorithm>

#include "hlf/error.hpp"
#include "hlf/expansion.hpp"

namespace hlf {

struct OpenNode {
    BasicOpen::Kind kind = BasicOpen::Kind::Full;
    int64_t cutoff = 0;
    std::vector<std::pair<int64_t, BasicOpen>> levels; // sorted by index
    BasicOpen::Below below;
    std::vector<BasicOpen> parts; // Meet
};

namespace {

std::shared_ptr<const OpenNode> make_leaf(BasicOpen::Kind k)
{
    auto n = std::make_shared<OpenNode>();
    n->kind = k;
    return n;
}

const std::shared_ptr<const OpenNode> &full_node()
{
    static const auto n = make_leaf(BasicOpen::Kind::Full);
    return n;
}

const std::shared_ptr<const OpenNode> &zero_node()
{
    static const auto n = make_leaf(BasicOpen::Kind::Zero);
    return n;
}

int64_t floor_mod(int64_t a, int64_t m)
{
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::vector<int64_t> tail(const std::vector<int64_t> &v)
{
    return v.size() > 1 ? std::vector<int64_t>(v.begin() + 1, v.end()) : std::vector<int64_t>{};
}

} // namespace

BasicOpen::BasicOpen() : n_(full_node()) {}

BasicOpen BasicOpen::full() { return BasicOpen(); }

BasicOpen BasicOpen::zero()
{
    BasicOpen b;
    b.n_ = zero_node();
    return b;
}

BasicOpen BasicOpen::leveled(int64_t cutoff, std::vector<std::pair<int64_t, BasicOpen>> levels, Below below)
{
    auto n = std::make_shared<OpenNode>();
    n->kind = Kind::Leveled;
    n->cutoff = cutoff;
    std::sort(levels.begin(), levels.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        if (levels[i].first == levels[i + 1].first)
            fail(ErrorCode::InvalidInput, "duplicate level " + std::to_string(levels[i].first) + " in descriptor");
    for (auto &l : levels)
        if (l.first >= cutoff)
            fail(ErrorCode::InvalidInput, "explicit level " + std::to_string(l.first) + " is not below the cutoff");
    if (below.sets.empty())
        fail(ErrorCode::InvalidInput, "below rule without a set");
    if (below.kind != Below::Kind::Periodic && below.sets.size() != 1)
        fail(ErrorCode::InvalidInput, "constant and shifted rules take exactly one set");
    n->levels = std::move(levels);
    n->below = std::move(below);
    BasicOpen b;
    b.n_ = std::move(n);
    return b;
}

BasicOpen BasicOpen::constant_below(int64_t cutoff, std::vector<std::pair<int64_t, BasicOpen>> levels,
                                    const BasicOpen &below)
{
    Below r;
    r.kind = Below::Kind::Constant;
    r.sets = {below};
    return leveled(cutoff, std::move(levels), std::move(r));
}

BasicOpen BasicOpen::ball(int64_t m) { return constant_below(m, {}, zero()); }

BasicOpen BasicOpen::shrinking(int depth)
{
    if (depth < 1)
        fail(ErrorCode::InvalidInput, "shrinking template needs depth >= 1");
    if (depth == 1)
        return ball(0);
    Below r;
    r.kind = Below::Kind::Shifted;
    r.sets = {shrinking(depth - 1)};
    r.poly = {0, 0, 1};
    return leveled(0, {}, std::move(r));
}

BasicOpen BasicOpen::meet(const BasicOpen &a, const BasicOpen &b)
{
    auto n = std::make_shared<OpenNode>();
    n->kind = Kind::Meet;
    n->parts = {a, b};
    BasicOpen r;
    r.n_ = std::move(n);
    return r;
}

BasicOpen::Kind BasicOpen::kind() const { return n_->kind; }

int64_t BasicOpen::cutoff() const
{
    switch (n_->kind) {
    case Kind::Full: return INT64_MIN;
    case Kind::Zero: return INT64_MAX;
    case Kind::Leveled: return n_->cutoff + (sh_.empty() ? 0 : sh_[0]);
    case Kind::Meet: return std::max(n_->parts[0].cutoff(), n_->parts[1].cutoff());
    }
    return 0;
}

BasicOpen BasicOpen::level(int64_t i) const
{
    switch (n_->kind) {
    case Kind::Full: return full();
    case Kind::Zero: fail(ErrorCode::InvalidInput, "the zero set of the last residue field has no levels");
    case Kind::Meet: return intersect(n_->parts[0].level(i), n_->parts[1].level(i));
    case Kind::Leveled: break;
    }
    const int64_t j = i - (sh_.empty() ? 0 : sh_[0]);
    if (j >= n_->cutoff)
        return full();
    const std::vector<int64_t> rest = tail(sh_);
    auto it = std::lower_bound(n_->levels.begin(), n_->levels.end(), j,
                               [](const auto &a, int64_t k) { return a.first < k; });
    if (it != n_->levels.end() && it->first == j)
        return it->second.shifted(rest);
    const Below &b = n_->below;
    switch (b.kind) {
    case Below::Kind::Constant: return b.sets[0].shifted(rest);
    case Below::Kind::Shifted: {
        const int64_t g = b.poly[0] + b.poly[1] * j + b.poly[2] * j * j;
        std::vector<int64_t> s = rest;
        if (s.empty())
            s.push_back(0);
        s[0] += g;
        return b.sets[0].shifted(s);
    }
    case Below::Kind::Periodic:
        return b.sets[static_cast<std::size_t>(floor_mod(j, static_cast<int64_t>(b.sets.size())))].shifted(rest);
    }
    return full();
}

BasicOpen BasicOpen::shifted(const std::vector<int64_t> &shifts) const
{
    bool trivial = true;
    for (auto s : shifts)
        if (s != 0)
            trivial = false;
    if (trivial)
        return *this;
    switch (n_->kind) {
    case Kind::Full:
    case Kind::Zero: return *this;
    case Kind::Meet: return meet(n_->parts[0].shifted(shifts), n_->parts[1].shifted(shifts));
    case Kind::Leveled: break;
    }
    BasicOpen r = *this;
    if (r.sh_.size() < shifts.size())
        r.sh_.resize(shifts.size(), 0);
    for (std::size_t k = 0; k < shifts.size(); ++k)
        r.sh_[k] += shifts[k];
    return r;
}

std::optional<int64_t> BasicOpen::ball_exponent() const
{
    switch (n_->kind) {
    case Kind::Full:
    case Kind::Zero: return std::nullopt;
    case Kind::Meet: {
        auto a = n_->parts[0].ball_exponent(), b = n_->parts[1].ball_exponent();
        if (a && b)
            return std::max(*a, *b);
        if (a && n_->parts[1].is_full())
            return a;
        if (b && n_->parts[0].is_full())
            return b;
        return std::nullopt;
    }
    case Kind::Leveled: break;
    }
    if (n_->below.kind != Below::Kind::Constant || !n_->below.sets[0].is_zero())
        return std::nullopt;
    for (const auto &l : n_->levels)
        if (!l.second.is_zero())
            return std::nullopt;
    return cutoff();
}

BasicOpen intersect(const BasicOpen &a, const BasicOpen &b)
{
    if (a.is_zero() || b.is_zero())
        return BasicOpen::zero();
    if (a.is_full())
        return b;
    if (b.is_full())
        return a;
    return BasicOpen::meet(a, b);
}

void BasicOpen::validate(int depth) const
{
    switch (n_->kind) {
    case Kind::Full: return;
    case Kind::Zero:
        if (depth != 0)
            fail(ErrorCode::InvalidInput, "a zero level set is only open in the last residue field");
        return;
    case Kind::Meet:
        n_->parts[0].validate(depth);
        n_->parts[1].validate(depth);
        return;
    case Kind::Leveled: break;
    }
    if (depth == 0)
        fail(ErrorCode::InvalidInput, "descriptor is deeper than the field");
    for (const auto &l : n_->levels)
        l.second.validate(depth - 1);
    for (const auto &s : n_->below.sets)
        s.validate(depth - 1);
}

Json BasicOpen::to_json() const
{
    switch (n_->kind) {
    case Kind::Full: return "full";
    case Kind::Zero: return "zero";
    case Kind::Meet: return Json{{"meet", Json::array({n_->parts[0].to_json(), n_->parts[1].to_json()})}};
    case Kind::Leveled: break;
    }
    // canonical form: shifts are folded into indices and children
    const int64_t s = sh_.empty() ? 0 : sh_[0];
    const std::vector<int64_t> rest = tail(sh_);
    if (auto m = ball_exponent())
        return Json{{"ball", *m}};
    Json j;
    j["cutoff"] = n_->cutoff + s;
    Json lv = Json::array();
    for (const auto &l : n_->levels)
        lv.push_back(Json{{"i", l.first + s}, {"set", l.second.shifted(rest).to_json()}});
    j["levels"] = lv;
    const Below &b = n_->below;
    Json br;
    switch (b.kind) {
    case Below::Kind::Constant:
        br["kind"] = "constant";
        br["set"] = b.sets[0].shifted(rest).to_json();
        break;
    case Below::Kind::Shifted: {
        br["kind"] = "shifted";
        const int64_t c0 = b.poly[0], c1 = b.poly[1], c2 = b.poly[2];
        br["poly"] = Json::array({c0 - c1 * s + c2 * s * s, c1 - 2 * c2 * s, c2});
        br["set"] = b.sets[0].shifted(rest).to_json();
        break;
    }
    case Below::Kind::Periodic: {
        br["kind"] = "periodic";
        const int64_t L = static_cast<int64_t>(b.sets.size());
        Json arr = Json::array();
        // entry r of the output serves indices i = r mod L, i.e. raw index i - s
        for (int64_t r = 0; r < L; ++r)
            arr.push_back(b.sets[static_cast<std::size_t>(floor_mod(r - s, L))].shifted(rest).to_json());
        br["sets"] = arr;
        break;
    }
    }
    j["below_rule"] = br;
    return j;
}

BasicOpen BasicOpen::from_json(const Json &j)
{
    try {
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            if (s == "full")
                return full();
            if (s == "zero")
                return zero();
            fail(ErrorCode::InvalidInput, "unknown descriptor '" + s + "'");
        }
        if (!j.is_object())
            fail(ErrorCode::InvalidInput, "descriptor must be a string or an object");
        if (j.contains("ball"))
            return ball(j.at("ball").get<int64_t>());
        if (j.contains("meet")) {
            const Json &m = j.at("meet");
            if (!m.is_array() || m.size() != 2)
                fail(ErrorCode::InvalidInput, "meet takes two descriptors");
            return intersect(from_json(m[0]), from_json(m[1]));
        }
        const int64_t cutoff = j.at("cutoff").get<int64_t>();
        std::vector<std::pair<int64_t, BasicOpen>> levels;
        if (j.contains("levels"))
            for (const auto &l : j.at("levels"))
                levels.emplace_back(l.at("i").get<int64_t>(), from_json(l.at("set")));
        Below b;
        const Json br = j.contains("below_rule") ? j.at("below_rule") : Json{{"kind", "constant"}, {"set", "full"}};
        const std::string kind = br.at("kind").get<std::string>();
        if (kind == "constant") {
            b.kind = Below::Kind::Constant;
            b.sets = {from_json(br.at("set"))};
        } else if (kind == "shifted") {
            b.kind = Below::Kind::Shifted;
            b.sets = {from_json(br.at("set"))};
            const Json &p = br.at("poly");
            if (!p.is_array() || p.empty() || p.size() > 3)
                fail(ErrorCode::InvalidInput, "shifted rule needs 1 to 3 polynomial coefficients");
            for (std::size_t k = 0; k < p.size(); ++k)
                b.poly[k] = p[k].get<int64_t>();
        } else if (kind == "periodic") {
            b.kind = Below::Kind::Periodic;
            for (const auto &s : br.at("sets"))
                b.sets.push_back(from_json(s));
            if (b.sets.empty())
                fail(ErrorCode::InvalidInput, "periodic rule needs at least one set");
        } else {
            fail(ErrorCode::InvalidInput, "unknown below rule '" + kind + "'");
        }
        BasicOpen r = leveled(cutoff, std::move(levels), std::move(b));
        if (j.contains("shift"))
            r = r.shifted(j.at("shift").get<std::vector<int64_t>>());
        return r;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::InvalidInput, std::string("malformed descriptor: ") + e.what());
    }
}

const char *verdict_name(MemberResult::Verdict v)
{
    switch (v) {
    case MemberResult::Verdict::Yes: return "YES";
    case MemberResult::Verdict::No: return "NO";
    case MemberResult::Verdict::Unknown: return "UNKNOWN";
    }
    return "?";
}

MemberResult member(const Element &x, const BasicOpen &U, int64_t max_digits)
{
    MemberResult r;
    const FieldPtr &f = x.field();
    if (U.is_full())
        return r;
    if (U.is_zero()) {
        if (f->dim() != 0)
            fail(ErrorCode::InvalidInput, "zero level set above the last residue field");
        if (!x.is_zero()) {
            r.verdict = MemberResult::Verdict::No;
            r.reason = x.str() + " is not 0";
        }
        return r;
    }
    if (f->dim() == 0)
        fail(ErrorCode::InvalidInput, "descriptor is deeper than the field " + f->str());
    if (x.is_zero())
        return r;
    const int64_t c = U.cutoff();
    const int64_t v = x.top_valuation();
    if (v >= c)
        return r;
    if (!f->top_padic() && x.den().is_constant()) {
        // sparse path: the level coefficients of a polynomial are read off directly
        const Scalar dinv = x.den().terms()[0].c.inv();
        bool unknown = false;
        std::string why;
        for (const auto &[i, coef] : x.num().split(f->coords().back().var)) {
            if (i >= c)
                break;
            const BasicOpen D = U.level(i);
            if (D.is_full())
                continue;
            MemberResult s = member(Element::poly(f->residue(), coef.scale(dinv)), D, max_digits);
            if (s.no()) {
                s.path.insert(s.path.begin(), i);
                if (s.reason.empty())
                    s.reason = "level " + std::to_string(i);
                return s;
            }
            if (s.verdict == MemberResult::Verdict::Unknown) {
                unknown = true;
                why = s.reason;
            }
        }
        if (unknown) {
            r.verdict = MemberResult::Verdict::Unknown;
            r.reason = why;
        }
        return r;
    }
    // expand in doubling windows so that an early violation stops the digit loop
    bool unknown = false;
    std::string why;
    int64_t lo = v;
    for (int64_t width = 8; lo <= c - 1; width *= 2) {
        const int64_t hi = std::min(c - 1, lo + width - 1);
        const int64_t digits = std::max<int64_t>(8, std::min<int64_t>(max_digits, hi - v + 1));
        const Jet j = expand_certified(x, lo, hi, digits);
        for (int64_t i = lo; i <= hi; ++i) {
            if (i > j.hi) {
                r.verdict = MemberResult::Verdict::Unknown;
                r.reason = "p-adic digits beyond level " + std::to_string(j.hi) + " are not certified";
                return r;
            }
            const BasicOpen D = U.level(i);
            if (D.is_full())
                continue;
            MemberResult s = member(j.at(i), D, max_digits);
            if (s.no()) {
                s.path.insert(s.path.begin(), i);
                if (s.reason.empty())
                    s.reason = "level " + std::to_string(i);
                return s;
            }
            if (s.verdict == MemberResult::Verdict::Unknown) {
                unknown = true;
                why = s.reason;
            }
        }
        lo = hi + 1;
    }
    if (unknown) {
        r.verdict = MemberResult::Verdict::Unknown;
        r.reason = why;
    }
    return r;
}

BasicOpen scale_open(const Element &alpha, const BasicOpen &U)
{
    if (alpha.is_zero())
        fail(ErrorCode::ZeroElement, "scaling by zero");
    const FieldPtr &f = alpha.field();
    if (!alpha.is_monomial())
        fail(ErrorCode::UnsupportedScalar, alpha.str() + " is not a unit times a parameter monomial");
    const Term &t = alpha.num().terms()[0];
    if (f->mixed()) {
        const uint32_t p = f->prime();
        Rational u = t.c.rat();
        const int64_t k = padic_val(u, p);
        u = k >= 0 ? Rational(u / Rational(pow_int(p, k))) : Rational(u * Rational(pow_int(p, -k)));
        const bool ok = u == 1 || (u == -1 && p != 2);
        if (!ok)
            fail(ErrorCode::UnsupportedScalar,
                 "unit part " + u.get_str() + " does not preserve digit-wise level sets");
    }
    const ValVec v = alpha.valuation();
    std::vector<int64_t> s(v.rbegin(), v.rend());
    return U.shifted(s);
}

BasicOpen residue_image(const BasicOpen &U)
{
    if (U.is_zero())
        fail(ErrorCode::InvalidInput, "residue image of a zero-dimensional set");
    return U.level(0);
}

} // namespace hlf

namespace hlf {

BasicOpen random_open(int depth, Rng &rng, int r)
{
    if (depth == 0)
        return uniform(rng, 0, 3) == 0 ? BasicOpen::full() : BasicOpen::zero();
    if (depth == 1 && uniform(rng, 0, 2) == 0)
        return BasicOpen::ball(uniform(rng, -r, r));
    if (uniform(rng, 0, 9) == 0)
        return BasicOpen::full();
    const int64_t cutoff = uniform(rng, -r, r);
    std::vector<std::pair<int64_t, BasicOpen>> levels;
    const int64_t nl = uniform(rng, 0, 3);
    for (int64_t k = 0; k < nl; ++k) {
        const int64_t i = cutoff - 1 - uniform(rng, 0, 2 * r);
        bool dup = false;
        for (auto &l : levels)
            dup = dup || l.first == i;
        if (!dup)
            levels.emplace_back(i, random_open(depth - 1, rng, r));
    }
    BasicOpen::Below b;
    switch (depth == 1 ? uniform(rng, 0, 1) * 2 : uniform(rng, 0, 2)) {
    case 0:
        b.kind = BasicOpen::Below::Kind::Constant;
        b.sets = {depth == 1 ? BasicOpen::zero() : random_open(depth - 1, rng, r)};
        break;
    case 1:
        b.kind = BasicOpen::Below::Kind::Shifted;
        b.sets = {random_open(depth - 1, rng, r)};
        b.poly = {uniform(rng, -r, r), uniform(rng, -2, 0), uniform(rng, 0, 1)};
        break;
    default: {
        b.kind = BasicOpen::Below::Kind::Periodic;
        const int64_t L = uniform(rng, 1, 3);
        for (int64_t k = 0; k < L; ++k)
            b.sets.push_back(random_open(depth - 1, rng, r));
        break;
    }
    }
    return BasicOpen::leveled(cutoff, std::move(levels), std::move(b));
}

BasicOpen random_subgroup_open(Rng &rng, int r)
{
    const int64_t cutoff = uniform(rng, -r, r);
    std::vector<std::pair<int64_t, BasicOpen>> levels;
    for (int64_t i = cutoff - 1; i >= cutoff - 1 - 2 * r; --i)
        if (uniform(rng, 0, 1) == 0)
            levels.emplace_back(i, BasicOpen::ball(uniform(rng, -r, 2 * r)));
    BasicOpen::Below b;
    if (uniform(rng, 0, 1) == 0) {
        b.kind = BasicOpen::Below::Kind::Constant;
        b.sets = {BasicOpen::ball(uniform(rng, 0, 2 * r))};
    } else {
        b.kind = BasicOpen::Below::Kind::Shifted;
        b.sets = {BasicOpen::ball(0)};
        b.poly = {uniform(rng, 0, r), uniform(rng, -2, 0), uniform(rng, 0, 1)};
    }
    return BasicOpen::leveled(cutoff, std::move(levels), std::move(b));
}

} // namespace hlf
