#include "hlf/poly.hpp"

#include <algorithm>

#include "hlf/error.hpp"

namespace hlf {

namespace {

[[noreturn]] void domain_mismatch() { fail(ErrorCode::FieldMismatch, "scalars from different coefficient domains"); }

bool exps_less(const Exps &a, const Exps &b) { return a < b; }

} // namespace

bool Scalar::is_zero() const { return is_fq() ? fq().is_zero() : rat() == 0; }
bool Scalar::is_one() const { return is_fq() ? fq().is_one() : rat() == 1; }
Scalar Scalar::zero() const { return from_int(0); }
Scalar Scalar::one() const { return from_int(1); }

Scalar Scalar::from_int(int64_t k) const
{
    if (is_fq())
        return Scalar(FqElem(fq().field(), k));
    return Scalar(Rational(static_cast<long>(k)));
}

Scalar Scalar::operator+(const Scalar &o) const
{
    if (is_fq() != o.is_fq())
        domain_mismatch();
    return is_fq() ? Scalar(fq() + o.fq()) : Scalar(Rational(rat() + o.rat()));
}

Scalar Scalar::operator-(const Scalar &o) const
{
    if (is_fq() != o.is_fq())
        domain_mismatch();
    return is_fq() ? Scalar(fq() - o.fq()) : Scalar(Rational(rat() - o.rat()));
}

Scalar Scalar::operator*(const Scalar &o) const
{
    if (is_fq() != o.is_fq())
        domain_mismatch();
    return is_fq() ? Scalar(fq() * o.fq()) : Scalar(Rational(rat() * o.rat()));
}

Scalar Scalar::operator-() const { return is_fq() ? Scalar(-fq()) : Scalar(Rational(-rat())); }

Scalar Scalar::inv() const
{
    if (is_zero())
        fail(ErrorCode::DivisionByZero, "inverse of zero scalar");
    return is_fq() ? Scalar(fq().inv()) : Scalar(Rational(1 / rat()));
}

bool Scalar::operator==(const Scalar &o) const
{
    if (is_fq() != o.is_fq())
        return false;
    return is_fq() ? fq() == o.fq() : rat() == o.rat();
}

bool Scalar::operator<(const Scalar &o) const
{
    if (is_fq() != o.is_fq())
        return is_fq();
    return is_fq() ? fq() < o.fq() : rat() < o.rat();
}

std::string Scalar::str() const { return is_fq() ? fq().str() : rat().get_str(); }

Exps exps_add(const Exps &a, const Exps &b)
{
    Exps r;
    for (int i = 0; i < kMaxVars; ++i)
        r[i] = a[i] + b[i];
    return r;
}

Exps exps_sub(const Exps &a, const Exps &b)
{
    Exps r;
    for (int i = 0; i < kMaxVars; ++i)
        r[i] = a[i] - b[i];
    return r;
}

bool exps_zero(const Exps &a)
{
    for (auto x : a)
        if (x)
            return false;
    return true;
}

LaurentPoly LaurentPoly::constant(const Scalar &c) { return monomial(c, Exps{}); }

LaurentPoly LaurentPoly::monomial(const Scalar &c, const Exps &e)
{
    LaurentPoly p;
    if (!c.is_zero())
        p.t_.push_back({e, c});
    return p;
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> ts)
{
    std::sort(ts.begin(), ts.end(), [](const Term &a, const Term &b) { return exps_less(a.e, b.e); });
    LaurentPoly p;
    for (auto &t : ts) {
        if (!p.t_.empty() && p.t_.back().e == t.e)
            p.t_.back().c = p.t_.back().c + t.c;
        else
            p.t_.push_back(std::move(t));
        if (p.t_.back().c.is_zero())
            p.t_.pop_back();
    }
    // a zero sum may have hidden a later duplicate; re-check adjacency
    std::vector<Term> out;
    for (auto &t : p.t_) {
        if (!out.empty() && out.back().e == t.e) {
            out.back().c = out.back().c + t.c;
            if (out.back().c.is_zero())
                out.pop_back();
        } else {
            out.push_back(std::move(t));
        }
    }
    p.t_ = std::move(out);
    return p;
}

bool LaurentPoly::is_constant() const { return t_.empty() || (t_.size() == 1 && exps_zero(t_[0].e)); }

Exps LaurentPoly::min_exps() const
{
    Exps m = t_.front().e;
    for (const auto &t : t_)
        for (int i = 0; i < kMaxVars; ++i)
            m[i] = std::min(m[i], t.e[i]);
    return m;
}

int32_t LaurentPoly::max_deg(int var) const
{
    int32_t d = INT32_MIN;
    for (const auto &t : t_)
        d = std::max(d, t.e[var]);
    return d;
}

int32_t LaurentPoly::min_deg(int var) const
{
    int32_t d = INT32_MAX;
    for (const auto &t : t_)
        d = std::min(d, t.e[var]);
    return d;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly &o) const
{
    LaurentPoly r;
    r.t_.reserve(t_.size() + o.t_.size());
    std::size_t i = 0, j = 0;
    while (i < t_.size() || j < o.t_.size()) {
        if (j == o.t_.size() || (i < t_.size() && exps_less(t_[i].e, o.t_[j].e))) {
            r.t_.push_back(t_[i++]);
        } else if (i == t_.size() || exps_less(o.t_[j].e, t_[i].e)) {
            r.t_.push_back(o.t_[j++]);
        } else {
            Scalar c = t_[i].c + o.t_[j].c;
            if (!c.is_zero())
                r.t_.push_back({t_[i].e, c});
            ++i;
            ++j;
        }
    }
    return r;
}

LaurentPoly LaurentPoly::operator-() const
{
    LaurentPoly r = *this;
    for (auto &t : r.t_)
        t.c = -t.c;
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly &o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly &o) const
{
    if (t_.empty() || o.t_.empty())
        return {};
    if (o.t_.size() == 1)
        return mul_term(o.t_[0]);
    if (t_.size() == 1)
        return o.mul_term(t_[0]);
    std::vector<Term> ts;
    ts.reserve(t_.size() * o.t_.size());
    for (const auto &a : t_)
        for (const auto &b : o.t_)
            ts.push_back({exps_add(a.e, b.e), a.c * b.c});
    return from_terms(std::move(ts));
}

LaurentPoly LaurentPoly::mul_term(const Term &m) const
{
    if (m.c.is_zero())
        return {};
    LaurentPoly r = *this;
    for (auto &t : r.t_) {
        t.e = exps_add(t.e, m.e);
        t.c = t.c * m.c;
    }
    return r;
}

LaurentPoly LaurentPoly::scale(const Scalar &c) const
{
    if (c.is_zero())
        return {};
    LaurentPoly r = *this;
    for (auto &t : r.t_)
        t.c = t.c * c;
    return r;
}

LaurentPoly LaurentPoly::shift(const Exps &e) const
{
    LaurentPoly r = *this;
    for (auto &t : r.t_)
        t.e = exps_add(t.e, e);
    return r;
}

bool LaurentPoly::operator==(const LaurentPoly &o) const
{
    if (t_.size() != o.t_.size())
        return false;
    for (std::size_t i = 0; i < t_.size(); ++i)
        if (t_[i].e != o.t_[i].e || t_[i].c != o.t_[i].c)
            return false;
    return true;
}

std::map<int32_t, LaurentPoly> LaurentPoly::split(int v) const
{
    std::map<int32_t, std::vector<Term>> parts;
    for (const auto &t : t_) {
        Term u = t;
        u.e[v] = 0;
        parts[t.e[v]].push_back(std::move(u));
    }
    std::map<int32_t, LaurentPoly> r;
    for (auto &[d, ts] : parts)
        r.emplace(d, from_terms(std::move(ts)));
    return r;
}

LaurentPoly divide_exact(const LaurentPoly &a, const LaurentPoly &b)
{
    if (b.is_zero())
        fail(ErrorCode::DivisionByZero, "polynomial division by zero");
    if (a.is_zero())
        return {};
    if (b.is_monomial()) {
        const Term &m = b.terms()[0];
        Exps ne;
        for (int i = 0; i < kMaxVars; ++i)
            ne[i] = -m.e[i];
        return a.mul_term({ne, m.c.inv()});
    }
    // quotient terms lie lexicographically between min(a)/min(b) and max(a)/max(b)
    const Exps qmin = exps_sub(a.terms().front().e, b.terms().front().e);
    const Term &bl = b.lex_lead();
    const Scalar binv = bl.c.inv();
    LaurentPoly r = a;
    std::vector<Term> q;
    while (!r.is_zero()) {
        const Term &rl = r.lex_lead();
        Term qt{exps_sub(rl.e, bl.e), rl.c * binv};
        if (qt.e < qmin)
            fail(ErrorCode::InvalidInput, "inexact polynomial division");
        r = r - b.mul_term(qt);
        q.push_back(std::move(qt));
    }
    return LaurentPoly::from_terms(std::move(q));
}

namespace {

// Largest variable index in use, -1 for constants.
int top_var(const LaurentPoly &a)
{
    int v = -1;
    for (const auto &t : a.terms())
        for (int i = kMaxVars - 1; i > v; --i)
            if (t.e[i] != 0) {
                v = i;
                break;
            }
    return v;
}

LaurentPoly monic(const LaurentPoly &a) { return a.scale(a.lex_lead().c.inv()); }

LaurentPoly strip_monomial(const LaurentPoly &a)
{
    Exps m = a.min_exps();
    for (auto &x : m)
        x = -x;
    return a.shift(m);
}

LaurentPoly rec_gcd(const LaurentPoly &a, const LaurentPoly &b);

LaurentPoly content(const LaurentPoly &a, int v)
{
    LaurentPoly g;
    for (auto &[d, c] : a.split(v)) {
        g = g.is_zero() ? monic(c) : rec_gcd(g, c);
        if (g.is_constant())
            break;
    }
    return g;
}

// pseudo-remainder of a by b in variable v (b primitive in v)
LaurentPoly prem(LaurentPoly a, const LaurentPoly &b, int v)
{
    const int32_t db = b.max_deg(v);
    const auto bs = b.split(v);
    const LaurentPoly &lb = bs.rbegin()->second;
    while (!a.is_zero()) {
        const int32_t da = a.max_deg(v);
        if (da < db)
            break;
        const LaurentPoly la = a.split(v).rbegin()->second;
        Exps s{};
        s[v] = da - db;
        a = a * lb - (la * b).shift(s);
        if (!a.is_zero())
            a = monic(a);
    }
    return a;
}

using Dense = std::vector<Scalar>; // univariate, low to high

void dense_trim(Dense &a)
{
    while (!a.empty() && a.back().is_zero())
        a.pop_back();
}

std::size_t dense_gcd_degree(Dense a, Dense b)
{
    dense_trim(a);
    dense_trim(b);
    while (!b.empty()) {
        const Scalar li = b.back().inv();
        while (a.size() >= b.size()) {
            const Scalar c = a.back() * li;
            const std::size_t s = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[s + i] = a[s + i] - c * b[i];
            a.pop_back();
            dense_trim(a);
        }
        std::swap(a, b);
    }
    return a.empty() ? 0 : a.size() - 1;
}

// a(v, alpha) for a point alpha in the other variables
Dense specialise(const LaurentPoly &a, int v, const std::array<Scalar, kMaxVars> &alpha)
{
    Dense d(static_cast<std::size_t>(a.max_deg(v)) + 1, a.terms()[0].c.zero());
    for (const auto &t : a.terms()) {
        Scalar c = t.c;
        for (int i = 0; i < kMaxVars; ++i) {
            if (i == v)
                continue;
            for (int32_t k = 0; k < t.e[i]; ++k)
                c = c * alpha[i];
        }
        d[static_cast<std::size_t>(t.e[v])] = d[static_cast<std::size_t>(t.e[v])] + c;
    }
    return d;
}

bool uses(const LaurentPoly &a, int v)
{
    for (const auto &t : a.terms())
        if (t.e[v] != 0)
            return true;
    return false;
}

// True only if a and b (monomial-free polynomials) certainly have no common factor:
// for each shared variable some specialisation keeps the degree and yields a unit gcd.
bool certainly_coprime(const LaurentPoly &a, const LaurentPoly &b)
{
    const Scalar one = a.terms()[0].c.one();
    uint64_t state = 0x9e3779b97f4a7c15ull ^ (a.size() * 131 + b.size());
    auto next = [&]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    for (int v = 0; v < kMaxVars; ++v) {
        if (!uses(a, v) || !uses(b, v))
            continue;
        bool ok = false;
        for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
            std::array<Scalar, kMaxVars> alpha;
            for (int i = 0; i < kMaxVars; ++i) {
                if (one.is_fq()) {
                    const FqField &f = one.fq().field();
                    alpha[i] = Scalar(FqElem::from_index(f, 1 + next() % (f.order() - 1)));
                } else {
                    const long k = static_cast<long>(next() % 199) - 99;
                    alpha[i] = Scalar(Rational(k == 0 ? 101 : k));
                }
            }
            Dense da = specialise(a, v, alpha), db = specialise(b, v, alpha);
            if (da.back().is_zero() && db.back().is_zero())
                continue;
            ok = dense_gcd_degree(da, db) == 0;
        }
        if (!ok)
            return false;
    }
    return true;
}

LaurentPoly rec_gcd(const LaurentPoly &a0, const LaurentPoly &b0)
{
    if (a0.is_zero())
        return monic(b0);
    if (b0.is_zero())
        return monic(a0);
    const LaurentPoly a = strip_monomial(a0), b = strip_monomial(b0);
    const Scalar one = a.terms()[0].c.one();
    if (a.is_constant() || b.is_constant() || certainly_coprime(a, b))
        return LaurentPoly::constant(one);
    // main variable: shared, of least degree
    int v = -1;
    int32_t best = INT32_MAX;
    for (int i = 0; i < kMaxVars; ++i)
        if (uses(a, i) && uses(b, i) && std::max(a.max_deg(i), b.max_deg(i)) < best) {
            best = std::max(a.max_deg(i), b.max_deg(i));
            v = i;
        }
    if (v < 0) {
        // no shared variable: the gcd lives in the coefficients
        const int va = top_var(a);
        return rec_gcd(content(a, va), b);
    }
    const LaurentPoly ca = content(a, v), cb = content(b, v);
    const LaurentPoly c = rec_gcd(ca, cb);
    LaurentPoly pa = divide_exact(a, ca), pb = divide_exact(b, cb);
    if (pa.max_deg(v) == 0 || pb.max_deg(v) == 0)
        return c;
    if (pa.max_deg(v) < pb.max_deg(v))
        std::swap(pa, pb);
    for (;;) {
        LaurentPoly r = prem(pa, pb, v);
        if (r.is_zero())
            break;
        pa = std::move(pb);
        r = strip_monomial(r);
        pb = divide_exact(r, content(r, v));
        if (pb.max_deg(v) == 0)
            return c;
    }
    return monic(c * divide_exact(pb, content(pb, v)));
}

} // namespace

LaurentPoly laurent_gcd(const LaurentPoly &a, const LaurentPoly &b)
{
    if (a.is_zero() && b.is_zero())
        fail(ErrorCode::InvalidInput, "gcd(0, 0)");
    return monic(rec_gcd(a, b));
}

} // namespace hlf
