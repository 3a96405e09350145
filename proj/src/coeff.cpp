#include "hlf/coeff.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <sstream>

#include "hlf/error.hpp"

namespace hlf {

namespace {

using Poly = std::vector<uint32_t>; // F_p[x], low to high

void trim(Poly &a)
{
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

uint32_t inv_mod(uint32_t a, uint32_t p)
{
    int64_t t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        int64_t q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (t < 0)
        t += p;
    return static_cast<uint32_t>(t);
}

Poly poly_mod(Poly a, const Poly &m, uint32_t p)
{
    trim(a);
    const std::size_t dm = m.size() - 1;
    const uint32_t li = inv_mod(m.back(), p);
    while (a.size() > dm) {
        const uint64_t c = uint64_t(a.back()) * li % p;
        const std::size_t s = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i)
            a[s + i] = static_cast<uint32_t>((a[s + i] + uint64_t(p - c) * m[i]) % p);
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly &a, const Poly &b, const Poly &m, uint32_t p)
{
    if (a.empty() || b.empty())
        return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<uint32_t>((r[i + j] + uint64_t(a[i]) * b[j]) % p);
    return poly_mod(std::move(r), m, p);
}

Poly poly_gcd(Poly a, Poly b, uint32_t p)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool irreducible(const Poly &m, uint32_t p)
{
    const int d = static_cast<int>(m.size()) - 1;
    if (d <= 1)
        return d == 1;
    Poly xp = {0, 1};
    for (int i = 1; i <= d / 2; ++i) {
        // xp <- xp^p mod m
        Poly base = xp, acc = {1};
        for (uint64_t e = p; e; e >>= 1) {
            if (e & 1)
                acc = poly_mulmod(acc, base, m, p);
            base = poly_mulmod(base, base, m, p);
        }
        xp = acc;
        Poly h = xp;
        h.resize(std::max<std::size_t>(h.size(), 2), 0);
        h[1] = (h[1] + p - 1) % p;
        trim(h);
        if (h.empty())
            return false;
        if (poly_gcd(m, h, p).size() > 1)
            return false;
    }
    return true;
}

std::string poly_str(const Poly &m, const std::string &g)
{
    std::ostringstream os;
    bool first = true;
    for (int i = static_cast<int>(m.size()) - 1; i >= 0; --i) {
        if (m[i] == 0)
            continue;
        if (!first)
            os << '+';
        first = false;
        if (i == 0 || m[i] != 1)
            os << m[i];
        if (i > 0 && m[i] != 1)
            os << '*';
        if (i >= 1)
            os << g;
        if (i > 1)
            os << '^' << i;
    }
    return os.str();
}

} // namespace

bool is_prime(uint64_t n)
{
    if (n < 2)
        return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

FqField::FqField(uint32_t p, std::vector<uint32_t> mod, std::string gen)
    : p_(p), m_(static_cast<int>(mod.size()) - 1), q_(1), mod_(std::move(mod)), gen_(std::move(gen))
{
    for (int i = 0; i < m_; ++i)
        q_ *= p_;
}

const FqField &FqField::get(uint32_t p, const std::vector<uint32_t> &modulus, const std::string &gen)
{
    static std::mutex mu;
    static std::deque<FqField> store;
    static std::map<std::tuple<uint32_t, std::vector<uint32_t>, std::string>, const FqField *> index;

    if (!is_prime(p) || p > (1u << 30))
        fail(ErrorCode::UnsupportedField, "characteristic " + std::to_string(p) + " is not a supported prime");
    Poly m = modulus;
    for (auto &c : m)
        c %= p;
    trim(m);
    if (m.size() < 2 || m.back() != 1)
        fail(ErrorCode::UnsupportedField, "modulus must be monic of degree >= 1");
    if (static_cast<int>(m.size()) - 1 > kMaxFqDegree)
        fail(ErrorCode::UnsupportedField, "extension degree exceeds " + std::to_string(kMaxFqDegree));
    if (!irreducible(m, p))
        fail(ErrorCode::UnsupportedField, "modulus " + poly_str(m, gen) + " is reducible over F_" + std::to_string(p));

    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p, m, gen);
    auto it = index.find(key);
    if (it != index.end())
        return *it->second;
    store.emplace_back(p, m, gen);
    index.emplace(key, &store.back());
    return store.back();
}

const FqField &FqField::prime(uint32_t p) { return get(p, {0, 1}, "w"); }

std::string FqField::descriptor() const
{
    if (m_ == 1)
        return std::to_string(p_);
    return std::to_string(q_) + ";" + poly_str(mod_, gen_);
}

FqElem::FqElem(const FqField &f, int64_t v) : f_(&f)
{
    int64_t r = v % static_cast<int64_t>(f.p());
    if (r < 0)
        r += f.p();
    c_[0] = static_cast<uint32_t>(r);
}

FqElem FqElem::generator(const FqField &f)
{
    FqElem e(f, 0);
    if (f.degree() == 1) {
        // the root of w itself, i.e. -m_0
        e.c_[0] = (f.p() - f.modulus()[0]) % f.p();
    } else {
        e.c_[1] = 1;
    }
    return e;
}

FqElem FqElem::from_index(const FqField &f, uint64_t idx)
{
    FqElem e(f, 0);
    for (int i = 0; i < f.degree(); ++i) {
        e.c_[i] = static_cast<uint32_t>(idx % f.p());
        idx /= f.p();
    }
    return e;
}

uint64_t FqElem::index() const
{
    uint64_t r = 0;
    for (int i = f_->degree() - 1; i >= 0; --i)
        r = r * f_->p() + c_[i];
    return r;
}

bool FqElem::is_zero() const
{
    for (auto c : c_)
        if (c)
            return false;
    return true;
}

bool FqElem::is_one() const
{
    if (c_[0] != 1)
        return false;
    for (int i = 1; i < kMaxFqDegree; ++i)
        if (c_[i])
            return false;
    return true;
}

std::optional<uint32_t> FqElem::as_prime() const
{
    for (int i = 1; i < kMaxFqDegree; ++i)
        if (c_[i])
            return std::nullopt;
    return c_[0];
}

void FqElem::check(const FqElem &o) const
{
    if (f_ != o.f_)
        fail(ErrorCode::FieldMismatch, "finite field elements from different fields");
}

FqElem FqElem::operator+(const FqElem &o) const
{
    check(o);
    FqElem r(*f_);
    const uint32_t p = f_->p();
    for (int i = 0; i < f_->degree(); ++i)
        r.c_[i] = static_cast<uint32_t>((uint64_t(c_[i]) + o.c_[i]) % p);
    return r;
}

FqElem FqElem::operator-() const
{
    FqElem r(*f_);
    const uint32_t p = f_->p();
    for (int i = 0; i < f_->degree(); ++i)
        r.c_[i] = c_[i] ? p - c_[i] : 0;
    return r;
}

FqElem FqElem::operator-(const FqElem &o) const { return *this + (-o); }

FqElem FqElem::operator*(const FqElem &o) const
{
    check(o);
    const uint32_t p = f_->p();
    const int m = f_->degree();
    if (m == 1) {
        FqElem r(*f_);
        r.c_[0] = static_cast<uint32_t>(uint64_t(c_[0]) * o.c_[0] % p);
        return r;
    }
    Poly a(c_.begin(), c_.begin() + m), b(o.c_.begin(), o.c_.begin() + m);
    trim(a);
    trim(b);
    Poly r = poly_mulmod(a, b, f_->modulus(), p);
    FqElem e(*f_);
    for (std::size_t i = 0; i < r.size(); ++i)
        e.c_[i] = r[i];
    return e;
}

FqElem FqElem::pow(uint64_t e) const
{
    FqElem acc(*f_, 1), base = *this;
    for (; e; e >>= 1) {
        if (e & 1)
            acc = acc * base;
        base = base * base;
    }
    return acc;
}

FqElem FqElem::inv() const
{
    if (is_zero())
        fail(ErrorCode::DivisionByZero, "inverse of zero in F_" + std::to_string(f_->order()));
    return pow(f_->order() - 2);
}

bool FqElem::operator==(const FqElem &o) const { return f_ == o.f_ && c_ == o.c_; }

std::string FqElem::str() const
{
    if (f_->degree() == 1)
        return std::to_string(c_[0]);
    Poly a(c_.begin(), c_.begin() + f_->degree());
    trim(a);
    if (a.empty())
        return "0";
    std::string s = poly_str(a, f_->generator());
    return a.size() > 1 && (a[0] != 0 || std::count_if(a.begin(), a.end(), [](uint32_t c) { return c; }) > 1)
               ? "(" + s + ")"
               : s;
}

FqElem fq_arith(FqOp op, const FqElem &a, const FqElem *b)
{
    switch (op) {
    case FqOp::Add:
        if (!b)
            fail(ErrorCode::InvalidInput, "add needs two operands");
        return a + *b;
    case FqOp::Mul:
        if (!b)
            fail(ErrorCode::InvalidInput, "mul needs two operands");
        return a * *b;
    case FqOp::Inv: return a.inv();
    case FqOp::Neg: return -a;
    }
    return a;
}

int64_t padic_val(const Integer &x, uint32_t p)
{
    if (x == 0)
        fail(ErrorCode::ZeroElement, "valuation of zero");
    Integer y = abs(x);
    int64_t v = 0;
    while (mpz_divisible_ui_p(y.get_mpz_t(), p)) {
        mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), p);
        ++v;
    }
    return v;
}

int64_t padic_val(const Rational &x, uint32_t p)
{
    return padic_val(Integer(x.get_num()), p) - padic_val(Integer(x.get_den()), p);
}

uint32_t reduce_mod_p(const Rational &x, uint32_t p)
{
    const uint32_t n = static_cast<uint32_t>(mpz_fdiv_ui(x.get_num_mpz_t(), p));
    const uint32_t d = static_cast<uint32_t>(mpz_fdiv_ui(x.get_den_mpz_t(), p));
    if (d == 0)
        fail(ErrorCode::NotIntegral, "denominator divisible by p");
    return static_cast<uint32_t>(uint64_t(n) * inv_mod(d, p) % p);
}

Integer pow_int(uint32_t p, uint64_t e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, e);
    return r;
}

PAdicApprox PAdicApprox::zero(uint32_t p)
{
    PAdicApprox r;
    r.p_ = p;
    r.state_ = State::ExactZero;
    return r;
}

PAdicApprox PAdicApprox::known(uint32_t p, int64_t k, const Integer &unit, int64_t N)
{
    if (N < 1)
        fail(ErrorCode::InvalidInput, "p-adic precision must be >= 1");
    PAdicApprox r;
    r.p_ = p;
    r.N_ = N;
    Integer u;
    const Integer pn = pow_int(p, N);
    mpz_fdiv_r(u.get_mpz_t(), unit.get_mpz_t(), pn.get_mpz_t());
    if (mpz_divisible_ui_p(u.get_mpz_t(), p)) {
        // leading digit vanished: strip what we can
        if (u == 0)
            return insufficient(p, k + N);
        const int64_t s = padic_val(u, p);
        u /= pow_int(p, s);
        r.k_ = k + s;
        r.N_ = N - s;
    } else {
        r.k_ = k;
    }
    r.u_ = u;
    r.state_ = State::Known;
    return r;
}

PAdicApprox PAdicApprox::insufficient(uint32_t p, int64_t bound)
{
    PAdicApprox r;
    r.p_ = p;
    r.state_ = State::Insufficient;
    r.k_ = bound;
    r.N_ = 0;
    return r;
}

PAdicApprox PAdicApprox::from_rational(const Rational &x, uint32_t p, int64_t N)
{
    if (x == 0)
        return zero(p);
    const int64_t k = padic_val(x, p);
    Rational y = x;
    if (k > 0)
        y /= Rational(pow_int(p, k));
    else if (k < 0)
        y *= Rational(pow_int(p, -k));
    const Integer pn = pow_int(p, N);
    Integer d = y.get_den(), di;
    mpz_invert(di.get_mpz_t(), d.get_mpz_t(), pn.get_mpz_t());
    Integer u = Integer(y.get_num()) * di;
    return known(p, k, u, N);
}

int64_t PAdicApprox::absolute_precision() const
{
    switch (state_) {
    case State::ExactZero: return INT64_MAX;
    case State::Known: return k_ + N_;
    case State::Insufficient: return k_;
    }
    return 0;
}

PAdicApprox PAdicApprox::operator-() const
{
    if (state_ != State::Known)
        return *this;
    return known(p_, k_, -u_, N_);
}

PAdicApprox PAdicApprox::operator+(const PAdicApprox &o) const
{
    if (p_ != o.p_)
        fail(ErrorCode::FieldMismatch, "p-adic numbers for different primes");
    if (state_ == State::ExactZero)
        return o;
    if (o.state_ == State::ExactZero)
        return *this;
    const int64_t abs = std::min(absolute_precision(), o.absolute_precision());
    // insufficient operands contribute nothing below their bound
    const Rational s = value() + o.value();
    if (s == 0)
        return insufficient(p_, abs);
    const int64_t k = padic_val(s, p_);
    if (k >= abs)
        return insufficient(p_, abs);
    return from_rational(s, p_, abs - k);
}

PAdicApprox PAdicApprox::operator*(const PAdicApprox &o) const
{
    if (p_ != o.p_)
        fail(ErrorCode::FieldMismatch, "p-adic numbers for different primes");
    if (state_ == State::ExactZero || o.state_ == State::ExactZero)
        return zero(p_);
    if (state_ == State::Insufficient || o.state_ == State::Insufficient)
        return insufficient(p_, k_ + o.k_);
    return known(p_, k_ + o.k_, u_ * o.u_, std::min(N_, o.N_));
}

Rational PAdicApprox::value() const
{
    if (state_ != State::Known)
        return 0;
    Rational r(u_);
    if (k_ >= 0)
        r *= Rational(pow_int(p_, k_));
    else
        r /= Rational(pow_int(p_, -k_));
    return r;
}

std::string PAdicApprox::str() const
{
    std::ostringstream os;
    switch (state_) {
    case State::ExactZero: os << "0"; break;
    case State::Known: os << u_.get_str() << "*" << p_ << "^" << k_ << " + O(" << p_ << "^" << (k_ + N_) << ")"; break;
    case State::Insufficient: os << "O(" << p_ << "^" << k_ << ")"; break;
    }
    return os.str();
}

std::optional<int64_t> padic_val(const PAdicApprox &x)
{
    if (x.state() == PAdicApprox::State::Known)
        return x.exponent();
    if (x.state() == PAdicApprox::State::ExactZero)
        fail(ErrorCode::ZeroElement, "valuation of exact zero");
    return std::nullopt;
}

Integer teichmuller_int(uint32_t a, uint32_t p, int64_t N)
{
    const Integer pn = pow_int(p, N);
    Integer x = a % p, prev;
    // x <- x^p converges digit by digit; N iterations suffice
    for (int64_t i = 0; i <= N; ++i) {
        prev = x;
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), p, pn.get_mpz_t());
        if (x == prev)
            break;
    }
    return x;
}

PAdicApprox teichmuller(const FqElem &a, int64_t N)
{
    const auto v = a.as_prime();
    if (!v || a.field().degree() != 1)
        fail(ErrorCode::UnsupportedScalar, "teichmuller expects an element of a prime field");
    const uint32_t p = a.field().p();
    if (*v == 0)
        return PAdicApprox::zero(p);
    return PAdicApprox::known(p, 0, teichmuller_int(*v, p, N), N);
}

std::optional<Rational> teichmuller_exact(uint32_t a, uint32_t p)
{
    a %= p;
    if (a == 0)
        return Rational(0);
    if (a == 1)
        return Rational(1);
    if (a == p - 1)
        return Rational(-1);
    return std::nullopt;
}

} // namespace hlf
