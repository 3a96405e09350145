#pragma once

// Rational points of finite-type schemes over F, its valuation ring, O_F or the
// residue field: membership, polynomial maps, sequences of points, charts, base
// change and Weil restriction along R[theta]/(m).

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hlf/convergence.hpp"

namespace hlf {

// Hypotheses under which points over a ring carry the induced topology.
struct RingFlags {
    bool local = true;
    bool units_open = true;
    bool inversion_seq_continuous = true;
    bool all() const { return local && units_open && inversion_seq_continuous; }
};

struct BaseRing {
    enum class Kind { Field, ValuationRing, RankIntegers, ResidueField };

    FieldPtr field; // the higher local field F
    Kind kind = Kind::Field;
    std::optional<RingFlags> flag_override;

    // field holding the coordinates: F, or its residue field
    FieldPtr carrier() const;
    RingFlags flags() const;
    bool contains(const Element &x) const;
    bool is_unit(const Element &x) const;
    std::string name() const;
    Json to_json() const;

    static BaseRing parse(const FieldPtr &f, const std::string &kind);
};

const char *ring_kind_name(BaseRing::Kind k);

// Polynomial in X_1..X_m with coefficients in a field.
class RPoly {
public:
    using Mono = std::vector<uint32_t>;

    RPoly() = default;
    RPoly(FieldPtr f, int nvars) : f_(std::move(f)), n_(nvars) {}
    static RPoly constant(const Element &c, int nvars);
    static RPoly var(const FieldPtr &f, int nvars, int i);
    // Field parameters and the given variable names; '/' only by constants.
    static RPoly parse(const FieldPtr &f, const std::vector<std::string> &vars, std::string_view text);

    const FieldPtr &field() const { return f_; }
    int nvars() const { return n_; }
    const std::map<Mono, Element> &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int degree(int var) const;

    RPoly operator+(const RPoly &o) const;
    RPoly operator-(const RPoly &o) const;
    RPoly operator*(const RPoly &o) const;
    RPoly operator-() const;
    RPoly scale(const Element &c) const;
    RPoly pow(uint32_t e) const;
    bool operator==(const RPoly &o) const { return n_ == o.n_ && t_ == o.t_; }

    Element eval(const std::vector<Element> &x) const;
    // substitute polynomials in `nvars` variables for X_1..X_m
    RPoly compose(const std::vector<RPoly> &xs, int nvars) const;
    // apply a coefficient map into another field
    RPoly map_coeffs(const FieldPtr &g, const std::function<Element(const Element &)> &phi) const;
    // coefficients of X_var^k, each a polynomial in the remaining variables (same arity)
    std::map<uint32_t, RPoly> split(int var) const;

    std::string str(const std::vector<std::string> &vars) const;

private:
    void add_term(const Mono &m, const Element &c);

    FieldPtr f_;
    int n_ = 0;
    std::map<Mono, Element> t_;
};

struct AffinePresentation {
    BaseRing base;
    std::vector<std::string> vars;
    std::vector<RPoly> gens; // over base.carrier()

    int arity() const { return static_cast<int>(vars.size()); }
    static AffinePresentation make(const BaseRing &base, std::vector<std::string> vars,
                                   const std::vector<std::string> &gens);
    // coefficients lie in the ring
    void validate() const;
    Json to_json() const;
    static AffinePresentation from_json(const Json &j);
};

AffinePresentation affine_space(const BaseRing &base, int m, const std::string &prefix = "X");
AffinePresentation product(const AffinePresentation &a, const AffinePresentation &b);

struct Point {
    int chart = 0;
    std::vector<Element> coords;
    bool operator==(const Point &o) const { return chart == o.chart && coords == o.coords; }
    std::string str() const;
};

// comma separated elements
Point parse_point(const FieldPtr &f, std::string_view text, int chart = 0);

MemberResult member_points(const AffinePresentation &X, const std::vector<Element> &coords);

// phi: one polynomial in the source variables per target variable
Point apply_map(const std::vector<RPoly> &phi, const AffinePresentation &target, const Point &x);

struct PointSeqFamily {
    std::vector<SeqFamily> coords;
    Point limit;
};

// "f1, f2, ..." families in n
std::vector<SeqFamily> parse_family_tuple(const FieldPtr &f, std::string_view text);

Verdict point_seq_converges(const AffinePresentation &X, const PointSeqFamily &f,
                            Topology top = Topology::Higher);

bool in_principal_open(const BaseRing &R, const RPoly &f, const Point &x);

// ---- charts

// chart j coordinates as num_k / f^power_k on the principal open {f invertible} of chart i
struct Transition {
    int from = 0, to = 0;
    RPoly localizer;
    std::vector<std::pair<RPoly, uint32_t>> maps;
};

struct ChartedScheme {
    std::vector<AffinePresentation> charts;
    std::vector<Transition> transitions;

    const Transition *find(int from, int to) const;
    // refuses (INVALID_INPUT) when a base-ring hypothesis is off or data is inconsistent;
    // composition of transitions is checked on sample points of charts without equations
    void validate(Rng &rng, int samples = 20) const;
    Json to_json() const;
    static ChartedScheme from_json(const Json &j);
};

ChartedScheme projective_line(const BaseRing &base);

// nullopt is OUT_OF_CHART
std::optional<Point> chart_transfer(const ChartedScheme &X, const Point &x, int j);
bool points_equal(const ChartedScheme &X, const Point &a, const Point &b);

// ---- base change

// S = R[theta]/(m(theta)), m monic of degree d, basis 1, theta, ..., theta^(d-1)
struct Extension {
    FieldPtr base;
    std::string theta = "theta";
    std::vector<Element> modulus; // m_0 .. m_d, m_d = 1

    int degree() const { return static_cast<int>(modulus.size()) - 1; }
    static Extension parse(const FieldPtr &f, const std::string &theta, std::string_view modulus);
    std::string str() const;
    // m = theta^d - t_k for a parameter t_k of an F_q tower: S is again such a tower
    std::optional<int> radical_var() const;
    FieldPtr as_field() const;
};

using SElem = std::vector<Element>; // coordinates in the basis
SElem s_mul(const Extension &S, const SElem &a, const SElem &b);
SElem s_add(const SElem &a, const SElem &b);
SElem s_embed(const Extension &S, const Element &x);
// a_0 + a_1 w + ... in the field S.as_field()
Element s_to_field(const Extension &S, const SElem &a);

struct RingMorphismDesc {
    enum class Kind { Inclusion, Residue, FiniteFree };
    Kind kind = Kind::Inclusion;
    BaseRing source;
    std::optional<Extension> ext;

    static RingMorphismDesc inclusion(const BaseRing &source);
    static RingMorphismDesc residue(const FieldPtr &f);
    static RingMorphismDesc finite_free(const Extension &S);

    BaseRing target() const;
    Element apply(const Element &x) const;
    // image of a sequence family; the residue map keeps the terms of top position 0
    SeqFamily apply(const SeqFamily &s) const;
};

AffinePresentation base_change(const RingMorphismDesc &sigma, const AffinePresentation &X);
Point base_change_point(const RingMorphismDesc &sigma, const AffinePresentation &X, const Point &x);

BasicOpen reduction_open_image(const BasicOpen &U);
// preimage under reduction of a residue point: lift, then solve one variable
// occurring linearly with a unit coefficient if the lift is not yet a point
std::optional<Point> reduction_preimage(const AffinePresentation &X, const Point &xbar);

// ---- Weil restriction

// scheme over S: generators are polynomials in vars and, last, theta
struct ExtPresentation {
    Extension S;
    std::vector<std::string> vars;
    std::vector<RPoly> gens;

    static ExtPresentation make(const Extension &S, std::vector<std::string> vars,
                                const std::vector<std::string> &gens);
    int arity() const { return static_cast<int>(vars.size()); }
};

using SPoint = std::vector<SElem>;

bool member_s_points(const ExtPresentation &Y, const SPoint &y);

struct WeilRestriction {
    ExtPresentation Y;
    AffinePresentation X; // variables Y_j_k, generators indexed (generator, basis index)

    Point encode(const SPoint &y) const;
    SPoint decode(const Point &x) const;
};

WeilRestriction weil_restrict(const ExtPresentation &Y, const RingMorphismDesc &sigma);

// family of S-points: one family per (variable, basis index)
struct SPointFamily {
    std::vector<std::vector<SeqFamily>> coords;
    SPoint limit;
};

// convergence in S viewed as a higher local field (radical extensions only)
Verdict s_point_seq_converges(const ExtPresentation &Y, const SPointFamily &f, Topology top = Topology::Higher);
PointSeqFamily encode_family(const WeilRestriction &W, const SPointFamily &f);

} // namespace hlf
