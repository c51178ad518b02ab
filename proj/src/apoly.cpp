#include "knotlab/apoly.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace knotlab {

using json = nlohmann::json;

BivPoly BivPoly::monomial(const BigInt& c, long long m, long long l) {
    BivPoly p;
    p.add_term(m, l, c);
    return p;
}

BivPoly BivPoly::from_triples(const std::vector<std::array<long long, 3>>& t) {
    BivPoly p;
    for (const auto& x : t) p.add_term(x[0], x[1], x[2]);
    return p;
}

BigInt BivPoly::coeff(long long m, long long l) const {
    auto it = terms_.find({m, l});
    return it == terms_.end() ? BigInt(0) : it->second;
}

void BivPoly::add_term(long long m, long long l, const BigInt& c) {
    if (c == 0) return;
    auto& v = terms_[{m, l}];
    v += c;
    if (v == 0) terms_.erase({m, l});
}

BivPoly operator+(const BivPoly& a, const BivPoly& b) {
    BivPoly r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k.first, k.second, c);
    return r;
}

BivPoly operator-(const BivPoly& a, const BivPoly& b) {
    BivPoly r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k.first, k.second, -c);
    return r;
}

BivPoly operator*(const BivPoly& a, const BivPoly& b) {
    BivPoly r;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return r;
}

BigInt BivPoly::content() const {
    BigInt g = 0;
    for (const auto& [k, c] : terms_) g = gcd(g, c < 0 ? BigInt(-c) : c);
    return g;
}

BivPoly BivPoly::primitive() const {
    BigInt g = content();
    if (g <= 1) return *this;
    BivPoly r;
    for (const auto& [k, c] : terms_) r.add_term(k.first, k.second, c / g);
    return r;
}

std::string BivPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [k, c] = *it;
        BigInt a = c < 0 ? BigInt(-c) : c;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        bool mono = k.first != 0 || k.second != 0;
        if (a != 1 || !mono) os << a;
        if (k.first != 0) os << "M" << (k.first != 1 ? "^" + std::to_string(k.first) : "");
        if (k.second != 0) os << "L" << (k.second != 1 ? "^" + std::to_string(k.second) : "");
    }
    return os.str();
}

BivPoly BivPoly::parse_json(const std::string& text) {
    BivPoly p;
    try {
        json j = json::parse(text);
        if (j.is_object()) j = j.at("terms");
        if (!j.is_array()) throw Error(Errc::SchemaError, "A-polynomial must be an array of [m, l, coeff]");
        for (const auto& t : j) {
            if (!t.is_array() || t.size() != 3)
                throw Error(Errc::SchemaError, "A-polynomial term must be [m_exp, l_exp, coeff]");
            BigInt c = t[2].is_string() ? BigInt(t[2].get<std::string>()) : BigInt(t[2].get<long long>());
            p.add_term(t[0].get<long long>(), t[1].get<long long>(), c);
        }
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaError, std::string("A-polynomial JSON: ") + e.what());
    }
    return p;
}

std::string BivPoly::to_json() const {
    json j = json::array();
    for (const auto& [k, c] : terms_) {
        json coeff;
        if (c >= std::numeric_limits<long long>::min() && c <= std::numeric_limits<long long>::max())
            coeff = static_cast<long long>(c);
        else
            coeff = c.str();
        j.push_back({k.first, k.second, coeff});
    }
    return j.dump();
}

namespace {

long long cross(const Lattice& o, const Lattice& a, const Lattice& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

Lattice primitive_dir(const Lattice& a, const Lattice& b) {
    long long dm = b.first - a.first, dl = b.second - a.second;
    long long g = std::gcd(dm < 0 ? -dm : dm, dl < 0 ? -dl : dl);
    return g ? Lattice{dm / g, dl / g} : Lattice{0, 0};
}

}  // namespace

NewtonPolygon convex_hull(std::vector<Lattice> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    NewtonPolygon poly;
    if (pts.size() <= 2) {
        poly.vertices = pts;
    } else {
        std::vector<Lattice> h(2 * pts.size());
        size_t k = 0;
        for (const auto& p : pts) {
            while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
            h[k++] = p;
        }
        for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
            while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
            h[k++] = pts[i];
        }
        h.resize(k - 1);
        poly.vertices = h;
    }
    if (poly.vertices.size() == 2) {
        poly.sides.push_back({poly.vertices[0], poly.vertices[1], primitive_dir(poly.vertices[0], poly.vertices[1])});
    } else if (poly.vertices.size() > 2) {
        for (size_t i = 0; i < poly.vertices.size(); ++i) {
            const auto& a = poly.vertices[i];
            const auto& b = poly.vertices[(i + 1) % poly.vertices.size()];
            poly.sides.push_back({a, b, primitive_dir(a, b)});
        }
    }
    return poly;
}

NewtonPolygon newton_polygon(const BivPoly& f) {
    if (f.is_zero()) throw Error(Errc::ZeroPolynomial, "Newton polygon of the zero polynomial");
    std::vector<Lattice> pts;
    for (const auto& [k, c] : f.terms()) pts.push_back(k);
    return convex_hull(pts);
}

NewtonPolygon minkowski_sum(const NewtonPolygon& p, const NewtonPolygon& q) {
    std::vector<Lattice> pts;
    for (const auto& a : p.vertices)
        for (const auto& b : q.vertices) pts.push_back({a.first + b.first, a.second + b.second});
    return convex_hull(pts);
}

bool binomial_irreducibility(long long p, long long q) {
    if (p == 0 && q == 0) throw Error(Errc::ParseError, "(p,q) = (0,0)");
    return std::gcd(p < 0 ? -p : p, q < 0 ? -q : q) == 1;
}

std::vector<Slope> boundary_slopes_from_sides(const NewtonPolygon& poly) {
    if (poly.is_point()) throw Error(Errc::DegeneratePoint, "polygon is a single point");
    std::vector<Slope> out;
    for (const auto& s : poly.sides) {
        Slope b = s.direction.second == 0 ? Slope::infinity() : Slope(s.direction.first, s.direction.second);
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

LaurentPoly edge_polynomial(const BivPoly& f, const PolygonSide& side) {
    const Lattice& a = side.from;
    const Lattice& b = side.to;
    bool vertical = a.first == b.first;
    LaurentPoly theta;
    bool found_from = false, found_to = false;
    for (const auto& [k, c] : f.terms()) {
        if (cross(a, b, k) != 0) continue;
        long long lo_m = std::min(a.first, b.first), hi_m = std::max(a.first, b.first);
        long long lo_l = std::min(a.second, b.second), hi_l = std::max(a.second, b.second);
        if (k.first < lo_m || k.first > hi_m || k.second < lo_l || k.second > hi_l) continue;
        if (k == a) found_from = true;
        if (k == b) found_to = true;
        long long e = vertical ? k.second : k.first;
        theta = theta + LaurentPoly::monomial(c, static_cast<int>(e));
    }
    if (!found_from || !found_to) throw Error(Errc::SideNotOnPolygon, "side endpoints are not support points");
    auto hull = newton_polygon(f);
    bool on_hull = false;
    for (const auto& s : hull.sides)
        if ((s.from == a && s.to == b) || (s.from == b && s.to == a)) on_hull = true;
    if (!on_hull) throw Error(Errc::SideNotOnPolygon, "segment is not a side of the Newton polygon");
    return theta;
}

bool cyclotomic_product_test(const LaurentPoly& theta) {
    if (theta.is_zero()) return false;
    LaurentPoly p = theta.shifted(-theta.low());
    // phi(n) <= deg forces n <= 2 deg^2
    const int limit = 2 * p.high() * p.high() + 2;
    for (int n = 1; n <= limit && p.span() > 0; ++n) {
        if (euler_phi(n) > p.span()) continue;
        while (p.span() > 0) {
            auto q = exact_divide(p, cyclotomic(n));
            if (!q) break;
            p = *q;
        }
    }
    return p.span() == 0 && (p.coeffs().front() == 1 || p.coeffs().front() == -1);
}

RootOfUnity::RootOfUnity(long long n, long long k) {
    if (n < 1) throw Error(Errc::ParseError, "root of unity order must be positive");
    k = ((k % n) + n) % n;
    long long g = std::gcd(k, n);
    if (k == 0) {
        order = 1;
        power = 0;
    } else {
        order = n / g;
        power = k / g;
    }
}

std::string RootOfUnity::str() const {
    if (power == 0) return "1";
    if (2 * power == order) return "-1";
    return "e^(2pi i " + std::to_string(power) + "/" + std::to_string(order) + ")";
}

CycloRing::CycloRing(long long n) : n_(n) {
    if (n < 1) throw Error(Errc::ParseError, "cyclotomic ring order must be positive");
    const auto& c = cyclotomic(static_cast<int>(n));
    phi_ = c.coeffs();
}

CycloRing::Elem CycloRing::reduce(std::vector<BigInt> poly) const {
    const int d = degree();
    for (int i = static_cast<int>(poly.size()) - 1; i >= d; --i) {
        BigInt c = poly[i];
        if (c == 0) continue;
        for (int j = 0; j <= d; ++j) poly[i - d + j] -= c * phi_[j];
    }
    poly.resize(d, 0);
    return poly;
}

CycloRing::Elem CycloRing::x_pow(long long e) const {
    e = ((e % n_) + n_) % n_;
    std::vector<BigInt> v(static_cast<size_t>(e) + 1, 0);
    v[e] = 1;
    return reduce(std::move(v));
}

CycloRing::Elem CycloRing::add(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

CycloRing::Elem CycloRing::scale(const Elem& a, const BigInt& c) const {
    Elem r = a;
    for (auto& x : r) x *= c;
    return r;
}

CycloRing::Elem CycloRing::mul(const Elem& a, const Elem& b) const {
    std::vector<BigInt> r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return reduce(std::move(r));
}

bool CycloRing::is_zero(const Elem& a) {
    return std::all_of(a.begin(), a.end(), [](const BigInt& x) { return x == 0; });
}

bool divides_binomial(const BivPoly& a, long long p, long long q, const RootOfUnity& omega) {
    if (std::gcd(p < 0 ? -p : p, q < 0 ? -q : q) != 1) throw Error(Errc::NotCoprime, "gcd(p,q) != 1");
    if (a.is_zero()) return true;
    // Unimodular change of variables X = M^p L^q, Y = M^s L^t with p t - q s = 1.
    long long s = 0, t = 0;
    {
        // extended Euclid on (p, -q)
        long long old_r = p, r = q, old_x = 1, x = 0, old_y = 0, y = 1;
        while (r != 0) {
            long long qt = old_r / r;
            std::tie(old_r, r) = std::make_pair(r, old_r - qt * r);
            std::tie(old_x, x) = std::make_pair(x, old_x - qt * x);
            std::tie(old_y, y) = std::make_pair(y, old_y - qt * y);
        }
        // old_x p + old_y q = old_r = +-1
        t = old_x * old_r;
        s = -old_y * old_r;
    }
    CycloRing ring(omega.order);
    std::map<long long, CycloRing::Elem> classes;
    for (const auto& [k, c] : a.terms()) {
        long long m = k.first, l = k.second;
        long long i = m * t - l * s;  // X exponent
        long long j = l * p - m * q;  // Y exponent
        auto it = classes.find(j);
        if (it == classes.end()) it = classes.emplace(j, ring.zero()).first;
        it->second = ring.add(it->second, ring.scale(ring.x_pow(i * omega.power), c));
    }
    for (const auto& [j, v] : classes)
        if (!CycloRing::is_zero(v)) return false;
    return true;
}

std::vector<SideReport> side_reports(const BivPoly& a) {
    auto poly = newton_polygon(a);
    std::vector<SideReport> out;
    for (const auto& side : poly.sides) {
        SideReport r;
        r.side = side;
        r.boundary_slope = side.direction.second == 0 ? Slope::infinity()
                                                      : Slope(side.direction.first, side.direction.second);
        r.edge = edge_polynomial(a, side);
        r.cyclotomic = cyclotomic_product_test(r.edge);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace knotlab
