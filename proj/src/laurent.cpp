#include "knotlab/laurent.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace knotlab {

LaurentPoly::LaurentPoly(const BigInt& c) {
    if (c != 0) c_.push_back(c);
}

LaurentPoly::LaurentPoly(int low, std::vector<BigInt> coeffs) : low_(low), c_(std::move(coeffs)) {
    trim();
}

LaurentPoly LaurentPoly::monomial(const BigInt& c, int e) { return LaurentPoly(e, {c}); }

LaurentPoly LaurentPoly::from_ints(int low, const std::vector<long long>& coeffs) {
    std::vector<BigInt> c(coeffs.begin(), coeffs.end());
    return LaurentPoly(low, std::move(c));
}

void LaurentPoly::trim() {
    size_t first = 0;
    while (first < c_.size() && c_[first] == 0) ++first;
    if (first == c_.size()) {
        c_.clear();
        low_ = 0;
        return;
    }
    size_t last = c_.size();
    while (c_[last - 1] == 0) --last;
    c_ = std::vector<BigInt>(c_.begin() + first, c_.begin() + last);
    low_ += static_cast<int>(first);
}

BigInt LaurentPoly::coeff(int e) const {
    if (is_zero() || e < low_ || e > high()) return 0;
    return c_[e - low_];
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    int lo = std::min(a.low(), b.low()), hi = std::max(a.high(), b.high());
    std::vector<BigInt> c(hi - lo + 1);
    for (int e = a.low(); e <= a.high(); ++e) c[e - lo] += a.c_[e - a.low()];
    for (int e = b.low(); e <= b.high(); ++e) c[e - lo] += b.c_[e - b.low()];
    return LaurentPoly(lo, std::move(c));
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> c(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return LaurentPoly(a.low() + b.low(), std::move(c));
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly r = *this;
    if (!r.is_zero()) r.low_ += k;
    return r;
}

BigInt LaurentPoly::eval(long long t) const {
    if (low_ < 0 && t != 1 && t != -1)
        throw Error(Errc::ParseError, "integer evaluation with negative exponents needs t = +-1");
    BigInt acc = 0;
    for (size_t i = c_.size(); i-- > 0;) {
        acc = acc * t + c_[i];
    }
    // acc is now sum c_i t^i; multiply by t^low.
    int e = low_;
    if (t == -1 && (e % 2 != 0)) acc = -acc;
    else if (t != 1 && t != -1)
        for (int k = 0; k < e; ++k) acc *= t;
    return acc;
}

std::complex<double> LaurentPoly::eval(std::complex<double> t) const {
    std::complex<double> acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i].convert_to<double>();
    return acc * std::pow(t, low_);
}

bool LaurentPoly::is_symmetric() const {
    if (is_zero()) return true;
    if (low() != -high()) return false;
    for (int e = 1; e <= high(); ++e)
        if (coeff(e) != coeff(-e)) return false;
    return true;
}

bool LaurentPoly::is_unit() const { return c_.size() == 1 && (c_[0] == 1 || c_[0] == -1); }

std::string LaurentPoly::str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int e = high(); e >= low(); --e) {
        BigInt c = coeff(e);
        if (c == 0) continue;
        BigInt mag = c < 0 ? BigInt(-c) : c;
        std::string body;
        if (e == 0) {
            body = mag.str();
        } else {
            body = (mag == 1 ? std::string() : mag.str()) + "t";
            if (e != 1) body += "^" + std::to_string(e);
        }
        if (c < 0) out += "-";
        else if (!out.empty()) out += "+";
        out += body;
    }
    return out;
}

LaurentPoly LaurentPoly::parse(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '*') s += ch;
    if (s.empty()) throw Error(Errc::ParseError, "empty polynomial");
    LaurentPoly out;
    size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw Error(Errc::ParseError, "polynomial '" + text + "' at " + std::to_string(i) + ": " + why);
    };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            fail("expected sign");
        }
        std::string digits;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
        int e = 0;
        bool var = false;
        if (i < s.size() && s[i] == 't') {
            var = true;
            ++i;
            e = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                bool brace = i < s.size() && s[i] == '{';
                if (brace) ++i;
                std::string ex;
                if (i < s.size() && (s[i] == '-' || s[i] == '+')) ex += s[i++];
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ex += s[i++];
                if (brace) {
                    if (i >= s.size() || s[i] != '}') fail("missing }");
                    ++i;
                }
                if (ex.empty() || ex == "-" || ex == "+") fail("missing exponent");
                e = std::stoi(ex);
            }
        }
        if (digits.empty() && !var) fail("missing term");
        BigInt c = digits.empty() ? BigInt(1) : BigInt(digits);
        out = out + LaurentPoly::monomial(sign * c, e);
    }
    return out;
}

std::vector<long long> LaurentPoly::to_int_vector() const {
    std::vector<long long> v;
    for (const auto& c : c_) v.push_back(c.convert_to<long long>());
    return v;
}

std::optional<LaurentPoly> exact_divide(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return LaurentPoly();
    std::vector<BigInt> r = a.coeffs();
    const std::vector<BigInt>& d = b.coeffs();
    if (r.size() < d.size()) return std::nullopt;
    size_t qn = r.size() - d.size() + 1;
    std::vector<BigInt> q(qn);
    const BigInt& lead = d.back();
    for (size_t k = qn; k-- > 0;) {
        const BigInt& top = r[k + d.size() - 1];
        if (top == 0) continue;
        if (top % lead != 0) return std::nullopt;
        BigInt f = top / lead;
        q[k] = f;
        for (size_t j = 0; j < d.size(); ++j) r[k + j] -= f * d[j];
    }
    for (const auto& x : r)
        if (x != 0) return std::nullopt;
    return LaurentPoly(a.low() - b.low(), std::move(q));
}

int euler_phi(int n) {
    int result = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

const LaurentPoly& cyclotomic(int n) {
    static std::mutex mu;
    static std::map<int, LaurentPoly> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    std::vector<BigInt> c(n + 1);
    c[0] = -1;
    c[n] = 1;
    LaurentPoly p(0, std::move(c));
    for (int d = 1; d < n; ++d)
        if (n % d == 0) p = *exact_divide(p, cyclotomic(d));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(n, p).first->second;
}

LaurentPoly normalize_alexander(const LaurentPoly& p) {
    if (p.is_zero()) throw Error(Errc::NotSymmetric, "zero polynomial");
    if ((p.low() + p.high()) % 2 != 0)
        throw Error(Errc::NotSymmetric, p.str() + " has odd span");
    LaurentPoly q = p.shifted(-(p.low() + p.high()) / 2);
    if (!q.is_symmetric()) throw Error(Errc::NotSymmetric, p.str() + " is not palindromic");
    BigInt at1 = q.eval(1);
    if (at1 == -1) q = -q;
    else if (at1 != 1) throw Error(Errc::NotSymmetric, p.str() + " has |Delta(1)| != 1");
    return q;
}

namespace {

std::vector<int> cyclotomic_candidates(int degree) {
    std::vector<int> out;
    for (int n = 1; n <= 2 * degree * degree + 2; ++n)
        if (euler_phi(n) <= degree) out.push_back(n);
    return out;
}

LaurentPoly centered(const LaurentPoly& p) {
    if (p.is_zero() || (p.low() + p.high()) % 2 != 0) return p;
    return p.shifted(-(p.low() + p.high()) / 2);
}

}  // namespace

CyclotomicSplit cyclotomic_factor_split(const LaurentPoly& p) {
    CyclotomicSplit out;
    if (p.is_zero()) return out;
    LaurentPoly rest = p.shifted(-p.low());
    for (int n : cyclotomic_candidates(rest.span())) {
        if (euler_phi(n) > rest.span()) continue;
        while (rest.span() >= euler_phi(n)) {
            auto q = exact_divide(rest, cyclotomic(n));
            if (!q) break;
            out.indices.push_back(n);
            rest = *q;
        }
    }
    out.remainder = centered(rest);
    out.cyclotomic_part = *exact_divide(p, out.remainder);
    return out;
}

double eval_unit_circle(const LaurentPoly& p, double theta) {
    if (!p.is_symmetric()) throw Error(Errc::NotSymmetric, p.str() + " is not symmetric");
    if (p.is_zero()) return 0;
    double acc = p.coeff(0).convert_to<double>();
    for (int j = 1; j <= p.high(); ++j) acc += 2.0 * p.coeff(j).convert_to<double>() * std::cos(j * theta);
    return acc;
}

namespace {

CircleRoot bisect_root(const LaurentPoly& f, double lo, double hi) {
    double flo = eval_unit_circle(f, lo);
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        double fm = eval_unit_circle(f, mid);
        if (fm == 0) {
            lo = hi = mid;
            break;
        }
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    CircleRoot r;
    r.lo = lo;
    r.hi = hi;
    return r;
}

}  // namespace

CircleRootReport circle_root_report(const LaurentPoly& p, int samples) {
    CircleRootReport rep;
    CyclotomicSplit split = cyclotomic_factor_split(p);
    const LaurentPoly& f = split.remainder;
    if (!f.is_symmetric()) throw Error(Errc::NotSymmetric, f.str() + " is not symmetric");
    std::map<int, int> mult;
    for (int n : split.indices) mult[n]++;
    for (auto [n, m] : mult) {
        for (int k = 1; 2 * k <= n; ++k) {
            if (std::gcd(k, n) != 1) continue;
            CircleRoot r;
            r.lo = r.hi = (2 * std::numbers::pi) * k / n;
            r.root_of_unity = true;
            r.odd_order = (m % 2) == 1;
            r.cyclotomic_index = n;
            r.multiplicity = m;
            rep.unity_roots.push_back(r);
        }
        if (m % 2 == 0)
            rep.notes.push_back("cyclotomic factor Phi_" + std::to_string(n) + " has even multiplicity " +
                                std::to_string(m));
    }
    const double pi = std::numbers::pi;
    double prev_theta = 0, prev = eval_unit_circle(f, 0);
    for (int i = 1; i <= samples; ++i) {
        double theta = pi * i / samples;
        double cur = eval_unit_circle(f, theta);
        if (cur == 0 && i < samples) {
            double next = eval_unit_circle(f, pi * (i + 1) / samples);
            if ((next < 0) != (prev < 0)) {
                CircleRoot r;
                r.lo = r.hi = theta;
                rep.roots.push_back(r);
            }
            prev_theta = pi * (i + 1) / samples;
            prev = next;
            ++i;
            continue;
        }
        if ((cur < 0) != (prev < 0) && cur != 0 && prev != 0) rep.roots.push_back(bisect_root(f, prev_theta, theta));
        prev_theta = theta;
        prev = cur;
    }
    return rep;
}

ObstructionResult odd_circle_root_obstruction(const LaurentPoly& p) {
    ObstructionResult out;
    CircleRootReport rep = circle_root_report(p);
    out.notes = rep.notes;
    if (!rep.roots.empty()) {
        out.obstructed = true;
        out.witness_lo = rep.roots.front().lo;
        out.witness_hi = rep.roots.front().hi;
    }
    return out;
}

BigInt determinant(const LaurentPoly& p) {
    BigInt v = p.eval(-1);
    return v < 0 ? BigInt(-v) : v;
}

BigInt coeff_abs_sum(const LaurentPoly& p) {
    BigInt s = 0;
    for (const auto& c : p.coeffs()) s += c < 0 ? BigInt(-c) : c;
    return s;
}

bool fox_milnor_necessary(const LaurentPoly& p) {
    BigInt d = determinant(p);
    BigInt s = boost::multiprecision::sqrt(d);
    return s * s == d;
}

bool small_knot_multiple_rule(const LaurentPoly& p, const Rational& r) {
    if (r.denominator() != 1) throw Error(Errc::NotInteger, "limit slope " + rational_str(r) + " is not an integer");
    CyclotomicSplit split = cyclotomic_factor_split(p);
    std::map<int, int> mult;
    for (int n : split.indices) mult[n]++;
    for (auto [q, m] : mult)
        if (m % 2 == 1 && r.numerator() % q != 0) return false;
    return true;
}

std::string LaurentPoly::to_json() const {
    nlohmann::json j;
    j["low"] = is_zero() ? 0 : low_;
    j["coeffs"] = nlohmann::json::array();
    for (const auto& c : c_) {
        if (c >= std::numeric_limits<long long>::min() && c <= std::numeric_limits<long long>::max())
            j["coeffs"].push_back(c.convert_to<long long>());
        else
            j["coeffs"].push_back(c.str());
    }
    return j.dump();
}

LaurentPoly LaurentPoly::parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, std::string("polynomial JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
        throw Error(Errc::ParseError, "polynomial JSON needs a \"coeffs\" array");
    const int low = j.value("low", 0);
    std::vector<BigInt> cs;
    for (const auto& c : j["coeffs"]) {
        if (c.is_number_integer())
            cs.emplace_back(c.get<long long>());
        else if (c.is_string())
            try {
                cs.emplace_back(c.get<std::string>());
            } catch (const std::exception&) {
                throw Error(Errc::ParseError, "bad coefficient '" + c.get<std::string>() + "'");
            }
        else
            throw Error(Errc::ParseError, "coefficient " + c.dump() + " is not an integer");
    }
    return LaurentPoly(low, std::move(cs));
}

}  // namespace knotlab
