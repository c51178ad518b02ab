#include "knotlab/presentation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace knotlab {

using json = nlohmann::json;

Word free_reduce(const Word& w) {
    Word out;
    for (int x : w) {
        if (!out.empty() && out.back() == -x) out.pop_back();
        else out.push_back(x);
    }
    return out;
}

Word inverse(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (int& x : out) x = -x;
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return free_reduce(out);
}

Word power(const Word& w, int k) {
    Word base = k < 0 ? inverse(w) : w;
    Word out;
    for (int i = 0; i < std::abs(k); ++i) out.insert(out.end(), base.begin(), base.end());
    return free_reduce(out);
}

Word parse_word(const std::string& text, const std::vector<std::string>& names) {
    std::istringstream in(text);
    std::string tok;
    Word out;
    while (in >> tok) {
        int exp = 1;
        auto caret = tok.find('^');
        std::string base = tok;
        if (caret != std::string::npos) {
            base = tok.substr(0, caret);
            try {
                exp = std::stoi(tok.substr(caret + 1));
            } catch (const std::exception&) {
                throw Error(Errc::PresentationInvalid, "bad exponent in '" + tok + "'");
            }
        }
        int sign = 1;
        int idx = -1;
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == base) idx = static_cast<int>(i);
        if (idx < 0) {
            std::string lower = base;
            for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            for (size_t i = 0; i < names.size(); ++i)
                if (names[i] == lower && lower != base) {
                    idx = static_cast<int>(i);
                    sign = -1;
                }
        }
        if (idx < 0) throw Error(Errc::PresentationInvalid, "unknown generator '" + base + "'");
        Word letter{sign * (idx + 1)};
        Word p = power(letter, exp);
        out.insert(out.end(), p.begin(), p.end());
    }
    return free_reduce(out);
}

std::string word_str(const Word& w, const std::vector<std::string>& names) {
    std::string out;
    for (int x : w) {
        std::string n = names.at(std::abs(x) - 1);
        if (x < 0)
            for (auto& ch : n) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (!out.empty()) out += ' ';
        out += n;
    }
    return out;
}

namespace {

std::vector<long long> exponent_sums(const Word& w, int g) {
    std::vector<long long> v(g, 0);
    for (int x : w) v[std::abs(x) - 1] += x > 0 ? 1 : -1;
    return v;
}

// Diagonalize the relation matrix by unimodular row and column operations,
// tracking the column transform V. Returns the diagonal entries.
std::vector<long long> diagonalize(std::vector<std::vector<long long>> a,
                                   std::vector<std::vector<long long>>& v) {
    const size_t rows = a.size(), cols = v.size();
    std::vector<long long> diag;
    for (size_t t = 0; t < std::min(rows, cols); ++t) {
        while (true) {
            size_t pr = rows, pc = cols;
            long long best = 0;
            for (size_t i = t; i < rows; ++i)
                for (size_t j = t; j < cols; ++j)
                    if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
                        best = std::llabs(a[i][j]);
                        pr = i;
                        pc = j;
                    }
            if (best == 0) return diag;
            std::swap(a[t], a[pr]);
            for (auto& row : a) std::swap(row[t], row[pc]);
            for (auto& row : v) std::swap(row[t], row[pc]);
            bool clean = true;
            for (size_t i = t + 1; i < rows; ++i) {
                long long f = a[i][t] / a[t][t];
                for (size_t j = t; j < cols; ++j) a[i][j] -= f * a[t][j];
                if (a[i][t] != 0) clean = false;
            }
            for (size_t j = t + 1; j < cols; ++j) {
                long long f = a[t][j] / a[t][t];
                for (size_t i = t; i < rows; ++i) a[i][j] -= f * a[i][t];
                for (size_t i = 0; i < cols; ++i) v[i][j] -= f * v[i][t];
                if (a[t][j] != 0) clean = false;
            }
            if (clean) break;
        }
        diag.push_back(a[t][t]);
    }
    return diag;
}

}  // namespace

std::vector<int> abelian_weights(const KnotPresentation& p) {
    const int g = p.generators;
    if (g <= 0) throw Error(Errc::PresentationInvalid, "no generators");
    for (const auto& w : p.relators)
        for (int x : w)
            if (x == 0 || std::abs(x) > g) throw Error(Errc::PresentationInvalid, "letter out of range");
    std::vector<std::vector<long long>> rel;
    for (const auto& w : p.relators) rel.push_back(exponent_sums(w, g));
    std::vector<std::vector<long long>> v(g, std::vector<long long>(g, 0));
    for (int i = 0; i < g; ++i) v[i][i] = 1;
    std::vector<long long> diag = rel.empty() ? std::vector<long long>{} : diagonalize(rel, v);
    if (static_cast<int>(diag.size()) != g - 1)
        throw Error(Errc::PresentationInvalid, "abelianization does not have rank one");
    for (long long d : diag)
        if (std::llabs(d) != 1) throw Error(Errc::PresentationInvalid, "abelianization has torsion");
    std::vector<long long> k(g);
    for (int i = 0; i < g; ++i) k[i] = v[i][g - 1];
    auto image = [&](const Word& w) {
        long long s = 0;
        auto e = exponent_sums(w, g);
        for (int i = 0; i < g; ++i) s += e[i] * k[i];
        return s;
    };
    long long m = image(p.meridian);
    if (std::llabs(m) != 1) throw Error(Errc::PresentationInvalid, "meridian does not generate H_1");
    if (image(p.longitude) != 0) throw Error(Errc::PresentationInvalid, "longitude is not null-homologous");
    std::vector<int> out(g);
    for (int i = 0; i < g; ++i) out[i] = static_cast<int>(k[i] * m);
    return out;
}

void validate(const KnotPresentation& p) {
    if (static_cast<int>(p.names.size()) != p.generators)
        throw Error(Errc::PresentationInvalid, "generator names do not match the count");
    for (const Word* w : {&p.meridian, &p.longitude})
        for (int x : *w)
            if (x == 0 || std::abs(x) > p.generators) throw Error(Errc::PresentationInvalid, "letter out of range");
    if (p.meridian.empty()) throw Error(Errc::PresentationInvalid, "empty meridian");
    auto w = abelian_weights(p);
    if (p.meridional)
        for (int x : w)
            if (std::abs(x) != 1)
                throw Error(Errc::PresentationInvalid, "meridional presentation with a non-meridional generator");
}

namespace {

std::vector<std::string> default_names(int g, const std::string& stem) {
    std::vector<std::string> names;
    if (g <= 26 && stem.empty()) {
        for (int i = 0; i < g; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    } else {
        for (int i = 0; i < g; ++i) names.push_back(stem + std::to_string(i + 1));
    }
    return names;
}

}  // namespace

KnotPresentation unknot_presentation() {
    KnotPresentation p;
    p.generators = 1;
    p.names = {"u"};
    p.meridian = {1};
    p.label = "unknot";
    return p;
}

KnotPresentation presentation_from_braid(const std::vector<int>& braid, int strands) {
    int n = std::max(strands, 1);
    for (int g : braid) {
        if (g == 0) throw Error(Errc::PresentationInvalid, "braid generator 0");
        n = std::max(n, std::abs(g) + 1);
    }
    std::vector<int> perm = braid_permutation(braid, n);
    {
        int s = 0, len = 0;
        do {
            s = perm[s];
            ++len;
        } while (s != 0);
        if (len != n) throw Error(Errc::NotAKnot, "braid closure has more than one component");
    }
    // Words of the arcs at each level, under the Artin action.
    std::vector<std::vector<Word>> levels;
    std::vector<Word> cur(n);
    for (int i = 0; i < n; ++i) cur[i] = {i + 1};
    levels.push_back(cur);
    for (int g : braid) {
        int i = std::abs(g) - 1;
        Word wi = cur[i], wj = cur[i + 1];
        if (g > 0) {
            cur[i] = free_reduce(concat(concat(wi, wj), inverse(wi)));
            cur[i + 1] = wi;
        } else {
            cur[i] = wj;
            cur[i + 1] = free_reduce(concat(concat(inverse(wj), wi), wj));
        }
        levels.push_back(cur);
    }
    KnotPresentation p;
    p.generators = n;
    p.names = default_names(n, n <= 26 ? "" : "x");
    for (int j = 0; j + 1 < n; ++j) p.relators.push_back(concat(cur[j], Word{-(j + 1)}));
    p.meridian = {1};
    // Follow the strand from the top of position 0, collecting over-arcs at undercrossings.
    Word lon;
    int total = 0;
    int pos = 0;
    do {
        for (size_t l = 0; l < braid.size(); ++l) {
            int g = braid[l];
            int i = std::abs(g) - 1;
            if (pos != i && pos != i + 1) continue;
            bool under = g > 0 ? pos == i + 1 : pos == i;
            if (under) {
                const Word& over = g > 0 ? levels[l][i] : levels[l][i + 1];
                int eps = g > 0 ? 1 : -1;
                lon = concat(power(over, eps), lon);
                total += eps;
            }
            pos = pos == i ? i + 1 : i;
        }
    } while (pos != 0);
    p.longitude = concat(lon, power(Word{1}, -total));
    p.meridional = true;
    p.label = "braid";
    return p;
}

KnotPresentation presentation_from_two_bridge(int p, int q) {
    if (p % 2 == 0 || p < 1) throw Error(Errc::PresentationInvalid, "two-bridge knot needs odd p");
    q = ((q % p) + p) % p;
    if (std::gcd(p, q) != 1) throw Error(Errc::PresentationInvalid, "two-bridge p/q not coprime");
    KnotPresentation out;
    out.generators = 2;
    out.names = {"a", "b"};
    out.meridian = {1};
    if (p == 1) {
        out.relators.push_back(concat({1}, {-2}));
        out.label = "two-bridge 1/1";
        return out;
    }
    // The sign rule needs q odd; q and q - p give the same knot.
    int qq = q % 2 == 0 ? q - p : q;
    Word w;
    int sigma = 0;
    for (int i = 1; i <= p - 1; ++i) {
        long long num = static_cast<long long>(i) * qq;
        long long fl = num >= 0 ? num / p : -((-num + p - 1) / p);
        int eps = (fl % 2 == 0) ? 1 : -1;
        int gen = (i % 2 == 1) ? 2 : 1;
        w.push_back(eps * gen);
        sigma += eps;
    }
    // a w = w b
    out.relators.push_back(free_reduce(concat(concat(concat({1}, w), {-2}), inverse(w))));
    Word wrev(w.rbegin(), w.rend());
    out.longitude = concat(concat(w, wrev), power({1}, -2 * sigma));
    out.label = "two-bridge " + std::to_string(p) + "/" + std::to_string(q);
    return out;
}

KnotPresentation torus_presentation(int p, int q) {
    if (std::abs(p) < 2 || std::abs(q) < 2 || std::gcd(std::abs(p), std::abs(q)) != 1)
        throw Error(Errc::InvalidTorusParams, "torus knot needs coprime |p|,|q| >= 2");
    int ap = std::abs(p), aq = std::abs(q);
    KnotPresentation out;
    out.generators = 2;
    out.names = {"x", "y"};
    out.relators.push_back(concat(power({1}, ap), power({2}, -aq)));
    // s q + t p = 1
    int s = 0, t = 0;
    for (int cand = -aq * ap; cand <= aq * ap; ++cand)
        if ((1 - cand * aq) % ap == 0) {
            s = cand;
            t = (1 - cand * aq) / ap;
            if (std::abs(s) <= ap) break;
        }
    out.meridian = concat(power({1}, s), power({2}, t));
    out.longitude = concat(power({1}, ap), power(out.meridian, -ap * aq));
    out.meridional = false;
    out.label = "T(" + std::to_string(ap) + "," + std::to_string(aq) + ")";
    if ((p < 0) != (q < 0)) return mirror_presentation(out);
    return out;
}

KnotPresentation mirror_presentation(const KnotPresentation& p) {
    KnotPresentation m = p;
    m.longitude = inverse(p.longitude);
    m.label = "mirror " + p.label;
    return m;
}

KnotPresentation parse_presentation_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaError, std::string("presentation JSON: ") + e.what());
    }
    try {
        if (j.contains("braid")) {
            auto p = presentation_from_braid(j["braid"].get<std::vector<int>>(), j.value("strands", 0));
            if (j.value("mirror", false)) p = mirror_presentation(p);
            return p;
        }
        if (j.contains("two_bridge")) {
            Rational r = parse_rational(j["two_bridge"].get<std::string>());
            return presentation_from_two_bridge(static_cast<int>(r.numerator()), static_cast<int>(r.denominator()));
        }
        if (j.contains("torus")) {
            auto pq = j["torus"].get<std::vector<int>>();
            if (pq.size() != 2) throw Error(Errc::SchemaError, "torus needs [p,q]");
            return torus_presentation(pq[0], pq[1]);
        }
        KnotPresentation p;
        if (j.at("generators").is_number()) {
            p.generators = j["generators"].get<int>();
            p.names = default_names(p.generators, "");
        } else {
            p.names = j["generators"].get<std::vector<std::string>>();
            p.generators = static_cast<int>(p.names.size());
        }
        for (const auto& r : j.value("relators", std::vector<std::string>{})) p.relators.push_back(parse_word(r, p.names));
        p.meridian = parse_word(j.at("meridian").get<std::string>(), p.names);
        p.longitude = parse_word(j.value("longitude", std::string()), p.names);
        p.label = j.value("name", std::string("presentation"));
        if (j.contains("meridional")) {
            p.meridional = j["meridional"].get<bool>();
        } else {
            auto w = abelian_weights(p);
            p.meridional = std::all_of(w.begin(), w.end(), [](int x) { return std::abs(x) == 1; });
        }
        validate(p);
        return p;
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaError, std::string("presentation JSON: ") + e.what());
    }
}

std::string presentation_to_json(const KnotPresentation& p) {
    json j;
    j["name"] = p.label;
    j["generators"] = p.names;
    std::vector<std::string> rels;
    for (const auto& r : p.relators) rels.push_back(word_str(r, p.names));
    j["relators"] = rels;
    j["meridian"] = word_str(p.meridian, p.names);
    j["longitude"] = word_str(p.longitude, p.names);
    j["meridional"] = p.meridional;
    return j.dump(2);
}

LaurentPoly alexander_polynomial(const KnotPresentation& p) {
    auto w = abelian_weights(p);
    return alexander_from_relators(p.generators, p.relators, w);
}

SU2 eval_word(const Word& w, const std::vector<SU2>& gens) {
    SU2 acc = SU2::identity();
    for (int x : w) acc = acc * (x > 0 ? gens[x - 1] : gens[-x - 1].inverse());
    return acc;
}

}  // namespace knotlab
