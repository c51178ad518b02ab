#include "knotlab/diagram.hpp"
#include "knotlab/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace knotlab {

DiagramRecord parse_pd(const std::string& text) {
    DiagramRecord d;
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    size_t pos = 0;
    if (s.rfind("PD[", 0) == 0) {
        if (s.back() != ']') throw Error(Errc::ParseError, "PD code missing closing bracket");
        s = s.substr(3, s.size() - 4);
        while (pos < s.size()) {
            if (s.compare(pos, 2, "X[") != 0)
                throw Error(Errc::ParseError, "expected X[ at position " + std::to_string(pos + 3));
            size_t close = s.find(']', pos);
            if (close == std::string::npos) throw Error(Errc::ParseError, "unterminated X[ at " + std::to_string(pos + 3));
            std::string body = s.substr(pos + 2, close - pos - 2);
            std::stringstream ss(body);
            std::string tok;
            PDCrossing x{};
            int i = 0;
            while (std::getline(ss, tok, ',')) {
                if (i >= 4) throw Error(Errc::ParseError, "crossing with more than 4 labels at " + std::to_string(pos + 3));
                try {
                    x[i++] = std::stoi(tok);
                } catch (const std::exception&) {
                    throw Error(Errc::ParseError, "bad label '" + tok + "' at " + std::to_string(pos + 3));
                }
            }
            if (i != 4) throw Error(Errc::ParseError, "crossing with fewer than 4 labels at " + std::to_string(pos + 3));
            d.pd.push_back(x);
            pos = close + 1;
            if (pos < s.size()) {
                if (s[pos] != ',') throw Error(Errc::ParseError, "expected ',' at " + std::to_string(pos + 3));
                ++pos;
            }
        }
    } else if (s.rfind("[[", 0) == 0 || s == "[]") {
        s = s.substr(1, s.size() - 2);
        while (pos < s.size()) {
            if (s[pos] != '[') throw Error(Errc::ParseError, "expected [ at " + std::to_string(pos + 1));
            size_t close = s.find(']', pos);
            if (close == std::string::npos) throw Error(Errc::ParseError, "unterminated [ at " + std::to_string(pos + 1));
            std::stringstream ss(s.substr(pos + 1, close - pos - 1));
            std::string tok;
            PDCrossing x{};
            int i = 0;
            while (std::getline(ss, tok, ',')) {
                if (i >= 4) throw Error(Errc::ParseError, "crossing with more than 4 labels at " + std::to_string(pos + 1));
                x[i++] = std::stoi(tok);
            }
            if (i != 4) throw Error(Errc::ParseError, "crossing with fewer than 4 labels at " + std::to_string(pos + 1));
            d.pd.push_back(x);
            pos = close + 1;
            if (pos < s.size() && s[pos] == ',') ++pos;
        }
    } else {
        throw Error(Errc::ParseError, "unrecognised diagram code");
    }
    std::map<int, int> count;
    for (const auto& x : d.pd)
        for (int l : x) ++count[l];
    for (const auto& [l, k] : count)
        if (k != 2)
            throw Error(Errc::NonRealizableCode, "edge label " + std::to_string(l) + " appears " + std::to_string(k) +
                                                     " times");
    return d;
}

std::string pd_str(const DiagramRecord& d) {
    std::string out = "PD[";
    for (size_t i = 0; i < d.pd.size(); ++i) {
        if (i) out += ",";
        out += "X[" + std::to_string(d.pd[i][0]) + "," + std::to_string(d.pd[i][1]) + "," +
               std::to_string(d.pd[i][2]) + "," + std::to_string(d.pd[i][3]) + "]";
    }
    return out + "]";
}

namespace {

DiagramRecord gauss_with_signs(const std::vector<int>& code, const std::vector<int>& signs,
                               const std::vector<std::array<int, 2>>& pass) {
    const int len = static_cast<int>(code.size());
    auto in = [&](int i) { return i + 1; };
    auto out = [&](int i) { return (i + 1) % len + 1; };
    DiagramRecord d;
    for (size_t x = 0; x < pass.size(); ++x) {
        const int u = pass[x][0], o = pass[x][1];
        if (signs[x] > 0)
            d.pd.push_back({in(u), out(o), out(u), in(o)});
        else
            d.pd.push_back({in(u), in(o), out(u), out(o)});
    }
    return d;
}

}  // namespace

DiagramRecord from_gauss(const std::vector<int>& code, std::vector<int> signs) {
    if (code.size() % 2) throw Error(Errc::NonRealizableCode, "Gauss code has odd length");
    const int c = static_cast<int>(code.size()) / 2;
    std::vector<std::array<int, 2>> pass(c, {-1, -1});  // (under index, over index)
    for (int i = 0; i < 2 * c; ++i) {
        const int x = std::abs(code[i]);
        if (x < 1 || x > c)
            throw Error(Errc::NonRealizableCode, "crossing label " + std::to_string(code[i]) + " at position " +
                                                     std::to_string(i + 1) + " out of range 1.." + std::to_string(c));
        int& slot = pass[x - 1][code[i] > 0 ? 1 : 0];
        if (slot != -1)
            throw Error(Errc::NonRealizableCode, "crossing " + std::to_string(x) + " passed twice as " +
                                                     (code[i] > 0 ? "over" : "under") + " at position " +
                                                     std::to_string(i + 1));
        slot = i;
    }
    if (!signs.empty()) {
        if (static_cast<int>(signs.size()) != c)
            throw Error(Errc::NonRealizableCode, "Gauss code has " + std::to_string(c) + " crossings but " +
                                                     std::to_string(signs.size()) + " signs");
        DiagramRecord d = gauss_with_signs(code, signs, pass);
        trace_faces(d);
        return d;
    }
    if (c == 0) return {};
    if (c > 20) throw Error(Errc::NonRealizableCode, "unsigned Gauss code with more than 20 crossings");
    for (unsigned long mask = 0; mask < (1ul << (c - 1)); ++mask) {
        signs.assign(c, 1);
        for (int x = 1; x < c; ++x)
            if (mask >> (x - 1) & 1) signs[x] = -1;
        DiagramRecord d = gauss_with_signs(code, signs, pass);
        try {
            trace_faces(d);
            return d;
        } catch (const Error&) {
        }
    }
    throw Error(Errc::NonRealizableCode, "no crossing signs make the Gauss code planar");
}

DiagramRecord parse_gauss(const std::string& text) {
    std::string s = text;
    if (s.rfind("GC[", 0) == 0) s = s.substr(3);
    std::string code_part = s, sign_part;
    if (auto semi = s.find(';'); semi != std::string::npos) {
        code_part = s.substr(0, semi);
        sign_part = s.substr(semi + 1);
    }
    auto ints = [](const std::string& part, bool signs) {
        std::vector<int> out;
        std::string tok;
        auto flush = [&](size_t pos) {
            if (tok.empty()) return;
            if (signs && (tok == "+" || tok == "-")) {
                out.push_back(tok == "+" ? 1 : -1);
            } else {
                try {
                    out.push_back(std::stoi(tok));
                } catch (const std::exception&) {
                    throw Error(Errc::ParseError, "bad Gauss token '" + tok + "' near " + std::to_string(pos));
                }
            }
            tok.clear();
        };
        for (size_t i = 0; i < part.size(); ++i) {
            const char ch = part[i];
            if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+') {
                if ((ch == '-' || ch == '+') && !tok.empty() && tok != "+" && tok != "-") flush(i);
                tok += ch;
            } else if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '{' || ch == '}' ||
                       ch == '[' || ch == ']') {
                flush(i);
            } else {
                throw Error(Errc::ParseError, std::string("unexpected '") + ch + "' in Gauss code at " +
                                                  std::to_string(i + 1));
            }
        }
        flush(part.size());
        return out;
    };
    return from_gauss(ints(code_part, false), ints(sign_part, true));
}

DiagramRecord parse_diagram(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.rfind("PD[", 0) == 0 || s.rfind("[[", 0) == 0 || s == "[]") return parse_pd(s);
    return parse_gauss(text);
}

bool DiagramRecord::alternating() const {
    std::map<int, std::array<int, 2>> seen;  // label -> (under count, over count)
    for (const auto& x : pd)
        for (int s = 0; s < 4; ++s) ++seen[x[s]][s % 2];
    for (const auto& [l, uo] : seen)
        if (uo[0] != 1 || uo[1] != 1) return false;
    return true;
}

FaceStructure trace_faces(const DiagramRecord& d) {
    const int c = d.crossings();
    FaceStructure fs;
    fs.face_of_corner.assign(c, {-1, -1, -1, -1});
    if (c == 0) return fs;
    std::map<int, std::vector<std::pair<int, int>>> ends;
    for (int x = 0; x < c; ++x)
        for (int s = 0; s < 4; ++s) ends[d.pd[x][s]].push_back({x, s});
    auto other = [&](int x, int s) {
        const auto& e = ends.at(d.pd[x][s]);
        return e[0] == std::make_pair(x, s) ? e[1] : e[0];
    };
    // Darts (x,s); face permutation: cross the edge, then turn to the next slot.
    std::vector<std::array<bool, 4>> used(c, {false, false, false, false});
    for (int x = 0; x < c; ++x)
        for (int s = 0; s < 4; ++s) {
            if (used[x][s]) continue;
            int face = fs.faces++;
            int cx = x, cs = s;
            while (!used[cx][cs]) {
                used[cx][cs] = true;
                int corner = (cs + 3) % 4;
                if (fs.face_of_corner[cx][corner] != -1)
                    throw Error(Errc::NonRealizableCode, "corner visited twice at crossing " + std::to_string(cx + 1));
                fs.face_of_corner[cx][corner] = face;
                auto [nx, ns] = other(cx, cs);
                cx = nx;
                cs = (ns + 1) % 4;
            }
        }
    if (fs.faces != c + 2)
        throw Error(Errc::NonRealizableCode, "code has " + std::to_string(fs.faces) + " faces, expected " +
                                                 std::to_string(c + 2) + " for a planar diagram");
    // Checkerboard: neighbouring corners differ, opposite corners agree.
    std::vector<std::vector<std::pair<int, int>>> adj(fs.faces);  // (face, parity)
    for (int x = 0; x < c; ++x)
        for (int k = 0; k < 4; ++k) {
            int f = fs.face_of_corner[x][k];
            int g = fs.face_of_corner[x][(k + 1) % 4];
            int h = fs.face_of_corner[x][(k + 2) % 4];
            adj[f].push_back({g, 1});
            adj[g].push_back({f, 1});
            adj[f].push_back({h, 0});
            adj[h].push_back({f, 0});
        }
    fs.color.assign(fs.faces, -1);
    for (int start = 0; start < fs.faces; ++start) {
        if (fs.color[start] != -1) continue;
        fs.color[start] = 0;
        std::queue<int> q;
        q.push(start);
        while (!q.empty()) {
            int f = q.front();
            q.pop();
            for (auto [g, parity] : adj[f]) {
                int want = fs.color[f] ^ parity;
                if (fs.color[g] == -1) {
                    fs.color[g] = want;
                    q.push(g);
                } else if (fs.color[g] != want) {
                    throw Error(Errc::NonRealizableCode, "faces admit no checkerboard colouring");
                }
            }
        }
    }
    return fs;
}

PlanarMultigraph colour_graph(const DiagramRecord& d, const FaceStructure& fs, int colour) {
    std::vector<int> index(fs.faces, -1);
    PlanarMultigraph g;
    for (int f = 0; f < fs.faces; ++f)
        if (fs.color[f] == colour) index[f] = g.vertices++;
    g.faces = fs.faces - g.vertices;
    for (int x = 0; x < d.crossings(); ++x) {
        int k = fs.color[fs.face_of_corner[x][0]] == colour ? 0 : 1;
        g.edges.push_back({index[fs.face_of_corner[x][k]], index[fs.face_of_corner[x][k + 2]]});
    }
    return g;
}

PlanarMultigraph black_graph(const DiagramRecord& d, std::optional<long long> det) {
    if (!d.alternating()) throw Error(Errc::NotAlternating, "diagram is not alternating");
    FaceStructure fs = trace_faces(d);
    PlanarMultigraph g0 = colour_graph(d, fs, 0);
    PlanarMultigraph g1 = colour_graph(d, fs, 1);
    bool m0 = true, m1 = true;
    if (det) {
        m0 = spanning_tree_count(g0) == *det;
        m1 = spanning_tree_count(g1) == *det;
    }
    if (m0 != m1) return m0 ? g0 : g1;
    return g1.vertices < g0.vertices ? g1 : g0;
}

BigInt spanning_tree_count(const PlanarMultigraph& g) {
    const int n = g.vertices;
    if (n == 0) throw Error(Errc::Disconnected, "graph has no vertices");
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    for (auto [a, b] : g.edges) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw Error(Errc::ParseError, "edge endpoint out of range");
        parent[find(a)] = find(b);
    }
    for (int v = 1; v < n; ++v)
        if (find(v) != find(0)) throw Error(Errc::Disconnected, "graph is disconnected");
    if (n == 1) return 1;
    std::vector<std::vector<BigInt>> lap(n - 1, std::vector<BigInt>(n - 1, 0));
    for (auto [a, b] : g.edges) {
        if (a == b) continue;
        if (a < n - 1) lap[a][a] += 1;
        if (b < n - 1) lap[b][b] += 1;
        if (a < n - 1 && b < n - 1) {
            lap[a][b] -= 1;
            lap[b][a] -= 1;
        }
    }
    return det_bareiss(lap);
}

std::optional<std::array<int, 3>> theta_multiplicities(const PlanarMultigraph& g) {
    if (g.vertices != 3) return std::nullopt;
    std::array<int, 3> e{0, 0, 0};  // e[i]: edges avoiding vertex i
    for (auto [a, b] : g.edges) {
        if (a == b) continue;
        e[3 - a - b] += 1;
    }
    std::sort(e.begin(), e.end());
    return e;
}

CrowellVerdict crowell_inequality_check(long long det, int c, CrowellClass cls) {
    if (c < 3) throw Error(Errc::ParseError, "crossing number must be at least 3");
    CrowellVerdict v;
    v.crowell_bound = det >= 3LL * c - 8;
    v.asserted = cls == CrowellClass::Other;
    v.holds = !v.asserted || v.crowell_bound;
    v.det_exceeds_2c = det > 2LL * c;
    v.listed_exception = cls != CrowellClass::Other || (det == 11 && c == 6) || (det == 13 && c == 7);
    v.corollary_holds = v.det_exceeds_2c || v.listed_exception;
    return v;
}

}  // namespace knotlab
