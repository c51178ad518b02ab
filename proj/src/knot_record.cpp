#include "knotlab/knot_record.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace knotlab {

using json = nlohmann::json;

namespace {

long long determinant_of(const LaurentPoly& p) { return determinant(p).convert_to<long long>(); }

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::SchemaError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(field);
                rows.push_back(row);
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw Error(Errc::SchemaError, "unterminated quote in CSV");
    if (any || !field.empty()) {
        row.push_back(field);
        rows.push_back(row);
    }
    return rows;
}

long long KnotRecord::det_value() const {
    if (determinant) return *determinant;
    if (alexander) return determinant_of(*alexander);
    return -1;
}

LaurentPoly torus_alexander(int p, int q) {
    p = std::abs(p);
    q = std::abs(q);
    if (p < 2 || q < 2 || std::gcd(p, q) != 1) throw Error(Errc::InvalidTorusParams, "T(" + std::to_string(p) + "," + std::to_string(q) + ")");
    auto binom = [](int n) { return LaurentPoly(0, {BigInt(-1)}) + LaurentPoly::monomial(1, n); };
    const LaurentPoly num = binom(p * q) * binom(1);
    const LaurentPoly den = binom(p) * binom(q);
    auto quo = exact_divide(num, den);
    return normalize_alexander(*quo);
}

namespace {

// Table value accessor that knows row and column for error messages.
struct Cell {
    const std::map<std::string, std::string>& row;
    int line;

    std::string raw(const std::string& col) const {
        auto it = row.find(col);
        if (it == row.end()) return "";
        std::string s = it->second;
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t") + 1);
        return s;
    }

    [[noreturn]] void fail(const std::string& col, const std::string& why) const {
        throw Error(Errc::SchemaError, "row " + std::to_string(line) + ", column " + col + ": " + why);
    }

    std::optional<long long> integer(const std::string& col) const {
        const std::string s = raw(col);
        if (s.empty()) return std::nullopt;
        try {
            std::size_t pos = 0;
            long long v = std::stoll(s, &pos);
            if (pos != s.size()) fail(col, "not an integer: '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            fail(col, "not an integer: '" + s + "'");
        }
    }

    std::optional<int> small_int(const std::string& col) const {
        auto v = integer(col);
        if (!v) return std::nullopt;
        return static_cast<int>(*v);
    }

    std::optional<bool> flag(const std::string& col) const {
        const std::string s = raw(col);
        if (s.empty()) return std::nullopt;
        if (s == "1" || s == "true" || s == "Y" || s == "yes") return true;
        if (s == "0" || s == "false" || s == "N" || s == "no") return false;
        fail(col, "not a flag: '" + s + "'");
    }

    std::optional<Rational> rational(const std::string& col) const {
        const std::string s = raw(col);
        if (s.empty()) return std::nullopt;
        try {
            return parse_rational(s);
        } catch (const Error&) {
            fail(col, "not a rational: '" + s + "'");
        }
    }
};

KnotRecord record_from_cells(const Cell& c) {
    KnotRecord r;
    r.name = c.raw("name");
    if (r.name.empty()) c.fail("name", "missing");
    r.crossings = c.small_int("crossings").value_or(0);
    {
        std::istringstream in(c.raw("braid"));
        std::string tok;
        while (in >> tok) {
            try {
                std::size_t pos = 0;
                int g = std::stoi(tok, &pos);
                if (pos != tok.size() || g == 0) c.fail("braid", "bad generator '" + tok + "'");
                r.braid.push_back(g);
            } catch (const std::logic_error&) {
                c.fail("braid", "bad generator '" + tok + "'");
            }
        }
    }
    r.pd = c.raw("pd");
    r.two_bridge = c.raw("two_bridge");
    if (const std::string a = c.raw("alexander"); !a.empty()) {
        try {
            r.alexander = normalize_alexander(LaurentPoly::parse(a));
        } catch (const Error& e) {
            c.fail("alexander", e.what());
        }
    }
    r.determinant = c.integer("determinant");
    r.signature = c.small_int("signature");
    r.seifert_genus = c.small_int("seifert_genus");
    r.slice_genus = c.small_int("slice_genus");
    r.alternating = c.flag("alternating");
    r.amphichiral = c.flag("amphichiral");
    r.small = c.flag("small");
    r.montesinos_tangles = c.small_int("montesinos_tangles");
    r.torus_p = c.small_int("torus_p");
    r.torus_q = c.small_int("torus_q");
    r.twist = c.flag("twist");
    r.composite = c.flag("composite");
    r.cable_p = c.small_int("cable_p");
    r.cable_q = c.small_int("cable_q");
    r.companion_limit_slope = c.rational("companion_limit_slope");
    if (const std::string bs = c.raw("boundary_slopes"); !bs.empty()) {
        std::vector<Slope> slopes;
        std::istringstream in(bs);
        std::string tok;
        while (std::getline(in, tok, ';')) {
            if (tok.empty()) continue;
            try {
                slopes.push_back(Slope::parse(tok));
            } catch (const Error&) {
                c.fail("boundary_slopes", "bad slope '" + tok + "'");
            }
        }
        r.boundary_slopes = slopes;
    }
    if (const std::string t = c.raw("surjection_target"); !t.empty()) {
        SurjectionDatum s;
        s.target = t;
        s.lambda_degree = c.integer("surjection_lambda_degree").value_or(1);
        auto slope = c.rational("surjection_target_slope");
        if (!slope) c.fail("surjection_target_slope", "required with surjection_target");
        s.target_slope = *slope;
        s.chirality_verified = c.flag("surjection_chirality_verified").value_or(false);
        r.surjection = s;
    }
    r.chirality_convention = c.raw("chirality_convention");
    return r;
}

std::string json_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_array()) {
        std::string out;
        for (const auto& x : v) {
            if (!out.empty()) out += x.is_number_integer() && !x.is_boolean() ? " " : ";";
            out += json_cell(x);
        }
        return out;
    }
    return v.dump();
}

}  // namespace

void validate_record(const KnotRecord& rec) {
    if (rec.determinant && rec.alexander) {
        const long long d = determinant_of(*rec.alexander);
        if (d != *rec.determinant)
            throw Error(Errc::ConsistencyError, rec.name + ": determinant " + std::to_string(*rec.determinant) +
                                                    " but |alexander(-1)| = " + std::to_string(d));
    }
    if (rec.torus_p.has_value() != rec.torus_q.has_value())
        throw Error(Errc::ConsistencyError, rec.name + ": torus_p and torus_q must be given together");
    if (rec.is_torus() && rec.alexander) {
        if (torus_alexander(*rec.torus_p, *rec.torus_q) != *rec.alexander)
            throw Error(Errc::ConsistencyError, rec.name + ": torus_p/torus_q disagree with alexander");
    }
    if (rec.cable_p.has_value() != rec.cable_q.has_value())
        throw Error(Errc::ConsistencyError, rec.name + ": cable_p and cable_q must be given together");
    if (rec.slice_genus && rec.seifert_genus && *rec.slice_genus > *rec.seifert_genus)
        throw Error(Errc::ConsistencyError, rec.name + ": slice_genus exceeds seifert_genus");
}

std::vector<KnotRecord> parse_table_csv(const std::string& text) {
    std::vector<KnotRecord> out;
    const auto rows = read_csv(text);
    if (rows.empty()) return out;
    const auto& header = rows.front();
    if (std::find(header.begin(), header.end(), "name") == header.end())
        throw Error(Errc::SchemaError, "row 1: header has no name column");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != header.size())
            throw Error(Errc::SchemaError, "row " + std::to_string(i + 1) + ": expected " +
                                               std::to_string(header.size()) + " columns, found " +
                                               std::to_string(rows[i].size()));
        std::map<std::string, std::string> m;
        for (std::size_t c = 0; c < header.size(); ++c) m[header[c]] = rows[i][c];
        KnotRecord r = record_from_cells(Cell{m, int(i + 1)});
        validate_record(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<KnotRecord> parse_table_json(const std::string& text) {
    std::vector<KnotRecord> out;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return out;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaError, std::string("table JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("knots")) j = j["knots"];
    if (!j.is_array()) throw Error(Errc::SchemaError, "table JSON must be an array of records");
    int line = 0;
    for (const auto& item : j) {
        ++line;
        if (!item.is_object()) throw Error(Errc::SchemaError, "record " + std::to_string(line) + " is not an object");
        std::map<std::string, std::string> m;
        for (auto it = item.begin(); it != item.end(); ++it) m[it.key()] = json_cell(it.value());
        KnotRecord r = record_from_cells(Cell{m, line});
        validate_record(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<KnotRecord> ingest_table(const std::string& path) {
    const std::string text = read_file(path);
    const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    return is_json ? parse_table_json(text) : parse_table_csv(text);
}

std::string record_to_json(const KnotRecord& r) {
    json j;
    j["name"] = r.name;
    j["crossings"] = r.crossings;
    if (!r.braid.empty()) j["braid"] = r.braid;
    if (!r.pd.empty()) j["pd"] = r.pd;
    if (!r.two_bridge.empty()) j["two_bridge"] = r.two_bridge;
    if (r.alexander) j["alexander"] = r.alexander->str();
    if (r.determinant) j["determinant"] = *r.determinant;
    if (r.signature) j["signature"] = *r.signature;
    if (r.seifert_genus) j["seifert_genus"] = *r.seifert_genus;
    if (r.slice_genus) j["slice_genus"] = *r.slice_genus;
    if (r.alternating) j["alternating"] = *r.alternating;
    if (r.amphichiral) j["amphichiral"] = *r.amphichiral;
    if (r.small) j["small"] = *r.small;
    if (r.montesinos_tangles) j["montesinos_tangles"] = *r.montesinos_tangles;
    if (r.is_torus()) {
        j["torus_p"] = *r.torus_p;
        j["torus_q"] = *r.torus_q;
    }
    if (r.boundary_slopes) {
        std::vector<std::string> s;
        for (const auto& b : *r.boundary_slopes) s.push_back(b.str());
        j["boundary_slopes"] = s;
    }
    if (r.surjection) {
        j["surjection_target"] = r.surjection->target;
        j["surjection_lambda_degree"] = r.surjection->lambda_degree;
        j["surjection_target_slope"] = rational_str(r.surjection->target_slope);
        j["surjection_chirality_verified"] = r.surjection->chirality_verified;
    }
    if (!r.chirality_convention.empty()) j["chirality_convention"] = r.chirality_convention;
    return j.dump();
}

}  // namespace knotlab
