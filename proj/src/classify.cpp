#include "knotlab/classify.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

namespace knotlab {

using json = nlohmann::json;

const char* status_name(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::NotAverse: return "NotAverse";
        case VerdictStatus::TorusAverse: return "TorusAverse";
        case VerdictStatus::Unknown: return "Unknown";
    }
    return "?";
}

VerdictStatus parse_status(const std::string& s) {
    if (s == "NotAverse") return VerdictStatus::NotAverse;
    if (s == "TorusAverse") return VerdictStatus::TorusAverse;
    if (s == "Unknown") return VerdictStatus::Unknown;
    throw Error(Errc::SchemaError, "unknown verdict status '" + s + "'");
}

namespace {

std::string join(const std::set<long long>& xs) {
    std::string out = "{";
    for (long long x : xs) out += (out.size() > 1 ? "," : "") + std::to_string(x);
    return out + "}";
}

bool trefoil_or_figure_eight_poly(const LaurentPoly& p) {
    return p == LaurentPoly::from_ints(-1, {1, -1, 1}) || p == LaurentPoly::from_ints(-1, {-1, 3, -1});
}

int sign_from_signature(const KnotRecord& rec, std::vector<std::string>& notes) {
    if (!rec.signature) {
        notes.push_back("signature missing: chirality of the limit slope not fixed, positive orientation reported");
        return 1;
    }
    if (!rec.chirality_convention.empty() && rec.chirality_convention != "sigma(right trefoil)=-2")
        notes.push_back("chirality convention '" + rec.chirality_convention + "' differs from sigma(right trefoil)=-2");
    return *rec.signature > 0 ? -1 : 1;
}

std::string lspace_note(long long r) {
    if (r > 0) return "instanton L-space surgeries expected for slopes >= " + std::to_string(r - 1);
    return "instanton L-space surgeries expected for slopes <= " + std::to_string(r + 1);
}

}  // namespace

Verdict classify(const KnotRecord& rec, const ClassifyOptions& opt) {
    Verdict v;
    v.name = rec.name;
    bool excluded = false;
    std::optional<std::set<long long>> cands;  // nullopt: no finite candidate source

    auto fire = [&](const std::string& id, const std::string& reason, const std::string& detail, bool excludes) {
        v.rules.push_back({id, reason, detail, excludes});
        if (excludes) excluded = true;
    };
    auto done = [&] { return excluded && !opt.audit; };
    const long long det = rec.det_value();

    // R1
    if (!rec.slice_genus) {
        v.notes.push_back("slice_genus missing: R1, R2 not evaluated");
    } else if (*rec.slice_genus == 0) {
        fire("R1", "a smoothly slice knot has no nontrivial SU(2)-cyclic surgeries of the averse kind",
             "slice_genus=0", true);
    }
    if (done()) goto finish;

    // R2
    if (rec.slice_genus && *rec.slice_genus == 1) {
        if (rec.seifert_genus && *rec.seifert_genus != 1) {
            fire("R2", "an averse knot of slice genus 1 has Seifert genus 1",
                 "slice_genus=1, seifert_genus=" + std::to_string(*rec.seifert_genus), true);
        } else if (rec.alexander && !trefoil_or_figure_eight_poly(*rec.alexander)) {
            fire("R2", "an averse knot of slice genus 1 has Alexander polynomial t-1+t^-1 or -t+3-t^-1",
                 "slice_genus=1, alexander=" + rec.alexander->str(), true);
        } else if (!rec.seifert_genus && !rec.alexander) {
            v.notes.push_back("seifert_genus and alexander missing: R2 not evaluated");
        }
    }
    if (done()) goto finish;

    // R3
    if (!rec.alexander) {
        v.notes.push_back("alexander missing: R3, R6 filters not evaluated");
    } else {
        const ObstructionResult ob = odd_circle_root_obstruction(*rec.alexander);
        if (ob.obstructed) {
            std::ostringstream d;
            d.precision(6);
            d << "odd-order root on the unit circle, not a root of unity, at theta in [" << ob.witness_lo << ", "
              << ob.witness_hi << "]";
            fire("R3", "an odd-order unit-circle root of the Alexander polynomial that is not a root of unity",
                 d.str(), true);
        }
    }
    if (done()) goto finish;

    // R4
    if (rec.amphichiral.value_or(false))
        fire("R4", "an amphichiral knot would need limit slope 0", "amphichiral=1", true);
    if (done()) goto finish;

    // R5
    if (rec.small.value_or(false) && rec.boundary_slopes && det > 0) {
        double max_abs = 0.0;
        bool any = false;
        for (const auto& s : *rec.boundary_slopes)
            if (!s.is_infinite()) {
                max_abs = std::max(max_abs, std::abs(s.to_double()));
                any = true;
            }
        if (any && double(det) >= max_abs) {
            std::ostringstream d;
            d << "det=" << det << " >= max finite |boundary slope|=" << max_abs;
            fire("R5", "a small averse knot has det(K) <= |r(K)| - 1 with r(K) a boundary slope", d.str(), true);
        }
    }
    if (done()) goto finish;

    // R6
    if (rec.small.value_or(false)) {
        const bool alt_montesinos = rec.alternating.value_or(false) && rec.montesinos_tangles &&
                                    *rec.montesinos_tangles >= 1 && *rec.montesinos_tangles <= 3 && rec.crossings > 0;
        std::set<long long> source;
        std::string origin;
        if (rec.boundary_slopes) {
            for (const auto& s : *rec.boundary_slopes)
                if (!s.is_infinite() && s.n == 1) source.insert(s.m);
            origin = "integral boundary slopes";
            if (alt_montesinos) {
                const long long c2 = 2LL * rec.crossings;
                std::erase_if(source, [&](long long r) { return std::llabs(r) > c2; });
                origin += " within [-2c, 2c]";
            }
        } else if (alt_montesinos) {
            for (long long r = -2LL * rec.crossings; r <= 2LL * rec.crossings; ++r) source.insert(r);
            origin = "integers in [-2c, 2c]";
        }
        if (origin.empty()) {
            v.notes.push_back("small knot without boundary slopes or alternating Montesinos bound: R6 has no finite source");
        } else {
            long long lower = 6;
            std::string lower_why = "|r| >= 6";
            if (rec.alexander) {
                const long long s = coeff_abs_sum(*rec.alexander).convert_to<long long>();
                if (1 + s > lower) {
                    lower = 1 + s;
                    lower_why = "|r| >= 1 + sum|a_j| = " + std::to_string(lower);
                }
            } else if (det > 0 && det + 1 > lower) {
                lower = det + 1;
                lower_why = "|r| >= det + 1 = " + std::to_string(lower);
            }
            std::set<long long> kept;
            for (long long r : source) {
                if (std::llabs(r) < lower) continue;
                if (rec.alexander && !small_knot_multiple_rule(*rec.alexander, Rational(r))) continue;
                kept.insert(r);
            }
            cands = kept;
            const std::string detail = origin + " " + join(source) + ", " + lower_why +
                                       (rec.alexander ? ", multiple of each odd-multiplicity cyclotomic index" : "") +
                                       " -> " + join(kept);
            fire("R6", "a small averse knot has an integral limit slope with |r| >= 6 and |r| >= 1 + sum|a_j|",
                 detail, kept.empty());
        }
    }
    if (done()) goto finish;

    // R7
    if (rec.composite.value_or(false))
        fire("R7", "a connected sum is not averse", "composite=1", true);
    if (done()) goto finish;

    // R8
    if (rec.cable_p && rec.cable_q) {
        const Rational pq(*rec.cable_p, *rec.cable_q);
        if (!rec.companion_limit_slope) {
            v.notes.push_back("companion_limit_slope missing: R8 not evaluated");
        } else if (*rec.companion_limit_slope != pq) {
            fire("R8", "a cable is averse only when the companion has limit slope p/q",
                 "companion r=" + rational_str(*rec.companion_limit_slope) + " vs p/q=" + rational_str(pq), true);
        } else {
            const long long r = static_cast<long long>(*rec.cable_p) * *rec.cable_q;
            std::set<long long> only{r};
            if (cands) {
                std::set<long long> both;
                std::set_intersection(cands->begin(), cands->end(), only.begin(), only.end(),
                                      std::inserter(both, both.begin()));
                only = both;
            }
            cands = only;
            fire("R8", "a cable is averse only when the companion has limit slope p/q",
                 "companion r=p/q, candidate pq=" + std::to_string(r), only.empty());
        }
    }
    if (done()) goto finish;

    // R9
    if (rec.surjection) {
        const auto& s = *rec.surjection;
        const Rational base = s.target_slope * Rational(s.lambda_degree);
        if (base.denominator() != 1) {
            v.notes.push_back("surjection gives a non-integral slope " + rational_str(base));
        } else {
            std::set<long long> from{base.numerator()};
            std::string detail = "lambda -> lambda_" + s.target + "^" + std::to_string(s.lambda_degree) +
                                 ", target r=" + rational_str(s.target_slope);
            if (!s.chirality_verified) {
                from.insert(-base.numerator());
                detail += ", chirality unverified " + join(from);
                if (rec.signature && *rec.signature != 0) {
                    const long long keep = (*rec.signature < 0 ? 1 : -1) * std::llabs(base.numerator());
                    from = {keep};
                    detail += ", signature " + std::to_string(*rec.signature) + " -> " + join(from);
                } else {
                    v.notes.push_back("signature missing: both orientations of the surjection slope reported");
                }
            }
            if (cands) {
                std::set<long long> both;
                std::set_intersection(cands->begin(), cands->end(), from.begin(), from.end(),
                                      std::inserter(both, both.begin()));
                from = both;
            }
            cands = from;
            fire("R9", "limit slopes pull back through a surjection of knot groups scaled by the longitude degree",
                 detail, from.empty());
        }
    }
    if (done()) goto finish;

    // torus knots
    if (rec.is_torus()) {
        const long long r = sign_from_signature(rec, v.notes) * std::llabs(1LL * *rec.torus_p * *rec.torus_q);
        fire("T", "torus knots have lens space surgeries and are averse",
             "T(" + std::to_string(*rec.torus_p) + "," + std::to_string(*rec.torus_q) + "), r=" + std::to_string(r),
             false);
        if (cands && !cands->count(r) && !cands->count(-r))
            v.notes.push_back("torus limit slope " + std::to_string(r) + " missing from candidates " + join(*cands));
        v.limit_slope = Rational(r);
    }

finish:
    if (excluded) {
        v.status = VerdictStatus::NotAverse;
        v.limit_slope.reset();
    } else if (v.limit_slope) {
        v.status = VerdictStatus::TorusAverse;
        v.notes.push_back(lspace_note(v.limit_slope->numerator()));
    } else {
        v.status = VerdictStatus::Unknown;
        if (cands) {
            for (long long r : *cands) v.notes.push_back(lspace_note(r));
        } else {
            v.notes.push_back("no finite set of candidate limit slopes");
        }
    }
    if (cands) {
        v.candidates.assign(cands->begin(), cands->end());
        v.candidates_bounded = true;
    }
    return v;
}

std::map<std::string, GoldenEntry> parse_golden_csv(const std::string& text) {
    std::map<std::string, GoldenEntry> out;
    const auto rows = read_csv(text);
    if (rows.empty()) return out;
    const auto& h = rows.front();
    auto col = [&](const std::string& name) {
        auto it = std::find(h.begin(), h.end(), name);
        if (it == h.end()) throw Error(Errc::SchemaError, "golden file has no " + name + " column");
        return std::size_t(it - h.begin());
    };
    const std::size_t cn = col("name"), cs = col("status"), cl = col("limit_slope");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != h.size()) throw Error(Errc::SchemaError, "golden row " + std::to_string(i + 1) + " has wrong width");
        GoldenEntry g;
        g.status = parse_status(r[cs]);
        if (!r[cl].empty()) g.limit_slope = parse_rational(r[cl]);
        out[r[cn]] = g;
    }
    return out;
}

std::string verdict_to_json(const Verdict& v) {
    json j;
    j["name"] = v.name;
    j["status"] = status_name(v.status);
    j["limit_slope"] = v.limit_slope ? json(rational_str(*v.limit_slope)) : json(nullptr);
    j["candidates"] = v.candidates_bounded ? json(v.candidates) : json(nullptr);
    j["rules"] = json::array();
    for (const auto& r : v.rules)
        j["rules"].push_back({{"id", r.id}, {"reason", r.reason}, {"detail", r.detail}, {"excludes", r.excludes}});
    j["notes"] = v.notes;
    return j.dump();
}

namespace {

bool matches(const Verdict& v, const GoldenEntry& g) {
    if (v.status != g.status) return false;
    if (!g.limit_slope) return true;
    if (v.status == VerdictStatus::TorusAverse) return v.limit_slope && *v.limit_slope == *g.limit_slope;
    if (v.status == VerdictStatus::Unknown)
        return v.candidates_bounded && v.candidates.size() == 1 && Rational(v.candidates[0]) == *g.limit_slope;
    return true;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

}  // namespace

CorpusReport corpus_report(const std::vector<KnotRecord>& records, const ClassifyOptions& opt,
                           const std::map<std::string, GoldenEntry>* golden) {
    const auto start = std::chrono::steady_clock::now();
    CorpusReport rep;
    rep.verdicts.resize(records.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < records.size(); ++i) rep.verdicts[i] = classify(records[i], opt);
    for (const auto& v : rep.verdicts) {
        switch (v.status) {
            case VerdictStatus::NotAverse: ++rep.not_averse; break;
            case VerdictStatus::TorusAverse: ++rep.torus_averse; break;
            case VerdictStatus::Unknown: ++rep.unknown; break;
        }
        if (golden) {
            auto it = golden->find(v.name);
            if (it == golden->end()) {
                rep.mismatches.push_back(v.name + ": not in golden file");
            } else if (!matches(v, it->second)) {
                rep.mismatches.push_back(v.name + ": got " + status_name(v.status) + ", expected " +
                                         status_name(it->second.status));
            }
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string CorpusReport::to_json() const {
    json j;
    j["summary"] = {{"records", verdicts.size()},
                    {"NotAverse", not_averse},
                    {"TorusAverse", torus_averse},
                    {"Unknown", unknown}};
    j["mismatches"] = mismatches;
    j["verdicts"] = json::array();
    for (const auto& v : verdicts) j["verdicts"].push_back(json::parse(verdict_to_json(v)));
    return j.dump(2);
}

std::string CorpusReport::to_csv() const {
    std::ostringstream os;
    os << "name,status,limit_slope,candidates,rules\n";
    for (const auto& v : verdicts) {
        std::string cands, rules;
        for (long long c : v.candidates) cands += (cands.empty() ? "" : ";") + std::to_string(c);
        for (const auto& r : v.rules) rules += (rules.empty() ? "" : ";") + r.id;
        os << v.name << ',' << status_name(v.status) << ',' << (v.limit_slope ? rational_str(*v.limit_slope) : "")
           << ',' << csv_escape(cands) << ',' << csv_escape(rules) << '\n';
    }
    return os.str();
}

}  // namespace knotlab
