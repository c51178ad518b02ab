#include "knotlab/apoly.hpp"
#include "knotlab/classify.hpp"
#include "knotlab/diagram.hpp"
#include "knotlab/knot_record.hpp"
#include "knotlab/laurent.hpp"
#include "knotlab/presentation.hpp"
#include "knotlab/repvar.hpp"
#include "knotlab/shearflow.hpp"
#include "knotlab/slopes.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace knotlab;
using json = nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kMismatch = 2, kSchema = 3 };

struct KnotSource {
    std::string file, two_bridge, torus, braid;
    bool mirror = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--knot", file, "presentation JSON file");
        cmd->add_option("--two-bridge", two_bridge, "two-bridge knot p/q");
        cmd->add_option("--torus", torus, "torus knot p,q");
        cmd->add_option("--braid", braid, "braid word, e.g. \"1 1 1\" or \"1,-2,1,-2\"");
        cmd->add_flag("--mirror", mirror, "invert the longitude");
    }
    bool given() const { return !file.empty() || !two_bridge.empty() || !torus.empty() || !braid.empty(); }

    KnotPresentation load() const {
        KnotPresentation p;
        if (!file.empty()) {
            p = parse_presentation_json(read_file(file));
        } else if (!two_bridge.empty()) {
            const Rational r = parse_rational(two_bridge);
            p = presentation_from_two_bridge(static_cast<int>(r.numerator()), static_cast<int>(r.denominator()));
        } else if (!torus.empty()) {
            const auto pq = ints(torus);
            if (pq.size() != 2) throw Error(Errc::SchemaError, "--torus needs p,q");
            p = torus_presentation(pq[0], pq[1]);
        } else if (!braid.empty()) {
            p = presentation_from_braid(ints(braid));
        } else {
            throw Error(Errc::SchemaError, "give one of --knot, --two-bridge, --torus, --braid");
        }
        return mirror ? mirror_presentation(p) : p;
    }

    static std::vector<int> ints(const std::string& s) {
        std::string t = s;
        for (char& c : t)
            if (c == ',' || c == '[' || c == ']' || c == '{' || c == '}') c = ' ';
        std::istringstream is(t);
        std::vector<int> out;
        std::string tok;
        while (is >> tok) {
            try {
                out.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw Error(Errc::ParseError, "bad integer '" + tok + "'");
            }
        }
        return out;
    }
};

json point_json(const ImagePoint& p) { return json::array({p.alpha, p.beta, p.residual}); }

json image_json(const PillowcaseImage& img) {
    json j;
    j["arcs"] = json::array();
    for (const auto& a : img.arcs) {
        json ja{{"id", a.id}, {"points", json::array()}, {"limits", json::array()}};
        for (const auto& p : a.points) ja["points"].push_back(point_json(p));
        for (const auto& p : a.limits) ja["limits"].push_back(point_json(p));
        j["arcs"].push_back(ja);
    }
    j["isolated"] = json::array();
    for (const auto& p : img.isolated_points) j["isolated"].push_back(point_json(p));
    j["partial"] = img.partial;
    j["notes"] = img.notes;
    return j;
}

std::string image_csv(const PillowcaseImage& img) {
    std::ostringstream os;
    os.precision(17);
    os << "arc_id,alpha,beta,residual\n";
    for (const auto& a : img.arcs)
        for (const auto& p : a.points) os << a.id << ',' << p.alpha << ',' << p.beta << ',' << p.residual << '\n';
    for (const auto& p : img.isolated_points) os << -1 << ',' << p.alpha << ',' << p.beta << ',' << p.residual << '\n';
    return os.str();
}

json certificate_json(const AvoidanceCertificate& c) {
    return {{"slope", c.slope.str()},
            {"verdict", verdict_name(c.verdict)},
            {"min_gap", std::isinf(c.min_gap) ? json("inf") : json(c.min_gap)},
            {"slack", c.slack},
            {"gap_threshold", c.gap_threshold},
            {"hit_threshold", c.hit_threshold},
            {"crossing", c.crossing},
            {"witness", {c.witness_alpha, c.witness_beta}}};
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        const auto& c = cells[i];
        if (c.find_first_of(",\"\n") == std::string::npos) {
            out += c;
        } else {
            out += '"';
            for (char ch : c) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            out += '"';
        }
    }
    return out + '\n';
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

int run_pillowcase(const KnotSource& src, const TraceOptions& opt, bool closed_form, const std::string& format) {
    PillowcaseImage img;
    std::string label;
    if (closed_form) {
        const auto pq = KnotSource::ints(src.torus);
        if (pq.size() != 2) throw Error(Errc::SchemaError, "--closed-form needs --torus p,q");
        img = torus_knot_image(pq[0], pq[1], opt.resolution);
        if (src.mirror) img = mirror_image(img);
        label = "T(" + std::to_string(pq[0]) + "," + std::to_string(pq[1]) + ")";
    } else {
        const auto pres = src.load();
        label = pres.label;
        img = trace_image(pres, opt);
    }
    if (format == "csv") {
        std::cout << image_csv(img);
        return kOk;
    }
    json j = image_json(img);
    j["label"] = label;
    j["lines"] = json::array();
    for (const auto& l : fit_arc_lines(img))
        j["lines"].push_back({{"arc", l.arc_id},
                              {"slope", l.slope},
                              {"intercept", l.intercept},
                              {"alpha_range", {l.alpha_lo, l.alpha_hi}},
                              {"residual", l.residual},
                              {"curved", l.curved}});
    try {
        const auto est = estimate_limit_slope(img);
        j["limit_slope"] = {{"r", rational_str(est.r)}, {"r_float", est.r_float}, {"agreement", est.agreement}};
    } catch (const Error& e) {
        j["limit_slope"] = nullptr;
        j["limit_slope_error"] = e.what();
    }
    j["connecting_path_winding"] = connecting_path_winding(img);
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int run_slopes(const KnotSource& src, const TraceOptions& opt, const std::vector<std::string>& tests, bool family,
               long long kmax, const std::string& format) {
    const auto img = trace_image(src.load(), opt);
    std::vector<AvoidanceCertificate> certs;
    json family_json;
    if (!tests.empty()) {
        std::vector<Slope> slopes;
        for (const auto& t : tests) slopes.push_back(Slope::parse(t));
        certs = check_slopes(img, slopes, opt.parallel);
    }
    if (family) {
        const auto est = estimate_limit_slope(img);
        const auto lines = fit_arc_lines(img);
        const auto fam = generate_cyclic_family(est.r, lines, img.isolated_points, kmax);
        json excl = json::array();
        for (const auto& s : fam.excluded) excl.push_back(s.str());
        family_json = {{"family", {{"r", rational_str(fam.r)},
                                   {"n", fam.n},
                                   {"N", fam.N},
                                   {"m", fam.m},
                                   {"excluded", excl}}}};
        std::vector<Slope> members;
        for (long long k = -kmax; k <= kmax; ++k)
            if (k != 0) members.push_back(fam.member(k));
        const auto more = check_slopes(img, members, opt.parallel);
        certs.insert(certs.end(), more.begin(), more.end());
    }
    if (format == "csv") {
        std::cout << "slope,verdict,min_gap,slack,crossing\n";
        for (const auto& c : certs)
            std::cout << csv_row({c.slope.str(), verdict_name(c.verdict), fmt(c.min_gap), fmt(c.slack),
                                  c.crossing ? "1" : "0"});
        return kOk;
    }
    if (family) std::cout << family_json.dump() << '\n';
    for (const auto& c : certs) std::cout << certificate_json(c).dump() << '\n';
    return kOk;
}

int run_alex(const std::string& poly, const std::string& json_file, const KnotSource& src,
             const std::vector<double>& angles, const std::vector<std::string>& multiples, const std::string& format) {
    LaurentPoly p;
    std::string origin;
    if (!poly.empty()) {
        p = LaurentPoly::parse(poly);
        origin = "text";
    } else if (!json_file.empty()) {
        p = LaurentPoly::parse_json(read_file(json_file));
        origin = json_file;
    } else if (!src.braid.empty() && src.file.empty()) {
        p = alexander_from_braid(KnotSource::ints(src.braid));
        origin = "braid";
    } else {
        const auto pres = src.load();
        p = alexander_polynomial(pres);
        origin = pres.label;
    }
    const LaurentPoly n = normalize_alexander(p);
    const auto split = cyclotomic_factor_split(n);
    const auto roots = circle_root_report(n);
    const auto ob = odd_circle_root_obstruction(n);
    json j;
    j["source"] = origin;
    j["input"] = p.str();
    j["normalized"] = n.str();
    j["coefficients"] = json::parse(n.to_json());
    j["symmetric"] = n.is_symmetric();
    j["determinant"] = determinant(n).str();
    j["coeff_abs_sum"] = coeff_abs_sum(n).str();
    j["fox_milnor_necessary"] = fox_milnor_necessary(n);
    j["cyclotomic_indices"] = split.indices;
    j["remainder"] = split.remainder.str();
    j["circle_roots"] = json::array();
    for (const auto& r : roots.roots)
        j["circle_roots"].push_back({{"theta", {r.lo, r.hi}}, {"odd_order", r.odd_order}});
    j["unity_roots"] = json::array();
    for (const auto& r : roots.unity_roots)
        j["unity_roots"].push_back({{"theta", {r.lo, r.hi}},
                                    {"cyclotomic_index", r.cyclotomic_index},
                                    {"multiplicity", r.multiplicity}});
    j["odd_circle_root_obstruction"] = ob.obstructed;
    if (ob.obstructed) j["witness"] = {ob.witness_lo, ob.witness_hi};
    j["values"] = json::array();
    for (double th : angles) {
        const auto z = n.eval(std::polar(1.0, th));
        j["values"].push_back({{"theta", th}, {"re", z.real()}, {"im", z.imag()}});
    }
    j["multiple_rule"] = json::array();
    for (const auto& m : multiples) {
        const Rational r = parse_rational(m);
        j["multiple_rule"].push_back({{"r", rational_str(r)}, {"passes", small_knot_multiple_rule(n, r)}});
    }
    if (format == "csv") {
        std::cout << "normalized,determinant,coeff_abs_sum,cyclotomic_indices,obstruction\n";
        std::string idx;
        for (int i : split.indices) idx += (idx.empty() ? "" : ";") + std::to_string(i);
        std::cout << csv_row({n.str(), determinant(n).str(), coeff_abs_sum(n).str(), idx,
                              ob.obstructed ? "1" : "0"});
        return kOk;
    }
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int run_apoly(const std::string& file, bool sides, bool edges, const std::vector<std::string>& divisors,
              const std::string& format) {
    const BivPoly a = BivPoly::parse_json(read_file(file));
    const auto poly = newton_polygon(a);
    json j;
    j["polynomial"] = a.str();
    j["vertices"] = json::array();
    for (const auto& v : poly.vertices) j["vertices"].push_back({v.first, v.second});
    if (sides || edges) {
        j["sides"] = json::array();
        for (const auto& s : side_reports(a)) {
            json js{{"from", {s.side.from.first, s.side.from.second}},
                    {"to", {s.side.to.first, s.side.to.second}},
                    {"boundary_slope", s.boundary_slope.str()}};
            if (edges) {
                js["edge_polynomial"] = s.edge.str();
                js["cyclotomic"] = s.cyclotomic;
            }
            j["sides"].push_back(js);
        }
    }
    j["divisors"] = json::array();
    for (const auto& d : divisors) {
        // p/q:order:power
        const auto c1 = d.find(':');
        const auto c2 = d.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw Error(Errc::ParseError, "--divisor wants p/q:order:power, got '" + d + "'");
        const Slope s = Slope::parse(d.substr(0, c1));
        const long long order = std::stoll(d.substr(c1 + 1, c2 - c1 - 1));
        const long long power = std::stoll(d.substr(c2 + 1));
        const RootOfUnity w(order, power);
        j["divisors"].push_back({{"binomial", "M^" + std::to_string(s.m) + " L^" + std::to_string(s.n) + " - " + w.str()},
                                 {"divides", divides_binomial(a, s.m, s.n, w)}});
    }
    if (format == "csv") {
        std::cout << "from_m,from_l,to_m,to_l,boundary_slope,edge_polynomial,cyclotomic\n";
        for (const auto& s : side_reports(a))
            std::cout << csv_row({std::to_string(s.side.from.first), std::to_string(s.side.from.second),
                                  std::to_string(s.side.to.first), std::to_string(s.side.to.second),
                                  s.boundary_slope.str(), s.edge.str(), s.cyclotomic ? "1" : "0"});
        return kOk;
    }
    std::cout << j.dump(2) << '\n';
    return kOk;
}

CrowellClass crowell_class(const KnotRecord& r) {
    if (r.torus_p && std::min(std::abs(*r.torus_p), std::abs(r.torus_q.value_or(0))) == 2) return CrowellClass::Torus2;
    if (r.twist.value_or(false)) return CrowellClass::Twist;
    return CrowellClass::Other;
}

int run_graph(const std::string& code, CrowellClass code_class, const std::string& table, const std::string& format) {
    struct Row {
        std::string name;
        DiagramRecord d;
        std::optional<long long> det;
        CrowellClass cls = CrowellClass::Other;
    };
    std::vector<Row> rows;
    if (!code.empty()) {
        rows.push_back({"diagram", parse_diagram(code), std::nullopt, code_class});
    } else {
        for (const auto& r : ingest_table(table)) {
            if (r.pd.empty() || !r.alternating.value_or(false)) continue;
            const long long det = r.det_value();
            rows.push_back({r.name, parse_diagram(r.pd), det > 0 ? std::optional<long long>(det) : std::nullopt,
                            crowell_class(r)});
        }
    }
    json out = json::array();
    std::ostringstream csv;
    csv << "name,c,det,trees,b,w,crowell_bound,asserted,holds,det_exceeds_2c,corollary_holds\n";
    for (const auto& row : rows) {
        if (!row.d.alternating()) throw Error(Errc::NotAlternating, row.name + " is not alternating");
        const auto g = black_graph(row.d, row.det);
        const BigInt trees = spanning_tree_count(g);
        const long long det = row.det.value_or(trees.convert_to<long long>());
        const auto v = crowell_inequality_check(det, row.d.crossings(), row.cls);
        const bool corollary = row.cls == CrowellClass::Other ? v.corollary_holds : true;
        csv << csv_row({row.name, std::to_string(row.d.crossings()), std::to_string(det), trees.str(),
                        std::to_string(g.vertices), std::to_string(g.faces), v.crowell_bound ? "1" : "0",
                        v.asserted ? "1" : "0", v.holds ? "1" : "0", v.det_exceeds_2c ? "1" : "0",
                        corollary ? "1" : "0"});
        json e{{"name", row.name},  {"c", row.d.crossings()},   {"det", det},
               {"trees", trees.str()}, {"b", g.vertices},       {"w", g.faces},
               {"crowell_bound", v.crowell_bound}, {"asserted", v.asserted}, {"holds", v.holds},
               {"det_exceeds_2c", v.det_exceeds_2c}, {"corollary_holds", corollary}};
        if (const auto th = theta_multiplicities(g)) e["theta"] = *th;
        out.push_back(e);
    }
    if (format == "csv")
        std::cout << csv.str();
    else
        std::cout << out.dump(2) << '\n';
    return kOk;
}

int run_shear_certify(const std::string& field, CertifyOptions opt, const std::string& format) {
    const auto X = TimeDependentField::parse_json(read_file(field));
    opt.throw_on_violation = false;
    const auto rep = certify_run(X, opt);
    std::cout << (format == "csv" ? rep.to_csv() : rep.to_json() + "\n");
    return rep.ok ? kOk : kFailure;
}

int run_shear_project(const std::string& field, double t, int kmax, bool equivariant, const std::string& format) {
    const auto X = TimeDependentField::parse_json(read_file(field));
    const auto proj = fourier_project(X.frozen(t), kmax, equivariant);
    if (format == "csv") {
        std::cout << "kx,ky,ax,ay,bx,by\n";
        for (const auto& m : proj.modes)
            std::cout << csv_row({std::to_string(m.k[0]), std::to_string(m.k[1]), fmt(m.a[0]), fmt(m.a[1]),
                                  fmt(m.b[0]), fmt(m.b[1])});
        return kOk;
    }
    json j;
    j["t"] = t;
    j["modes"] = json::array();
    for (const auto& m : proj.modes)
        j["modes"].push_back({{"k", {m.k[0], m.k[1]}}, {"a", {m.a[0], m.a[1]}}, {"b", {m.b[0], m.b[1]}}});
    j["constant"] = {proj.constant[0], proj.constant[1]};
    j["steps"] = proj.steps.size();
    j["residual"] = proj.residual;
    j["cosine_content"] = proj.cosine_content;
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int run_shear_bound(const std::string& name, const BoundArgs& args, const std::string& format) {
    const double v = bound_function(name, args);
    if (format == "csv")
        std::cout << "name,value\n" << name << ',' << fmt(v) << '\n';
    else
        std::cout << json{{"name", name}, {"value", v}}.dump() << '\n';
    return kOk;
}

std::vector<KnotRecord> load_tables(const std::vector<std::string>& tables) {
    std::vector<KnotRecord> all;
    for (const auto& t : tables) {
        auto recs = ingest_table(t);
        all.insert(all.end(), recs.begin(), recs.end());
    }
    return all;
}

int run_classify(const std::vector<std::string>& tables, const std::vector<std::string>& names, bool audit,
                 const std::string& format) {
    auto records = load_tables(tables);
    if (!names.empty())
        std::erase_if(records, [&](const KnotRecord& r) {
            return std::find(names.begin(), names.end(), r.name) == names.end();
        });
    for (const auto& n : names)
        if (std::none_of(records.begin(), records.end(), [&](const KnotRecord& r) { return r.name == n; }))
            throw Error(Errc::SchemaError, "no record named " + n);
    const auto rep = corpus_report(records, {audit});
    if (format == "csv") {
        std::cout << rep.to_csv();
    } else {
        for (const auto& v : rep.verdicts) std::cout << verdict_to_json(v) << '\n';
    }
    return kOk;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!f) throw Error(Errc::SchemaError, "cannot write " + p.string());
    f << text;
}

int run_corpus(const std::vector<std::string>& tables, const std::string& golden_file, bool audit,
               const std::string& out_dir, const std::string& plot_dir, int plot_resolution, const std::string& format) {
    const auto records = load_tables(tables);
    std::map<std::string, GoldenEntry> golden;
    if (!golden_file.empty()) golden = parse_golden_csv(read_file(golden_file));
    const auto rep = corpus_report(records, {audit}, golden_file.empty() ? nullptr : &golden);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text(std::filesystem::path(out_dir) / "verdicts.json", rep.to_json() + "\n");
        write_text(std::filesystem::path(out_dir) / "verdicts.csv", rep.to_csv());
    }
    if (!plot_dir.empty()) {
        std::filesystem::create_directories(plot_dir);
        TraceOptions topt;
        topt.resolution = plot_resolution;
        for (const auto& r : records) {
            KnotPresentation pres;
            if (!r.two_bridge.empty()) {
                const Rational q = parse_rational(r.two_bridge);
                pres = presentation_from_two_bridge(static_cast<int>(q.numerator()), static_cast<int>(q.denominator()));
            } else if (!r.braid.empty()) {
                pres = presentation_from_braid(r.braid);
            } else {
                continue;
            }
            write_text(std::filesystem::path(plot_dir) / (r.name + ".csv"), image_csv(trace_image(pres, topt)));
        }
    }
    if (format == "csv") {
        std::cout << rep.to_csv();
    } else {
        json j = json::parse(rep.to_json());
        if (!out_dir.empty()) j.erase("verdicts");
        std::cout << j.dump(2) << '\n';
    }
    for (const auto& m : rep.mismatches) std::cerr << "mismatch: " << m << '\n';
    return rep.mismatches.empty() ? kOk : kMismatch;
}

bool schema_like(Errc c) {
    switch (c) {
        case Errc::SchemaError:
        case Errc::ConsistencyError:
        case Errc::ParseError:
        case Errc::PresentationInvalid:
        case Errc::NonRealizableCode:
            return true;
        default:
            return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knotlab: SU(2)-cyclic surgery and averse-knot toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

    TraceOptions topt;
    auto add_trace = [&](CLI::App* cmd) {
        cmd->add_option("--resolution", topt.resolution, "alpha samples on (0, pi)");
        cmd->add_option("--starts", topt.starts, "random starts per alpha");
        cmd->add_option("--seed", topt.seed, "solver seed");
        cmd->add_flag("!--serial", topt.parallel, "single-threaded tracing");
    };

    // pillowcase
    KnotSource pc_src;
    bool closed_form = false;
    auto* pc = app.add_subcommand("pillowcase", "trace the irreducible image in the pillowcase");
    pc_src.add_to(pc);
    add_trace(pc);
    pc->add_flag("--closed-form", closed_form, "use the closed-form torus knot image (with --torus)");

    // slopes
    KnotSource sl_src;
    std::vector<std::string> tests;
    bool family = false;
    long long kmax_family = 20;
    auto* sl = app.add_subcommand("slopes", "line-avoidance certificates for surgery slopes");
    sl_src.add_to(sl);
    add_trace(sl);
    sl->add_option("--test", tests, "slope m/n (repeatable)");
    sl->add_flag("--family", family, "certify the cyclic family r + 1/(kN)");
    sl->add_option("--kmax", kmax_family, "family members 1 <= |k| <= kmax");

    // alex
    std::string poly_text, poly_json;
    KnotSource al_src;
    std::vector<double> angles;
    std::vector<std::string> multiples;
    auto* al = app.add_subcommand("alex", "Alexander polynomial invariants");
    al->add_option("--poly", poly_text, "polynomial text, e.g. 3t^2-6t+7-6t^-1+3t^-2");
    al->add_option("--json", poly_json, "coefficient-list JSON file");
    al_src.add_to(al);
    al->add_option("--theta", angles, "evaluate at e^{i theta} (repeatable)");
    al->add_option("--multiple", multiples, "small-knot multiple rule for slope r (repeatable)");

    // apoly
    std::string apoly_file;
    bool sides = false, edges = false;
    std::vector<std::string> divisors;
    auto* ap = app.add_subcommand("apoly", "A-polynomial Newton polygon and binomial divisors");
    ap->add_option("--file", apoly_file, "JSON [m_exp, l_exp, coeff] triples")->required();
    ap->add_flag("--sides", sides, "list sides and boundary slopes");
    ap->add_flag("--edges", edges, "edge polynomials and cyclotomic test");
    ap->add_option("--divisor", divisors, "p/q:order:power tests M^p L^q - e^{2 pi i power/order}");

    // graph
    std::string diagram_code, graph_table;
    auto* gr = app.add_subcommand("graph", "checkerboard graphs, spanning trees, Crowell bounds");
    auto* gopt = gr->add_option("--code", diagram_code, "PD or Gauss code");
    gr->add_option("--table", graph_table, "knot table; alternating rows with a pd column")->excludes(gopt);
    std::string graph_class = "other";
    gr->add_option("--class", graph_class, "exception class of --code")
        ->check(CLI::IsMember({"torus2", "twist", "other"}));

    // shear
    auto* sh = app.add_subcommand("shear", "piecewise shearing approximation of torus isotopies");
    sh->require_subcommand(1);
    std::string field_file;
    CertifyOptions copt;
    auto* sc = sh->add_subcommand("certify", "certify the splitting against an RK4 reference");
    sc->add_option("--field", field_file, "field spec JSON")->required();
    sc->add_option("--n", copt.n, "time intervals");
    sc->add_option("--k", copt.k, "cycles per interval");
    sc->add_option("--kmax", copt.kmax, "Fourier truncation");
    sc->add_option("--grid", copt.grid, "certification grid side");
    sc->add_flag("--equivariant", copt.equivariant, "sine-only, commutes with p -> -p");
    sc->add_option("--times", copt.times, "times in (0,1] to evaluate");
    double r1 = -1;
    sc->add_option("--r1", r1, "C1 bound on the time derivative of the field");
    sc->add_option("--inflation", copt.inflation, "constant inflation factor");
    sc->add_flag("!--serial", copt.parallel, "single-threaded certification");

    std::string pr_field;
    double pr_t = 0;
    int pr_kmax = 4;
    bool pr_eq = false;
    auto* sp = sh->add_subcommand("project", "Fourier shear modes of the frozen field");
    sp->add_option("--field", pr_field, "field spec JSON")->required();
    sp->add_option("--t", pr_t, "time");
    sp->add_option("--kmax", pr_kmax, "Fourier truncation");
    sp->add_flag("--equivariant", pr_eq, "sine modes only");

    std::string bound_name;
    BoundArgs bargs;
    auto* sb = sh->add_subcommand("bound", "evaluate one error-bound function");
    sb->add_option("--name", bound_name, "a0 a1 b0 b1 c0 c1 d0 d1 f0 f1 g0 g1 h0 h1")
        ->required()
        ->check(CLI::IsMember(bound_function_names()));
    sb->add_option("--t", bargs.t);
    sb->add_option("--x", bargs.x);
    sb->add_option("--K", bargs.K);
    sb->add_option("--K0", bargs.K0);
    sb->add_option("--n", bargs.n);
    sb->add_option("--k", bargs.k);
    sb->add_option("--m", bargs.m);
    sb->add_option("--r1", bargs.r1);

    // classify
    std::vector<std::string> cl_tables, cl_names;
    bool cl_audit = false;
    auto* cl = app.add_subcommand("classify", "averse-knot verdicts for table records");
    cl->add_option("--table", cl_tables, "CSV or JSON knot table (repeatable)")->required();
    cl->add_option("--name", cl_names, "restrict to these knots (repeatable)");
    cl->add_flag("--audit", cl_audit, "evaluate every rule");

    // corpus
    std::vector<std::string> co_tables;
    std::string golden, out_dir, plot_dir;
    bool co_audit = false;
    int plot_res = 128;
    auto* co = app.add_subcommand("corpus", "classify whole tables and compare with golden verdicts");
    co->add_option("--table", co_tables, "CSV or JSON knot table (repeatable)")->required();
    co->add_option("--golden", golden, "golden verdict CSV (name,status,limit_slope)");
    co->add_flag("--audit", co_audit, "evaluate every rule");
    co->add_option("--out", out_dir, "write verdicts.json and verdicts.csv here");
    co->add_option("--plot-dir", plot_dir, "pillowcase CSV per record with a braid or two-bridge entry");
    co->add_option("--plot-resolution", plot_res, "alpha samples for plot data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*pc) return run_pillowcase(pc_src, topt, closed_form, format);
        if (*sl) {
            if (tests.empty() && !family) throw Error(Errc::SchemaError, "slopes needs --test or --family");
            return run_slopes(sl_src, topt, tests, family, kmax_family, format);
        }
        if (*al) {
            if (poly_text.empty() && poly_json.empty() && !al_src.given())
                throw Error(Errc::SchemaError, "alex needs --poly, --json or a knot");
            return run_alex(poly_text, poly_json, al_src, angles, multiples, format);
        }
        if (*ap) return run_apoly(apoly_file, sides, edges, divisors, format);
        if (*gr) {
            if (diagram_code.empty() && graph_table.empty()) throw Error(Errc::SchemaError, "graph needs --code or --table");
            const CrowellClass cls = graph_class == "torus2" ? CrowellClass::Torus2
                                     : graph_class == "twist" ? CrowellClass::Twist
                                                              : CrowellClass::Other;
            return run_graph(diagram_code, cls, graph_table, format);
        }
        if (*sc) {
            if (r1 >= 0) {
                copt.r1_given = true;
                copt.r1 = r1;
            }
            return run_shear_certify(field_file, copt, format);
        }
        if (*sp) return run_shear_project(pr_field, pr_t, pr_kmax, pr_eq, format);
        if (*sb) return run_shear_bound(bound_name, bargs, format);
        if (*cl) return run_classify(cl_tables, cl_names, cl_audit, format);
        if (*co) return run_corpus(co_tables, golden, co_audit, out_dir, plot_dir, plot_res, format);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return schema_like(e.code()) ? kSchema : kFailure;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSchema;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
