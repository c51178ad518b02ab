#pragma once

#include "knotlab/common.hpp"
#include "knotlab/laurent.hpp"

#include <optional>
#include <string>
#include <vector>

namespace knotlab {

struct SurjectionDatum {
    std::string target;             // knot the group maps onto
    long long lambda_degree = 1;    // lambda goes to lambda_target^degree
    Rational target_slope{0};       // limit slope of the target
    bool chirality_verified = false;
};

struct KnotRecord {
    std::string name;
    int crossings = 0;
    std::vector<int> braid;
    std::string pd;
    std::string two_bridge;
    std::optional<LaurentPoly> alexander;
    std::optional<long long> determinant;
    std::optional<int> signature;
    std::optional<int> seifert_genus;
    std::optional<int> slice_genus;
    std::optional<bool> alternating;
    std::optional<bool> amphichiral;
    std::optional<bool> small;
    std::optional<int> montesinos_tangles;  // 0 when not Montesinos
    std::optional<int> torus_p, torus_q;
    std::optional<bool> twist;
    std::optional<bool> composite;
    std::optional<int> cable_p, cable_q;
    std::optional<Rational> companion_limit_slope;
    std::optional<std::vector<Slope>> boundary_slopes;
    std::optional<SurjectionDatum> surjection;
    std::string chirality_convention;

    long long det_value() const;  // determinant field, else |Delta(-1)|; -1 if neither
    bool is_torus() const { return torus_p.has_value() && torus_q.has_value(); }
};

// Alexander polynomial of T(p, q), normalized.
LaurentPoly torus_alexander(int p, int q);

// Cross-field checks; throws ConsistencyError naming the fields.
void validate_record(const KnotRecord& rec);

// Columns as in the bundled tables. Missing columns are allowed except name.
std::vector<KnotRecord> parse_table_csv(const std::string& text);
// JSON array of objects keyed by the same column names.
std::vector<KnotRecord> parse_table_json(const std::string& text);
// Dispatch on extension (.json or anything else as CSV).
std::vector<KnotRecord> ingest_table(const std::string& path);

std::string record_to_json(const KnotRecord& rec);

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF.
std::vector<std::vector<std::string>> read_csv(const std::string& text);

std::string read_file(const std::string& path);

}  // namespace knotlab
