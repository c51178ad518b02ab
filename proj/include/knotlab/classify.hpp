#pragma once

#include "knotlab/knot_record.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace knotlab {

enum class VerdictStatus { NotAverse, TorusAverse, Unknown };

const char* status_name(VerdictStatus s);
VerdictStatus parse_status(const std::string& s);

struct FiredRule {
    std::string id;      // R1..R9, T
    std::string reason;  // the result the rule rests on
    std::string detail;  // record values that triggered it
    bool excludes = false;  // true when the rule alone rules the knot out
};

struct Verdict {
    std::string name;
    VerdictStatus status = VerdictStatus::Unknown;
    std::optional<Rational> limit_slope;  // TorusAverse
    std::vector<FiredRule> rules;
    std::vector<long long> candidates;    // surviving limit slopes, Unknown or torus
    bool candidates_bounded = false;      // false: no finite candidate source
    std::vector<std::string> notes;       // data gaps, annotations
};

struct ClassifyOptions {
    bool audit = false;  // evaluate every rule instead of stopping at the first exclusion
};

Verdict classify(const KnotRecord& rec, const ClassifyOptions& opt = {});

struct GoldenEntry {
    VerdictStatus status = VerdictStatus::Unknown;
    std::optional<Rational> limit_slope;
};

std::map<std::string, GoldenEntry> parse_golden_csv(const std::string& text);

struct CorpusReport {
    std::vector<Verdict> verdicts;
    int not_averse = 0, torus_averse = 0, unknown = 0;
    std::vector<std::string> mismatches;  // empty when no golden file was given
    double seconds = 0;

    std::string to_json() const;
    std::string to_csv() const;
};

CorpusReport corpus_report(const std::vector<KnotRecord>& records, const ClassifyOptions& opt = {},
                           const std::map<std::string, GoldenEntry>* golden = nullptr);

std::string verdict_to_json(const Verdict& v);

}  // namespace knotlab
