#include <cstdio>

#include "latticegen/cli.hpp"

namespace latticegen {

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string format_text(const TraceDiff& diff) {
    std::string out;
    for (const auto& w : diff.warnings) out += "warning: " + w + "\n";
    if (!diff.first_divergence) return out + "no divergence\n";
    const auto& d = *diff.first_divergence;
    out += "first divergence: " + d.system + " in " + d.unit + ": " + (d.feature_a.empty() ? "-" : d.feature_a) +
           " vs " + (d.feature_b.empty() ? "-" : d.feature_b);
    if (!d.detail.empty()) out += " (" + d.detail + ")";
    out += "\n";
    for (const auto& u : diff.units) {
        for (const auto& f : u.only_a) out += "  " + u.unit + " - " + f + "\n";
        for (const auto& f : u.only_b) out += "  " + u.unit + " + " + f + "\n";
    }
    return out;
}

std::string format_text(const SuiteReport& report) {
    std::string out;
    for (const auto& r : report.rows) {
        if (r.pass) {
            out += "PASS " + r.name + "\n";
            continue;
        }
        out += "FAIL " + r.name + "\n";
        if (!r.error.empty()) {
            out += "  " + r.error + "\n";
            continue;
        }
        out += "  expected: " + r.expected + "\n  actual:   " + r.actual + "\n";
        if (r.diff && r.diff->first_divergence) {
            const auto& d = *r.diff->first_divergence;
            out += "  first divergence: " + d.system + " in " + d.unit + "\n";
        }
    }
    out += std::to_string(report.passed()) + "/" + std::to_string(report.rows.size()) + " PASS\n";
    return out;
}

std::string format_text(const SharingReport& report) {
    std::string out;
    for (const auto& [label, n] : report.original_counts) out += label + ": " + std::to_string(n) + " objects\n";
    out += "original total: " + std::to_string(report.original_total) + "\n";
    out += "merged: " + std::to_string(report.merged_object_count) + "\n";
    out += "ratio: " + fixed2(report.ratio) + "\n";
    for (const auto& [region, s] : report.regions)
        out += "  " + region + " " + std::to_string(s.merged) + "/" + std::to_string(s.original) + "\n";
    return out;
}

std::string format_text(const FocusReport& report) {
    std::string out = report.unit + " " + report.aspect + "\n";
    for (const auto& e : report.entries)
        out += "  " + e.statement + " " + e.description + " <- " + e.system + ":" + e.feature +
               (e.context.empty() ? "" : " [" + e.context + "]") + "\n";
    if (report.entries.empty()) out += "  (no constraints)\n";
    return out;
}

std::string format_text(const ValidationReport& report) {
    std::string out;
    for (const auto& d : report.errors) out += "error " + d.code + " " + d.object + ": " + d.message + "\n";
    for (const auto& d : report.warnings) out += "warning " + d.code + " " + d.object + ": " + d.message + "\n";
    out += std::to_string(report.errors.size()) + " errors, " + std::to_string(report.warnings.size()) + " warnings\n";
    return out;
}

}  // namespace latticegen
