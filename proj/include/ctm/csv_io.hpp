#ifndef CTM_CSV_IO_HPP
#define CTM_CSV_IO_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ctm/validation.hpp"

namespace ctm {

struct CurveReadOptions {
    bool percent = false;        // values are percentages, divide by 100
    bool strict_monotone = false; // monotonicity violations error instead of warning
};

/// Cumulative default curves: header "rating,1,2,...,N", one row per
/// non-default rating. The default state is appended to the scale
/// implicitly (labeled "D", or "DEFAULT" if "D" is taken).
DefaultCurveTable read_default_curves(const std::string& path, CurveReadOptions options = {});
void write_default_curves(const std::string& path, const DefaultCurveTable& table);

/// Full K x K chain: one row per state, "LABEL,v1,...,vK", absorbing last
/// row. Published matrices are often rounded, so rows may be off 1 by up
/// to `slack`.
AbsorbingChain read_chain(const std::string& path, double slack = 1e-4);

/// Transition matrix with labels: header "rating,<labels...>", one labeled
/// row per non-default rating.
struct LabeledMatrix {
    std::vector<std::string> labels;
    Matrix entries;
};
LabeledMatrix read_transition_matrix(const std::string& path);
void write_transition_matrix(const std::string& path, const SubstochasticMatrix& q,
                             const RatingScale& scale);

/// Bounds grammar, line oriented:
///   default = lo,hi
///   [diagonal]
///   LABEL = lo,hi
///   [cells]
///   ROW,COL = lo,hi
/// '#' starts a comment. Labels may not contain ','.
struct BoundPair {
    double lower = 0.0, upper = 1.0;
};
struct ConstraintSpec {
    BoundPair default_bounds;
    std::map<std::string, BoundPair> diagonal_bounds;
    std::vector<std::pair<std::pair<std::string, std::string>, BoundPair>> cell_bounds;
};
ConstraintSpec parse_constraint_spec(const std::string& path);
BoxConstraints expand_constraints(const ConstraintSpec& spec, const RatingScale& scale);
BoxConstraints read_constraints(const std::string& path, const RatingScale& scale);

/// Everything a solve run reports, JSON-serialized next to the Q* output.
struct RunReport {
    bool converged;
    int iterations;
    double gradient_norm;
    double residual;
    double dual_value;
    double entropy_value;
    SubstochasticMatrix q_star;
    RatingScale scale;
    int years_used;
    SolverConfig config;
    std::map<std::string, std::string> input_digests; // path -> FNV-1a hash
};
std::string run_report_json(const RunReport& report);

void write_prediction_errors(const std::string& path, const PredictionErrorTable& table);

/// Fundamental matrix rows plus a trailing mean-time column.
void write_mean_times(const std::string& path, const Matrix& fundamental, const Vector& mean_times,
                      const std::vector<std::string>& labels);

/// Write-temp-then-rename; partial files never land at `path`.
void write_text_atomic(const std::string& path, const std::string& content);

/// FNV-1a 64-bit content hash, hex encoded.
std::string file_digest(const std::string& path);

/// "4,5,6" / "8-15" / mixes of both.
std::vector<int> parse_year_list(const std::string& text);

} // namespace ctm

#endif
