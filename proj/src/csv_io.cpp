#include "ctm/csv_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctm/errors.hpp"

namespace ctm {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_number(const std::string& text, const std::string& where) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw input_error("non-numeric value '" + text + "' at " + where);
    }
    if (pos != text.size()) throw input_error("non-numeric value '" + text + "' at " + where);
    return v;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

BoundPair parse_bound_pair(const std::string& text, const std::string& where) {
    auto parts = split_csv(text);
    if (parts.size() != 2) throw input_error("expected 'lo,hi' at " + where);
    BoundPair b{parse_number(parts[0], where), parse_number(parts[1], where)};
    if (b.lower < 0.0 || b.upper > 1.0 || b.lower > b.upper)
        throw input_error("bounds must satisfy 0 <= lo <= hi <= 1 at " + where);
    return b;
}

} // namespace

DefaultCurveTable read_default_curves(const std::string& path, CurveReadOptions options) {
    auto lines = read_lines(path);
    if (lines.empty() || trim(lines[0]).empty()) throw input_error("empty curve file: " + path);

    auto header = split_csv(lines[0]);
    if (header.size() < 2) throw input_error(path + ": header must be 'rating,1,2,...'");
    const int horizon = static_cast<int>(header.size()) - 1;
    for (int n = 1; n <= horizon; ++n) {
        if (header[n] != std::to_string(n))
            throw input_error(path + ": header year columns must read 1.." +
                              std::to_string(horizon) + ", got '" + header[n] + "'");
    }

    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        if (trim(lines[r]).empty()) continue;
        auto cells = split_csv(lines[r]);
        std::string where_row = path + ":" + std::to_string(r + 1);
        if (static_cast<int>(cells.size()) != horizon + 1)
            throw input_error(where_row + ": expected " + std::to_string(horizon + 1) +
                              " columns, got " + std::to_string(cells.size()));
        if (cells[0].empty()) throw input_error(where_row + ": missing rating label");
        for (const auto& seen : labels)
            if (seen == cells[0]) throw input_error(where_row + ": duplicate rating '" + cells[0] + "'");
        labels.push_back(cells[0]);
        std::vector<double> row(horizon);
        for (int n = 1; n <= horizon; ++n) {
            std::string where = where_row + " column " + std::to_string(n + 1);
            double v = parse_number(cells[n], where);
            if (options.percent) v /= 100.0;
            if (v < -1e-9 || v > 1.0 + 1e-9)
                throw input_error(where + ": value " + fmt6(v) + " outside [0,1]" +
                                  (options.percent ? " after percent conversion" : ""));
            row[n - 1] = v;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw input_error(path + ": no data rows");

    std::string default_label = "D";
    for (const auto& l : labels)
        if (l == default_label) default_label = "DEFAULT";
    for (const auto& l : labels)
        if (l == default_label)
            throw input_error(path + ": cannot append implicit default state, labels 'D' and "
                                     "'DEFAULT' both taken");
    labels.push_back(default_label);

    Matrix curves(static_cast<int>(rows.size()), horizon);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int n = 0; n < horizon; ++n) curves(static_cast<int>(i), n) = rows[i][n];

    return DefaultCurveTable(RatingScale(std::move(labels)), std::move(curves),
                             options.strict_monotone
                                 ? DefaultCurveTable::MonotonePolicy::strict
                                 : DefaultCurveTable::MonotonePolicy::warn);
}

void write_default_curves(const std::string& path, const DefaultCurveTable& table) {
    std::ostringstream os;
    os << "rating";
    for (int n = 1; n <= table.horizon(); ++n) os << "," << n;
    os << "\n";
    for (int i = 0; i < table.scale().transient_count(); ++i) {
        os << table.scale().label(i);
        for (int n = 0; n < table.horizon(); ++n) os << "," << fmt6(table.curves()(i, n));
        os << "\n";
    }
    write_text_atomic(path, os.str());
}

AbsorbingChain read_chain(const std::string& path, double slack) {
    auto lines = read_lines(path);
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < lines.size(); ++r) {
        if (trim(lines[r]).empty()) continue;
        auto cells = split_csv(lines[r]);
        std::string where_row = path + ":" + std::to_string(r + 1);
        if (cells.size() < 2) throw input_error(where_row + ": expected 'LABEL,v1,...,vK'");
        labels.push_back(cells[0]);
        std::vector<double> row;
        for (std::size_t c = 1; c < cells.size(); ++c)
            row.push_back(parse_number(cells[c], where_row + " column " + std::to_string(c + 1)));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw input_error("empty chain file: " + path);
    const int k = static_cast<int>(rows.size());
    for (const auto& row : rows)
        if (static_cast<int>(row.size()) != k)
            throw input_error(path + ": chain matrix must be square (K rows of K values)");
    if (k < 2) throw input_error(path + ": chain needs at least two states");

    // Last row must be the absorbing state.
    for (int j = 0; j < k; ++j) {
        double expect = j == k - 1 ? 1.0 : 0.0;
        if (std::abs(rows[k - 1][j] - expect) > 1e-12)
            throw input_error(path + ": last row is not absorbing (0,...,0,1)");
    }

    Matrix q(k - 1, k - 1);
    Vector p1(k - 1);
    for (int i = 0; i < k - 1; ++i) {
        for (int j = 0; j < k - 1; ++j) q(i, j) = rows[i][j];
        p1(i) = rows[i][k - 1];
    }
    try {
        return AbsorbingChain(RatingScale(std::move(labels)), SubstochasticMatrix(std::move(q)),
                              std::move(p1), slack);
    } catch (const std::invalid_argument& e) {
        throw input_error(path + ": " + e.what());
    }
}

LabeledMatrix read_transition_matrix(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty() || trim(lines[0]).empty())
        throw input_error("empty transition matrix file: " + path);
    auto header = split_csv(lines[0]);
    if (header.size() < 2) throw input_error(path + ": header must be 'rating,<labels...>'");
    const int m = static_cast<int>(header.size()) - 1;

    LabeledMatrix out;
    out.entries = Matrix(m, m);
    int filled = 0;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        if (trim(lines[r]).empty()) continue;
        auto cells = split_csv(lines[r]);
        std::string where_row = path + ":" + std::to_string(r + 1);
        if (static_cast<int>(cells.size()) != m + 1)
            throw input_error(where_row + ": expected " + std::to_string(m + 1) + " columns");
        if (filled >= m) throw input_error(path + ": more rows than header columns");
        if (cells[0] != header[filled + 1])
            throw input_error(where_row + ": row label '" + cells[0] +
                              "' does not match header order");
        out.labels.push_back(cells[0]);
        for (int j = 0; j < m; ++j)
            out.entries(filled, j) =
                parse_number(cells[j + 1], where_row + " column " + std::to_string(j + 2));
        ++filled;
    }
    if (filled != m) throw input_error(path + ": expected " + std::to_string(m) + " data rows");
    return out;
}

void write_transition_matrix(const std::string& path, const SubstochasticMatrix& q,
                             const RatingScale& scale) {
    std::ostringstream os;
    os << "rating";
    for (int j = 0; j < scale.transient_count(); ++j) os << "," << scale.label(j);
    os << "\n";
    for (int i = 0; i < scale.transient_count(); ++i) {
        os << scale.label(i);
        for (int j = 0; j < scale.transient_count(); ++j) os << "," << fmt6(q.entries()(i, j));
        os << "\n";
    }
    write_text_atomic(path, os.str());
}

ConstraintSpec parse_constraint_spec(const std::string& path) {
    auto lines = read_lines(path);
    ConstraintSpec spec;
    enum class Section { top, diagonal, cells } section = Section::top;
    for (std::size_t r = 0; r < lines.size(); ++r) {
        std::string line = lines[r];
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::string where = path + ":" + std::to_string(r + 1);

        if (line.front() == '[') {
            if (line == "[diagonal]")
                section = Section::diagonal;
            else if (line == "[cells]")
                section = Section::cells;
            else
                throw input_error(where + ": unknown section '" + line + "'");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw input_error(where + ": expected 'name = lo,hi'");
        std::string key = trim(line.substr(0, eq));
        BoundPair bounds = parse_bound_pair(trim(line.substr(eq + 1)), where);

        switch (section) {
            case Section::top:
                if (key != "default")
                    throw input_error(where + ": only 'default' is valid outside a section");
                spec.default_bounds = bounds;
                break;
            case Section::diagonal:
                if (spec.diagonal_bounds.count(key))
                    throw input_error(where + ": duplicate diagonal entry '" + key + "'");
                spec.diagonal_bounds[key] = bounds;
                break;
            case Section::cells: {
                auto comma = key.find(',');
                if (comma == std::string::npos)
                    throw input_error(where + ": cell key must be 'ROW,COL'");
                std::string row = trim(key.substr(0, comma));
                std::string col = trim(key.substr(comma + 1));
                spec.cell_bounds.push_back({{row, col}, bounds});
                break;
            }
        }
    }
    return spec;
}

BoxConstraints expand_constraints(const ConstraintSpec& spec, const RatingScale& scale) {
    const int m = scale.transient_count();
    Vector lo = Vector::Constant(m * m, spec.default_bounds.lower);
    Vector hi = Vector::Constant(m * m, spec.default_bounds.upper);
    for (const auto& [label, bounds] : spec.diagonal_bounds) {
        auto i = scale.transient_index(label);
        if (!i) throw input_error("constraints: unknown rating label '" + label + "'");
        lo(*i * m + *i) = bounds.lower;
        hi(*i * m + *i) = bounds.upper;
    }
    for (const auto& [cell, bounds] : spec.cell_bounds) {
        auto i = scale.transient_index(cell.first);
        auto j = scale.transient_index(cell.second);
        if (!i || !j)
            throw input_error("constraints: unknown rating label in cell (" + cell.first + "," +
                              cell.second + ")");
        lo(*i * m + *j) = bounds.lower;
        hi(*i * m + *j) = bounds.upper;
    }
    return BoxConstraints(std::move(lo), std::move(hi));
}

BoxConstraints read_constraints(const std::string& path, const RatingScale& scale) {
    return expand_constraints(parse_constraint_spec(path), scale);
}

std::string run_report_json(const RunReport& report) {
    nlohmann::json j;
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    j["gradient_norm"] = report.gradient_norm;
    j["residual"] = report.residual;
    j["dual_value"] = report.dual_value;
    j["entropy_value"] = report.entropy_value;
    j["years_used"] = report.years_used;

    std::vector<std::string> labels(report.scale.labels().begin(),
                                    report.scale.labels().end() - 1);
    j["ratings"] = labels;
    auto& q = j["q_star"];
    for (int i = 0; i < report.q_star.size(); ++i) {
        std::vector<double> row(report.q_star.size());
        for (int c = 0; c < report.q_star.size(); ++c) row[c] = report.q_star.entries()(i, c);
        q.push_back(row);
    }

    auto& cfg = j["config"];
    cfg["tolerance"] = report.config.tolerance;
    cfg["max_iterations"] = report.config.max_iterations;
    cfg["initial_step"] = report.config.initial_step;
    cfg["min_step"] = report.config.min_step;
    cfg["max_step"] = report.config.max_step;
    cfg["fallback_step"] = report.config.fallback_step;

    auto& prov = j["provenance"];
    for (const auto& [path, digest] : report.input_digests) prov[path] = digest;
    return j.dump(2) + "\n";
}

void write_prediction_errors(const std::string& path, const PredictionErrorTable& table) {
    std::ostringstream os;
    os << "data_years";
    for (int y : table.prediction_years) os << "," << y;
    os << ",converged\n";
    for (std::size_t r = 0; r < table.years_of_data.size(); ++r) {
        os << table.years_of_data[r];
        for (int c = 0; c < table.errors.cols(); ++c)
            os << "," << fmt6(table.errors(static_cast<int>(r), c));
        os << "," << (table.row_converged[r] ? 1 : 0) << "\n";
    }
    write_text_atomic(path, os.str());
}

void write_mean_times(const std::string& path, const Matrix& fundamental, const Vector& mean_times,
                      const std::vector<std::string>& labels) {
    std::ostringstream os;
    os << "rating";
    for (const auto& l : labels) os << "," << l;
    os << ",mean_years\n";
    for (int i = 0; i < fundamental.rows(); ++i) {
        os << labels[i];
        for (int j = 0; j < fundamental.cols(); ++j) os << "," << fmt6(fundamental(i, j));
        os << "," << fmt6(mean_times(i)) << "\n";
    }
    write_text_atomic(path, os.str());
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw input_error("cannot write file: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw input_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw input_error("cannot move output into place: " + target.string());
    }
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open file for digest: " + path);
    std::uint64_t hash = 1469598103934665603ull; // FNV offset basis
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ull; // FNV prime
        }
        if (!in) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
    return out;
}

std::vector<int> parse_year_list(const std::string& text) {
    std::vector<int> years;
    for (const auto& piece : split_csv(text)) {
        if (piece.empty()) throw input_error("empty entry in year list '" + text + "'");
        auto dash = piece.find('-');
        if (dash == std::string::npos) {
            years.push_back(static_cast<int>(parse_number(piece, "year list")));
        } else {
            int from = static_cast<int>(parse_number(piece.substr(0, dash), "year list"));
            int to = static_cast<int>(parse_number(piece.substr(dash + 1), "year list"));
            if (from > to) throw input_error("descending range in year list '" + piece + "'");
            for (int y = from; y <= to; ++y) years.push_back(y);
        }
    }
    if (years.empty()) throw input_error("empty year list");
    return years;
}

} // namespace ctm
