#ifndef CTM_TESTS_FIXTURES_HPP
#define CTM_TESTS_FIXTURES_HPP

// Bundled data files plus the published reference tables the project is
// expected to reproduce, hard-coded at their printed precision.

#include <string>
#include <vector>

#include "ctm/csv_io.hpp"

namespace fixtures {

inline std::string path(const std::string& name) {
    return std::string(CTM_DATA_DIR) + "/" + name;
}

/// The published one-year chain the bundled curve fixtures derive from.
inline ctm::AbsorbingChain example_chain() {
    return ctm::read_chain(path("example_chain.csv"));
}

/// K=2 convenience chain: one transient class.
inline ctm::AbsorbingChain scalar_chain(double q, double p1) {
    ctm::Matrix m(1, 1);
    m << q;
    ctm::Vector p(1);
    p << p1;
    return ctm::AbsorbingChain(ctm::RatingScale({"G", "D"}), ctm::SubstochasticMatrix(m), p);
}

/// Seven-year cumulative default probabilities as printed (4 decimals),
/// rows AAA..CCC.
inline ctm::Matrix published_seven_year_curves() {
    ctm::Matrix t(7, 7);
    t << 0, 0, 0, 0, 0, 0, 0,
        0, 0, 0, 0.0001, 0.0001, 0.0002, 0.0004,
        0, 0.0001, 0.0003, 0.0006, 0.0010, 0.0015, 0.0022,
        0.0012, 0.0027, 0.0045, 0.0067, 0.0093, 0.0122, 0.0154,
        0.0010, 0.0037, 0.0078, 0.0132, 0.0194, 0.0263, 0.0337,
        0.0153, 0.0377, 0.0622, 0.0865, 0.1097, 0.1313, 0.1512,
        0.3038, 0.4645, 0.5513, 0.5998, 0.6282, 0.6460, 0.6582;
    return t;
}

/// Published l1 forecast errors of the unconstrained 7-year
/// reconstruction, forecast years 8..20.
inline std::vector<double> published_unconstrained_errors() {
    return {0.0042, 0.0078, 0.0125, 0.0181, 0.0252, 0.0332, 0.0421,
            0.0517, 0.0619, 0.0728, 0.0841, 0.0958, 0.1078};
}

/// Published l1 forecast errors of the constrained reconstruction:
/// rows = 4..7 years of data, columns = forecast years 10..20.
inline ctm::Matrix published_constrained_errors() {
    ctm::Matrix t(4, 11);
    t << 0.0159, 0.0209, 0.0264, 0.0326, 0.0394, 0.0407, 0.0480, 0.0557, 0.0638, 0.0723, 0.0811,
        0.0081, 0.0112, 0.0149, 0.0192, 0.0241, 0.0267, 0.0322, 0.0382, 0.0446, 0.0515, 0.0587,
        0.0050, 0.0073, 0.0102, 0.0136, 0.0175, 0.0206, 0.0254, 0.0306, 0.0362, 0.0423, 0.0488,
        0.0033, 0.0051, 0.0074, 0.0102, 0.0135, 0.0164, 0.0205, 0.0252, 0.0304, 0.0362, 0.0423;
    return t;
}

/// Published l1 forecast errors on the agency data: rows = 4..7 years of
/// data, columns = forecast years 8..15.
inline ctm::Matrix published_agency_errors() {
    ctm::Matrix t(4, 8);
    t << 0.0544, 0.0719, 0.0888, 0.1073, 0.1264, 0.1435, 0.1606, 0.1795,
        0.0440, 0.0600, 0.0752, 0.0919, 0.1092, 0.1243, 0.1393, 0.1560,
        0.0184, 0.0260, 0.0325, 0.0403, 0.0485, 0.0546, 0.0607, 0.0687,
        0.0100, 0.0156, 0.0199, 0.0254, 0.0312, 0.0349, 0.0385, 0.0438;
    return t;
}

} // namespace fixtures

#endif
