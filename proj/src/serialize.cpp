#include "thetaforge/serialize.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace thetaforge {

using nlohmann::json;

cplx parse_complex(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw Error("parse_complex: empty string");

    // split into one or two signed terms; an imaginary term ends in i/I/j
    std::vector<std::string> terms;
    std::string cur;
    for (std::size_t i = 0; i < t.size(); ++i) {
        char c = t[i];
        if ((c == '+' || c == '-') && i > 0 && t[i - 1] != 'e' && t[i - 1] != 'E') {
            terms.push_back(cur);
            cur = std::string(1, c);
        } else {
            cur += c;
        }
    }
    terms.push_back(cur);
    if (terms.size() > 2) throw Error("parse_complex: cannot parse '" + s + "'");

    double re = 0.0, im = 0.0;
    bool saw_im = false;
    for (auto term : terms) {
        bool imag = false;
        if (!term.empty() && (term.back() == 'i' || term.back() == 'I' || term.back() == 'j')) {
            imag = true;
            term.pop_back();
            if (term.empty() || term == "+" || term == "-") term += "1";
        }
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(term, &used);
        } catch (const std::exception&) {
            throw Error("parse_complex: cannot parse '" + s + "'");
        }
        if (used != term.size()) throw Error("parse_complex: cannot parse '" + s + "'");
        if (imag) {
            if (saw_im) throw Error("parse_complex: two imaginary parts in '" + s + "'");
            im = v;
            saw_im = true;
        } else {
            re += v;
        }
    }
    return {re, im};
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json gram_report_to_json(const GramReport& rep) {
    json j;
    j["schema"] = 1;
    j["matrix"] = matrix_to_json(rep.matrix);
    j["dimension"] = rep.matrix.rows();
    j["max_offdiag"] = rep.max_offdiag;
    j["max_diag_deviation"] = rep.max_diag_deviation;
    j["N"] = rep.n_used;
    j["seconds"] = rep.seconds;
    j["measure_constant"] = rep.measure_constant;
    if (!rep.refinement_trace.empty()) j["refinement_trace"] = rep.refinement_trace;
    return j;
}

json canonical_basis_to_json(const CanonicalBasisData& d) {
    json j;
    j["schema"] = 1;
    j["n"] = d.n;
    j["A"] = d.A;
    j["A_tilde"] = d.Atilde;
    j["delta"] = d.Delta;
    json om = json::array();
    for (const auto& row : d.omega_over_tau) {
        json r = json::array();
        for (const auto& e : row) r.push_back(e.str());
        om.push_back(r);
    }
    j["omega_over_tau"] = om;
    if (!d.note.empty()) j["note"] = d.note;
    return j;
}

PolarizedTorus torus_from_json(const json& j) {
    int l = j.at("l").get<int>();
    long long k = j.at("k").get<long long>();
    std::vector<long long> delta = j.at("delta").get<std::vector<long long>>();
    const auto& om = j.at("omega");
    if (static_cast<int>(om.size()) != l) throw Error("torus_from_json: omega rows != l");
    Eigen::MatrixXcd omega(l, l);
    for (int i = 0; i < l; ++i) {
        if (static_cast<int>(om[i].size()) != l) throw Error("torus_from_json: omega cols != l");
        for (int c = 0; c < l; ++c) {
            const auto& e = om[i][c];
            if (e.is_number())
                omega(i, c) = cplx(e.get<double>(), 0.0);
            else
                omega(i, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return PolarizedTorus(l, omega, delta, k);
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& m) {
    os.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << m(i, j).real() << "," << m(i, j).imag();
        }
        os << "\n";
    }
}

std::vector<EvalPoint> parse_points(std::istream& is, int dim) {
    std::vector<EvalPoint> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string stripped = line;
        while (!stripped.empty() && std::isspace(static_cast<unsigned char>(stripped.front())))
            stripped.erase(stripped.begin());
        if (stripped.empty() || stripped[0] == '#') continue;
        for (auto& c : stripped)
            if (c == ',') c = ' ';
        std::istringstream ss(stripped);
        std::vector<std::string> tokens;
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (static_cast<int>(tokens.size()) != dim)
            throw Error("points file line " + std::to_string(lineno) + ": expected " +
                        std::to_string(dim) + " entries, got " + std::to_string(tokens.size()));
        EvalPoint p;
        p.line = lineno;
        p.coords.resize(dim);
        for (int i = 0; i < dim; ++i) {
            try {
                p.coords[i] = parse_complex(tokens[static_cast<std::size_t>(i)]);
            } catch (const Error& e) {
                throw Error("points file line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace thetaforge
