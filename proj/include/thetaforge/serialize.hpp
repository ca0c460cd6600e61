#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "thetaforge/abelian.hpp"
#include "thetaforge/gram.hpp"
#include "thetaforge/periods.hpp"

namespace thetaforge {

// "a+bi" (also "a", "bi", "a-bi"); used for tau on the command line
cplx parse_complex(const std::string& s);

// complex numbers serialize as [re, im]
nlohmann::json complex_to_json(cplx z);
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
nlohmann::json gram_report_to_json(const GramReport& rep);
nlohmann::json canonical_basis_to_json(const CanonicalBasisData& d);

// {l, omega: [[[re,im],...],...], delta, k}
PolarizedTorus torus_from_json(const nlohmann::json& j);

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& m);

struct EvalPoint {
    Eigen::VectorXcd coords;
    int line = 0;
};

// one point per line, dim comma- or whitespace-separated complex entries;
// parse failures carry the line number
std::vector<EvalPoint> parse_points(std::istream& is, int dim);

}  // namespace thetaforge
