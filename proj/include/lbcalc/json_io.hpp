#pragma once

#include <string>

#include <json.hpp>

#include "lbcalc/dirichlet.hpp"
#include "lbcalc/estimate.hpp"
#include "lbcalc/germ.hpp"
#include "lbcalc/limit.hpp"
#include "lbcalc/matrix.hpp"

namespace lbcalc::io {

using nlohmann::json;

// Complex numbers are [re, im]; a bare number is read as a real value.
json to_json(Complex c);
Complex complex_from_json(const json& j);

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json to_json(const dirichlet::DirichletSeries& g);
/// Terms must be strictly increasing in n.
dirichlet::DirichletSeries series_from_json(const json& j);

json to_json(const germ::Germ& g);
germ::Germ germ_from_json(const json& j);

json to_json(const estimate::EstimateReport& report);

json to_json(const limit::ContinuityCertificate& cert);
limit::ContinuityCertificate certificate_from_json(const json& j);

json to_json(const limit::VerifyReport& report);
json to_json(const limit::DirichletModulus& modulus);
json to_json(const limit::GermModulus& modulus);
json to_json(const limit::ModulusCheck& check);

/// Parses a file; ValidationError on I/O or syntax errors.
json read_json_file(const std::string& path);

}  // namespace lbcalc::io
