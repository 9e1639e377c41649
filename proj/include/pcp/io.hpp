#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pcp/pairs.hpp"

namespace pcp::io {

using Json = nlohmann::json;

/// Bare number when the imaginary part is exactly zero, otherwise [re, im].
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& field);

Json matrix_to_json(const ComplexMatrix& a);
/// Rows of equal length; entries are numbers or [re, im]. Errors name the field and entry.
ComplexMatrix matrix_from_json(const Json& j, const std::string& field);

struct PairDocument {
    PairXY pair;
    std::string name;
    std::string source;
};

struct DenseStateDocument {
    Eigen::Index n = 0;
    ComplexMatrix rho;
};

using StateDocument = std::variant<PairDocument, DenseStateDocument>;

struct CertificateDocument {
    std::string method;
    std::vector<int> permutation;
    PcpDecomposition decomposition;
};

Json pair_to_json(const PairDocument& doc);
PairDocument pair_from_json(const Json& j);

Json dense_state_to_json(const DenseStateDocument& doc);
/// {"n": k, "rho": [[...]]} is a dense state; anything with "X" is a pair.
StateDocument state_from_json(const Json& j);

Json certificate_to_json(const PcpDecomposition& dec, const std::string& method, const std::vector<int>& permutation);
CertificateDocument certificate_from_json(const Json& j);

/// Throws Error(Io) when the file cannot be read and Error(Parse) with the
/// line and column of malformed JSON.
Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// A file path (JSON array or whitespace/comma separated numbers) or an inline
/// comma separated list.
std::vector<double> parse_lambdas(const std::string& spec);

} // namespace pcp::io
