#include "pcp/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace pcp::io {

namespace {

[[noreturn]] void parse_error(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::Parse, "field " + field + ": " + what);
}

const Json& require_field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) parse_error(where, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) parse_error(where, std::string("missing \"") + key + "\"");
    return *it;
}

std::string optional_string(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    if (!it->is_string()) parse_error(key, "expected a string");
    return it->get<std::string>();
}

Eigen::Index read_dimension(const Json& j, const std::string& field) {
    if (!j.is_number_integer() || j.get<long long>() < 1) parse_error(field, "expected a positive integer");
    return static_cast<Eigen::Index>(j.get<long long>());
}

ComplexMatrix columns_from_json(const Json& j, const std::string& field, Eigen::Index n, Eigen::Index m) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != m)
        parse_error(field, "expected " + std::to_string(m) + " vectors");
    ComplexMatrix out(n, m);
    for (Eigen::Index c = 0; c < m; ++c) {
        const Json& col = j[static_cast<std::size_t>(c)];
        const std::string name = field + "[" + std::to_string(c) + "]";
        if (!col.is_array() || static_cast<Eigen::Index>(col.size()) != n)
            parse_error(name, "expected a vector of length " + std::to_string(n));
        for (Eigen::Index r = 0; r < n; ++r)
            out(r, c) = complex_from_json(col[static_cast<std::size_t>(r)], name + "[" + std::to_string(r) + "]");
    }
    return out;
}

} // namespace

Json complex_to_json(Complex z) {
    if (z.imag() == 0.0) return z.real();
    return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    parse_error(field, "expected a number or [re, im], got " + j.dump());
}

Json matrix_to_json(const ComplexMatrix& a) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(complex_to_json(a(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) parse_error(field, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array()) parse_error(field + "[0]", "expected an array");
    const std::size_t cols = j[0].size();
    ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        const std::string row_name = field + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != cols)
            parse_error(row_name, "expected a row of length " + std::to_string(cols));
        for (std::size_t k = 0; k < cols; ++k)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                complex_from_json(j[i][k], row_name + "[" + std::to_string(k) + "]");
    }
    return out;
}

Json pair_to_json(const PairDocument& doc) {
    Json j;
    if (!doc.name.empty()) j["name"] = doc.name;
    if (!doc.source.empty()) j["source"] = doc.source;
    j["n"] = doc.pair.n();
    j["X"] = matrix_to_json(doc.pair.x());
    j["Y"] = matrix_to_json(doc.pair.y());
    return j;
}

PairDocument pair_from_json(const Json& j) {
    ComplexMatrix x = matrix_from_json(require_field(j, "X", "document"), "X");
    ComplexMatrix y = matrix_from_json(require_field(j, "Y", "document"), "Y");
    if (j.contains("n")) {
        const Eigen::Index n = read_dimension(j["n"], "n");
        if (x.rows() != n || x.cols() != n) parse_error("X", "expected " + std::to_string(n) + "x" + std::to_string(n));
        if (y.rows() != n || y.cols() != n) parse_error("Y", "expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    try {
        return {PairXY(std::move(x), std::move(y)), optional_string(j, "name"), optional_string(j, "source")};
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, std::string("invalid pair: ") + e.what());
    }
}

Json dense_state_to_json(const DenseStateDocument& doc) {
    return Json{{"n", doc.n}, {"rho", matrix_to_json(doc.rho)}};
}

StateDocument state_from_json(const Json& j) {
    if (j.is_object() && j.contains("rho")) {
        DenseStateDocument doc;
        doc.n = read_dimension(require_field(j, "n", "document"), "n");
        doc.rho = matrix_from_json(j["rho"], "rho");
        if (doc.rho.rows() != doc.n * doc.n || doc.rho.cols() != doc.n * doc.n)
            parse_error("rho", "expected " + std::to_string(doc.n * doc.n) + "x" + std::to_string(doc.n * doc.n));
        if (!all_finite(doc.rho)) parse_error("rho", "entries must be finite");
        return doc;
    }
    return pair_from_json(j);
}

Json certificate_to_json(const PcpDecomposition& dec, const std::string& method, const std::vector<int>& permutation) {
    Json vs = Json::array(), ws = Json::array();
    for (Eigen::Index c = 0; c < dec.terms(); ++c) {
        Json v = Json::array(), w = Json::array();
        for (Eigen::Index r = 0; r < dec.n(); ++r) {
            v.push_back(complex_to_json(dec.v()(r, c)));
            w.push_back(complex_to_json(dec.w()(r, c)));
        }
        vs.push_back(std::move(v));
        ws.push_back(std::move(w));
    }
    return Json{{"method", method}, {"permutation", permutation}, {"n", dec.n()},
                {"m", dec.terms()}, {"vs", std::move(vs)},         {"ws", std::move(ws)}};
}

CertificateDocument certificate_from_json(const Json& j) {
    CertificateDocument doc;
    doc.method = optional_string(j, "method");
    const Eigen::Index n = read_dimension(require_field(j, "n", "certificate"), "n");
    const Eigen::Index m = read_dimension(require_field(j, "m", "certificate"), "m");
    if (j.contains("permutation")) {
        const Json& p = j["permutation"];
        if (!p.is_array()) parse_error("permutation", "expected an array of indices");
        for (const Json& e : p) {
            if (!e.is_number_integer()) parse_error("permutation", "expected integers");
            doc.permutation.push_back(e.get<int>());
        }
    }
    ComplexMatrix v = columns_from_json(require_field(j, "vs", "certificate"), "vs", n, m);
    ComplexMatrix w = columns_from_json(require_field(j, "ws", "certificate"), "ws", n, m);
    try {
        doc.decomposition = PcpDecomposition(std::move(v), std::move(w));
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, std::string("invalid certificate: ") + e.what());
    }
    return doc;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path);
}

std::vector<double> parse_lambdas(const std::string& spec) {
    std::string text = spec;
    std::error_code ec;
    if (std::filesystem::is_regular_file(spec, ec)) {
        std::ifstream in(spec);
        if (!in) throw Error(ErrorKind::Io, "cannot open " + spec);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '[') {
            try {
                return Json::parse(text).get<std::vector<double>>();
            } catch (const Json::exception& e) {
                throw Error(ErrorKind::Parse, spec + ": " + e.what());
            }
        }
    }
    for (char& c : text)
        if (c == ',') c = ' ';
    std::istringstream in(text);
    std::vector<double> out;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size())
            throw Error(ErrorKind::Parse, "eigenvalue " + std::to_string(out.size() + 1) + ": cannot read \"" + token + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw Error(ErrorKind::Parse, "no eigenvalues given");
    return out;
}

} // namespace pcp::io
