#pragma once

#include "valgebra/dynamics.hpp"
#include "valgebra/valuation.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace valgebra {

using nlohmann::json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <class S>
S scalar_from_json(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if constexpr (scalar_traits<S>::exact) {
            return Rational(s);
        } else {
            auto slash = s.find('/');
            if (slash == std::string::npos) return std::stod(s);
            return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
        }
    }
    if (j.is_number_integer()) return S(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_number()) {
        if constexpr (scalar_traits<S>::exact) {
            return Rational(j.get<double>()); // binary expansion, exact
        } else {
            return j.get<double>();
        }
    }
    throw std::invalid_argument("expected a number or a \"p/q\" string");
}

template <class S>
json scalar_to_json(const S& v) {
    if constexpr (scalar_traits<S>::exact) {
        return v.str();
    } else {
        return v;
    }
}

// Body JSON: {"dim": n, "vertices": [[x_1,...,x_n], ...]}
template <class S>
Polytope<S> body_from_json(const json& j) {
    int dim = j.at("dim").get<int>();
    std::vector<Vec<S>> pts;
    for (const auto& row : j.at("vertices")) {
        Vec<S> p;
        for (const auto& x : row) p.push_back(scalar_from_json<S>(x));
        pts.push_back(std::move(p));
    }
    return Polytope<S>(dim, std::move(pts));
}

template <class S>
json body_to_json(const Polytope<S>& p) {
    json verts = json::array();
    for (const auto& v : p.vertices()) {
        json row = json::array();
        for (const auto& x : v) row.push_back(scalar_to_json(x));
        verts.push_back(row);
    }
    return json{{"dim", p.dim()}, {"vertices", verts}};
}

// Matrix JSON: {"dim": n, "rows": [[...], ...]}
template <class S>
LinearMap<S> matrix_from_json(const json& j) {
    int dim = j.at("dim").get<int>();
    Mat<S> m;
    for (const auto& row : j.at("rows")) {
        Vec<S> r;
        for (const auto& x : row) r.push_back(scalar_from_json<S>(x));
        m.push_back(std::move(r));
    }
    if (static_cast<int>(m.size()) != dim) throw std::invalid_argument("matrix rows do not match dim");
    return LinearMap<S>(std::move(m));
}

template <class S>
json matrix_to_json(const LinearMap<S>& g) {
    json rows = json::array();
    for (const auto& r : g.entries()) {
        json row = json::array();
        for (const auto& x : r) row.push_back(scalar_to_json(x));
        rows.push_back(row);
    }
    return json{{"dim", g.dim()}, {"rows", rows}};
}

// Valuation JSON: {"dim": n, "degree": i, "terms": [{"weight": w, "bodies": [...]}]}
template <class S>
Valuation<S> valuation_from_json(const json& j) {
    int dim = j.at("dim").get<int>();
    int degree = j.at("degree").get<int>();
    std::vector<ValTerm<S>> terms;
    for (const auto& t : j.at("terms")) {
        ValTerm<S> term;
        term.weight = scalar_from_json<S>(t.at("weight"));
        for (const auto& b : t.at("bodies")) term.bodies.push_back(body_from_json<S>(b));
        terms.push_back(std::move(term));
    }
    return Valuation<S>(dim, degree, std::move(terms));
}

template <class S>
json valuation_to_json(const Valuation<S>& v) {
    json terms = json::array();
    for (const auto& t : v.terms()) {
        json bodies = json::array();
        for (const auto& b : t.bodies) bodies.push_back(body_to_json(b));
        terms.push_back(json{{"weight", scalar_to_json(t.weight)}, {"bodies", bodies}});
    }
    return json{{"dim", v.dim()}, {"degree", v.degree()}, {"terms", terms}};
}

/// Provenance stamp carried by every output artifact.
struct RunStamp {
    std::string reference_body;
    std::string arithmetic_mode; // "float" | "rational"
    std::string conv_mode;       // "unit" | "paper"
};

inline json stamp_to_json(const RunStamp& s) {
    return json{{"reference_body", s.reference_body},
                {"arithmetic_mode", s.arithmetic_mode},
                {"convolution_mode", s.conv_mode}};
}

/// CSV with one row per exponent: k, raw_degree, kth_root, ratio_est,
/// fekete, spectral, rel_error. A '#' header carries the run stamp (gnuplot
/// reads it as a comment).
template <class S>
std::string degree_report_csv(const DegreeReport<S>& rep, const RunStamp& stamp) {
    std::ostringstream out;
    out << "# reference_body=" << stamp.reference_body << " arithmetic_mode=" << stamp.arithmetic_mode
        << " convolution_mode=" << stamp.conv_mode << "\n";
    out << "k,raw_degree,kth_root,ratio_est,fekete,spectral,rel_error\n";
    for (std::size_t idx = 0; idx < rep.ks.size(); ++idx) {
        double raw = to_double(rep.raw[idx]);
        out << rep.ks[idx] << ',' << format_double(raw) << ',' << format_double(rep.roots[idx]) << ','
            << format_double(rep.refined[idx]) << ',' << format_double(rep.fekete_estimate) << ','
            << format_double(rep.spectral_value) << ','
            << format_double(std::fabs(rep.refined[idx] - rep.spectral_value) /
                             (rep.spectral_value == 0 ? 1.0 : rep.spectral_value))
            << "\n";
    }
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
}

inline json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open input file: " + path);
    json j;
    f >> j;
    return j;
}

} // namespace valgebra
