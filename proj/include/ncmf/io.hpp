#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "algebra.hpp"
#include "copoint.hpp"
#include "grmod.hpp"
#include "nmf.hpp"
#include "parse.hpp"

namespace ncmf {

using Json = nlohmann::ordered_json;

inline Json field_to_json(const FieldSpec& spec) {
    Json j;
    if (spec.is_rationals()) {
        j["type"] = "Q";
    } else {
        j["type"] = "Fp";
        j["p"] = spec.p;
    }
    return j;
}

inline FieldSpec field_from_json(const Json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "Q") return FieldSpec::rationals();
    if (type == "Fp") return FieldSpec::prime_field(j.at("p").get<std::int64_t>());
    throw InputError("unknown field type: " + type);
}

inline FieldElem field_elem_from_json(const FieldSpec& spec, const Json& j) {
    if (j.is_number_integer())
        return FieldElem::from_integer(spec, j.get<std::int64_t>());
    if (j.is_string()) return FieldElem::parse(spec, j.get<std::string>());
    throw InputError("field element must be an integer or a literal string");
}

inline Json algebra_to_json(const AlgebraPtr& A) {
    Json j;
    j["field"] = field_to_json(A->field());
    j["n"] = A->generator_count();
    j["commutation"] = A->is_skew() ? "skew" : "free";
    if (A->is_skew()) {
        Json alpha = Json::array();
        for (int i = 0; i < A->generator_count(); ++i)
            for (int k = i + 1; k < A->generator_count(); ++k)
                alpha.push_back(Json::array({i + 1, k + 1, A->alpha(i, k).str()}));
        j["alpha"] = alpha;
    }
    Json squares = Json::array();
    for (int i : A->square_zero()) squares.push_back(i + 1);
    j["square_zero"] = squares;
    return j;
}

inline AlgebraPtr algebra_from_json(const Json& j) {
    FieldSpec field = field_from_json(j.at("field"));
    int n = j.at("n").get<int>();
    std::string comm = j.at("commutation").get<std::string>();
    std::set<int> squares;
    if (j.contains("square_zero"))
        for (const auto& idx : j.at("square_zero"))
            squares.insert(idx.get<int>() - 1);
    if (comm == "free") return make_free_algebra(field, n, squares);
    if (comm != "skew") throw InputError("commutation must be \"skew\" or \"free\"");
    auto alpha = constant_alpha(field, n, FieldElem::zero(field));
    std::vector<std::vector<bool>> given(n, std::vector<bool>(n, false));
    if (j.contains("alpha"))
        for (const auto& triple : j.at("alpha")) {
            int a = triple.at(0).get<int>() - 1;
            int b = triple.at(1).get<int>() - 1;
            if (a < 0 || a >= n || b < 0 || b >= n || a == b)
                throw InputError("alpha index out of range");
            alpha[a][b] = field_elem_from_json(field, triple.at(2));
            given[a][b] = true;
        }
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (i == k) continue;
            if (!given[i][k] && given[k][i]) alpha[i][k] = alpha[k][i].inverse();
            else if (!given[i][k] && !given[k][i]) throw InputError(
                "alpha entry missing for generators " + std::to_string(i + 1) + "," +
                std::to_string(k + 1));
        }
    return make_skew_algebra(field, n, alpha, squares);
}

inline Json matrix_entries_to_json(const GradedMatrix& m) {
    Json rows = Json::array();
    for (std::size_t s = 0; s < m.rows(); ++s) {
        Json row = Json::array();
        for (std::size_t t = 0; t < m.cols(); ++t) row.push_back(print_poly(m.at(s, t)));
        rows.push_back(row);
    }
    return rows;
}

inline Json matrix_to_json(const GradedMatrix& m) {
    Json j;
    j["target_shifts"] = m.target();
    j["source_shifts"] = m.source();
    j["entries"] = matrix_entries_to_json(m);
    return j;
}

inline GradedMatrix matrix_from_json(const AlgebraPtr& A, const Json& j) {
    ShiftVector target = j.at("target_shifts").get<ShiftVector>();
    ShiftVector source = j.at("source_shifts").get<ShiftVector>();
    GradedMatrix m(A, target, source);
    const Json& entries = j.at("entries");
    if (entries.size() != target.size()) throw InputError("entry row count mismatch");
    for (std::size_t s = 0; s < target.size(); ++s) {
        if (entries[s].size() != source.size()) throw InputError("entry column count mismatch");
        for (std::size_t t = 0; t < source.size(); ++t) {
            AlgebraElement e = parse_poly(entries[s][t].get<std::string>(), A);
            m.set(s, t, e);
        }
    }
    return m;
}

inline GradedMatrix entries_matrix_from_json(const AlgebraPtr& A, const Json& entries,
                                             const ShiftVector& target,
                                             const ShiftVector& source) {
    Json j;
    j["target_shifts"] = target;
    j["source_shifts"] = source;
    j["entries"] = entries;
    return matrix_from_json(A, j);
}

inline Json automorphism_to_json(const GradedAutomorphism& sigma) {
    Json rows = Json::array();
    const FieldMatrix& m = sigma.matrix();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m.at(i, k).str());
        rows.push_back(row);
    }
    return rows;
}

inline GradedAutomorphism automorphism_from_json(const AlgebraPtr& A, const Json& j) {
    const int n = A->generator_count();
    FieldMatrix m(A->field(), n, n);
    if (j.size() != static_cast<std::size_t>(n)) throw InputError("sigma must be n x n");
    for (int i = 0; i < n; ++i) {
        if (j[i].size() != static_cast<std::size_t>(n))
            throw InputError("sigma must be n x n");
        for (int k = 0; k < n; ++k) m.at(i, k) = field_elem_from_json(A->field(), j[i][k]);
    }
    return GradedAutomorphism(A, m);
}

inline NormalElement normal_element_from_json(const AlgebraPtr& A, const Json& j,
                                              int window) {
    AlgebraElement f = parse_poly(j.at("f").get<std::string>(), A);
    if (j.contains("d") && j.at("d").get<int>() != f.degree())
        throw InputError("declared degree d does not match f");
    if (!j.contains("nu")) return normalizing_automorphism(A, f, window);
    GradedAutomorphism nu = automorphism_from_json(A, j.at("nu"));
    for (int k = 0; k < A->generator_count(); ++k) {
        AlgebraElement a = AlgebraElement::generator(A, k);
        if (a * f != f * nu.apply(a)) throw InputError("supplied nu does not normalize f");
    }
    if (!is_regular_window(A, f, window)) throw NotRegularInWindow();
    return NormalElement{f, f.degree(), nu, window};
}

inline Json nmf_to_json(const NMF& phi) {
    Json j;
    j["algebra"] = algebra_to_json(phi.algebra());
    j["f"] = print_poly(phi.f().f);
    j["d"] = phi.degree_of_f();
    j["nu"] = automorphism_to_json(phi.nu());
    j["shifts0"] = phi.shifts0();
    j["shifts1"] = phi.shifts1();
    j["phi0"] = matrix_entries_to_json(phi.phi0());
    j["phi1"] = matrix_entries_to_json(phi.phi1());
    return j;
}

inline NMF nmf_from_json(const Json& j, int window) {
    AlgebraPtr A = algebra_from_json(j.at("algebra"));
    NormalElement f = normal_element_from_json(A, j, window);
    ShiftVector shifts0 = j.at("shifts0").get<ShiftVector>();
    ShiftVector shifts1 = j.at("shifts1").get<ShiftVector>();
    GradedMatrix phi0 =
        entries_matrix_from_json(A, j.at("phi0"), shifts0, shifts1);
    GradedMatrix phi1 =
        entries_matrix_from_json(A, j.at("phi1"), shifts1, shifted(shifts0, f.degree));
    return nmf_complete(A, f, phi0, phi1, window);
}

inline Point point_from_json(const FieldSpec& field, const Json& j) {
    std::vector<FieldElem> coords;
    for (const auto& c : j.at("coords")) coords.push_back(field_elem_from_json(field, c));
    return Point::of(std::move(coords));
}

inline Json point_to_json(const Point& p) {
    Json coords = Json::array();
    for (const auto& c : p.coords) coords.push_back(c.str());
    Json j;
    j["coords"] = coords;
    return j;
}

/// Context JSON: {"alpha": [[...full n x n matrix...]], "field": ...};
/// the diagonal of alpha is ignored.
inline SkewContext context_from_json(const Json& j, int window) {
    FieldSpec field = field_from_json(j.at("field"));
    const Json& rows = j.at("alpha");
    const int n = static_cast<int>(rows.size());
    auto alpha = constant_alpha(field, n, FieldElem::one(field));
    for (int i = 0; i < n; ++i) {
        if (rows[i].size() != static_cast<std::size_t>(n))
            throw InputError("alpha must be a full n x n matrix");
        for (int k = 0; k < n; ++k)
            if (i != k) alpha[i][k] = field_elem_from_json(field, rows[i][k]);
    }
    return build_context(field, alpha, window);
}

inline Json hilbert_to_json(const HilbertWindow& h) {
    Json dims = Json::array();
    for (std::size_t d : h.dims) dims.push_back(d);
    return dims;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
}

} // namespace ncmf
