#include "crystalline/io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace crystalline::io {

using json = nlohmann::ordered_json;

namespace {

json coord_to_json(const Coord& c) {
    if (c.is_exact()) {
        const Rational& r = c.rat();
        if (r.is_integer()) return json(r.num());
        return json(r.to_string());
    }
    return json(c.value());
}

Coord coord_from_json(const json& v, const std::string& field) {
    if (v.is_string()) {
        try {
            return Coord(Rational::parse(v.get<std::string>()));
        } catch (const std::exception& e) {
            throw ParseError(field + ": " + e.what());
        }
    }
    if (v.is_number_integer()) return Coord(Rational(v.get<std::int64_t>()));
    if (v.is_number_float()) {
        const double d = v.get<double>();
        return Coord::from_double(d);
    }
    throw ParseError(field + ": expected number or rational string");
}

json cplx_to_json(const cplx& c) { return json::array({c.real(), c.imag()}); }

cplx cplx_from_json(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ParseError(field + ": expected [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

int int_field(const json& v, const std::string& field, int lo) {
    if (!v.is_number_integer())
        throw ParseError(field + ": expected integer");
    const auto n = v.get<std::int64_t>();
    if (n < lo) throw ParseError(field + ": out of range");
    return int(n);
}

}  // namespace

std::string serialize(const CrystallineDistribution& d) {
    json doc;
    doc["lattice_step"] = coord_to_json(d.lattice.step);
    doc["terms"] = json::array();
    for (const auto& t : d.terms) {
        json jt;
        jt["tau"] = coord_to_json(t.tau);
        jt["omega"] = coord_to_json(t.omega);
        jt["l"] = t.l;
        jt["p"] = t.p;
        jt["c"] = cplx_to_json(t.c);
        doc["terms"].push_back(std::move(jt));
    }
    return doc.dump(2);
}

CrystallineDistribution parse_distribution(const std::string& text) {
    const json doc = parse_text(text);
    if (!doc.contains("lattice_step")) throw ParseError("lattice_step: missing");
    CrystallineDistribution d{Lattice(coord_from_json(doc["lattice_step"], "lattice_step")), {}};
    if (!doc.contains("terms") || !doc["terms"].is_array())
        throw ParseError("terms: expected array");
    std::size_t i = 0;
    for (const auto& jt : doc["terms"]) {
        const std::string base = "terms[" + std::to_string(i++) + "]";
        if (!jt.is_object()) throw ParseError(base + ": expected object");
        for (const char* key : {"tau", "omega", "l", "p", "c"})
            if (!jt.contains(key)) throw ParseError(base + "." + key + ": missing");
        CanonicalTerm t;
        t.tau = coord_from_json(jt["tau"], base + ".tau");
        t.omega = coord_from_json(jt["omega"], base + ".omega");
        t.l = int_field(jt["l"], base + ".l", 0);
        t.p = int_field(jt["p"], base + ".p", 0);
        t.c = cplx_from_json(jt["c"], base + ".c");
        d.terms.push_back(t);
    }
    return d;
}

std::string serialize(const FiniteOrderComb& g) {
    json doc;
    doc["order"] = g.order();
    doc["window"] = g.window_radius();
    doc["atoms"] = json::array();
    for (const auto& a : g.atoms()) {
        json ja;
        ja["x"] = a.x;
        ja["coeffs"] = json::array();
        for (const auto& c : a.coeffs) ja["coeffs"].push_back(cplx_to_json(c));
        doc["atoms"].push_back(std::move(ja));
    }
    if (g.growth()) {
        doc["growth"]["n"] = g.growth()->n;
        doc["growth"]["C"] = g.growth()->C;
    }
    return doc.dump(2);
}

FiniteOrderComb parse_comb(const std::string& text) {
    const json doc = parse_text(text);
    if (!doc.contains("order")) throw ParseError("order: missing");
    const int order = int_field(doc["order"], "order", 0);
    if (!doc.contains("atoms") || !doc["atoms"].is_array())
        throw ParseError("atoms: expected array");
    double window = 0.0;
    std::vector<FiniteOrderComb::Atom> atoms;
    std::size_t i = 0;
    for (const auto& ja : doc["atoms"]) {
        const std::string base = "atoms[" + std::to_string(i++) + "]";
        if (!ja.is_object() || !ja.contains("x") || !ja.contains("coeffs"))
            throw ParseError(base + ": expected {x, coeffs}");
        if (!ja["x"].is_number()) throw ParseError(base + ".x: expected number");
        FiniteOrderComb::Atom at;
        at.x = ja["x"].get<double>();
        window = std::max(window, std::abs(at.x));
        if (!ja["coeffs"].is_array()) throw ParseError(base + ".coeffs: expected array");
        std::size_t ci = 0;
        for (const auto& jc : ja["coeffs"])
            at.coeffs.push_back(
                cplx_from_json(jc, base + ".coeffs[" + std::to_string(ci++) + "]"));
        if (int(at.coeffs.size()) > order + 1)
            throw ParseError(base + ".coeffs: longer than order+1");
        atoms.push_back(std::move(at));
    }
    if (doc.contains("window")) {
        if (!doc["window"].is_number()) throw ParseError("window: expected number");
        window = doc["window"].get<double>();
    }
    std::optional<FiniteOrderComb::Growth> growth;
    if (doc.contains("growth")) {
        const auto& jg = doc["growth"];
        if (!jg.is_object() || !jg.contains("n") || !jg.contains("C"))
            throw ParseError("growth: expected {n, C}");
        growth = FiniteOrderComb::Growth{int_field(jg["n"], "growth.n", 0),
                                         jg["C"].get<double>()};
    }
    try {
        return FiniteOrderComb(order, std::move(atoms), window, growth);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("atoms: ") + e.what());
    }
}

std::string serialize(const reconstruct::TranslateDecomposition& td) {
    json doc;
    doc["taus"] = td.taus;
    doc["order"] = td.order;
    doc["window"] = td.window;
    doc["sequences"] = json::object();
    for (const auto& [key, seq] : td.sequences) {
        json arr = json::array();
        for (const auto& v : seq) arr.push_back(cplx_to_json(v));
        doc["sequences"][std::to_string(key.first) + "," + std::to_string(key.second)] =
            std::move(arr);
    }
    return doc.dump(2);
}

reconstruct::TranslateDecomposition parse_translate_decomposition(const std::string& text) {
    const json doc = parse_text(text);
    reconstruct::TranslateDecomposition td;
    if (!doc.contains("taus") || !doc["taus"].is_array())
        throw ParseError("taus: expected array");
    for (const auto& v : doc["taus"]) {
        if (!v.is_number()) throw ParseError("taus: expected numbers");
        td.taus.push_back(v.get<double>());
    }
    if (!doc.contains("order")) throw ParseError("order: missing");
    td.order = int_field(doc["order"], "order", 0);
    if (!doc.contains("window")) throw ParseError("window: missing");
    td.window = int_field(doc["window"], "window", 1);
    if (!doc.contains("sequences") || !doc["sequences"].is_object())
        throw ParseError("sequences: expected object");
    for (const auto& [key, arr] : doc["sequences"].items()) {
        const auto comma = key.find(',');
        if (comma == std::string::npos)
            throw ParseError("sequences." + key + ": key must be \"j,p\"");
        int j = 0, p = 0;
        try {
            j = std::stoi(key.substr(0, comma));
            p = std::stoi(key.substr(comma + 1));
        } catch (const std::exception&) {
            throw ParseError("sequences." + key + ": key must be \"j,p\"");
        }
        if (!arr.is_array() || long(arr.size()) != td.sample_count())
            throw ParseError("sequences." + key + ": expected 2W+1 complex entries");
        std::vector<cplx> seq;
        std::size_t i = 0;
        for (const auto& v : arr)
            seq.push_back(cplx_from_json(v, "sequences." + key + "[" + std::to_string(i++) + "]"));
        td.sequences[{j, p}] = std::move(seq);
    }
    return td;
}

std::string serialize(const PointSet& s) {
    json doc;
    doc["window"] = s.window_radius();
    doc["points"] = s.points();
    return doc.dump(2);
}

PointSet parse_point_set(const std::string& text) {
    const json doc = parse_text(text);
    if (!doc.contains("window") || !doc["window"].is_number())
        throw ParseError("window: expected number");
    if (!doc.contains("points") || !doc["points"].is_array())
        throw ParseError("points: expected array");
    std::vector<double> pts;
    for (const auto& v : doc["points"]) {
        if (!v.is_number()) throw ParseError("points: expected numbers");
        pts.push_back(v.get<double>());
    }
    try {
        return PointSet(std::move(pts), doc["window"].get<double>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("points: ") + e.what());
    }
}

DocumentKind detect_kind(const std::string& text) {
    const json doc = parse_text(text);
    if (doc.contains("terms")) return DocumentKind::Distribution;
    if (doc.contains("sequences")) return DocumentKind::TranslateDecomposition;
    if (doc.contains("atoms")) return DocumentKind::Comb;
    if (doc.contains("points")) return DocumentKind::PointSet;
    throw ParseError("document: unrecognized schema");
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i)
        os << (i ? "," : "") << header[i];
    os << "\n";
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.15g", row[i]);
            os << (i ? "," : "") << buf;
        }
        os << "\n";
    }
}

}  // namespace crystalline::io
