#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "unn/baselines.hpp"
#include "unn/dataset.hpp"
#include "unn/pdf.hpp"

namespace unn {

// ---------------------------------------------------------------------------
// JSON-lines dataset files: one record per object,
//   {"label": "...", "pdf": {"type": "point"|"mixture"|"gauss"|"box"|"product"|"waypoint", ...}}
// Doubles round-trip bit-exactly (shortest-representation serialization).
// ---------------------------------------------------------------------------

inline nlohmann::json pdf_to_json(const Pdf& pdf) {
    using nlohmann::json;
    struct V {
        json operator()(const PointMass& p) const { return json{{"type", "point"}, {"at", p.at}}; }
        json operator()(const DiscreteMixture& m) const {
            json atoms = json::array();
            for (const auto& a : m.atoms) atoms.push_back(json{{"at", a.at}, {"w", a.weight}});
            return json{{"type", "mixture"}, {"atoms", atoms}};
        }
        json operator()(const GaussianProduct& g) const {
            return json{{"type", "gauss"}, {"mean", g.mean}, {"sigmas", g.sigmas}, {"trunc", g.truncation}};
        }
        json operator()(const UniformBox& b) const {
            return json{{"type", "box"}, {"low", b.low}, {"high", b.high}};
        }
        json operator()(const DimProduct& p) const {
            json factors = json::array();
            for (const auto& f : p.factors) {
                if (const auto* n = std::get_if<Normal1D>(&f))
                    factors.push_back(json{{"kind", "normal"}, {"mu", n->mu}, {"sigma", n->sigma}, {"trunc", n->truncation}});
                else {
                    const auto& u = std::get<Uniform1D>(f);
                    factors.push_back(json{{"kind", "uniform"}, {"a", u.a}, {"b", u.b}});
                }
            }
            return json{{"type", "product"}, {"factors", factors}};
        }
        json operator()(const Waypoint& w) const {
            return json{{"type", "waypoint"}, {"center", w.center}, {"side", w.side}};
        }
    };
    return std::visit(V{}, pdf);
}

inline Pdf pdf_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "point") return PointMass{j.at("at").get<Point>()};
    if (type == "mixture") {
        DiscreteMixture m;
        for (const auto& a : j.at("atoms"))
            m.atoms.push_back(WeightedAtom{a.at("at").get<Point>(), a.at("w").get<double>()});
        return m;
    }
    if (type == "gauss") {
        GaussianProduct g;
        g.mean = j.at("mean").get<Point>();
        g.sigmas = j.at("sigmas").get<std::vector<double>>();
        g.truncation = j.value("trunc", 4.0);
        return g;
    }
    if (type == "box") return UniformBox{j.at("low").get<Point>(), j.at("high").get<Point>()};
    if (type == "product") {
        DimProduct p;
        for (const auto& f : j.at("factors")) {
            const std::string kind = f.at("kind").get<std::string>();
            if (kind == "normal")
                p.factors.push_back(Normal1D{f.at("mu").get<double>(), f.at("sigma").get<double>(),
                                             f.value("trunc", 4.0)});
            else if (kind == "uniform")
                p.factors.push_back(Uniform1D{f.at("a").get<double>(), f.at("b").get<double>()});
            else
                throw std::invalid_argument("unknown factor kind '" + kind + "'");
        }
        return p;
    }
    if (type == "waypoint") return Waypoint{j.at("center").get<Point>(), j.at("side").get<double>()};
    throw std::invalid_argument("unknown pdf type '" + type + "'");
}

inline nlohmann::json object_to_json(const UncertainObject& obj) {
    nlohmann::json j{{"pdf", pdf_to_json(obj.pdf)}};
    if (!obj.label.empty()) j["label"] = obj.label;
    return j;
}

inline UncertainObject object_from_json(const nlohmann::json& j) {
    return make_object(pdf_from_json(j.at("pdf")), j.value("label", std::string{}));
}

// Loads labelled uncertain objects; support balls are recomputed from pdfs.
inline Dataset load_dataset_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::vector<UncertainObject> objects;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            objects.push_back(object_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (objects.empty()) throw std::runtime_error(path + ": no records");
    return make_dataset(std::move(objects));
}

// Loads query objects (labels optional, no class-count requirement).
inline std::vector<UncertainObject> load_objects_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::vector<UncertainObject> objects;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            objects.push_back(object_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return objects;
}

inline void save_objects_jsonl(const std::vector<UncertainObject>& objects, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    for (const auto& obj : objects) out << object_to_json(obj).dump() << '\n';
}

inline void save_dataset_jsonl(const Dataset& data, const std::string& path) {
    save_objects_jsonl(data.objects, path);
}

// ---------------------------------------------------------------------------
// CSV: header row, numeric feature columns; labelled files carry the label
// in the final column.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto a = field.find_first_not_of(" \t\r");
        const auto b = field.find_last_not_of(" \t\r");
        fields.push_back(a == std::string::npos ? std::string{} : field.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline double parse_number(const std::string& s, const std::string& path, std::size_t line_no,
                           std::size_t column) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": column " +
                                 std::to_string(column + 1) + ": '" + s + "' is not a number");
    }
}

} // namespace detail

// Reads a certain labelled dataset: every column numeric except the last.
inline std::vector<LabeledPoint> read_labeled_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header row");
    const std::size_t columns = detail::split_csv_line(line).size();
    if (columns < 2) throw std::runtime_error(path + ": need at least one feature and a label column");

    std::vector<LabeledPoint> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != columns)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(columns) + " fields, got " + std::to_string(fields.size()));
        LabeledPoint lp;
        for (std::size_t j = 0; j + 1 < fields.size(); ++j)
            lp.point.push_back(detail::parse_number(fields[j], path, line_no, j));
        lp.label = fields.back();
        if (lp.label.empty())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty label");
        out.push_back(std::move(lp));
    }
    return out;
}

// Reads certain query points: every column numeric.
inline std::vector<Point> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header row");
    const std::size_t columns = detail::split_csv_line(line).size();

    std::vector<Point> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != columns)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(columns) + " fields, got " + std::to_string(fields.size()));
        Point p;
        for (std::size_t j = 0; j < fields.size(); ++j)
            p.push_back(detail::parse_number(fields[j], path, line_no, j));
        out.push_back(std::move(p));
    }
    return out;
}

// Shortest-round-trip double formatting for CSV output.
inline std::string format_double(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

} // namespace unn
