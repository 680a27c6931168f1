#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unn/geometry.hpp"
#include "unn/pdf.hpp"

namespace unn {

// A pdf together with its enclosing support ball and (for training data) a
// class label. Query objects may leave the label empty.
struct UncertainObject {
    Pdf pdf;
    SupportBall support;
    std::string label;
};

inline UncertainObject make_object(Pdf pdf, std::string label = {}) {
    validate(pdf);
    SupportBall ball = support_ball(pdf);
    return UncertainObject{std::move(pdf), std::move(ball), std::move(label)};
}

// Labelled training set. Class labels are kept sorted and unique.
struct Dataset {
    std::vector<UncertainObject> objects;
    std::size_t dim = 0;
    std::vector<std::string> labels;

    std::size_t size() const { return objects.size(); }
};

inline Dataset make_dataset(std::vector<UncertainObject> objects) {
    if (objects.empty()) throw std::invalid_argument("dataset: empty");
    const std::size_t d = dim(objects.front().pdf);
    std::set<std::string> labels;
    for (const auto& o : objects) {
        if (dim(o.pdf) != d) throw std::invalid_argument("dataset: mixed dimensionalities");
        if (o.label.empty()) throw std::invalid_argument("dataset: unlabeled object");
        labels.insert(o.label);
    }
    if (labels.size() < 2) throw std::invalid_argument("dataset: needs at least 2 distinct labels");
    Dataset ds;
    ds.objects = std::move(objects);
    ds.dim = d;
    ds.labels.assign(labels.begin(), labels.end());
    return ds;
}

inline std::vector<std::size_t> class_indices(const Dataset& ds, const std::string& label) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < ds.objects.size(); ++i)
        if (ds.objects[i].label == label) out.push_back(i);
    return out;
}

} // namespace unn
