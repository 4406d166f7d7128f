#include "projstat/classify.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace projstat {

namespace {

std::vector<std::size_t> count_classes(const Sample& train) {
    validate_sample(train);
    if (!train.labeled()) throw std::invalid_argument("training sample needs labels");
    int max_label = -1;
    for (int l : train.labels) {
        if (l < 0) throw std::invalid_argument("labels must be nonnegative");
        max_label = std::max(max_label, l);
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(max_label) + 1, 0);
    for (int l : train.labels) ++counts[static_cast<std::size_t>(l)];
    for (std::size_t l = 0; l < counts.size(); ++l)
        if (counts[l] == 0)
            throw std::invalid_argument("class " + std::to_string(l) + " has no training points");
    return counts;
}

std::vector<double> priors_of(const std::vector<std::size_t>& counts, std::size_t n) {
    std::vector<double> p;
    for (auto c : counts) p.push_back(static_cast<double>(c) / static_cast<double>(n));
    return p;
}

}  // namespace

std::string to_string(DistanceKind k) {
    switch (k) {
        case DistanceKind::W1: return "w1";
        case DistanceKind::KS: return "ks";
        case DistanceKind::CVM: return "cvm";
        case DistanceKind::TV: return "tv";
    }
    return "?";
}

DistanceKind parse_distance_kind(const std::string& name) {
    if (name == "w1") return DistanceKind::W1;
    if (name == "ks") return DistanceKind::KS;
    if (name == "cvm") return DistanceKind::CVM;
    if (name == "tv") return DistanceKind::TV;
    throw std::invalid_argument("unknown distance '" + name + "' (expected w1, ks, cvm or tv)");
}

double distance_1d(DistanceKind kind, const DiscreteMeasure& p, const DiscreteMeasure& q) {
    switch (kind) {
        case DistanceKind::W1: return w1_distance_1d(p, q);
        case DistanceKind::KS: return ks_distance_1d(p, q);
        case DistanceKind::CVM: return cvm_distance_1d(p, q);
        case DistanceKind::TV: return tv_distance(p, q);
    }
    throw std::invalid_argument("unknown distance kind");
}

RPClassifierModel fit_rp(const Sample& train, std::vector<Direction> directions,
                         DistanceKind kind) {
    auto counts = count_classes(train);
    if (directions.empty()) throw std::invalid_argument("at least one direction is required");
    for (const auto& u : directions)
        if (u.dim() != train.dim()) throw std::invalid_argument("direction dimension mismatch");

    RPClassifierModel m;
    m.distance_kind = kind;
    m.class_counts = counts;
    m.priors = priors_of(counts, train.size());
    m.per_class_proj.resize(counts.size());
    std::vector<std::vector<double>> values(counts.size());
    for (const auto& u : directions) {
        for (auto& v : values) v.clear();
        for (std::size_t i = 0; i < train.size(); ++i)
            values[static_cast<std::size_t>(train.labels[i])].push_back(u.dot(train.rows[i]));
        for (std::size_t l = 0; l < counts.size(); ++l)
            m.per_class_proj[l].push_back(DiscreteMeasure::from_values(values[l]));
    }
    m.directions = std::move(directions);
    return m;
}

FullModel fit_full(const Sample& train) {
    auto counts = count_classes(train);
    FullModel m;
    m.class_counts = counts;
    m.priors = priors_of(counts, train.size());
    for (std::size_t l = 0; l < counts.size(); ++l) {
        Sample cls;
        for (std::size_t i = 0; i < train.size(); ++i)
            if (static_cast<std::size_t>(train.labels[i]) == l) cls.rows.push_back(train.rows[i]);
        m.per_class_full.push_back(empirical_measure(cls));
    }
    return m;
}

std::vector<double> rp_scores(const RPClassifierModel& model, const Point& x) {
    std::vector<double> scores(model.num_classes(), 0.0);
    for (std::size_t j = 0; j < model.directions.size(); ++j) {
        const Point y{model.directions[j].dot(x)};
        for (std::size_t l = 0; l < model.num_classes(); ++l) {
            const DiscreteMeasure& base = model.per_class_proj[l][j];
            const double t = 1.0 / static_cast<double>(model.class_counts[l] + 1);
            const double d = distance_1d(model.distance_kind, base, base.mixed_with_point(y, t));
            scores[l] = std::max(scores[l], d);
        }
    }
    return scores;
}

int predict_rp(const RPClassifierModel& model, const Point& x) {
    const auto scores = rp_scores(model, x);
    return static_cast<int>(std::min_element(scores.begin(), scores.end()) - scores.begin());
}

int predict_addpoint_tv(const FullModel& model, const Point& x) {
    if (model.num_classes() != 2) throw std::invalid_argument("add-one-point TV rule is binary");
    const double p0 = model.per_class_full[0].mass_at(x);
    const double p1 = model.per_class_full[1].mass_at(x);
    if (p0 == 0.0 && p1 == 0.0) return 0;
    if (p0 == 0.0) return 1;
    if (p1 == 0.0) return 0;
    auto added = [&](std::size_t l) {
        const DiscreteMeasure& base = model.per_class_full[l];
        const double t = 1.0 / static_cast<double>(model.class_counts[l] + 1);
        return tv_distance(base, base.mixed_with_point(x, t));
    };
    return added(1) < added(0) ? 1 : 0;
}

int predict_plugin(const FullModel& model, const Point& x) {
    int best = 0;
    double best_score = -1.0;
    for (std::size_t l = 0; l < model.num_classes(); ++l) {
        const double s = model.per_class_full[l].mass_at(x) * model.priors[l];
        if (s > best_score) {
            best_score = s;
            best = static_cast<int>(l);
        }
    }
    return best;
}

double evaluate(const Predictor& predict, const Sample& test) {
    validate_sample(test);
    if (!test.labeled()) throw std::invalid_argument("test sample needs labels");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
        if (predict(test.rows[i]) != test.labels[i]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(test.size());
}

}  // namespace projstat
