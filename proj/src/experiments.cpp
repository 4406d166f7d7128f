#include "projstat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "projstat/datagen.hpp"
#include "projstat/error.hpp"
#include "projstat/hypotest.hpp"
#include "projstat/projections.hpp"
#include "projstat/tomo.hpp"

namespace projstat {

namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) { return format_value(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

ResultRecord record(const std::string& experiment, const Params& params, const std::string& metric,
                    double value, std::int64_t replicate, std::uint64_t seed) {
    return {experiment, params, metric, value, replicate, seed};
}

Params with(Params p, const std::string& k, const std::string& v) {
    p.emplace_back(k, v);
    return p;
}

void require_fraction(double f, const char* what) {
    if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument(std::string(what) + " must be in (0, 1)");
}

void require_alpha(double a) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
}

std::size_t scaled(double base, double scale, std::size_t floor) {
    return std::max<std::size_t>(floor, static_cast<std::size_t>(std::llround(base * scale)));
}

JointPmf alternative_pmf(std::size_t d, double gamma) {
    if (gamma == 1.0) return JointPmf::uniform(d);
    return gen_odds_ratio_joint(d, gamma).pmf;
}

std::vector<double> gamma_range(double lo, double hi, double step) {
    std::vector<double> g;
    for (int i = 0; lo + i * step <= hi + 1e-12; ++i) g.push_back(lo + i * step);
    return g;
}

}  // namespace

std::pair<Sample, Sample> stratified_split(const Sample& data, double test_fraction, Rng& rng) {
    require_fraction(test_fraction, "test fraction");
    if (!data.labeled()) throw std::invalid_argument("stratified split needs labels");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);
    Sample train, test;
    for (auto& [label, idx] : by_class) {
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto n_train = static_cast<std::size_t>(
            std::llround((1.0 - test_fraction) * static_cast<double>(idx.size())));
        for (std::size_t t = 0; t < idx.size(); ++t) {
            Sample& dst = t < n_train ? train : test;
            dst.rows.push_back(data.rows[idx[t]]);
            dst.labels.push_back(label);
        }
    }
    return {std::move(train), std::move(test)};
}

ErrorSummary summarize(const std::vector<double>& values) {
    ErrorSummary s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

Sample two_class_bernoulli(std::size_t d, double corr, std::size_t n_per_class, Rng& rng) {
    Sample s = gen_independent_bernoulli(d, 0.5, n_per_class, rng);
    s.labels.assign(n_per_class, 0);
    Sample c1 = gen_equicorrelated_bernoulli(d, 0.5, corr, n_per_class, rng);
    for (auto& row : c1.rows) {
        s.rows.push_back(std::move(row));
        s.labels.push_back(1);
    }
    return s;
}

ClassifyRule parse_classify_rule(const std::string& name) {
    if (name == "rp") return ClassifyRule::RandomProjections;
    if (name == "addpoint-tv") return ClassifyRule::AddPointTv;
    if (name == "plugin") return ClassifyRule::Plugin;
    throw std::invalid_argument("unknown rule '" + name + "' (rp, addpoint-tv, plugin)");
}

std::string to_string(ClassifyRule r) {
    switch (r) {
        case ClassifyRule::RandomProjections: return "rp";
        case ClassifyRule::AddPointTv: return "addpoint-tv";
        case ClassifyRule::Plugin: return "plugin";
    }
    return "?";
}

// ---- classify ---------------------------------------------------------------

std::vector<ResultRecord> cmd_classify(const ClassifyConfig& cfg) {
    require_fraction(cfg.test_fraction, "test fraction");
    if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (cfg.projections.empty()) throw std::invalid_argument("need at least one projection count");
    for (auto k : cfg.projections)
        if (k < 1) throw std::invalid_argument("projection count must be >= 1");

    std::optional<Sample> loaded;
    if (cfg.data_path) {
        loaded = load_binary_matrix(*cfg.data_path, MatrixFormat{0, true});
    } else {
        if (cfg.dim < 1) throw std::invalid_argument("dim must be >= 1");
        if (!(cfg.corr >= 0.0 && cfg.corr < 1.0)) throw std::invalid_argument("corr must be in [0, 1)");
        if (cfg.n_per_class < 2) throw std::invalid_argument("need at least 2 observations per class");
    }
    const std::size_t d = loaded ? loaded->dim() : cfg.dim;
    const bool uses_k = cfg.rule == ClassifyRule::RandomProjections;

    Params base{{"dim", fmt(d)}};
    if (!loaded) base.emplace_back("corr", fmt(cfg.corr));
    base.emplace_back("rule", to_string(cfg.rule));
    if (uses_k) base.emplace_back("distance", to_string(cfg.distance));

    const std::vector<std::size_t> ks = uses_k ? cfg.projections : std::vector<std::size_t>{0};
    std::vector<std::vector<double>> errors(ks.size());
    std::vector<ResultRecord> out;

    for (std::size_t r = 0; r < cfg.replicates; ++r) {
        const std::uint64_t rseed = derive_seed(cfg.seed, r);
        Rng rng(rseed);
        const Sample data = loaded ? *loaded : two_class_bernoulli(d, cfg.corr, cfg.n_per_class, rng);
        const auto [train, test] = stratified_split(data, cfg.test_fraction, rng);
        if (test.size() == 0) throw DataError("test split is empty");

        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            double err = 0.0;
            if (uses_k) {
                Rng drng = make_stream(rseed, ks[ki]);
                const auto model = fit_rp(train, random_directions(d, ks[ki], drng), cfg.distance);
                err = evaluate([&](const Point& x) { return predict_rp(model, x); }, test);
            } else {
                const auto model = fit_full(train);
                if (cfg.rule == ClassifyRule::AddPointTv)
                    err = evaluate([&](const Point& x) { return predict_addpoint_tv(model, x); }, test);
                else
                    err = evaluate([&](const Point& x) { return predict_plugin(model, x); }, test);
            }
            errors[ki].push_back(err);
            const Params p = uses_k ? with(base, "k", fmt(ks[ki])) : base;
            out.push_back(record("classify", p, "error", err, static_cast<std::int64_t>(r), rseed));
        }
    }
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        const auto s = summarize(errors[ki]);
        const Params p = uses_k ? with(base, "k", fmt(ks[ki])) : base;
        out.push_back(record("classify", p, "error_mean", s.mean, -1, cfg.seed));
        out.push_back(record("classify", p, "error_sd", s.sd, -1, cfg.seed));
    }
    return out;
}

// ---- tomography -------------------------------------------------------------

namespace {

struct ImageSet {
    std::vector<tomo::PointSet> images;
    std::vector<int> labels;
};

ImageSet load_image_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    ImageSet set;
    std::string line;
    std::size_t line_no = 0;
    const std::string dir = path.find('/') == std::string::npos ? "" : path.substr(0, path.rfind('/') + 1);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos)
            throw DataError(path + ": row " + std::to_string(line_no) + ": expected 'path,label'");
        std::string file = line.substr(0, comma);
        const std::string lab = line.substr(comma + 1);
        if (lab != "0" && lab != "1") {
            if (set.images.empty() && line_no == 1) continue;  // header
            throw DataError(path + ": row " + std::to_string(line_no) + ", column 2: label '" + lab +
                            "' is not 0 or 1");
        }
        if (!file.empty() && file[0] != '/') file = dir + file;
        set.images.push_back(load_point_set(file));
        set.labels.push_back(lab == "1");
    }
    if (set.images.empty()) throw DataError(path + ": no images listed");
    return set;
}

}  // namespace

std::vector<ResultRecord> cmd_tomo(const TomoConfig& cfg) {
    require_fraction(cfg.test_fraction, "test fraction");
    if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (cfg.directions < 1) throw std::invalid_argument("need at least one direction");
    if (!cfg.image_list && cfg.scenario != 1 && cfg.scenario != 2)
        throw std::invalid_argument("scenario must be 1 or 2");

    std::optional<ImageSet> loaded;
    if (cfg.image_list) loaded = load_image_list(*cfg.image_list);

    tomo::PhantomConfig c0 = tomo::scenario_base();
    tomo::PhantomConfig c1 = cfg.scenario == 1 ? tomo::scenario1_extra_circle() : tomo::scenario2_larger_circles();
    c0.filled = c1.filled = cfg.filled;

    Params params;
    if (!loaded) params.emplace_back("scenario", std::to_string(cfg.scenario));
    params.emplace_back("directions", fmt(cfg.directions));
    params.emplace_back("r", fmt(cfg.neighbours));
    params.emplace_back("bins", fmt(cfg.bins));

    std::vector<ResultRecord> out;
    std::vector<double> errors;
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
        const std::uint64_t rseed = derive_seed(cfg.seed, r);
        Rng rng(rseed);
        ImageSet set;
        if (loaded) {
            set = *loaded;
        } else {
            for (int cls = 0; cls < 2; ++cls)
                for (std::size_t i = 0; i < cfg.n_per_class; ++i) {
                    set.images.push_back(tomo::generate_phantom(cls == 0 ? c0 : c1, rng));
                    set.labels.push_back(cls);
                }
        }
        // Split on indices so the images need not be copied into a Sample.
        Sample idx;
        for (std::size_t i = 0; i < set.images.size(); ++i) {
            idx.rows.push_back({static_cast<double>(i)});
            idx.labels.push_back(set.labels[i]);
        }
        const auto [tr, te] = stratified_split(idx, cfg.test_fraction, rng);
        std::vector<tomo::PointSet> train;
        std::vector<int> train_labels;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            train.push_back(set.images[static_cast<std::size_t>(tr.rows[i][0])]);
            train_labels.push_back(tr.labels[i]);
        }
        const auto model = tomo::fit_tomo(train, train_labels, random_directions(2, cfg.directions, rng),
                                          cfg.bins, cfg.neighbours);
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < te.size(); ++i)
            if (tomo::tomo_predict(model, set.images[static_cast<std::size_t>(te.rows[i][0])]) != te.labels[i])
                ++wrong;
        const double err = te.size() ? static_cast<double>(wrong) / static_cast<double>(te.size()) : 0.0;
        errors.push_back(err);
        out.push_back(record("tomo", params, "error", err, static_cast<std::int64_t>(r), rseed));
    }
    const auto s = summarize(errors);
    out.push_back(record("tomo", params, "error_mean", s.mean, -1, cfg.seed));
    out.push_back(record("tomo", params, "error_sd", s.sd, -1, cfg.seed));
    return out;
}

// ---- tests ------------------------------------------------------------------

TestKind parse_test_kind(const std::string& name) {
    if (name == "one-sample") return TestKind::OneSample;
    if (name == "two-sample") return TestKind::TwoSample;
    if (name == "multi-ks") return TestKind::MultiKs;
    if (name == "multi-ks-power") return TestKind::MultiKsPower;
    if (name == "sum-structure") return TestKind::SumStructure;
    if (name == "rare") return TestKind::Rare;
    if (name == "pb-power") return TestKind::PbPower;
    throw std::invalid_argument("unknown test '" + name +
                                "' (one-sample, two-sample, multi-ks, multi-ks-power, "
                                "sum-structure, rare, pb-power)");
}

std::string to_string(TestKind k) {
    switch (k) {
        case TestKind::OneSample: return "one-sample";
        case TestKind::TwoSample: return "two-sample";
        case TestKind::MultiKs: return "multi-ks";
        case TestKind::MultiKsPower: return "multi-ks-power";
        case TestKind::SumStructure: return "sum-structure";
        case TestKind::Rare: return "rare";
        case TestKind::PbPower: return "pb-power";
    }
    return "?";
}

std::vector<PowerPoint> multi_ks_power_curve(std::size_t d, std::size_t n,
                                             const std::vector<double>& gammas,
                                             const std::vector<std::size_t>& ks, double alpha,
                                             std::size_t B, std::size_t reps, std::uint64_t seed) {
    require_alpha(alpha);
    if (B < kMinCalibration)
        throw std::invalid_argument("calibration size must be >= " + std::to_string(kMinCalibration));
    if (reps < 1 || n < 1) throw std::invalid_argument("replicates and n must be >= 1");
    const DiscreteMeasure p0 = JointPmf::uniform(d).to_measure();

    std::vector<JointPmf> alts;
    for (double g : gammas) alts.push_back(alternative_pmf(d, g));

    std::vector<PowerPoint> out;
    const std::uint64_t dir_root = derive_seed(seed, 1), cal_root = derive_seed(seed, 2),
                        data_root = derive_seed(seed, 3);
    for (auto k : ks) {
        Rng drng = make_stream(dir_root, k);
        const ProjectedNull null(p0, random_directions(d, k, drng));
        Rng crng = make_stream(cal_root, k);
        const auto null_stats = mc_null_statistics(
            [&](Rng& g) { return null.statistic(null.draw(n, g)); }, B, crng);
        for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
            std::size_t rejections = 0;
            const std::uint64_t groot = derive_seed(data_root, gi);
            for (std::size_t r = 0; r < reps; ++r) {
                Rng rng = make_stream(groot, r);
                const Sample s = sample_from_pmf(alts[gi], n, rng);
                if (decide(null.statistic(s.rows), null_stats, alpha).reject) ++rejections;
            }
            out.push_back({gammas[gi], k, d, static_cast<double>(rejections) / static_cast<double>(reps), reps});
        }
    }
    return out;
}

std::vector<PowerPoint> pb_power_curve(const std::vector<std::size_t>& dims,
                                       const std::vector<double>& gamma1s, double gamma2,
                                       double alpha, std::size_t reps, std::uint64_t seed) {
    require_alpha(alpha);
    if (reps < 1) throw std::invalid_argument("replicates must be >= 1");
    std::vector<PowerPoint> out;
    for (std::size_t di = 0; di < dims.size(); ++di) {
        const std::size_t d = dims[di];
        for (std::size_t gi = 0; gi < gamma1s.size(); ++gi) {
            const std::uint64_t root = derive_seed(derive_seed(seed, di), gi);
            std::size_t rejections = 0;
            for (std::size_t r = 0; r < reps; ++r) {
                Rng rng = make_stream(root, r);
                const auto q = gen_poisson_binomial_params(d, gamma1s[gi], gamma2, rng);
                std::size_t s = 0;
                for (double qi : q) s += std::bernoulli_distribution(qi)(rng) ? 1 : 0;
                if (sum_structure_test(s, d, alpha).report.reject) ++rejections;
            }
            out.push_back({gamma1s[gi], 0, d, static_cast<double>(rejections) / static_cast<double>(reps), reps});
        }
    }
    return out;
}

namespace {

void push_report(std::vector<ResultRecord>& out, const std::string& exp, const Params& p,
                 const TestReport& rep, std::int64_t replicate, std::uint64_t seed) {
    out.push_back(record(exp, p, "statistic", rep.statistic, replicate, seed));
    out.push_back(record(exp, p, "critical_value", rep.critical_value, replicate, seed));
    out.push_back(record(exp, p, "p_value", rep.p_value, replicate, seed));
    out.push_back(record(exp, p, "reject", rep.reject ? 1.0 : 0.0, replicate, seed));
}

Sample load_or_generate(const std::optional<std::string>& path, std::size_t d, double gamma,
                        std::size_t n, Rng& rng) {
    if (path) return load_binary_matrix(*path);
    return sample_from_pmf(alternative_pmf(d, gamma), n, rng);
}

}  // namespace

std::vector<ResultRecord> cmd_test(const TestConfig& cfg) {
    require_alpha(cfg.alpha);
    if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    const std::string exp = "test-" + to_string(cfg.kind);
    std::vector<ResultRecord> out;

    switch (cfg.kind) {
        case TestKind::OneSample:
        case TestKind::TwoSample:
        case TestKind::MultiKs: {
            std::size_t d = cfg.dim;
            if (cfg.data_path) d = load_binary_matrix(*cfg.data_path).dim();
            const DiscreteMeasure p0 = JointPmf::uniform(d).to_measure();
            Params p{{"dim", fmt(d)}, {"alpha", fmt(cfg.alpha)}, {"B", fmt(cfg.mc_reps)}};
            if (!cfg.data_path) p.emplace_back("gamma", fmt(cfg.gamma));
            if (cfg.kind == TestKind::MultiKs) p.emplace_back("k", fmt(cfg.projections.at(0)));
            std::size_t rejections = 0;
            for (std::size_t r = 0; r < cfg.replicates; ++r) {
                const std::uint64_t rseed = derive_seed(cfg.seed, r);
                Rng rng(rseed);
                TestReport rep;
                if (cfg.kind == TestKind::OneSample) {
                    const Sample s = load_or_generate(cfg.data_path, d, cfg.gamma, cfg.n, rng);
                    rep = one_sample_projected_ks(s, p0, random_direction(d, rng), cfg.alpha, cfg.mc_reps, rng);
                    out.push_back(record(exp, p, "direction_good", rep.direction_good ? 1.0 : 0.0,
                                         static_cast<std::int64_t>(r), rseed));
                } else if (cfg.kind == TestKind::TwoSample) {
                    const Sample x = cfg.data_path ? load_binary_matrix(*cfg.data_path)
                                                   : sample_from_pmf(JointPmf::uniform(d), cfg.n, rng);
                    const Sample y = load_or_generate(cfg.data_path2, d, cfg.gamma, cfg.n2, rng);
                    rep = two_sample_projected_ks(x, y, random_direction(d, rng), cfg.alpha, cfg.mc_reps, rng);
                } else {
                    const Sample s = load_or_generate(cfg.data_path, d, cfg.gamma, cfg.n, rng);
                    const ProjectedNull null(p0, random_directions(d, cfg.projections.at(0), rng));
                    rep = multi_projection_ks_test(s, null, cfg.alpha, cfg.mc_reps, rng);
                }
                if (rep.reject) ++rejections;
                push_report(out, exp, p, rep, static_cast<std::int64_t>(r), rseed);
            }
            out.push_back(record(exp, p, "rejection_rate",
                                 static_cast<double>(rejections) / static_cast<double>(cfg.replicates), -1,
                                 cfg.seed));
            break;
        }
        case TestKind::MultiKsPower: {
            const auto gammas = cfg.gamma_grid.empty() ? gamma_range(1.0, 3.0, 0.25) : cfg.gamma_grid;
            const auto curve = multi_ks_power_curve(cfg.dim, cfg.n, gammas, cfg.projections, cfg.alpha,
                                                    cfg.mc_reps, cfg.replicates, cfg.seed);
            for (const auto& pt : curve)
                out.push_back(record(exp,
                                     {{"dim", fmt(cfg.dim)}, {"n", fmt(cfg.n)}, {"k", fmt(pt.projections)},
                                      {"gamma", fmt(pt.gamma)}, {"alpha", fmt(cfg.alpha)},
                                      {"replicates", fmt(pt.replicates)}},
                                     "power", pt.power, -1, cfg.seed));
            break;
        }
        case TestKind::PbPower: {
            const auto dims = cfg.dims.empty() ? std::vector<std::size_t>{50, 100, 200, 500, 1000} : cfg.dims;
            const auto g1 = cfg.gamma_grid.empty() ? gamma_range(2.0, 4.0, 0.5) : cfg.gamma_grid;
            for (const auto& pt : pb_power_curve(dims, g1, cfg.gamma2, cfg.alpha, cfg.replicates, cfg.seed))
                out.push_back(record(exp,
                                     {{"dim", fmt(pt.dim)}, {"gamma1", fmt(pt.gamma)},
                                      {"gamma2", fmt(cfg.gamma2)}, {"alpha", fmt(cfg.alpha)},
                                      {"replicates", fmt(pt.replicates)}},
                                     "power", pt.power, -1, cfg.seed));
            break;
        }
        case TestKind::SumStructure: {
            std::vector<std::pair<std::size_t, std::size_t>> cases;  // (sum, d)
            if (cfg.data_path) {
                const Sample s = load_binary_matrix(*cfg.data_path);
                for (const auto& row : s.rows)
                    cases.emplace_back(static_cast<std::size_t>(std::accumulate(row.begin(), row.end(), 0.0)),
                                       row.size());
            } else {
                if (!cfg.observed_sum) throw std::invalid_argument("sum-structure needs --sum or --data");
                cases.emplace_back(*cfg.observed_sum, cfg.dim);
            }
            for (std::size_t i = 0; i < cases.size(); ++i) {
                const auto rep = sum_structure_test(cases[i].first, cases[i].second, cfg.alpha, cfg.epsilon);
                const Params p{{"dim", fmt(cases[i].second)}, {"sum", fmt(cases[i].first)},
                               {"alpha", fmt(cfg.alpha)}};
                const auto ri = static_cast<std::int64_t>(i);
                push_report(out, exp, p, rep.report, ri, cfg.seed);
                out.push_back(record(exp, p, "epsilon", rep.epsilon, ri, cfg.seed));
                out.push_back(record(exp, p, "interval_left", static_cast<double>(rep.interval.left), ri, cfg.seed));
                out.push_back(record(exp, p, "interval_right", static_cast<double>(rep.interval.right), ri, cfg.seed));
            }
            break;
        }
        case TestKind::Rare: {
            Rng rng(derive_seed(cfg.seed, 0));
            Sample s;
            if (cfg.data_path)
                s = load_binary_matrix(*cfg.data_path);
            else if (cfg.dim <= 12)
                s = sample_from_pmf(alternative_pmf(cfg.dim, cfg.gamma), cfg.n, rng);
            else
                s = gen_independent_bernoulli(cfg.dim, 0.5, cfg.n, rng);
            const auto rep = rare_distribution_test(s, cfg.alpha);
            const Params p{{"dim", fmt(rep.d)}, {"n", fmt(rep.n)}, {"alpha", fmt(cfg.alpha)}};
            for (const auto& k : rep.per_k) {
                const Params pk = with(p, "k", fmt(k.k));
                const auto ki = static_cast<std::int64_t>(k.k);
                out.push_back(record(exp, pk, "empirical", k.empirical, ki, cfg.seed));
                out.push_back(record(exp, pk, "binomial", k.binomial, ki, cfg.seed));
                out.push_back(record(exp, pk, "reject", k.reject ? 1.0 : 0.0, ki, cfg.seed));
                out.push_back(record(exp, pk, "reject_union", k.reject_union ? 1.0 : 0.0, ki, cfg.seed));
            }
            out.push_back(record(exp, p, "a", rep.a.value, -1, cfg.seed));
            out.push_back(record(exp, p, "a_hoeffding_term", rep.a.hoeffding_term, -1, cfg.seed));
            out.push_back(record(exp, p, "a_structure_term", rep.a.structure_term, -1, cfg.seed));
            out.push_back(record(exp, p, "a_union", rep.a_union.value, -1, cfg.seed));
            out.push_back(record(exp, p, "reject_any", rep.reject_any ? 1.0 : 0.0, -1, cfg.seed));
            out.push_back(record(exp, p, "reject_union", rep.reject_union ? 1.0 : 0.0, -1, cfg.seed));
            break;
        }
    }
    return out;
}

// ---- gen --------------------------------------------------------------------

void cmd_gen(const GenConfig& cfg, std::ostream& out) {
    Rng rng(derive_seed(cfg.seed, 0));
    if (cfg.model == "phantom") {
        if (cfg.scenario != 1 && cfg.scenario != 2) throw std::invalid_argument("scenario must be 1 or 2");
        if (cfg.image_class != 0 && cfg.image_class != 1) throw std::invalid_argument("class must be 0 or 1");
        auto c = cfg.image_class == 0 ? tomo::scenario_base()
                 : cfg.scenario == 1  ? tomo::scenario1_extra_circle()
                                      : tomo::scenario2_larger_circles();
        c.filled = cfg.filled;
        write_point_set(out, tomo::generate_phantom(c, rng));
        return;
    }
    Sample s;
    if (cfg.model == "independent")
        s = gen_independent_bernoulli(cfg.dim, cfg.q, cfg.n, rng);
    else if (cfg.model == "equicorrelated")
        s = gen_equicorrelated_bernoulli(cfg.dim, cfg.q, cfg.corr, cfg.n, rng);
    else if (cfg.model == "odds-ratio")
        s = sample_from_pmf(alternative_pmf(cfg.dim, cfg.gamma), cfg.n, rng);
    else if (cfg.model == "two-class")
        s = two_class_bernoulli(cfg.dim, cfg.corr, cfg.n, rng);
    else
        throw std::invalid_argument("unknown model '" + cfg.model +
                                    "' (independent, equicorrelated, odds-ratio, two-class, phantom)");
    write_binary_matrix(out, s);
}

// ---- bench ------------------------------------------------------------------

namespace {

// Binary classification table, random-projection columns: {mean, sd} in
// percent, rows Corr 0.1..0.9, columns d = 5, 10, 15, 20.
constexpr double kTable1Mean[5][4] = {{46.6, 47.4, 46.5, 45.8},
                                      {35.4, 34.0, 31.7, 31.8},
                                      {24.8, 20.2, 19.3, 17.6},
                                      {17.2, 10.7, 9.1, 8.5},
                                      {9.7, 3.9, 2.8, 2.2}};
constexpr double kTable1Sd[5][4] = {{4.6, 5.0, 5.1, 4.6},
                                    {4.8, 4.5, 5.3, 4.5},
                                    {5.1, 4.0, 3.7, 3.7},
                                    {3.9, 2.8, 3.2, 2.8},
                                    {3.0, 2.0, 1.8, 1.6}};
constexpr double kCorrs[5] = {0.1, 0.3, 0.5, 0.7, 0.9};
constexpr std::size_t kDims[4] = {5, 10, 15, 20};

// Tomography test error (percent) for scenarios 1 and 2.
constexpr double kTomoReference[2] = {2.55, 6.0};

// Projected KS test: power above this at gamma >= 1.75 with 50 directions.
constexpr double kPowerReference = 0.73;

template <class... A>
std::string sfmt(const char* f, A... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

BenchResult bench_classification(double scale, std::uint64_t seed) {
    BenchResult res;
    const std::size_t reps = scaled(1000, scale, 2);
    std::ostringstream sum;
    sum << "Binary classification, random projections (k = 100, KS), " << reps
        << " replicates per cell\n"
        << "corr  dim   mean%   sd%   | ref mean%  ref sd%\n";
    for (std::size_t ci = 0; ci < 5; ++ci)
        for (std::size_t di = 0; di < 4; ++di) {
            ClassifyConfig cfg;
            cfg.dim = kDims[di];
            cfg.corr = kCorrs[ci];
            cfg.replicates = reps;
            cfg.seed = derive_seed(seed, ci * 4 + di);
            auto recs = cmd_classify(cfg);
            double mean = 0, sd = 0;
            for (const auto& r : recs) {
                if (r.metric == "error_mean") mean = r.value;
                if (r.metric == "error_sd") sd = r.value;
            }
            const Params p{{"dim", fmt(kDims[di])}, {"corr", fmt(kCorrs[ci])}};
            res.records.insert(res.records.end(), recs.begin(), recs.end());
            res.records.push_back(record("bench1", p, "reference_error_mean", kTable1Mean[ci][di] / 100, -1, seed));
            res.records.push_back(record("bench1", p, "reference_error_sd", kTable1Sd[ci][di] / 100, -1, seed));
            char buf[160];
            std::snprintf(buf, sizeof buf, "%.1f  %3zu   %5.1f  %5.1f  | %5.1f     %5.1f\n", kCorrs[ci], kDims[di],
                          100 * mean, 100 * sd, kTable1Mean[ci][di], kTable1Sd[ci][di]);
            sum << buf;
        }
    res.summary = sum.str();
    return res;
}

BenchResult bench_tomography(double scale, std::uint64_t seed) {
    BenchResult res;
    std::ostringstream sum;
    const std::size_t n = scaled(200, scale, 50);
    sum << "Tomography, " << n << " images per class, 100 directions, r = 21\n";
    for (int sc = 1; sc <= 2; ++sc) {
        TomoConfig cfg;
        cfg.scenario = sc;
        cfg.n_per_class = n;
        cfg.directions = 100;
        cfg.seed = derive_seed(seed, static_cast<std::uint64_t>(sc));
        auto recs = cmd_tomo(cfg);
        double err = 0;
        for (const auto& r : recs)
            if (r.metric == "error_mean") err = r.value;
        res.records.insert(res.records.end(), recs.begin(), recs.end());
        res.records.push_back(record("bench2", {{"scenario", std::to_string(sc)}}, "reference_error",
                                     kTomoReference[sc - 1] / 100, -1, seed));
        sum << sfmt("scenario %d: error %.2f%% (reference %.2f%%)\n", sc, 100 * err,
                    kTomoReference[sc - 1]);
    }
    res.summary = sum.str();
    return res;
}

BenchResult bench_independence(double scale, std::uint64_t seed) {
    BenchResult res;
    const std::size_t reps = scaled(1000, scale, 20);
    const auto gammas = gamma_range(1.0, 3.0, 0.25);
    const std::vector<std::size_t> ks{1, 10, 50, 100, 500};
    const auto curve = multi_ks_power_curve(8, 200, gammas, ks, 0.05, 500, reps, seed);
    std::ostringstream sum;
    sum << "Averaged projected KS test, d = 8, N = 200, alpha = 0.05, B = 500, " << reps
        << " replicates\n  k \\ gamma";
    for (double g : gammas) sum << sfmt(" %5.2f", g);
    sum << '\n';
    double min_power_50 = 1.0;
    for (auto k : ks) {
        sum << sfmt("  %4.0f     ", static_cast<double>(k));
        for (const auto& pt : curve) {
            if (pt.projections != k) continue;
            sum << sfmt(" %5.3f", pt.power);
            res.records.push_back(record("bench3", {{"k", fmt(k)}, {"gamma", fmt(pt.gamma)}}, "power",
                                         pt.power, -1, seed));
            if (k == 50 && pt.gamma >= 1.75) min_power_50 = std::min(min_power_50, pt.power);
        }
        sum << '\n';
    }
    res.records.push_back(record("bench3", {{"k", "50"}}, "reference_min_power_gamma_ge_1.75", kPowerReference,
                                 -1, seed));
    sum << sfmt("k = 50, gamma >= 1.75: minimum power %.3f (reference: above %.2f)\n", min_power_50,
                kPowerReference);
    res.summary = sum.str();
    return res;
}

BenchResult bench_poisson_binomial(double scale, std::uint64_t seed) {
    BenchResult res;
    const std::size_t reps = scaled(1000, scale, 20);
    const std::vector<std::size_t> dims{50, 100, 200, 500, 1000};
    const auto g1 = gamma_range(2.0, 4.0, 0.5);
    const auto curve = pb_power_curve(dims, g1, 2.0, 0.05, reps, seed);
    std::ostringstream sum;
    sum << "Sum-structure test, Poisson-Binomial with Beta(gamma1, 2) parameters, alpha = 0.05, " << reps
        << " replicates\n     d \\ gamma1";
    for (double g : g1) sum << sfmt(" %5.2f", g);
    sum << '\n';
    for (auto d : dims) {
        sum << sfmt("  %5.0f      ", static_cast<double>(d));
        for (const auto& pt : curve) {
            if (pt.dim != d) continue;
            sum << sfmt(" %5.3f", pt.power);
            res.records.push_back(record("bench4", {{"dim", fmt(d)}, {"gamma1", fmt(pt.gamma)}}, "power",
                                         pt.power, -1, seed));
        }
        sum << '\n';
    }
    sum << "reference: power grows with d and with gamma1 (no tabulated values)\n";
    res.summary = sum.str();
    return res;
}

}  // namespace

BenchResult cmd_bench(int example_id, double scale, std::uint64_t seed) {
    if (!(scale > 0.0 && scale <= 1.0)) throw std::invalid_argument("scale must be in (0, 1]");
    switch (example_id) {
        case 1: return bench_classification(scale, seed);
        case 2: return bench_tomography(scale, seed);
        case 3: return bench_independence(scale, seed);
        case 4: return bench_poisson_binomial(scale, seed);
        default: throw std::invalid_argument("example id must be 1, 2, 3 or 4");
    }
}

}  // namespace projstat
