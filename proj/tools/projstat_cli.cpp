#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "projstat/classify.hpp"
#include "projstat/error.hpp"
#include "projstat/experiments.hpp"
#include "projstat/io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct Output {
    std::string path = "-";
    std::string format = "csv";
};

void add_output(CLI::App* cmd, Output& o) {
    cmd->add_option("--out", o.path, "Result file ('-' for stdout)");
    cmd->add_option("--format", o.format, "Result format")
        ->check(CLI::IsMember({"csv", "json-lines"}));
}

void emit(const std::vector<projstat::ResultRecord>& recs, const Output& o) {
    projstat::emit_results(recs, o.path, projstat::parse_result_format(o.format));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classification and testing of binary data through low-dimensional projections"};
    app.require_subcommand(1);

    // classify
    projstat::ClassifyConfig ccfg;
    std::string c_distance = "ks", c_rule = "rp", c_data;
    Output c_out;
    auto* classify = app.add_subcommand("classify", "Two-class binary classification study");
    classify->add_option("--seed", ccfg.seed, "Root seed")->required();
    classify->add_option("--dim", ccfg.dim, "Dimension")->check(CLI::PositiveNumber);
    classify->add_option("--corr", ccfg.corr, "Correlation of the second class")->check(CLI::Range(0.0, 0.999999));
    classify->add_option("--projections", ccfg.projections, "Projection counts (several values sweep k)")
        ->delimiter(',');
    classify->add_option("--distance", c_distance, "1-D distance")->check(CLI::IsMember({"w1", "ks", "cvm", "tv"}));
    classify->add_option("--rule", c_rule, "rp | addpoint-tv | plugin");
    classify->add_option("--n-per-class", ccfg.n_per_class, "Observations per class");
    classify->add_option("--test-fraction", ccfg.test_fraction, "Held-out fraction");
    classify->add_option("--replicates", ccfg.replicates, "Replicates");
    classify->add_option("--data", c_data, "Labeled binary matrix instead of generated data");
    add_output(classify, c_out);

    // tomo
    projstat::TomoConfig tcfg;
    std::string t_list;
    Output t_out;
    auto* tomo = app.add_subcommand("tomo", "Phantom-image classification from X-ray histograms");
    tomo->add_option("--seed", tcfg.seed, "Root seed")->required();
    tomo->add_option("--scenario", tcfg.scenario, "1 or 2")->check(CLI::IsMember({1, 2}));
    tomo->add_option("--n-per-class", tcfg.n_per_class, "Images per class");
    tomo->add_option("--projections", tcfg.directions, "Number of directions")->check(CLI::PositiveNumber);
    tomo->add_option("--neighbours", tcfg.neighbours, "k-NN size (odd)");
    tomo->add_option("--bins", tcfg.bins, "Histogram bins");
    tomo->add_option("--test-fraction", tcfg.test_fraction, "Held-out fraction");
    tomo->add_option("--replicates", tcfg.replicates, "Replicates");
    tomo->add_flag("--filled", tcfg.filled, "Filled disks instead of outlines");
    tomo->add_option("--images", t_list, "File of 'path,label' lines naming point-set CSVs");
    add_output(tomo, t_out);

    // test
    projstat::TestConfig scfg;
    std::string s_kind = "multi-ks", s_data, s_data2;
    std::optional<std::size_t> s_sum;
    std::optional<double> s_eps;
    Output s_out;
    auto* test = app.add_subcommand("test", "Projection and sum based tests");
    test->add_option("kind", s_kind,
                     "one-sample | two-sample | multi-ks | multi-ks-power | sum-structure | rare | pb-power");
    test->add_option("--seed", scfg.seed, "Root seed")->required();
    test->add_option("--dim", scfg.dim, "Dimension")->check(CLI::PositiveNumber);
    test->add_option("--n", scfg.n, "Sample size");
    test->add_option("--n2", scfg.n2, "Second sample size");
    test->add_option("--gamma", scfg.gamma, "Odds ratio of the generated data (1 = null)")
        ->check(CLI::PositiveNumber);
    test->add_option("--gamma-grid", scfg.gamma_grid, "Grid for power sweeps")->delimiter(',');
    test->add_option("--gamma2", scfg.gamma2, "Second Beta parameter (pb-power)");
    test->add_option("--dims", scfg.dims, "Dimensions (pb-power)")->delimiter(',');
    test->add_option("--projections", scfg.projections, "Projection counts")->delimiter(',');
    test->add_option("--alpha", scfg.alpha, "Level");
    test->add_option("--mc-reps", scfg.mc_reps, "Monte Carlo calibration size B");
    test->add_option("--replicates", scfg.replicates, "Replicates");
    test->add_option("--sum", s_sum, "Observed sum (sum-structure)");
    test->add_option("--epsilon", s_eps, "Tolerance epsilon (sum-structure)");
    test->add_option("--data", s_data, "Binary matrix");
    test->add_option("--data2", s_data2, "Second binary matrix (two-sample)");
    add_output(test, s_out);

    // gen
    projstat::GenConfig gcfg;
    std::string g_out = "-";
    auto* gen = app.add_subcommand("gen", "Write a generated dataset");
    gen->add_option("model", gcfg.model, "independent | equicorrelated | odds-ratio | two-class | phantom");
    gen->add_option("--seed", gcfg.seed, "Root seed")->required();
    gen->add_option("--dim", gcfg.dim, "Dimension")->check(CLI::PositiveNumber);
    gen->add_option("--n", gcfg.n, "Rows (per class for two-class)");
    gen->add_option("--q", gcfg.q, "Bernoulli margin");
    gen->add_option("--corr", gcfg.corr, "Pairwise correlation");
    gen->add_option("--gamma", gcfg.gamma, "Pairwise odds ratio")->check(CLI::PositiveNumber);
    gen->add_option("--scenario", gcfg.scenario, "Phantom scenario");
    gen->add_option("--class", gcfg.image_class, "Phantom class");
    gen->add_flag("--filled", gcfg.filled, "Filled disks");
    gen->add_option("--out", g_out, "Output file ('-' for stdout)");

    // bench
    int b_example = 1;
    double b_scale = 0.05;
    std::uint64_t b_seed = 0;
    Output b_out;
    std::string b_summary;
    auto* bench = app.add_subcommand("bench", "Reproduce a simulation example at reduced scale");
    bench->add_option("example", b_example, "Example id 1-4")->required()->check(CLI::Range(1, 4));
    bench->add_option("--seed", b_seed, "Root seed")->required();
    bench->add_option("--scale", b_scale, "Replicate scale in (0, 1]");
    bench->add_option("--summary", b_summary, "Write the comparison summary here instead of stderr");
    add_output(bench, b_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (classify->parsed()) {
            ccfg.distance = projstat::parse_distance_kind(c_distance);
            ccfg.rule = projstat::parse_classify_rule(c_rule);
            if (!c_data.empty()) ccfg.data_path = c_data;
            emit(projstat::cmd_classify(ccfg), c_out);
        } else if (tomo->parsed()) {
            if (!t_list.empty()) tcfg.image_list = t_list;
            emit(projstat::cmd_tomo(tcfg), t_out);
        } else if (test->parsed()) {
            scfg.kind = projstat::parse_test_kind(s_kind);
            scfg.observed_sum = s_sum;
            scfg.epsilon = s_eps;
            if (!s_data.empty()) scfg.data_path = s_data;
            if (!s_data2.empty()) scfg.data_path2 = s_data2;
            emit(projstat::cmd_test(scfg), s_out);
        } else if (gen->parsed()) {
            if (g_out == "-") {
                projstat::cmd_gen(gcfg, std::cout);
            } else {
                std::ofstream f(g_out);
                if (!f) throw projstat::DataError("cannot write '" + g_out + "'");
                projstat::cmd_gen(gcfg, f);
            }
        } else if (bench->parsed()) {
            const auto res = projstat::cmd_bench(b_example, b_scale, b_seed);
            emit(res.records, b_out);
            if (b_summary.empty()) {
                std::cerr << res.summary;
            } else {
                std::ofstream f(b_summary);
                if (!f) throw projstat::DataError("cannot write '" + b_summary + "'");
                f << res.summary;
            }
        }
    } catch (const projstat::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const projstat::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::out_of_range& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
