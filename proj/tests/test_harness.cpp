#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "nidsgnn/dataio/sampling.hpp"
#include "nidsgnn/harness/runner.hpp"

using namespace nidsgnn;
using harness::ExperimentConfig;
using harness::ResultsTable;
using harness::TrialResult;
using harness::Variant;
using harness::Workspace;

namespace {

// Small, fast experiment: tiny synthetic splits and epoch budgets.
ExperimentConfig tiny_config() {
    ExperimentConfig c;
    dataio::SyntheticConfig s;
    s.n_flows = 300;
    s.n_hosts = 12;
    s.attack_rate = 0.4;
    s.n_attack_classes = 2;
    s.attack_dst_per_class = 2;
    s.separation = 0.8;
    s.seed = 17;
    c.synthetic = s;
    c.synthetic_test_flows = 150;
    c.variants = {Variant::DT, Variant::D};
    c.d_x = 4;
    c.layers = 2;
    c.d_emb = 4;
    c.d_e = 6;
    c.node_feat_width = 4;
    c.pretrain_epochs = 3;
    c.pretrain_patience = 3;
    c.finetune_epochs = 5;
    c.finetune_patience = 5;
    c.fewshot_counts = {30, 60};
    c.n_trials = 2;
    c.base_seed = 5;
    return c;
}

}  // namespace

TEST_CASE("mix_seed: deterministic, sensitive to both arguments, nonzero") {
    CHECK(harness::mix_seed(1, 7) == harness::mix_seed(1, 7));
    CHECK(harness::mix_seed(1, 7) != harness::mix_seed(1, 11));
    CHECK(harness::mix_seed(1, 7) != harness::mix_seed(2, 7));
    CHECK(harness::mix_seed(0, 0) != 0);
    // stage seeds for one trial seed are pairwise distinct
    std::set<std::uint64_t> stages;
    for (std::uint64_t salt : {7ull, 11ull, 13ull, 100ull, 101ull, 102ull})
        stages.insert(harness::mix_seed(42, salt));
    CHECK(stages.size() == 6);
}

TEST_CASE("variant names parse back to themselves; unknown rejected") {
    for (Variant v : {Variant::D, Variant::T, Variant::D_SSL, Variant::T_SSL, Variant::DT})
        CHECK(harness::parse_variant(harness::variant_name(v)) == v);
    CHECK(harness::parse_variant("D_SSL") == Variant::D_SSL);
    CHECK_THROWS_AS(harness::parse_variant("GBM"), std::invalid_argument);
}

TEST_CASE("config JSON round trip preserves every field (digest equality)") {
    ExperimentConfig c = tiny_config();
    c.variants = {Variant::T_SSL, Variant::DT};
    c.aggregator = encoder::Aggregator::sum;
    c.dt_encoding = dataio::Encoding::target;
    ExperimentConfig back = ExperimentConfig::from_json_text(c.to_json_text());
    CHECK(back.to_json_text() == c.to_json_text());
    CHECK(back.digest() == c.digest());
    CHECK(back.variants == c.variants);
    CHECK(back.fewshot_counts == c.fewshot_counts);
    CHECK(back.synthetic->seed == c.synthetic->seed);
    CHECK(back.aggregator == encoder::Aggregator::sum);
}

TEST_CASE("config validation rejects inconsistent settings") {
    ExperimentConfig base = tiny_config();

    ExperimentConfig no_data = base;
    no_data.synthetic.reset();
    CHECK_THROWS_AS(no_data.validate(), std::invalid_argument);

    ExperimentConfig csv_partial = base;
    csv_partial.train_csv = "train.csv";  // missing test_csv + schema
    CHECK_THROWS_AS(csv_partial.validate(), std::invalid_argument);

    ExperimentConfig ssl_no_budget = base;
    ssl_no_budget.variants = {Variant::D_SSL};
    ssl_no_budget.pretrain_epochs = 0;
    CHECK_THROWS_AS(ssl_no_budget.validate(), std::invalid_argument);

    ExperimentConfig unsorted = base;
    unsorted.fewshot_counts = {100, 50};
    CHECK_THROWS_AS(unsorted.validate(), std::invalid_argument);

    ExperimentConfig no_trials = base;
    no_trials.n_trials = 0;
    CHECK_THROWS_AS(no_trials.validate(), std::invalid_argument);

    ExperimentConfig bad_lr = base;
    bad_lr.lr = 0.0;
    CHECK_THROWS_AS(bad_lr.validate(), std::invalid_argument);

    CHECK_THROWS_AS(ExperimentConfig::from_json_text("{not json"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        ExperimentConfig::from_json_text(
            R"({"synthetic":{"flows":100},"aggregator":"median"})"),
        std::invalid_argument);
}

TEST_CASE("variant_encoding and make_model_config follow the variant") {
    ExperimentConfig cfg = tiny_config();
    CHECK(harness::variant_encoding(cfg, Variant::D) == dataio::Encoding::onehot);
    CHECK(harness::variant_encoding(cfg, Variant::D_SSL) == dataio::Encoding::onehot);
    CHECK(harness::variant_encoding(cfg, Variant::T) == dataio::Encoding::target);
    CHECK(harness::variant_encoding(cfg, Variant::T_SSL) == dataio::Encoding::target);
    cfg.dt_encoding = dataio::Encoding::target;
    CHECK(harness::variant_encoding(cfg, Variant::DT) == dataio::Encoding::target);

    Workspace ws = Workspace::prepare(cfg);
    encoder::ModelConfig md = harness::make_model_config(cfg, ws, Variant::D);
    CHECK(md.mode == encoder::FrontEndMode::dense);
    CHECK(md.numeric_width + md.categorical_width == ws.prep.onehot_width());
    encoder::ModelConfig mt = harness::make_model_config(cfg, ws, Variant::T);
    CHECK(mt.mode == encoder::FrontEndMode::target);
    CHECK(mt.numeric_width + mt.categorical_width == ws.prep.target_width());
    CHECK(md.n_classes == ws.n_classes);
    CHECK(md.d_x == cfg.d_x);
}

TEST_CASE("run_full_data: n_trials rows per variant, DT skips pre-training") {
    ExperimentConfig cfg = tiny_config();
    ResultsTable table = harness::run_full_data(cfg);
    REQUIRE(table.trials.size() == cfg.variants.size() * cfg.n_trials);
    std::size_t dt_rows = 0, d_rows = 0;
    for (const auto& t : table.trials) {
        CHECK(t.n_labels == cfg.synthetic->n_flows);
        CHECK(t.metrics.weighted_f1 >= 0.0);
        CHECK(t.metrics.weighted_f1 <= 1.0);
        if (t.variant == Variant::DT) {
            ++dt_rows;
            CHECK(t.pretrain_history.empty());
            CHECK(t.finetune_history.empty());
            CHECK(t.checkpoint.empty());
        } else {
            ++d_rows;
            CHECK(!t.finetune_history.empty());
            CHECK(t.pretrain_history.empty());  // D is trained from scratch
        }
    }
    CHECK(dt_rows == cfg.n_trials);
    CHECK(d_rows == cfg.n_trials);
    // seeds are base..base+n-1
    for (std::size_t i = 0; i < cfg.n_trials; ++i)
        CHECK(table.trials[i].seed == cfg.base_seed + i);
}

TEST_CASE("run_full_data is bit-reproducible for identical configs") {
    ExperimentConfig cfg = tiny_config();
    ResultsTable a = harness::run_full_data(cfg);
    ResultsTable b = harness::run_full_data(cfg);
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        CHECK(a.trials[i].metrics.weighted_f1 == b.trials[i].metrics.weighted_f1);
        CHECK(a.trials[i].metrics.micro_f1 == b.trials[i].metrics.micro_f1);
        CHECK(a.trials[i].metrics.confusion == b.trials[i].metrics.confusion);
        CHECK(a.trials[i].checkpoint == b.trials[i].checkpoint);
        REQUIRE(a.trials[i].finetune_history.size() ==
                b.trials[i].finetune_history.size());
        for (std::size_t e = 0; e < a.trials[i].finetune_history.size(); ++e)
            CHECK(a.trials[i].finetune_history[e].loss ==
                  b.trials[i].finetune_history[e].loss);
    }
    REQUIRE(a.aggregates.size() == b.aggregates.size());
    for (const auto& [key, agg] : a.aggregates) {
        const auto& other = b.aggregates.at(key);
        CHECK(agg.mean == other.mean);
        CHECK(agg.stddev == other.stddev);
        CHECK(agg.median == other.median);
    }
}

TEST_CASE("fewshot sweep: one row per (variant, seed, count); SSL checkpoint "
          "is byte-identical across counts within a seed") {
    ExperimentConfig cfg = tiny_config();
    cfg.variants = {Variant::D_SSL, Variant::DT};
    ResultsTable table = harness::run_fewshot_sweep(cfg);
    REQUIRE(table.trials.size() ==
            cfg.variants.size() * cfg.n_trials * cfg.fewshot_counts.size());

    std::map<std::pair<std::string, std::uint64_t>, std::vector<const TrialResult*>>
        by_variant_seed;
    for (const auto& t : table.trials) {
        CHECK((t.n_labels == 30 || t.n_labels == 60));
        by_variant_seed[{harness::variant_name(t.variant), t.seed}].push_back(&t);
    }
    for (const auto& [key, rows] : by_variant_seed) {
        REQUIRE(rows.size() == cfg.fewshot_counts.size());
        if (key.first == "D-SSL") {
            REQUIRE(!rows[0]->checkpoint.empty());
            for (const auto* r : rows) CHECK(r->checkpoint == rows[0]->checkpoint);
            // pre-training ran once per seed: later counts reuse the bytes
            CHECK(!rows[0]->pretrain_history.empty());
            CHECK(rows[1]->pretrain_history.empty());
        } else {
            for (const auto* r : rows) CHECK(r->checkpoint.empty());
        }
    }
}

TEST_CASE("fewshot count equal to a balanced full set reproduces the "
          "full-data decision tree") {
    // Build a perfectly balanced training set so the balanced-pool rule
    // admits n_labels == |train|; the tree depends only on the row multiset,
    // so the few-shot trial must match the full-data trial exactly.
    ExperimentConfig cfg = tiny_config();
    cfg.variants = {Variant::DT};
    Workspace ws = Workspace::prepare(cfg);
    ws.train = dataio::undersample_balance(ws.train, ws.schema, 3);

    TrialResult full = harness::run_trial(cfg, ws, Variant::DT, 9, 0);
    TrialResult few = harness::run_trial(cfg, ws, Variant::DT, 9, ws.train.size());
    CHECK(few.n_labels == full.n_labels);
    CHECK(few.metrics.weighted_f1 == full.metrics.weighted_f1);
    CHECK(few.metrics.confusion == full.metrics.confusion);
}

TEST_CASE("aggregates match direct recomputation and known statistics") {
    ResultsTable table;
    auto add = [&](double f1) {
        TrialResult t;
        t.variant = Variant::D;
        t.n_labels = 100;
        t.metrics.weighted_f1 = f1;
        table.trials.push_back(t);
    };
    add(0.5);
    add(0.9);
    add(0.7);
    table.recompute_aggregates();
    REQUIRE(table.aggregates.size() == 1);
    const auto& a = table.aggregates.at({"D", 100});
    CHECK(a.mean == doctest::Approx(0.7));
    CHECK(a.min == 0.5);
    CHECK(a.max == 0.9);
    CHECK(a.median == doctest::Approx(0.7));
    CHECK(a.q1 == doctest::Approx(0.6));
    CHECK(a.q3 == doctest::Approx(0.8));
    CHECK(a.stddev == doctest::Approx(0.2));

    // recomputation is idempotent and order-independent
    std::reverse(table.trials.begin(), table.trials.end());
    auto before = a;
    table.recompute_aggregates();
    const auto& after = table.aggregates.at({"D", 100});
    CHECK(after.mean == before.mean);
    CHECK(after.q1 == before.q1);
    CHECK(after.q3 == before.q3);
}

TEST_CASE("results_json and aggregates_csv serialize the table faithfully") {
    ExperimentConfig cfg = tiny_config();
    cfg.variants = {Variant::DT};
    cfg.n_trials = 2;
    ResultsTable table = harness::run_full_data(cfg);

    auto j = nlohmann::json::parse(harness::results_json(table, cfg));
    CHECK(j["schema_version"] == 1);
    CHECK(j["config_digest"] == cfg.digest());
    REQUIRE(j["trials"].size() == table.trials.size());
    CHECK(j["trials"][0]["variant"] == "DT");
    CHECK(j["trials"][0]["weighted_f1"] ==
          doctest::Approx(table.trials[0].metrics.weighted_f1));
    REQUIRE(j["aggregates"].size() == table.aggregates.size());
    CHECK(j["aggregates"][0]["mean"] ==
          doctest::Approx(table.aggregates.begin()->second.mean));

    const std::string csv = harness::aggregates_csv(table);
    CHECK(csv.rfind("variant,n_labels,mean,stddev,min,q1,median,q3,max\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + table.aggregates.size());
}

TEST_CASE("metrics_json exposes weighted and micro F1") {
    ExperimentConfig cfg = tiny_config();
    Workspace ws = Workspace::prepare(cfg);
    TrialResult t = harness::run_trial(cfg, ws, Variant::DT, 3, 0);
    auto j = nlohmann::json::parse(harness::metrics_json(t.metrics));
    CHECK(j["weighted_f1"] == doctest::Approx(t.metrics.weighted_f1));
    CHECK(j["micro_f1"] == doctest::Approx(t.metrics.micro_f1));
    CHECK(j["n_samples"] == t.metrics.n_samples);
    CHECK(j["per_class"].size() == t.metrics.per_class.size());
}
